#include "helpers.hpp"

#include "oracles.hpp"
#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"
#include "prodiv/sicmodel.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace prodiv;
using sicmodel::SicEntry;
using sicmodel::SicTree;

namespace {

SicTree fixture_tree() { return sicmodel::load_tree(test::data("sic12.csv")); }

std::vector<oracle::TreeRow> fixture_rows()
{
    std::vector<oracle::TreeRow> rows;
    const auto table = artifacts::read_csv(test::data("sic12.csv"));
    for (const auto& r : table.rows) {
        rows.emplace_back(std::stoi(r[0]), r[1], r[2], r[3]);
    }
    return rows;
}

} // namespace

TEST_SUITE("sicmodel")
{
    TEST_CASE("level counts")
    {
        CHECK(sicmodel::tree_summary(fixture_tree()) == sicmodel::TreeSummary{2, 3, 5, 12});
        const SicTree single({{3571, "357", "35", "D"}});
        CHECK(sicmodel::tree_summary(single) == sicmodel::TreeSummary{1, 1, 1, 1});
    }

    TEST_CASE("leaf counts add up over children")
    {
        const auto tree = fixture_tree();
        CHECK(tree.division_leaf_count("D") == 9);
        CHECK(tree.division_leaf_count("I") == 3);
        CHECK(tree.major_group_leaf_count("20") == 5);
        CHECK(tree.major_group_leaf_count("20") + tree.major_group_leaf_count("28") == tree.division_leaf_count("D"));
        CHECK(tree.industry_group_leaf_count("201") + tree.industry_group_leaf_count("202") ==
              tree.major_group_leaf_count("20"));
        CHECK(tree.leaf_count() == 12);
    }

    TEST_CASE("malformed trees are rejected")
    {
        CHECK_THROWS_AS(SicTree({{100, "010", "01", "A"}, {100, "010", "01", "A"}}), InputError);
        CHECK_THROWS_AS(SicTree({{100, "010", "01", "A"}, {110, "010", "02", "A"}}), InputError);
        CHECK_THROWS_AS(SicTree({{100, "010", "01", "A"}, {200, "020", "01", "B"}}), InputError);
        std::istringstream bad("code,industry_group,major_group,division\nabc,1,2,3\n");
        CHECK_THROWS_AS(sicmodel::parse_tree(bad, "bad.csv"), InputError);
    }

    TEST_CASE("distances follow the definition")
    {
        const auto tree = fixture_tree();
        CHECK(sicmodel::sic_distance(2011, 2011, tree) == 1);
        CHECK(sicmodel::sic_distance(2011, 2013, tree) == 3);
        CHECK(sicmodel::sic_distance(2011, 2021, tree) == 5);
        CHECK(sicmodel::sic_distance(2011, 2834, tree) == 9);
        CHECK(sicmodel::sic_distance(2011, 7372, tree) == 12);
        try {
            sicmodel::sic_distance(2011, 9999, tree);
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("9999") != std::string::npos);
        }
    }

    TEST_CASE("all pairs match the brute-force LCA oracle")
    {
        const auto tree = fixture_tree();
        const auto rows = fixture_rows();
        for (const auto& a : rows) {
            for (const auto& b : rows) {
                const int ca = std::get<0>(a);
                const int cb = std::get<0>(b);
                CHECK(sicmodel::sic_distance(ca, cb, tree) == oracle::lca_leaves(rows, ca, cb));
                CHECK(sicmodel::sic_distance(ca, cb, tree) == sicmodel::sic_distance(cb, ca, tree));
            }
        }
    }

    TEST_CASE("affine similarity endpoints")
    {
        CHECK(sicmodel::affine_similarity(1, 12) == 1.0);
        CHECK(sicmodel::affine_similarity(12, 12) == 0.0);
        CHECK(sicmodel::affine_similarity(1, 1) == 1.0);
    }

    TEST_CASE("similarity matrix block pattern")
    {
        const auto tree = fixture_tree();
        const std::vector<sicmodel::Firm> firms = {{1, 2011}, {2, 2011}, {3, 2013}, {4, 2834}, {5, 7372}, {6, 7381}};
        const auto m = sicmodel::sic_similarity_matrix(firms, tree);
        CHECK(m.labels[0] == "1");
        const auto rows = fixture_rows();
        for (std::size_t i = 0; i < firms.size(); ++i) {
            CHECK(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) == 1.0);
            for (std::size_t j = 0; j < firms.size(); ++j) {
                const auto d = oracle::lca_leaves(rows, firms[i].code, firms[j].code);
                const double want = 1.0 - (static_cast<double>(d) - 1.0) / 11.0;
                const double got = m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                CHECK(got == doctest::Approx(want).epsilon(1e-15));
                CHECK(got == m.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
                CHECK(got >= 0.0);
                CHECK(got <= 1.0);
            }
        }
        // Same code: 1; root LCA: 0; uniform within an LCA block.
        CHECK(m.values(0, 1) == 1.0);
        CHECK(m.values(0, 4) == 0.0);
        CHECK(m.values(0, 5) == 0.0);
        CHECK(m.values(1, 4) == m.values(2, 5));
        CHECK(m.values(0, 2) == m.values(1, 2));
    }

    TEST_CASE("similarity is monotone decreasing in distance")
    {
        const auto tree = fixture_tree();
        const auto rows = fixture_rows();
        std::map<std::size_t, double> by_distance;
        for (const auto& a : rows) {
            for (const auto& b : rows) {
                const auto d = sicmodel::sic_distance(std::get<0>(a), std::get<0>(b), tree);
                const auto s = sicmodel::code_similarity(std::get<0>(a), std::get<0>(b), tree);
                const auto [it, inserted] = by_distance.emplace(d, s);
                CHECK(it->second == s);
            }
        }
        double previous = 2.0;
        for (const auto& [d, s] : by_distance) {
            CHECK(s < previous);
            previous = s;
        }
    }

    TEST_CASE("single-leaf tree gives an all-ones matrix")
    {
        const SicTree single({{3571, "357", "35", "D"}});
        const std::vector<sicmodel::Firm> firms = {{1, 3571}, {2, 3571}, {3, 3571}};
        const auto m = sicmodel::sic_similarity_matrix(firms, single);
        CHECK((m.values.array() == 1.0).all());
    }

    TEST_CASE("custom distance maps plug in")
    {
        const auto tree = fixture_tree();
        const auto half = [](std::size_t d, std::size_t) { return 1.0 / static_cast<double>(d); };
        CHECK(sicmodel::code_similarity(2011, 2013, tree, half) == doctest::Approx(1.0 / 3.0));
    }

    TEST_CASE("standard layout and CSV round trip")
    {
        const std::vector<int> codes = {100, 1311, 1531, 3721, 4911, 5047, 5812, 6021, 7372, 9100};
        const auto tree = sicmodel::standard_tree(codes);
        CHECK(tree.entry(3721).division == "D");
        CHECK(tree.entry(3721).major_group == "37");
        CHECK(tree.entry(3721).industry_group == "372");
        CHECK(tree.entry(100).division == "A");
        CHECK(tree.entry(6021).division == "H");
        CHECK(tree.entry(9100).division == "J");
        CHECK(sicmodel::tree_summary(tree).divisions == 10);
        std::istringstream in(sicmodel::tree_csv(tree));
        const auto back = sicmodel::parse_tree(in, "round trip");
        CHECK(sicmodel::tree_summary(back) == sicmodel::tree_summary(tree));
        CHECK_THROWS_AS(sicmodel::standard_division(9000), InputError);
    }
}
