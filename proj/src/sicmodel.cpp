#include "prodiv/sicmodel.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace prodiv::sicmodel {

namespace {

template <typename Map>
std::size_t lookup(const Map& map, std::string_view key, std::string_view level)
{
    const auto it = map.find(key);
    if (it == map.end()) {
        throw InputError("unknown " + std::string(level) + " '" + std::string(key) + "'");
    }
    return it->second;
}

std::string pad(int value, int width)
{
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "%0*d", width, value);
    return buffer;
}

} // namespace

SicTree::SicTree(std::vector<SicEntry> entries) : entries_(std::move(entries))
{
    std::map<std::string, std::string, std::less<>> industry_parent;
    std::map<std::string, std::string, std::less<>> major_parent;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.code < 0 || e.code > 9999) {
            throw InputError("SIC code " + std::to_string(e.code) + " outside 0..9999");
        }
        if (e.industry_group.empty() || e.major_group.empty() || e.division.empty()) {
            throw InputError("SIC code " + std::to_string(e.code) + " has an empty ancestor label");
        }
        if (!by_code_.emplace(e.code, i).second) {
            throw InputError("SIC code " + std::to_string(e.code) + " listed twice");
        }
        const auto [ig, ig_new] = industry_parent.emplace(e.industry_group, e.major_group);
        if (!ig_new && ig->second != e.major_group) {
            throw InputError("industry group '" + e.industry_group + "' has two major groups ('" + ig->second +
                             "', '" + e.major_group + "')");
        }
        const auto [mg, mg_new] = major_parent.emplace(e.major_group, e.division);
        if (!mg_new && mg->second != e.division) {
            throw InputError("major group '" + e.major_group + "' has two divisions ('" + mg->second + "', '" +
                             e.division + "')");
        }
        ++division_leaves_[e.division];
        ++major_leaves_[e.major_group];
        ++industry_leaves_[e.industry_group];
    }
}

const SicEntry& SicTree::entry(int code) const
{
    const auto it = by_code_.find(code);
    if (it == by_code_.end()) {
        throw InputError("SIC code " + std::to_string(code) + " is not in the tree");
    }
    return entries_[it->second];
}

std::size_t SicTree::division_leaf_count(std::string_view division) const
{
    return lookup(division_leaves_, division, "division");
}

std::size_t SicTree::major_group_leaf_count(std::string_view major_group) const
{
    return lookup(major_leaves_, major_group, "major group");
}

std::size_t SicTree::industry_group_leaf_count(std::string_view industry_group) const
{
    return lookup(industry_leaves_, industry_group, "industry group");
}

SicTree parse_tree(std::istream& in, std::string_view source_name)
{
    const auto table = artifacts::read_csv(in, source_name);
    const auto c_code = table.column("code");
    const auto c_ig = table.column("industry_group");
    const auto c_mg = table.column("major_group");
    const auto c_div = table.column("division");
    std::vector<SicEntry> entries;
    entries.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        SicEntry e;
        try {
            e.code = static_cast<int>(artifacts::parse_integer(row[c_code], "code"));
        } catch (const InputError& err) {
            throw InputError(std::string(source_name) + ": line " + std::to_string(table.line_numbers[r]) + ": " +
                             err.what());
        }
        e.industry_group = std::string(artifacts::trim(row[c_ig]));
        e.major_group = std::string(artifacts::trim(row[c_mg]));
        e.division = std::string(artifacts::trim(row[c_div]));
        entries.push_back(std::move(e));
    }
    return SicTree(std::move(entries));
}

SicTree load_tree(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open SIC tree " + path.string());
    }
    return parse_tree(in, path.string());
}

std::string tree_csv(const SicTree& tree)
{
    std::string out = "code,industry_group,major_group,division\n";
    for (const auto& e : tree.entries()) {
        out += artifacts::csv_row({pad(e.code, 4), e.industry_group, e.major_group, e.division});
    }
    return out;
}

std::string standard_division(int code)
{
    const int major = code / 100;
    if (major >= 1 && major <= 9) return "A";
    if (major >= 10 && major <= 14) return "B";
    if (major >= 15 && major <= 17) return "C";
    if (major >= 20 && major <= 39) return "D";
    if (major >= 40 && major <= 49) return "E";
    if (major >= 50 && major <= 51) return "F";
    if (major >= 52 && major <= 59) return "G";
    if (major >= 60 && major <= 67) return "H";
    if (major >= 70 && major <= 89) return "I";
    if (major >= 91 && major <= 99) return "J";
    throw InputError("SIC code " + std::to_string(code) + " has no standard division");
}

SicTree standard_tree(std::span<const int> codes)
{
    std::set<int> unique(codes.begin(), codes.end());
    std::vector<SicEntry> entries;
    for (const int code : unique) {
        entries.push_back({code, pad(code / 10, 3), pad(code / 100, 2), standard_division(code)});
    }
    return SicTree(std::move(entries));
}

TreeSummary tree_summary(const SicTree& tree)
{
    return {tree.division_count(), tree.major_group_count(), tree.industry_group_count(), tree.leaf_count()};
}

std::size_t sic_distance(int code_a, int code_b, const SicTree& tree)
{
    const auto& a = tree.entry(code_a);
    const auto& b = tree.entry(code_b);
    if (a.code == b.code) {
        return 1;
    }
    if (a.industry_group == b.industry_group) {
        return tree.industry_group_leaf_count(a.industry_group);
    }
    if (a.major_group == b.major_group) {
        return tree.major_group_leaf_count(a.major_group);
    }
    if (a.division == b.division) {
        return tree.division_leaf_count(a.division);
    }
    return tree.leaf_count();
}

double affine_similarity(std::size_t distance, std::size_t total_leaves)
{
    if (total_leaves <= 1) {
        return 1.0;
    }
    return 1.0 - static_cast<double>(distance - 1) / static_cast<double>(total_leaves - 1);
}

double code_similarity(int code_a, int code_b, const SicTree& tree, const DistanceToSimilarity& map)
{
    return map(sic_distance(code_a, code_b, tree), tree.leaf_count());
}

simspace::SimilarityMatrix sic_similarity_matrix(std::span<const Firm> firms, const SicTree& tree,
                                                 const DistanceToSimilarity& map)
{
    const auto n = static_cast<Eigen::Index>(firms.size());
    simspace::SimilarityMatrix m;
    m.values.resize(n, n);
    for (const auto& f : firms) {
        m.labels.push_back(std::to_string(f.cik));
        (void)tree.entry(f.code);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        m.values(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double s = code_similarity(firms[static_cast<std::size_t>(i)].code,
                                             firms[static_cast<std::size_t>(j)].code, tree, map);
            m.values(i, j) = s;
            m.values(j, i) = s;
        }
    }
    return m;
}

} // namespace prodiv::sicmodel
