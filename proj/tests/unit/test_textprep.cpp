#include "helpers.hpp"

#include "oracles.hpp"
#include "prodiv/artifacts.hpp"
#include "prodiv/config.hpp"
#include "prodiv/error.hpp"
#include "prodiv/synthetic.hpp"
#include "prodiv/textprep.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace prodiv;
using textprep::TokenizedDoc;

namespace {

TokenizedDoc doc(std::vector<std::string> tokens, std::int64_t cik = 1, int year = 2000)
{
    return TokenizedDoc{cik, year, std::move(tokens)};
}

std::string join(const std::vector<std::string>& tokens)
{
    std::string out;
    for (const auto& t : tokens) {
        out += (out.empty() ? "" : " ") + t;
    }
    return out;
}

const textprep::WordSet& stopwords()
{
    static const auto s = textprep::load_word_list(default_stopwords());
    return s;
}

const textprep::WordSet& nouns()
{
    static const auto s = textprep::load_word_list(default_noun_lexicon());
    return s;
}

// Ten documents over a small alphabet of words.
std::vector<TokenizedDoc> ten_docs()
{
    const std::vector<std::vector<std::string>> tokens = {
        {"alpha", "beta", "beta"},   {"alpha", "gamma"},        {"delta", "alpha", "epsilon"},
        {"zeta", "eta"},             {"theta", "beta", "theta"}, {"alpha", "iota"},
        {"kappa", "lambda", "beta"}, {"alpha", "mu"},           {"nu", "xi", "gamma"},
        {"omicron", "alpha", "pi"},
    };
    std::vector<TokenizedDoc> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        out.push_back(doc(tokens[i], static_cast<std::int64_t>(i + 1)));
    }
    return out;
}

} // namespace

TEST_SUITE("textprep")
{
    TEST_CASE("word lists lowercase, trim and skip comments")
    {
        const auto w = textprep::parse_word_list("# header\n Car \nengine\n\n# x\nTRUCK\r\n");
        CHECK(w == textprep::WordSet{"car", "engine", "truck"});
        CHECK_THROWS_AS(textprep::load_word_list(test::data("missing_words.txt")), InputError);
    }

    TEST_CASE("digits, stopwords, short words and non-nouns are dropped")
    {
        const textprep::WordSet lexicon = {"car", "engine", "cars", "engines"};
        const auto d = textprep::tokenize_and_clean("The 3 Cars and engines", lexicon, stopwords());
        CHECK(d.tokens == std::vector<std::string>{"cars", "engines"});
        CHECK(textprep::tokenize_and_clean("", lexicon, stopwords()).tokens.empty());
        // Three-letter words survive, two-letter ones do not.
        const textprep::WordSet small = {"car", "ox"};
        CHECK(textprep::tokenize_and_clean("ox car", small, {"zzz"}).tokens == std::vector<std::string>{"car"});
        // Splitting on digits yields alphabetic pieces.
        CHECK(textprep::tokenize_and_clean("car2car", small, {"zzz"}).tokens ==
              std::vector<std::string>{"car", "car"});
    }

    TEST_CASE("empty lexicon or stopword set is a config error")
    {
        CHECK_THROWS_AS(textprep::tokenize_and_clean("car", {}, {"the"}), ConfigError);
        CHECK_THROWS_AS(textprep::tokenize_and_clean("car", {"car"}, {}), ConfigError);
    }

    TEST_CASE("golden token list for the fixture section")
    {
        const auto text = artifacts::read_text_file(test::data("section_fixture.txt"));
        std::istringstream golden(artifacts::read_text_file(test::data("section_fixture.tokens")));
        std::vector<std::string> ordered;
        for (std::string line; std::getline(golden, line);) {
            ordered.push_back(line);
        }
        CHECK(textprep::tokenize_and_clean(text, nouns(), stopwords()).tokens == ordered);
    }

    TEST_CASE("tokenization is idempotent on its rendered output")
    {
        const auto text = artifacts::read_text_file(test::data("section_fixture.txt"));
        const auto once = textprep::tokenize_and_clean(text, nouns(), stopwords());
        const auto twice = textprep::tokenize_and_clean(join(once.tokens), nouns(), stopwords());
        CHECK(once.tokens == twice.tokens);
    }

    TEST_CASE("shipped word lists cover the synthetic generators without collisions")
    {
        for (const auto& w : synth::all_generator_nouns()) {
            CAPTURE(w);
            CHECK(nouns().contains(w));
            CHECK_FALSE(stopwords().contains(w));
        }
        for (const auto& w : nouns()) {
            CHECK(w.size() >= 3);
        }
    }

    TEST_CASE("exact 20 percent is excluded")
    {
        const std::vector<TokenizedDoc> docs = {doc({"rare", "x1"}), doc({"x2"}), doc({"x3"}), doc({"x4"}), doc({"x5"})};
        const auto v = textprep::build_vocabulary(docs, 0.2);
        CHECK_FALSE(v.index_of("rare"));
        CHECK_FALSE(v.index_of("absent"));
        CHECK(textprep::build_vocabulary(docs, 0.21).index_of("rare"));
        CHECK_THROWS_AS(textprep::build_vocabulary(std::vector<TokenizedDoc>{}, 0.2), InputError);
        CHECK_THROWS_AS(textprep::build_vocabulary(docs, 0.0), ConfigError);
    }

    TEST_CASE("vocabulary matches the frequency-count oracle")
    {
        const auto docs = ten_docs();
        std::vector<std::vector<std::string>> raw;
        for (const auto& d : docs) {
            raw.push_back(d.tokens);
        }
        for (const double max_df : {0.15, 0.2, 0.25, 0.35, 0.6, 1.0}) {
            CAPTURE(max_df);
            const auto v = textprep::build_vocabulary(docs, max_df);
            CHECK(v.words() == oracle::vocabulary(raw, max_df));
            const auto df = oracle::document_frequency(raw);
            for (std::size_t i = 0; i < v.size(); ++i) {
                CHECK(v.doc_freq()[i] == df.at(v.words()[i]));
                CHECK(v.doc_freq()[i] >= 1);
                CHECK(v.doc_freq()[i] <= v.total_docs());
            }
            CHECK(std::is_sorted(v.words().begin(), v.words().end()));
        }
    }

    TEST_CASE("vocabulary is permutation invariant and antitone in max_df")
    {
        auto docs = ten_docs();
        const auto base = textprep::build_vocabulary(docs, 0.35);
        std::mt19937_64 rng(5);
        for (int k = 0; k < 10; ++k) {
            std::shuffle(docs.begin(), docs.end(), rng);
            const auto v = textprep::build_vocabulary(docs, 0.35);
            CHECK(v.words() == base.words());
            CHECK(v.doc_freq() == base.doc_freq());
        }
        std::vector<std::string> previous;
        for (const double max_df : {1.0, 0.6, 0.35, 0.25, 0.2, 0.15, 0.05}) {
            const auto words = textprep::build_vocabulary(docs, max_df).words();
            if (!previous.empty()) {
                CHECK(std::includes(previous.begin(), previous.end(), words.begin(), words.end()));
            }
            previous = words;
        }
    }

    TEST_CASE("corpus stats pool totals and average per-document counts")
    {
        std::map<int, std::vector<TokenizedDoc>> one = {{2000, {doc({"a", "a", "b"})}}};
        auto s = textprep::corpus_stats(one);
        REQUIRE(s.years.size() == 1);
        CHECK(s.years[0].token_count == 3);
        CHECK(s.years[0].type_count == 2);
        CHECK(s.years[0].mean_tokens_per_doc == 3.0);
        CHECK(s.years[0].mean_types_per_doc == 2.0);

        std::map<int, std::vector<TokenizedDoc>> two = {{2000, {doc({"a", "b"}), doc({"a", "b"}, 2)}}};
        s = textprep::corpus_stats(two);
        CHECK(s.years[0].token_count == 4);
        CHECK(s.years[0].type_count == 2);
        CHECK(s.years[0].mean_types_per_doc == 2.0);
    }

    TEST_CASE("corpus stats match an independent count on a fixture year")
    {
        const auto docs = ten_docs();
        std::map<int, std::vector<TokenizedDoc>> by_year = {{2001, docs}};
        const auto s = textprep::corpus_stats(by_year).years.at(0);
        std::size_t tokens = 0;
        std::set<std::string> types;
        double per_doc_types = 0.0;
        for (const auto& d : docs) {
            tokens += d.tokens.size();
            types.insert(d.tokens.begin(), d.tokens.end());
            per_doc_types += static_cast<double>(std::set<std::string>(d.tokens.begin(), d.tokens.end()).size());
        }
        CHECK(s.token_count == tokens);
        CHECK(s.type_count == types.size());
        CHECK(s.type_count <= s.token_count);
        CHECK(s.mean_tokens_per_doc == doctest::Approx(static_cast<double>(tokens) / 10.0).epsilon(1e-15));
        CHECK(s.mean_types_per_doc == doctest::Approx(per_doc_types / 10.0).epsilon(1e-15));
        CHECK(textprep::stats_csv(textprep::corpus_stats(by_year)).starts_with("year,tokens,types,mean_tokens,mean_types\n"));
    }
}
