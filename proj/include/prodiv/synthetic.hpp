#pragma once

#include "prodiv/textprep.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

// Synthetic filings and corpora with known structure, used by the tests, the
// acceptance binary and `prodiv_synth`.
namespace prodiv::synth {

struct Topic {
    std::string name;
    int sic_code = 0;
    std::vector<std::string> nouns;
    bool financial = false;
};

// Eight product topics in distinct SIC divisions, followed by one financial
// topic (SIC 6021) that the corpus filter removes.
const std::vector<Topic>& topics();
// Nouns shared by every topic.
const std::vector<std::string>& generic_nouns();
// Every noun any generator can emit.
std::vector<std::string> all_generator_nouns();

// Layouts of a 10-K. R* put the section under an ITEM 1 heading, K* only under
// a Business heading, F* are not parseable (no section, combined "ITEMS 1 AND
// 2" heading, keyword section shorter than the minimum).
enum class FilingFormat { R1, R2, R3, R4, R5, K1, K2, F1, F2, F3 };

std::string_view to_string(FilingFormat format);
bool expect_extracted(FilingFormat format);
bool is_keyword_format(FilingFormat format);

// Uniform index in [0, n) from a 64-bit draw.
std::size_t draw_index(std::mt19937_64& rng, std::size_t n);

// Business-section prose: `sentences` template sentences over the topic and
// generic nouns, four sentences per paragraph line. One in ten topic nouns of a
// product topic comes from the next product topic.
std::string business_text(const Topic& topic, std::mt19937_64& rng, std::size_t sentences);

std::string render_filing(FilingFormat format, std::string_view company, const Topic& topic, std::mt19937_64& rng);

struct FixtureFiling {
    std::size_t index = 0;
    FilingFormat format = FilingFormat::R1;
    std::string text;
};

// 100 filings: 70 ITEM-heading layouts, 18 keyword-only layouts and 12
// unparseable ones, in seeded order.
std::vector<FixtureFiling> extraction_fixture(std::uint64_t seed = 7);

struct CorpusSpec {
    std::vector<int> years;
    // Number of product topics present per year; topics drop from the end.
    std::vector<std::size_t> topics_per_year;
    std::size_t firms_per_topic = 4;
    std::size_t sentences = 24;
    // Banks per year, removed by the financial filter.
    std::size_t financial_per_year = 2;
    std::uint64_t seed = 1;
    std::size_t pvdm_dim = 16;
    std::size_t permutations = 100000;
};

// 2008..2017 with 8, 8, 7, 7, 6, 6, 5, 5, 4, 4 topics.
CorpusSpec shrinking_corpus_spec();

// Writes manifest.csv, filings/, sic_tree.csv and config.ini (output_dir = out)
// under `dir`. Returns the config path.
std::filesystem::path write_corpus(const CorpusSpec& spec, const std::filesystem::path& dir);

// Two topics with disjoint 20-word vocabularies; documents alternate topics and
// draw `length` tokens uniformly from their topic. Topic of doc i is i % 2.
std::vector<textprep::TokenizedDoc> two_topic_docs(std::uint64_t seed, std::size_t docs = 40, std::size_t length = 60);

} // namespace prodiv::synth
