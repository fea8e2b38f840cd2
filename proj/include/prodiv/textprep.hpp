#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace prodiv::textprep {

using WordSet = std::unordered_set<std::string>;

// Cleaned, order-preserving token sequence of one firm-year section.
struct TokenizedDoc {
    std::int64_t cik = 0;
    int year = 0;
    std::vector<std::string> tokens;
};

// Loads a UTF-8 word list: one token per line, '#' starts a comment.
// Entries are lowercased and trimmed.
WordSet load_word_list(const std::filesystem::path& path);
WordSet parse_word_list(std::string_view content);

// Lowercases, splits on non-alphabetic characters, and keeps tokens of length
// >= 3 that are in the noun lexicon and not stopwords.
TokenizedDoc tokenize_and_clean(std::string_view text, const WordSet& noun_lexicon, const WordSet& stopwords);

// Corpus dictionary. Words are sorted lexicographically; their position is the
// embedding coordinate.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> words, std::vector<std::size_t> doc_freq, std::size_t total_docs);

    const std::vector<std::string>& words() const { return words_; }
    const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
    std::size_t total_docs() const { return total_docs_; }
    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }

    std::optional<std::size_t> index_of(std::string_view word) const;

private:
    std::vector<std::string> words_;
    std::vector<std::size_t> doc_freq_;
    std::size_t total_docs_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr double default_max_df = 0.20;

// Keeps the words whose document frequency divided by the number of documents
// is strictly below `max_df`.
Vocabulary build_vocabulary(std::span<const TokenizedDoc> docs, double max_df = default_max_df);

struct YearStats {
    int year = 0;
    std::size_t documents = 0;
    std::size_t token_count = 0;
    std::size_t type_count = 0;
    double mean_tokens_per_doc = 0.0;
    double mean_types_per_doc = 0.0;
};

// Per-year statistics, ascending by year.
struct CorpusStats {
    std::vector<YearStats> years;
};

// Totals pool every document of a year; means average each document's own
// token and type counts.
CorpusStats corpus_stats(const std::map<int, std::vector<TokenizedDoc>>& docs_by_year);

// CSV `year,tokens,types,mean_tokens,mean_types` (no header comment).
std::string stats_csv(const CorpusStats& stats);

} // namespace prodiv::textprep
