#include "prodiv/textprep.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace prodiv::textprep {

namespace {
constexpr std::size_t min_token_length = 3;

bool is_ascii_alpha(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
} // namespace

WordSet parse_word_list(std::string_view content)
{
    WordSet words;
    std::size_t start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) {
            end = content.size();
        }
        auto line = content.substr(start, end - start);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = artifacts::trim(line);
        if (!line.empty()) {
            std::string w(line);
            std::transform(w.begin(), w.end(), w.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            words.insert(std::move(w));
        }
        start = end + 1;
    }
    return words;
}

WordSet load_word_list(const std::filesystem::path& path)
{
    return parse_word_list(artifacts::read_text_file(path));
}

TokenizedDoc tokenize_and_clean(std::string_view text, const WordSet& noun_lexicon, const WordSet& stopwords)
{
    if (noun_lexicon.empty()) {
        throw ConfigError("noun lexicon is empty");
    }
    if (stopwords.empty()) {
        throw ConfigError("stopword list is empty");
    }
    TokenizedDoc doc;
    std::string current;
    const auto flush = [&] {
        if (current.size() >= min_token_length && !stopwords.contains(current) && noun_lexicon.contains(current)) {
            doc.tokens.push_back(current);
        }
        current.clear();
    };
    for (char c : text) {
        if (is_ascii_alpha(c)) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            flush();
        }
    }
    if (!current.empty()) {
        flush();
    }
    return doc;
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::size_t> doc_freq, std::size_t total_docs)
    : words_(std::move(words)), doc_freq_(std::move(doc_freq)), total_docs_(total_docs)
{
    if (words_.size() != doc_freq_.size()) {
        throw InputError("vocabulary words and document frequencies differ in length");
    }
    if (!std::is_sorted(words_.begin(), words_.end())) {
        throw InputError("vocabulary words must be sorted");
    }
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (doc_freq_[i] < 1 || doc_freq_[i] > total_docs_) {
            throw InputError("document frequency of '" + words_[i] + "' outside 1..total_docs");
        }
        if (!index_.emplace(words_[i], i).second) {
            throw InputError("duplicate vocabulary word '" + words_[i] + "'");
        }
    }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view word) const
{
    const auto it = index_.find(std::string(word));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Vocabulary build_vocabulary(std::span<const TokenizedDoc> docs, double max_df)
{
    if (!(max_df > 0.0 && max_df <= 1.0)) {
        throw ConfigError("max_df must lie in (0, 1]");
    }
    if (docs.empty()) {
        throw InputError("cannot build a vocabulary from an empty corpus");
    }
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::set<std::string_view> present(doc.tokens.begin(), doc.tokens.end());
        for (const auto w : present) {
            ++df[std::string(w)];
        }
    }
    const auto total = static_cast<double>(docs.size());
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [word, count] : df) {
        if (static_cast<double>(count) / total < max_df) {
            kept.emplace_back(word, count);
        }
    }
    std::sort(kept.begin(), kept.end());
    std::vector<std::string> words;
    std::vector<std::size_t> freq;
    words.reserve(kept.size());
    freq.reserve(kept.size());
    for (auto& [w, c] : kept) {
        words.push_back(std::move(w));
        freq.push_back(c);
    }
    return Vocabulary(std::move(words), std::move(freq), docs.size());
}

CorpusStats corpus_stats(const std::map<int, std::vector<TokenizedDoc>>& docs_by_year)
{
    CorpusStats stats;
    for (const auto& [year, docs] : docs_by_year) {
        if (docs.empty()) {
            throw InputError("no documents for year " + std::to_string(year));
        }
        YearStats ys;
        ys.year = year;
        ys.documents = docs.size();
        std::set<std::string_view> pooled;
        double sum_tokens = 0.0;
        double sum_types = 0.0;
        for (const auto& doc : docs) {
            std::set<std::string_view> own(doc.tokens.begin(), doc.tokens.end());
            ys.token_count += doc.tokens.size();
            pooled.insert(own.begin(), own.end());
            sum_tokens += static_cast<double>(doc.tokens.size());
            sum_types += static_cast<double>(own.size());
        }
        ys.type_count = pooled.size();
        ys.mean_tokens_per_doc = sum_tokens / static_cast<double>(docs.size());
        ys.mean_types_per_doc = sum_types / static_cast<double>(docs.size());
        stats.years.push_back(ys);
    }
    return stats;
}

std::string stats_csv(const CorpusStats& stats)
{
    std::string out = "year,tokens,types,mean_tokens,mean_types\n";
    for (const auto& y : stats.years) {
        out += std::to_string(y.year) + "," + std::to_string(y.token_count) + "," + std::to_string(y.type_count) + "," +
               artifacts::format_real(y.mean_tokens_per_doc) + "," + artifacts::format_real(y.mean_types_per_doc) +
               "\n";
    }
    return out;
}

} // namespace prodiv::textprep
