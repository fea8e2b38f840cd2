#pragma once

#include "prodiv/embed.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prodiv {

// Similarity models the pipeline can run. `sic` is the text-free baseline.
enum class Model { boolean, tfidf, pvdm, sic };

std::string_view to_string(Model model);
// Throws ConfigError for unknown tags.
Model parse_model(std::string_view text);
std::optional<embed::ModelTag> embedding_tag(Model model);

// Default data files shipped with the toolkit.
std::filesystem::path default_noun_lexicon();
std::filesystem::path default_stopwords();

struct YearRange {
    int first = 1901;
    int last = 2099;

    bool contains(int year) const { return year >= first && year <= last; }
};

// Everything a pipeline run depends on. Loaded from an INI-style file
// (`key = value`, optional `[pvdm]` section, '#' or ';' comments) and then
// overridden from the command line.
struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path noun_lexicon = default_noun_lexicon();
    std::filesystem::path stopwords = default_stopwords();
    std::filesystem::path sic_tree;
    std::filesystem::path output_dir = "prodiv-out";

    std::vector<Model> models = {Model::boolean, Model::tfidf, Model::pvdm, Model::sic};
    std::vector<double> q_values = {0.0, 2.0, 5.0};
    embed::PvdmParams pvdm;
    std::uint64_t seed = 1;
    YearRange years;

    double max_df = 0.20;
    double pca_threshold = 0.90;
    double confidence = 0.90;
    std::size_t permutations = 100000;
    bool export_vectors_csv = false;
    bool heatmaps = true;

    // Throws ConfigError on invalid values.
    void validate() const;

    // Sorted `key = value` lines covering every setting; paths are written as
    // given. Stable across runs, used for the config digest.
    std::string canonical() const;
    std::string digest() const;

    bool has_model(Model m) const;
};

// Applies one setting. Relative paths are resolved against `base_dir`.
// Throws ConfigError for unknown keys or malformed values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir, std::string_view source_name);
RunConfig load_config(const std::filesystem::path& path);

// Per-stage seed derived from the global seed and a stage name.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

} // namespace prodiv
