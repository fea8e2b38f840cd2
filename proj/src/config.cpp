#include "prodiv/config.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace prodiv {

namespace {

std::vector<std::string> split_list(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find_first_of(", ", start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto item = artifacts::trim(text.substr(start, end - start));
        if (!item.empty()) {
            out.emplace_back(item);
        }
        start = end + 1;
    }
    return out;
}

long long to_integer(std::string_view key, std::string_view value)
{
    try {
        return artifacts::parse_integer(value, key);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

double to_real(std::string_view key, std::string_view value)
{
    try {
        return artifacts::parse_real(value, key);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

bool to_bool(std::string_view key, std::string_view value)
{
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::size_t to_count(std::string_view key, std::string_view value)
{
    const auto v = to_integer(key, value);
    if (v < 0) {
        throw ConfigError(std::string(key) + " must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

std::filesystem::path to_path(std::string_view value, const std::filesystem::path& base_dir)
{
    std::filesystem::path p{std::string(value)};
    if (p.is_relative() && !base_dir.empty()) {
        p = base_dir / p;
    }
    return p.lexically_normal();
}

} // namespace

std::string_view to_string(Model model)
{
    switch (model) {
    case Model::boolean: return "boolean";
    case Model::tfidf: return "tfidf";
    case Model::pvdm: return "pvdm";
    case Model::sic: return "sic";
    }
    return "boolean";
}

Model parse_model(std::string_view text)
{
    if (text == "boolean") return Model::boolean;
    if (text == "tfidf") return Model::tfidf;
    if (text == "pvdm") return Model::pvdm;
    if (text == "sic") return Model::sic;
    throw ConfigError("unknown model tag '" + std::string(text) + "' (expected boolean, tfidf, pvdm, sic)");
}

std::optional<embed::ModelTag> embedding_tag(Model model)
{
    switch (model) {
    case Model::boolean: return embed::ModelTag::boolean;
    case Model::tfidf: return embed::ModelTag::tfidf;
    case Model::pvdm: return embed::ModelTag::pvdm;
    case Model::sic: return std::nullopt;
    }
    return std::nullopt;
}

bool RunConfig::has_model(Model m) const
{
    return std::find(models.begin(), models.end(), m) != models.end();
}

void RunConfig::validate() const
{
    if (models.empty()) {
        throw ConfigError("no models selected");
    }
    if (q_values.empty()) {
        throw ConfigError("no diversity orders q selected");
    }
    for (const double q : q_values) {
        if (!(q >= 0.0)) {
            throw ConfigError("q values must be >= 0");
        }
    }
    if (years.first > years.last) {
        throw ConfigError("empty year range " + std::to_string(years.first) + ":" + std::to_string(years.last));
    }
    if (!(max_df > 0.0 && max_df <= 1.0)) {
        throw ConfigError("max_df must lie in (0, 1]");
    }
    if (!(pca_threshold > 0.0 && pca_threshold <= 1.0)) {
        throw ConfigError("pca_threshold must lie in (0, 1]");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw ConfigError("confidence must lie in (0, 1)");
    }
    if (permutations == 0) {
        throw ConfigError("permutations must be positive");
    }
    if (output_dir.empty()) {
        throw ConfigError("output_dir is empty");
    }
    pvdm.validate();
}

std::string RunConfig::canonical() const
{
    std::map<std::string, std::string> kv;
    kv["manifest"] = manifest.generic_string();
    kv["noun_lexicon"] = noun_lexicon.generic_string();
    kv["stopwords"] = stopwords.generic_string();
    kv["sic_tree"] = sic_tree.generic_string();
    std::string m;
    for (const auto model : models) {
        m += (m.empty() ? "" : ",") + std::string(to_string(model));
    }
    kv["models"] = m;
    std::string q;
    for (const double v : q_values) {
        q += (q.empty() ? "" : ",") + artifacts::format_real(v);
    }
    kv["q"] = q;
    kv["seed"] = std::to_string(seed);
    kv["years"] = std::to_string(years.first) + ":" + std::to_string(years.last);
    kv["max_df"] = artifacts::format_real(max_df);
    kv["pca_threshold"] = artifacts::format_real(pca_threshold);
    kv["confidence"] = artifacts::format_real(confidence);
    kv["permutations"] = std::to_string(permutations);
    kv["export_vectors_csv"] = export_vectors_csv ? "true" : "false";
    kv["heatmaps"] = heatmaps ? "true" : "false";
    kv["pvdm.dim"] = std::to_string(pvdm.dim);
    kv["pvdm.window"] = std::to_string(pvdm.window);
    kv["pvdm.epochs"] = std::to_string(pvdm.epochs);
    kv["pvdm.learning_rate"] = artifacts::format_real(pvdm.learning_rate);
    kv["pvdm.min_learning_rate"] = artifacts::format_real(pvdm.min_learning_rate);
    kv["pvdm.negative"] = std::to_string(pvdm.negative_samples);
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k + " = " + v + "\n";
    }
    return out;
}

std::string RunConfig::digest() const
{
    return artifacts::digest_hex(canonical());
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view raw, const std::filesystem::path& base_dir)
{
    const auto value = artifacts::trim(raw);
    if (key == "manifest") {
        config.manifest = to_path(value, base_dir);
    } else if (key == "noun_lexicon") {
        config.noun_lexicon = to_path(value, base_dir);
    } else if (key == "stopwords") {
        config.stopwords = to_path(value, base_dir);
    } else if (key == "sic_tree") {
        config.sic_tree = to_path(value, base_dir);
    } else if (key == "output_dir") {
        config.output_dir = to_path(value, base_dir);
    } else if (key == "models") {
        config.models.clear();
        for (const auto& tag : split_list(value)) {
            const auto m = parse_model(tag);
            if (!config.has_model(m)) {
                config.models.push_back(m);
            }
        }
    } else if (key == "q") {
        config.q_values.clear();
        for (const auto& item : split_list(value)) {
            config.q_values.push_back(to_real("q", item));
        }
    } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(to_count(key, value));
    } else if (key == "years") {
        const auto colon = value.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError("years must be written A:B");
        }
        config.years.first = static_cast<int>(to_integer(key, value.substr(0, colon)));
        config.years.last = static_cast<int>(to_integer(key, value.substr(colon + 1)));
    } else if (key == "max_df") {
        config.max_df = to_real(key, value);
    } else if (key == "pca_threshold") {
        config.pca_threshold = to_real(key, value);
    } else if (key == "confidence") {
        config.confidence = to_real(key, value);
    } else if (key == "permutations") {
        config.permutations = to_count(key, value);
    } else if (key == "export_vectors_csv") {
        config.export_vectors_csv = to_bool(key, value);
    } else if (key == "heatmaps") {
        config.heatmaps = to_bool(key, value);
    } else if (key == "pvdm.dim") {
        config.pvdm.dim = to_count(key, value);
    } else if (key == "pvdm.window") {
        config.pvdm.window = to_count(key, value);
    } else if (key == "pvdm.epochs") {
        config.pvdm.epochs = to_count(key, value);
    } else if (key == "pvdm.learning_rate") {
        config.pvdm.learning_rate = to_real(key, value);
    } else if (key == "pvdm.min_learning_rate") {
        config.pvdm.min_learning_rate = to_real(key, value);
    } else if (key == "pvdm.negative") {
        config.pvdm.negative_samples = to_count(key, value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir, std::string_view source_name)
{
    RunConfig config;
    std::istringstream in{std::string(text)};
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = artifacts::trim(line);
        if (t.empty() || t.front() == '#' || t.front() == ';') {
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ConfigError(std::string(source_name) + ":" + std::to_string(line_no) + ": malformed section");
            }
            section = std::string(artifacts::trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(source_name) + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key(artifacts::trim(t.substr(0, eq)));
        if (!section.empty()) {
            key = section + "." + key;
        }
        try {
            apply_setting(config, key, t.substr(eq + 1), base_dir);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(source_name) + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::string text;
    try {
        text = artifacts::read_text_file(path);
    } catch (const InputError&) {
        throw ConfigError("cannot read config file " + path.string());
    }
    return parse_config(text, path.parent_path(), path.string());
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage)
{
    std::uint64_t x = seed ^ artifacts::fnv1a64(stage);
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::filesystem::path default_noun_lexicon()
{
    return std::filesystem::path(PRODIV_DATA_DIR) / "nouns.txt";
}

std::filesystem::path default_stopwords()
{
    return std::filesystem::path(PRODIV_DATA_DIR) / "stopwords.txt";
}

} // namespace prodiv
