#include "prodiv/pipeline.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/diversity.hpp"
#include "prodiv/embed.hpp"
#include "prodiv/error.hpp"
#include "prodiv/ingest.hpp"
#include "prodiv/sicmodel.hpp"
#include "prodiv/simspace.hpp"
#include "prodiv/textprep.hpp"
#include "prodiv/trends.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

namespace prodiv::pipeline {

namespace fs = std::filesystem;
using artifacts::format_real;

namespace {

std::string provenance(const RunConfig& config)
{
    return artifacts::Provenance{config.seed, config.digest()}.describe();
}

std::string csv_header(const RunConfig& config)
{
    return "# " + provenance(config) + "\n";
}

fs::path stage_dir(const RunConfig& config, std::string_view stage)
{
    return config.output_dir / std::string(stage);
}

// Clears a stage directory so reruns never mix in stale files.
fs::path fresh_stage_dir(const RunConfig& config, std::string_view stage)
{
    const auto dir = stage_dir(config, stage);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void require_artifact(const fs::path& path, std::string_view producer)
{
    if (!fs::exists(path)) {
        throw Error("missing " + path.string() + "; run `prodiv " + std::string(producer) + "` first");
    }
}

// One embedded firm-year as listed in embed/docs.csv.
struct DocEntry {
    std::int64_t cik = 0;
    int year = 0;
    int sic_code = 0;
    std::size_t tokens = 0;
};

std::vector<DocEntry> read_docs(const RunConfig& config)
{
    const auto path = stage_dir(config, "embed") / "docs.csv";
    require_artifact(path, "embed");
    const auto table = artifacts::read_csv(path);
    const auto c_cik = table.column("cik");
    const auto c_year = table.column("year");
    const auto c_sic = table.column("sic_code");
    const auto c_tokens = table.column("tokens");
    std::vector<DocEntry> docs;
    for (const auto& row : table.rows) {
        docs.push_back({artifacts::parse_integer(row[c_cik], "cik"),
                        static_cast<int>(artifacts::parse_integer(row[c_year], "year")),
                        static_cast<int>(artifacts::parse_integer(row[c_sic], "sic_code")),
                        static_cast<std::size_t>(artifacts::parse_integer(row[c_tokens], "tokens"))});
    }
    return docs;
}

std::map<int, std::map<std::int64_t, int>> sic_by_year(const std::vector<DocEntry>& docs)
{
    std::map<int, std::map<std::int64_t, int>> out;
    for (const auto& d : docs) {
        out[d.year][d.cik] = d.sic_code;
    }
    return out;
}

std::vector<Model> embedding_models(const RunConfig& config)
{
    std::vector<Model> out;
    for (const auto m : config.models) {
        if (embedding_tag(m)) {
            out.push_back(m);
        }
    }
    return out;
}

sicmodel::SicTree tree_for(const RunConfig& config, const std::vector<DocEntry>& docs, std::ostream& log)
{
    if (!config.sic_tree.empty()) {
        try {
            return sicmodel::load_tree(config.sic_tree);
        } catch (const InputError& e) {
            throw ConfigError(std::string("SIC tree: ") + e.what());
        }
    }
    std::vector<int> codes;
    for (const auto& d : docs) {
        codes.push_back(d.sic_code);
    }
    log << "similarity: no sic_tree configured; using the standard layout over the observed codes\n";
    return sicmodel::standard_tree(codes);
}

std::string q_label(std::optional<double> q)
{
    return q ? format_real(*q) : std::string();
}

std::string profile_csv(const simspace::ClassProfile& p)
{
    std::string out = "class,abundance";
    for (const int c : p.classes) {
        out += "," + std::to_string(c);
    }
    out += "\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        out += std::to_string(p.classes[i]) + "," + format_real(p.abundance(ii));
        for (std::size_t j = 0; j < p.size(); ++j) {
            out += "," + format_real(p.similarity(ii, static_cast<Eigen::Index>(j)));
        }
        out += "\n";
    }
    return out;
}

simspace::ClassProfile read_profile(const fs::path& path, int year)
{
    const auto table = artifacts::read_csv(path);
    simspace::ClassProfile p;
    p.year = year;
    const auto s = static_cast<Eigen::Index>(table.rows.size());
    if (table.header.size() != table.rows.size() + 2) {
        throw InputError(path.string() + ": profile is not square");
    }
    p.abundance.resize(s);
    p.similarity.resize(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        p.classes.push_back(static_cast<int>(artifacts::parse_integer(row[0], "class")));
        p.abundance(i) = artifacts::parse_real(row[1], "abundance");
        for (Eigen::Index j = 0; j < s; ++j) {
            p.similarity(i, j) = artifacts::parse_real(row[static_cast<std::size_t>(j) + 2], "similarity");
        }
    }
    return p;
}

struct MetricRow {
    std::string metric;
    std::optional<double> q;
    int year;
    double value;
};

} // namespace

std::string read_section_file(const fs::path& path)
{
    auto text = artifacts::read_text_file(path);
    if (text.starts_with("# prodiv ")) {
        const auto nl = text.find('\n');
        text.erase(0, nl == std::string::npos ? text.size() : nl + 1);
    }
    return text;
}

fs::path summary_path(const RunConfig& config)
{
    return stage_dir(config, "trend") / "summary.json";
}

void cmd_ingest(const RunConfig& config, std::ostream& log)
{
    config.validate();
    if (config.manifest.empty()) {
        throw ConfigError("no manifest configured");
    }
    if (!fs::exists(config.manifest)) {
        throw ConfigError("manifest not found: " + config.manifest.string());
    }
    const auto records = ingest::load_manifest(config.manifest);
    std::vector<ingest::FilingRecord> in_range;
    for (const auto& r : records) {
        if (config.years.contains(r.year)) {
            in_range.push_back(r);
        }
    }
    const auto kept = ingest::filter_corpus(in_range);

    const auto dir = fresh_stage_dir(config, "ingest");
    const auto header = csv_header(config);
    std::string report = header + "cik,year,method,chars\n";
    std::string corpus = header + "cik,year,form_type,sic_code,section\n";
    std::size_t extracted = 0;
    for (const auto& r : kept) {
        const auto path = ingest::resolve_text_path(config.manifest, r);
        std::string raw;
        try {
            raw = artifacts::read_text_file(path);
        } catch (const InputError&) {
            throw InputError("filing (cik " + std::to_string(r.cik) + ", year " + std::to_string(r.year) +
                             "): cannot read " + path.string());
        }
        const auto result = ingest::extract_business_section(raw);
        report += std::to_string(r.cik) + "," + std::to_string(r.year) + "," +
                  std::string(ingest::to_string(result.method)) + "," + std::to_string(result.chars) + "\n";
        if (result.method == ingest::ExtractionMethod::failed) {
            continue;
        }
        const auto name = std::to_string(r.cik) + "_" + std::to_string(r.year) + ".txt";
        artifacts::write_text_file(dir / "sections" / name, header + result.business_text + "\n");
        corpus += std::to_string(r.cik) + "," + std::to_string(r.year) + "," +
                  std::string(ingest::to_string(r.form_type)) + "," + std::to_string(r.sic_code) + ",sections/" +
                  name + "\n";
        ++extracted;
    }
    artifacts::write_text_file(dir / "extraction_report.csv", report);
    artifacts::write_text_file(dir / "corpus.csv", corpus);
    log << "ingest: " << records.size() << " manifest records, " << kept.size() << " after filtering, " << extracted
        << " sections extracted\n";
}

void cmd_embed(const RunConfig& config, std::ostream& log)
{
    config.validate();
    const auto corpus_path = stage_dir(config, "ingest") / "corpus.csv";
    require_artifact(corpus_path, "ingest");

    textprep::WordSet nouns;
    textprep::WordSet stopwords;
    try {
        nouns = textprep::load_word_list(config.noun_lexicon);
        stopwords = textprep::load_word_list(config.stopwords);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }

    const auto table = artifacts::read_csv(corpus_path);
    const auto c_cik = table.column("cik");
    const auto c_year = table.column("year");
    const auto c_sic = table.column("sic_code");
    const auto c_section = table.column("section");

    const std::size_t min_tokens = config.has_model(Model::pvdm) ? config.pvdm.window + 1 : 1;
    const auto header = csv_header(config);
    std::vector<textprep::TokenizedDoc> docs;
    std::string docs_csv = header + "cik,year,sic_code,tokens\n";
    std::string dropped = header + "cik,year,tokens,reason\n";
    for (const auto& row : table.rows) {
        const auto text = read_section_file(stage_dir(config, "ingest") / row[c_section]);
        auto doc = textprep::tokenize_and_clean(text, nouns, stopwords);
        doc.cik = artifacts::parse_integer(row[c_cik], "cik");
        doc.year = static_cast<int>(artifacts::parse_integer(row[c_year], "year"));
        if (doc.tokens.size() < min_tokens) {
            dropped += std::to_string(doc.cik) + "," + std::to_string(doc.year) + "," +
                       std::to_string(doc.tokens.size()) + ",fewer than " + std::to_string(min_tokens) + " tokens\n";
            continue;
        }
        docs_csv += std::to_string(doc.cik) + "," + std::to_string(doc.year) + "," + row[c_sic] + "," +
                    std::to_string(doc.tokens.size()) + "\n";
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) {
        throw Error("no documents left to embed after cleaning");
    }

    const auto dir = fresh_stage_dir(config, "embed");
    artifacts::write_text_file(dir / "docs.csv", docs_csv);
    artifacts::write_text_file(dir / "dropped.csv", dropped);

    std::map<int, std::vector<textprep::TokenizedDoc>> by_year;
    for (const auto& d : docs) {
        by_year[d.year].push_back(d);
    }
    artifacts::write_text_file(dir / "corpus_stats.csv", header + textprep::stats_csv(textprep::corpus_stats(by_year)));

    const auto vocab = textprep::build_vocabulary(docs, config.max_df);
    std::string vocab_csv = header + "word,doc_freq\n";
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        vocab_csv += vocab.words()[i] + "," + std::to_string(vocab.doc_freq()[i]) + "\n";
    }
    artifacts::write_text_file(dir / "vocabulary.csv", vocab_csv);

    const auto prov = provenance(config);
    const auto save = [&](const embed::EmbeddingMatrix& m) {
        const std::string name(embed::to_string(m.model));
        embed::save_matrix(m, dir / (name + ".bin"), prov);
        artifacts::write_text_file(dir / (name + "_index.csv"), header + embed::index_csv(m));
        if (config.export_vectors_csv) {
            artifacts::write_text_file(dir / (name + "_vectors.csv"), header + embed::export_csv(m));
        }
    };

    for (const auto model : embedding_models(config)) {
        embed::EmbeddingMatrix m;
        if (model == Model::boolean) {
            m.model = embed::ModelTag::boolean;
            m.dim = vocab.size();
            for (const auto& d : docs) {
                m.rows.push_back(embed::embed_boolean(d, vocab));
            }
        } else if (model == Model::tfidf) {
            m.model = embed::ModelTag::tfidf;
            m.dim = vocab.size();
            m.rows = embed::embed_tfidf(docs, vocab);
        } else {
            auto params = config.pvdm;
            params.seed = derive_seed(config.seed, "pvdm");
            auto result = embed::train_pvdm(docs, params);
            std::string loss = header + "epoch,loss\n";
            for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
                loss += std::to_string(e + 1) + "," + format_real(result.epoch_loss[e]) + "\n";
            }
            artifacts::write_text_file(dir / "pvdm_loss.csv", loss);
            m = std::move(result.vectors);
        }
        save(m);
        log << "embed: " << to_string(model) << " " << m.rows.size() << " x " << m.dim << "\n";
    }
    log << "embed: " << docs.size() << " documents, vocabulary " << vocab.size() << " words\n";
}

void cmd_similarity(const RunConfig& config, std::ostream& log)
{
    config.validate();
    const auto docs = read_docs(config);
    const auto sic_maps = sic_by_year(docs);
    const auto dir = fresh_stage_dir(config, "similarity");
    const auto header = csv_header(config);
    const auto header_text = provenance(config);

    std::string specificity = header + "model,year,within,between,specificity\n";
    std::string profiles = header + "model,year,classes,path\n";

    const auto handle_year = [&](Model model, int year, const simspace::SimilarityMatrix& matrix,
                                 const std::vector<int>& classes, const simspace::ClassProfile& profile) {
        const auto name = std::string(to_string(model)) + "_" + std::to_string(year);
        if (config.heatmaps) {
            std::map<std::string, simspace::FirmMeta> meta;
            const auto& sic = sic_maps.at(year);
            for (const auto& label : matrix.labels) {
                const auto cik = artifacts::parse_integer(label.substr(0, label.find('_')), "cik");
                meta[label] = {cik, sic.at(cik)};
            }
            simspace::export_heatmap(matrix, meta, dir / "heatmaps" / name, header_text);
        }
        try {
            const auto parts = diversity::industry_specificity_parts(matrix, classes);
            specificity += std::string(to_string(model)) + "," + std::to_string(year) + "," + format_real(parts.within) +
                           "," + format_real(parts.between) + "," + format_real(parts.ratio) + "\n";
        } catch (const ComputeError& e) {
            log << "similarity: " << to_string(model) << " " << year << ": industry specificity skipped (" << e.what()
                << ")\n";
        }
        artifacts::write_text_file(dir / "profiles" / (name + ".csv"), header + profile_csv(profile));
        profiles += std::string(to_string(model)) + "," + std::to_string(year) + "," + std::to_string(profile.size()) +
                    ",profiles/" + name + ".csv\n";
    };

    for (const auto model : config.models) {
        if (const auto tag = embedding_tag(model)) {
            const auto path = stage_dir(config, "embed") / (std::string(embed::to_string(*tag)) + ".bin");
            require_artifact(path, "embed");
            const auto matrix = embed::load_matrix(path);
            std::map<int, std::vector<embed::FirmVector>> by_year;
            for (const auto& row : matrix.rows) {
                by_year[row.year()].push_back(row);
            }
            for (const auto& [year, vectors] : by_year) {
                const auto& sic = sic_maps.at(year);
                std::vector<int> classes;
                for (const auto& v : vectors) {
                    classes.push_back(sic.at(v.cik()));
                }
                const auto sim = simspace::cosine_matrix(vectors);
                const auto profile = simspace::aggregate_classes(vectors, sic, year);
                handle_year(model, year, sim, classes, profile);
            }
        } else {
            const auto tree = tree_for(config, docs, log);
            if (config.sic_tree.empty()) {
                artifacts::write_text_file(dir / "sic_tree.csv", header + sicmodel::tree_csv(tree));
            }
            for (const auto& [year, sic] : sic_maps) {
                std::vector<sicmodel::Firm> firms;
                std::vector<int> classes;
                for (const auto& [cik, code] : sic) {
                    firms.push_back({cik, code});
                    classes.push_back(code);
                }
                auto sim = sicmodel::sic_similarity_matrix(firms, tree);
                for (std::size_t i = 0; i < firms.size(); ++i) {
                    sim.labels[i] = simspace::firm_label(firms[i].cik, year);
                }
                const auto counts = diversity::count_classes(classes);
                const auto s = static_cast<Eigen::Index>(counts.classes.size());
                Eigen::MatrixXd z(s, s);
                for (Eigen::Index i = 0; i < s; ++i) {
                    for (Eigen::Index j = 0; j < s; ++j) {
                        z(i, j) = i == j ? 1.0
                                         : sicmodel::code_similarity(counts.classes[static_cast<std::size_t>(i)],
                                                                     counts.classes[static_cast<std::size_t>(j)], tree);
                    }
                }
                const auto profile = simspace::make_profile(year, counts.classes, counts.counts, std::move(z));
                handle_year(model, year, sim, classes, profile);
            }
        }
        log << "similarity: " << to_string(model) << " done\n";
    }
    artifacts::write_text_file(dir / "industry_specificity.csv", specificity);
    artifacts::write_text_file(dir / "profiles.csv", profiles);
}

void cmd_diversity(const RunConfig& config, std::ostream& log)
{
    config.validate();
    const auto docs = read_docs(config);
    const auto profiles_path = stage_dir(config, "similarity") / "profiles.csv";
    require_artifact(profiles_path, "similarity");
    const auto spec_path = stage_dir(config, "similarity") / "industry_specificity.csv";
    require_artifact(spec_path, "similarity");

    std::vector<MetricRow> rows;

    std::map<int, std::vector<int>> classes_by_year;
    for (const auto& d : docs) {
        classes_by_year[d.year].push_back(d.sic_code);
    }
    for (const auto& [year, classes] : classes_by_year) {
        const auto counts = diversity::count_classes(classes);
        rows.push_back({"richness", std::nullopt, year, static_cast<double>(diversity::richness(counts))});
        rows.push_back({"shannon", std::nullopt, year, diversity::shannon_entropy(counts)});
        try {
            rows.push_back({"normalized_entropy", std::nullopt, year, diversity::normalized_entropy(counts)});
        } catch (const ComputeError& e) {
            log << "diversity: " << year << ": normalized entropy skipped (" << e.what() << ")\n";
        }
    }

    const auto profile_table = artifacts::read_csv(profiles_path);
    const auto c_model = profile_table.column("model");
    const auto c_year = profile_table.column("year");
    const auto c_path = profile_table.column("path");
    std::map<std::string, std::vector<std::pair<int, fs::path>>> profiles_by_model;
    for (const auto& row : profile_table.rows) {
        profiles_by_model[row[c_model]].emplace_back(static_cast<int>(artifacts::parse_integer(row[c_year], "year")),
                                                     stage_dir(config, "similarity") / row[c_path]);
    }

    const auto spec_table = artifacts::read_csv(spec_path);
    const auto s_model = spec_table.column("model");
    const auto s_year = spec_table.column("year");
    const auto s_value = spec_table.column("specificity");

    for (const auto model : config.models) {
        const std::string name(to_string(model));
        const auto it = profiles_by_model.find(name);
        if (it == profiles_by_model.end()) {
            throw Error("no class profiles for model " + name + "; rerun `prodiv similarity`");
        }
        for (const double q : config.q_values) {
            for (const auto& [year, path] : it->second) {
                rows.push_back({name + ".qD", q, year, diversity::q_diversity(read_profile(path, year), q)});
            }
        }
        for (const double q : config.q_values) {
            for (const auto& [year, path] : it->second) {
                rows.push_back({name + ".qD_adj", q, year, diversity::adjusted_q_diversity(read_profile(path, year), q)});
            }
        }
        if (const auto tag = embedding_tag(model)) {
            const auto path = stage_dir(config, "embed") / (std::string(embed::to_string(*tag)) + ".bin");
            require_artifact(path, "embed");
            const auto matrix = embed::load_matrix(path);
            std::map<int, std::vector<embed::FirmVector>> by_year;
            for (const auto& row : matrix.rows) {
                by_year[row.year()].push_back(row);
            }
            for (const auto& [year, vectors] : by_year) {
                if (vectors.size() < 2) {
                    log << "diversity: " << name << " " << year << ": PCA diversity skipped (one firm)\n";
                    continue;
                }
                rows.push_back({name + ".pca", std::nullopt, year,
                                static_cast<double>(diversity::pca_diversity(vectors, config.pca_threshold))});
            }
        }
        for (std::size_t r = 0; r < spec_table.rows.size(); ++r) {
            const auto& row = spec_table.rows[r];
            if (row[s_model] == name) {
                rows.push_back({name + ".specificity", std::nullopt,
                                static_cast<int>(artifacts::parse_integer(row[s_year], "year")),
                                artifacts::parse_real(row[s_value], "specificity")});
            }
        }
    }

    const auto dir = fresh_stage_dir(config, "diversity");
    std::string out = csv_header(config);
    if (std::find(config.q_values.begin(), config.q_values.end(), 1.0) != config.q_values.end()) {
        out += "# q=1 is computed by the limit exp(-sum_i a_i ln (Za)_i)\n";
        log << "diversity: q = 1 computed by the exponential-entropy limit\n";
    }
    out += "metric,q,year,value\n";
    for (const auto& r : rows) {
        out += r.metric + "," + q_label(r.q) + "," + std::to_string(r.year) + "," + format_real(r.value) + "\n";
    }
    artifacts::write_text_file(dir / "diversity.csv", out);
    log << "diversity: " << rows.size() << " metric values\n";
}

void cmd_trend(const RunConfig& config, std::ostream& log)
{
    config.validate();
    const auto path = stage_dir(config, "diversity") / "diversity.csv";
    require_artifact(path, "diversity");
    const auto table = artifacts::read_csv(path);
    const auto c_metric = table.column("metric");
    const auto c_q = table.column("q");
    const auto c_year = table.column("year");
    const auto c_value = table.column("value");

    std::vector<trends::AnnualSeries> series;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& row : table.rows) {
        const auto key = std::make_pair(row[c_metric], row[c_q]);
        auto it = index.find(key);
        if (it == index.end()) {
            trends::AnnualSeries s;
            s.metric = row[c_metric];
            if (!row[c_q].empty()) {
                s.q = artifacts::parse_real(row[c_q], "q");
            }
            it = index.emplace(key, series.size()).first;
            series.push_back(std::move(s));
        }
        series[it->second].points.push_back({static_cast<double>(artifacts::parse_integer(row[c_year], "year")),
                                             artifacts::parse_real(row[c_value], "value")});
    }
    for (auto& s : series) {
        std::sort(s.points.begin(), s.points.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
    }

    const auto dir = fresh_stage_dir(config, "trend");
    std::vector<trends::TrendReport> reports;
    nlohmann::ordered_json summary;
    summary["provenance"] = provenance(config);
    summary["config_digest"] = config.digest();
    summary["seed"] = config.seed;
    std::vector<std::string> model_names;
    for (const auto m : config.models) {
        model_names.emplace_back(to_string(m));
    }
    summary["models"] = model_names;
    summary["q_values"] = config.q_values;
    summary["q_limit_used"] =
        std::find(config.q_values.begin(), config.q_values.end(), 1.0) != config.q_values.end();
    summary["permutations"] = config.permutations;
    summary["confidence"] = config.confidence;
    auto metrics = nlohmann::ordered_json::array();

    for (const auto& s : series) {
        nlohmann::ordered_json entry;
        entry["metric"] = s.metric;
        entry["q"] = s.q ? nlohmann::ordered_json(*s.q) : nlohmann::ordered_json(nullptr);
        if (s.q && *s.q == 1.0) {
            entry["q_limit"] = true;
        }
        std::vector<double> years;
        std::vector<double> values;
        for (const auto& p : s.points) {
            years.push_back(p.year);
            values.push_back(p.value);
        }
        entry["n"] = s.points.size();
        entry["years"] = years;
        entry["values"] = values;
        try {
            trends::PermutationOptions options;
            options.permutations = config.permutations;
            options.seed = derive_seed(config.seed, "trend:" + s.metric + ":" + q_label(s.q));
            auto report = trends::pearson_trend(s, options, config.confidence);
            entry["status"] = "ok";
            entry["slope"] = report.fit.slope;
            entry["intercept"] = report.fit.intercept;
            entry["ci90"] = report.fit.slope_ci;
            entry["r"] = report.r;
            entry["p"] = report.p;
            entry["stars"] = report.stars;
            std::string file = s.metric;
            std::replace(file.begin(), file.end(), '.', '_');
            if (s.q) {
                file += "_q" + format_real(*s.q);
            }
            artifacts::write_text_file(dir / "plots" / (file + ".svg"),
                                       "<!-- " + provenance(config) + " -->\n" + trends::trend_svg(s, report.fit));
            reports.push_back(std::move(report));
        } catch (const Error& e) {
            entry["status"] = "skipped";
            entry["reason"] = e.what();
            log << "trend: " << s.metric << (s.q ? " q=" + format_real(*s.q) : std::string()) << " skipped ("
                << e.what() << ")\n";
        }
        metrics.push_back(std::move(entry));
    }
    summary["metrics"] = std::move(metrics);
    artifacts::write_text_file(dir / "trends.csv", csv_header(config) + trends::reports_csv(reports));
    artifacts::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    log << "trend: " << reports.size() << " of " << series.size() << " series fitted\n";
}

void cmd_report(const RunConfig& config, std::ostream& out)
{
    const auto path = summary_path(config);
    require_artifact(path, "trend");
    nlohmann::json summary;
    try {
        summary = nlohmann::json::parse(artifacts::read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    std::string md = "<!-- " + summary.value("provenance", std::string()) + " -->\n";
    md += "# Diversity trends\n\n";
    md += "| metric | q | years | slope | CI90 | r | p | |\n";
    md += "|---|---|---|---|---|---|---|---|\n";
    char buffer[256];
    std::string skipped;
    for (const auto& m : summary.at("metrics")) {
        const std::string metric = m.at("metric");
        const std::string q = m.at("q").is_null() ? std::string() : format_real(m.at("q").get<double>());
        const auto& years = m.at("years");
        const std::string span = years.empty() ? std::string()
                                               : format_real(years.front().get<double>()) + "-" +
                                                     format_real(years.back().get<double>());
        if (m.at("status") != "ok") {
            skipped += "- " + metric + (q.empty() ? "" : " (q=" + q + ")") + ": " + m.value("reason", "") + "\n";
            continue;
        }
        std::snprintf(buffer, sizeof buffer, "| %s | %s | %s | %.4g | %.4g | %.3f | %.4g | %s |\n", metric.c_str(),
                      q.c_str(), span.c_str(), m.at("slope").get<double>(), m.at("ci90").get<double>(),
                      m.at("r").get<double>(), m.at("p").get<double>(), m.at("stars").get<std::string>().c_str());
        md += buffer;
    }
    md += "\nStars: *** p <= 0.01, ** p <= 0.05 (two-sided permutation test).\n";
    if (summary.value("q_limit_used", false)) {
        md += "q = 1 values use the exponential-entropy limit.\n";
    }
    if (!skipped.empty()) {
        md += "\nNot fitted:\n\n" + skipped;
    }
    artifacts::write_text_file(config.output_dir / "report.md", md);
    out << md;
}

void run_all(const RunConfig& config, std::ostream& log)
{
    cmd_ingest(config, log);
    cmd_embed(config, log);
    cmd_similarity(config, log);
    cmd_diversity(config, log);
    cmd_trend(config, log);
    cmd_report(config, log);
}

} // namespace prodiv::pipeline
