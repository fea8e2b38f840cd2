#include "prodiv/config.hpp"
#include "prodiv/error.hpp"
#include "prodiv/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> seed;
    std::optional<std::string> years;
    std::optional<std::string> models;
    std::optional<std::string> q;
    std::optional<std::string> out;
    std::optional<std::string> manifest;
    bool quiet = false;
};

prodiv::RunConfig resolve(const Overrides& o)
{
    prodiv::RunConfig config = o.config.empty() ? prodiv::RunConfig{} : prodiv::load_config(o.config);
    const auto set = [&](std::string_view key, const std::optional<std::string>& value) {
        if (value) {
            prodiv::apply_setting(config, key, *value, std::filesystem::current_path());
        }
    };
    set("seed", o.seed);
    set("years", o.years);
    set("models", o.models);
    set("q", o.q);
    set("output_dir", o.out);
    set("manifest", o.manifest);
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Product-diversity measurement from 10-K business descriptions"};
    app.set_version_flag("--version", std::string("prodiv ") + PRODIV_VERSION);
    app.require_subcommand(1);

    Overrides o;
    app.add_option("-c,--config", o.config, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--years", o.years, "Year range A:B");
    app.add_option("--models", o.models, "Comma-separated models: boolean,tfidf,pvdm,sic");
    app.add_option("--q", o.q, "Comma-separated diversity orders");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--manifest", o.manifest, "Filing manifest CSV");
    app.add_flag("--quiet", o.quiet, "Suppress progress messages");

    using Stage = void (*)(const prodiv::RunConfig&, std::ostream&);
    const std::vector<std::tuple<std::string, std::string, Stage>> stages = {
        {"ingest", "Extract business sections from the manifest's filings", &prodiv::pipeline::cmd_ingest},
        {"embed", "Tokenize sections and compute firm vectors", &prodiv::pipeline::cmd_embed},
        {"similarity", "Similarity matrices, class profiles, industry specificity", &prodiv::pipeline::cmd_similarity},
        {"diversity", "Annual diversity metrics", &prodiv::pipeline::cmd_diversity},
        {"trend", "Linear fits and permutation tests per metric", &prodiv::pipeline::cmd_trend},
        {"run-all", "Run every stage and write the report", &prodiv::pipeline::run_all},
        {"report", "Render report.md from the trend summary", &prodiv::pipeline::cmd_report},
    };
    for (const auto& [name, help, fn] : stages) {
        app.add_subcommand(name, help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::ostringstream sink;
    std::ostream& log = o.quiet ? static_cast<std::ostream&>(sink) : std::cerr;
    try {
        const auto config = resolve(o);
        for (const auto& [name, help, fn] : stages) {
            if (app.got_subcommand(name)) {
                if (name == "report") {
                    fn(config, std::cout);
                } else {
                    fn(config, log);
                }
            }
        }
    } catch (const prodiv::ConfigError& e) {
        std::cerr << "prodiv: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "prodiv: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
