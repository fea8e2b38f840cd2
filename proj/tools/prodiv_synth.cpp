// Writes synthetic corpora for trying the pipeline without EDGAR data.
#include "prodiv/artifacts.hpp"
#include "prodiv/synthetic.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Generate synthetic 10-K corpora"};
    app.require_subcommand(1);

    std::string dir;
    std::uint64_t seed = 1;
    std::size_t firms = 4;
    std::size_t dim = 16;
    auto* corpus = app.add_subcommand("corpus", "Ten-year corpus whose topic count shrinks from 8 to 4");
    corpus->add_option("dir", dir, "Output directory")->required();
    corpus->add_option("--seed", seed, "Generator seed");
    corpus->add_option("--firms-per-topic", firms, "Firms per topic and year")->check(CLI::PositiveNumber);
    corpus->add_option("--pvdm-dim", dim, "PV-DM dimension written to config.ini")->check(CLI::PositiveNumber);

    std::uint64_t fixture_seed = 7;
    auto* fixture = app.add_subcommand("fixture", "The 100-filing extraction fixture");
    fixture->add_option("dir", dir, "Output directory")->required();
    fixture->add_option("--seed", fixture_seed, "Generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*corpus) {
            auto spec = prodiv::synth::shrinking_corpus_spec();
            spec.seed = seed;
            spec.firms_per_topic = firms;
            spec.pvdm_dim = dim;
            const auto config = prodiv::synth::write_corpus(spec, dir);
            std::cout << config.string() << "\n";
        } else {
            std::string index = "index,format,path\n";
            for (const auto& f : prodiv::synth::extraction_fixture(fixture_seed)) {
                const auto name = "filing_" + std::to_string(f.index) + ".txt";
                prodiv::artifacts::write_text_file(std::filesystem::path(dir) / name, f.text);
                index += std::to_string(f.index) + "," + std::string(prodiv::synth::to_string(f.format)) + "," + name +
                         "\n";
            }
            prodiv::artifacts::write_text_file(std::filesystem::path(dir) / "index.csv", index);
        }
    } catch (const std::exception& e) {
        std::cerr << "prodiv_synth: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
