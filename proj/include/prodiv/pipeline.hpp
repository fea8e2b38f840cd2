#pragma once

#include "prodiv/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

// Pipeline stages. Each stage reads only files written by earlier stages under
// `config.output_dir` and writes its own subdirectory:
//
//   ingest/      extraction_report.csv, corpus.csv, sections/<cik>_<year>.txt
//   embed/       corpus_stats.csv, vocabulary.csv, dropped.csv,
//                <model>.bin, <model>_index.csv, pvdm_loss.csv
//   similarity/  industry_specificity.csv, profiles/<model>_<year>.csv,
//                heatmaps/<model>_<year>.{csv,svg}
//   diversity/   diversity.csv
//   trend/       trends.csv, summary.json, plots/*.svg
//   report.md
namespace prodiv::pipeline {

// Stage-specific logging goes to `log`; pass a null stream to silence it.
void cmd_ingest(const RunConfig& config, std::ostream& log);
void cmd_embed(const RunConfig& config, std::ostream& log);
void cmd_similarity(const RunConfig& config, std::ostream& log);
void cmd_diversity(const RunConfig& config, std::ostream& log);
void cmd_trend(const RunConfig& config, std::ostream& log);
// Renders report.md from trend/summary.json and writes it to `out` too.
void cmd_report(const RunConfig& config, std::ostream& out);
void run_all(const RunConfig& config, std::ostream& log);

std::filesystem::path summary_path(const RunConfig& config);

// Section files start with a provenance comment line; this drops it.
std::string read_section_file(const std::filesystem::path& path);

} // namespace prodiv::pipeline
