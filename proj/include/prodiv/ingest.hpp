#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prodiv::ingest {

enum class FormType { k10K, k10K405, k10KSB };

std::string_view to_string(FormType form);
FormType parse_form_type(std::string_view text);

// One firm-year filing as listed in the manifest.
struct FilingRecord {
    std::int64_t cik = 0;
    int year = 0;
    FormType form_type = FormType::k10K;
    int sic_code = 0;
    std::filesystem::path text_path;
    // The manifest producer already applied the external data-availability filters.
    bool prefiltered = false;

    bool operator==(const FilingRecord&) const = default;
};

// Reads a manifest CSV with header `cik,year,form_type,sic_code,text_path,prefiltered`.
// Records come back in file order. Throws InputError naming the row (1-based,
// header is row 1) and field for malformed rows, and both rows for a
// duplicated (cik, year).
std::vector<FilingRecord> load_manifest(const std::filesystem::path& path);
std::vector<FilingRecord> parse_manifest(std::istream& in, std::string_view source_name);

// Relative text paths are resolved against the manifest's directory.
std::filesystem::path resolve_text_path(const std::filesystem::path& manifest_path,
                                        const FilingRecord& record);

enum class ExtractionMethod { regex, keyword, failed };

std::string_view to_string(ExtractionMethod method);

struct ExtractionResult {
    std::string business_text;
    ExtractionMethod method = ExtractionMethod::failed;
    std::size_t chars = 0;
    // The heading lines that opened and closed the section, verbatim (trimmed).
    // Empty when not matched (closing marker is empty when the section runs to
    // the end of the filing).
    std::string start_marker;
    std::string end_marker;
    bool risk_factors_removed = false;
};

struct ExtractionOptions {
    // Keyword-tier sections shorter than this are reported as failed.
    std::size_t min_keyword_chars = 1000;
    // Heading search window for the word BUSINESS after the item number.
    std::size_t business_window = 40;
};

// Finds the Business section of a markup-free filing. A regular-expression
// tier looks for "ITEM 1" headings (optionally prefixed by "PART I") at line
// starts and keeps the longest section that runs to the next item heading;
// the keyword tier searches for a line opening with "BUSINESS". The Risk
// Factors part is always removed from the result.
ExtractionResult extract_business_section(std::string_view raw, const ExtractionOptions& options = {});

// Removes the text from a Risk Factors heading up to the next item heading (or
// the end of the text). Returns the input unchanged when no heading exists.
std::string strip_risk_factors(std::string_view business_text);

// Drops financial firms (SIC 6000-6999) and records not marked prefiltered.
std::vector<FilingRecord> filter_corpus(std::span<const FilingRecord> records);

inline bool is_financial(int sic_code) { return sic_code >= 6000 && sic_code <= 6999; }

} // namespace prodiv::ingest
