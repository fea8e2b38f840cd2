#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

// Plain-file plumbing shared by the pipeline stages: CSV reading and writing,
// provenance header lines, and content digests.
namespace prodiv::artifacts {

std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_field(std::string_view value);
std::string csv_row(const std::vector<std::string>& fields);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based physical line number of every row, for error messages.
    std::vector<std::size_t> line_numbers;

    // Index of a header column; throws InputError when absent.
    std::size_t column(std::string_view name) const;
};

// Reads a CSV whose first non-comment line is the header. Lines starting with
// '#' and blank lines are skipped. Rows whose width differs from the header
// throw InputError naming the source and line.
CsvTable read_csv(std::istream& in, std::string_view source_name);
CsvTable read_csv(const std::filesystem::path& path);

// Identifies the tool run that produced an output file.
struct Provenance {
    std::uint64_t seed = 0;
    std::string config_digest;

    // "prodiv <version> seed=<seed> config=<digest>"
    std::string describe() const;
};

// 64-bit FNV-1a digest rendered as 16 lowercase hex digits.
std::string digest_hex(std::string_view data);
std::uint64_t fnv1a64(std::string_view data);

std::string read_text_file(const std::filesystem::path& path);
// Writes the file, creating parent directories as needed.
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

long long parse_integer(std::string_view text, std::string_view what);
double parse_real(std::string_view text, std::string_view what);

// Shortest round-trip decimal form of a double.
std::string format_real(double value);

} // namespace prodiv::artifacts
