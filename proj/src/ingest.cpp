#include "prodiv/ingest.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <utility>

namespace prodiv::ingest {

namespace {

const std::vector<std::string>& manifest_columns()
{
    static const std::vector<std::string> columns = {"cik", "year", "form_type", "sic_code", "text_path", "prefiltered"};
    return columns;
}

std::string lower(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string row_error(std::string_view source, std::size_t row, std::string_view field, std::string_view what)
{
    return std::string(source) + ": row " + std::to_string(row) + ", field '" + std::string(field) + "': " +
           std::string(what);
}

// Byte range of one line, excluding the terminator.
struct Line {
    std::size_t begin;
    std::size_t end;
};

std::vector<Line> split_lines(std::string_view text)
{
    std::vector<Line> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        auto end = nl;
        if (end > start && text[end - 1] == '\r') {
            --end;
        }
        lines.push_back({start, end});
        if (nl == text.size()) {
            break;
        }
        start = nl + 1;
    }
    return lines;
}

// Item headings: optional "PART <roman>" prefix, then ITEM <number><letter?>.
// The letter must be attached to the number so "Item 1 Business" is item 1.
const std::regex& item_heading_regex()
{
    static const std::regex re(R"(^\s*(?:PART\s+[IV]+\s*[,.:;-]?\s*)?ITEM\s*(\d{1,2})([A-Z])?(?![A-Z0-9])\s*[.:-]*)",
                               std::regex::icase | std::regex::ECMAScript | std::regex::optimize);
    return re;
}

const std::regex& part_heading_regex()
{
    static const std::regex re(R"(^\s*PART\s+(?:II|III|IV)\b\s*[.:-]?\s*$)", std::regex::icase | std::regex::optimize);
    return re;
}

const std::regex& risk_heading_regex()
{
    static const std::regex re(R"(^\s*(?:ITEM\s*1A\s*[.:-]*\s*)?RISK\s+FACTORS\b)",
                               std::regex::icase | std::regex::optimize);
    return re;
}

constexpr std::size_t max_risk_heading_length = 80;

struct ItemHeading {
    int number;
    char letter; // '\0' when absent
    std::size_t match_length;
};

std::optional<ItemHeading> match_item_heading(std::string_view line)
{
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(line.begin(), line.end(), m, item_heading_regex(), std::regex_constants::match_continuous)) {
        return std::nullopt;
    }
    ItemHeading h{};
    h.number = std::stoi(m[1].str());
    h.letter = m[2].matched ? static_cast<char>(std::toupper(static_cast<unsigned char>(m[2].str()[0]))) : '\0';
    h.match_length = static_cast<std::size_t>(m.length(0));
    return h;
}

bool is_section_boundary(std::string_view line)
{
    if (match_item_heading(line)) {
        return true;
    }
    return std::regex_search(line.begin(), line.end(), part_heading_regex(), std::regex_constants::match_continuous);
}

bool is_risk_heading(std::string_view line)
{
    const auto t = artifacts::trim(line);
    if (t.empty() || t.size() > max_risk_heading_length) {
        return false;
    }
    return std::regex_search(t.begin(), t.end(), risk_heading_regex(), std::regex_constants::match_continuous);
}

std::string_view line_view(std::string_view text, const Line& l) { return text.substr(l.begin, l.end - l.begin); }

// First lowercase alphabetic word of a line.
std::string first_word(std::string_view line)
{
    std::size_t i = 0;
    while (i < line.size() && !std::isalpha(static_cast<unsigned char>(line[i]))) {
        if (!std::isspace(static_cast<unsigned char>(line[i])) && !std::ispunct(static_cast<unsigned char>(line[i]))) {
            return {};
        }
        ++i;
    }
    std::size_t j = i;
    while (j < line.size() && std::isalpha(static_cast<unsigned char>(line[j]))) {
        ++j;
    }
    return lower(line.substr(i, j - i));
}

struct Section {
    std::size_t body_begin;
    std::size_t body_end;
    std::string start_marker;
    std::string end_marker;
};

// Runs from `body_begin` to the first line at or after `first_line` that is a
// section boundary.
Section cut_section(std::string_view raw, const std::vector<Line>& lines, std::size_t first_line,
                    std::size_t body_begin, std::string start_marker,
                    bool (*is_end)(std::string_view))
{
    Section s{body_begin, raw.size(), std::move(start_marker), {}};
    for (std::size_t k = first_line; k < lines.size(); ++k) {
        const auto lv = line_view(raw, lines[k]);
        if (is_end(lv)) {
            s.body_end = std::max(body_begin, lines[k].begin);
            s.end_marker = std::string(artifacts::trim(lv));
            break;
        }
    }
    return s;
}

bool starts_with_item_word(std::string_view line)
{
    const auto w = first_word(line);
    return w == "item" || w == "items";
}

std::optional<Section> regex_tier(std::string_view raw, const std::vector<Line>& lines, const ExtractionOptions& options)
{
    std::optional<Section> best;
    std::size_t best_length = 0;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto lv = line_view(raw, lines[k]);
        const auto heading = match_item_heading(lv);
        if (!heading || heading->number != 1 || heading->letter != '\0') {
            continue;
        }
        // Skip past "BUSINESS" when it follows within the window.
        std::size_t offset = heading->match_length;
        const auto lowered = lower(lv);
        const auto pos = lowered.find("business", heading->match_length);
        if (pos != std::string::npos && pos - heading->match_length <= options.business_window) {
            offset = pos + std::string_view("business").size();
            while (offset < lv.size() && (std::ispunct(static_cast<unsigned char>(lv[offset])) ||
                                          std::isspace(static_cast<unsigned char>(lv[offset])))) {
                ++offset;
            }
        }
        auto section = cut_section(raw, lines, k + 1, lines[k].begin + offset, std::string(artifacts::trim(lv)),
                                   &is_section_boundary);
        const auto body = artifacts::trim(raw.substr(section.body_begin, section.body_end - section.body_begin));
        if (!best || body.size() > best_length) {
            best_length = body.size();
            best = std::move(section);
        }
    }
    if (!best || best_length == 0) {
        return std::nullopt;
    }
    return best;
}

std::optional<Section> keyword_tier(std::string_view raw, const std::vector<Line>& lines)
{
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto lv = line_view(raw, lines[k]);
        const auto lowered = lower(artifacts::trim(lv));
        if (first_word(lv) != "business" && !lowered.starts_with("description of business")) {
            continue;
        }
        const std::size_t body_begin = (k + 1 < lines.size()) ? lines[k + 1].begin : raw.size();
        return cut_section(raw, lines, k + 1, body_begin, std::string(artifacts::trim(lv)), &starts_with_item_word);
    }
    return std::nullopt;
}

} // namespace

std::string_view to_string(FormType form)
{
    switch (form) {
    case FormType::k10K: return "10-K";
    case FormType::k10K405: return "10-K405";
    case FormType::k10KSB: return "10-KSB";
    }
    return "10-K";
}

FormType parse_form_type(std::string_view text)
{
    const auto t = artifacts::trim(text);
    if (t == "10-K") return FormType::k10K;
    if (t == "10-K405") return FormType::k10K405;
    if (t == "10-KSB") return FormType::k10KSB;
    throw InputError("unknown form type '" + std::string(t) + "'");
}

std::string_view to_string(ExtractionMethod method)
{
    switch (method) {
    case ExtractionMethod::regex: return "regex";
    case ExtractionMethod::keyword: return "keyword";
    case ExtractionMethod::failed: return "failed";
    }
    return "failed";
}

std::vector<FilingRecord> parse_manifest(std::istream& in, std::string_view source_name)
{
    std::vector<FilingRecord> records;
    std::string line;
    std::size_t row = 0;
    bool have_header = false;
    std::map<std::pair<std::int64_t, int>, std::size_t> seen;

    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (row == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.erase(0, 3);
        }
        if (artifacts::trim(line).empty() || line.front() == '#') {
            continue;
        }
        auto fields = artifacts::split_csv_line(line);
        if (!have_header) {
            for (auto& f : fields) {
                f = std::string(artifacts::trim(f));
            }
            if (fields != manifest_columns()) {
                throw InputError(std::string(source_name) + ": row " + std::to_string(row) +
                                 ": expected header cik,year,form_type,sic_code,text_path,prefiltered");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != manifest_columns().size()) {
            throw InputError(std::string(source_name) + ": row " + std::to_string(row) + ": expected 6 fields, found " +
                             std::to_string(fields.size()));
        }

        FilingRecord rec;
        const auto field = [&](std::size_t i) -> std::string_view { return fields[i]; };
        const auto parse_int = [&](std::size_t i) {
            try {
                return artifacts::parse_integer(field(i), manifest_columns()[i]);
            } catch (const InputError& e) {
                throw InputError(row_error(source_name, row, manifest_columns()[i], e.what()));
            }
        };

        rec.cik = parse_int(0);
        if (rec.cik <= 0) {
            throw InputError(row_error(source_name, row, "cik", "must be positive"));
        }
        const auto year = parse_int(1);
        if (year <= 1900 || year >= 2100) {
            throw InputError(row_error(source_name, row, "year", "must lie strictly between 1900 and 2100"));
        }
        rec.year = static_cast<int>(year);
        try {
            rec.form_type = parse_form_type(field(2));
        } catch (const InputError& e) {
            throw InputError(row_error(source_name, row, "form_type", e.what()));
        }
        const auto sic = parse_int(3);
        if (sic < 0 || sic > 9999) {
            throw InputError(row_error(source_name, row, "sic_code", "must lie in 0..9999"));
        }
        rec.sic_code = static_cast<int>(sic);
        const auto path = artifacts::trim(field(4));
        if (path.empty()) {
            throw InputError(row_error(source_name, row, "text_path", "empty path"));
        }
        rec.text_path = std::filesystem::path(std::string(path));
        const auto flag = artifacts::trim(field(5));
        if (flag == "1") {
            rec.prefiltered = true;
        } else if (flag == "0") {
            rec.prefiltered = false;
        } else {
            throw InputError(row_error(source_name, row, "prefiltered", "must be 0 or 1"));
        }

        const auto key = std::make_pair(rec.cik, rec.year);
        if (const auto it = seen.find(key); it != seen.end()) {
            throw InputError(std::string(source_name) + ": duplicate (cik, year) = (" + std::to_string(rec.cik) + ", " +
                             std::to_string(rec.year) + ") in rows " + std::to_string(it->second) + " and " +
                             std::to_string(row));
        }
        seen.emplace(key, row);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<FilingRecord> load_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open manifest " + path.string());
    }
    return parse_manifest(in, path.string());
}

std::filesystem::path resolve_text_path(const std::filesystem::path& manifest_path, const FilingRecord& record)
{
    if (record.text_path.is_absolute()) {
        return record.text_path;
    }
    return manifest_path.parent_path() / record.text_path;
}

std::string strip_risk_factors(std::string_view business_text)
{
    const auto lines = split_lines(business_text);
    std::string out;
    std::size_t copied_from = 0;
    bool removed = false;
    std::size_t k = 0;
    while (k < lines.size()) {
        if (!is_risk_heading(line_view(business_text, lines[k]))) {
            ++k;
            continue;
        }
        out.append(business_text.substr(copied_from, lines[k].begin - copied_from));
        removed = true;
        std::size_t next = k + 1;
        while (next < lines.size() && !match_item_heading(line_view(business_text, lines[next]))) {
            ++next;
        }
        if (next == lines.size()) {
            copied_from = business_text.size();
            break;
        }
        copied_from = lines[next].begin;
        // The item heading that closed the risk section may itself be a new
        // Risk Factors heading; examine it on the next pass.
        k = next;
    }
    if (!removed) {
        return std::string(business_text);
    }
    out.append(business_text.substr(copied_from));
    return out;
}

ExtractionResult extract_business_section(std::string_view raw, const ExtractionOptions& options)
{
    ExtractionResult result;
    const auto lines = split_lines(raw);

    const auto finish = [&](const Section& s, ExtractionMethod method) {
        const auto body = raw.substr(s.body_begin, s.body_end - s.body_begin);
        auto stripped = strip_risk_factors(body);
        result.risk_factors_removed = stripped.size() != body.size();
        result.business_text = std::string(artifacts::trim(stripped));
        result.start_marker = s.start_marker;
        result.end_marker = s.end_marker;
        result.method = method;
        result.chars = result.business_text.size();
    };

    if (const auto s = regex_tier(raw, lines, options)) {
        finish(*s, ExtractionMethod::regex);
        if (!result.business_text.empty()) {
            return result;
        }
    }
    if (const auto s = keyword_tier(raw, lines)) {
        finish(*s, ExtractionMethod::keyword);
        if (result.business_text.size() >= options.min_keyword_chars) {
            return result;
        }
    }
    ExtractionResult failed;
    failed.method = ExtractionMethod::failed;
    failed.start_marker = result.start_marker;
    failed.end_marker = result.end_marker;
    return failed;
}

std::vector<FilingRecord> filter_corpus(std::span<const FilingRecord> records)
{
    std::vector<FilingRecord> kept;
    kept.reserve(records.size());
    for (const auto& r : records) {
        if (!is_financial(r.sic_code) && r.prefiltered) {
            kept.push_back(r);
        }
    }
    return kept;
}

} // namespace prodiv::ingest
