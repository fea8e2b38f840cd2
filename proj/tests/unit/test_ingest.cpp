#include "helpers.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"
#include "prodiv/ingest.hpp"
#include "prodiv/synthetic.hpp"

#include <doctest.h>

#include <regex>
#include <sstream>

using namespace prodiv;
using ingest::ExtractionMethod;

namespace {

std::vector<ingest::FilingRecord> parse(const std::string& text)
{
    std::istringstream in(text);
    return ingest::parse_manifest(in, "test.csv");
}

std::string error_of(const std::string& text)
{
    try {
        parse(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

std::string artifacts_trimmed(const std::string& text)
{
    return std::string(artifacts::trim(text));
}

const std::string header = "cik,year,form_type,sic_code,text_path,prefiltered\n";

std::string long_body(std::size_t sentences = 30)
{
    std::string out;
    for (std::size_t i = 0; i < sentences; ++i) {
        out += "We manufacture engines and turbines for customers worldwide. ";
        if (i % 5 == 4) {
            out += "\n";
        }
    }
    return out;
}

// Any item heading at the start of a line, with or without a PART prefix.
bool has_item_heading(const std::string& text)
{
    static const std::regex re(R"((^|\n)\s*(PART\s+[IV]+\s*[,.:;-]?\s*)?ITEM\s*\d)", std::regex::icase);
    return std::regex_search(text, re);
}

} // namespace

TEST_SUITE("ingest")
{
    TEST_CASE("empty manifest gives an empty list")
    {
        CHECK(parse("").empty());
        CHECK(parse(header).empty());
    }

    TEST_CASE("well-formed rows round-trip")
    {
        const auto r = parse(header + "320193,2005,10-K,3571,a/apple.txt,1\n"
                                      "789019,2006,10-K405,7372,msft.txt,0\n"
                                      "12,1998,10-KSB,100,x.txt,1\n");
        REQUIRE(r.size() == 3);
        CHECK(r[0].cik == 320193);
        CHECK(r[0].year == 2005);
        CHECK(r[0].form_type == ingest::FormType::k10K);
        CHECK(r[0].sic_code == 3571);
        CHECK(r[0].text_path == std::filesystem::path("a/apple.txt"));
        CHECK(r[0].prefiltered);
        CHECK(r[1].form_type == ingest::FormType::k10K405);
        CHECK_FALSE(r[1].prefiltered);
        CHECK(r[2].form_type == ingest::FormType::k10KSB);
        CHECK(r[2].sic_code == 100);
    }

    TEST_CASE("duplicate key names both rows")
    {
        const auto msg = error_of(header + "1,2001,10-K,100,a,1\n2,2001,10-K,100,b,1\n1,2001,10-K,200,c,1\n");
        CHECK(msg.find("rows 2 and 4") != std::string::npos);
    }

    TEST_CASE("malformed rows name row and field")
    {
        auto msg = error_of(header + "1,2001,10-K,100,a,1\n0,2001,10-K,100,b,1\n");
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("'cik'") != std::string::npos);
        msg = error_of(header + "1,1900,10-K,100,a,1\n");
        CHECK(msg.find("'year'") != std::string::npos);
        msg = error_of(header + "1,2100,10-K,100,a,1\n");
        CHECK(msg.find("'year'") != std::string::npos);
        msg = error_of(header + "1,2001,10-Q,100,a,1\n");
        CHECK(msg.find("'form_type'") != std::string::npos);
        msg = error_of(header + "1,2001,10-K,10000,a,1\n");
        CHECK(msg.find("'sic_code'") != std::string::npos);
        msg = error_of(header + "1,2001,10-K,100,a,yes\n");
        CHECK(msg.find("'prefiltered'") != std::string::npos);
        msg = error_of(header + "1,2001,10-K,100,,1\n");
        CHECK(msg.find("'text_path'") != std::string::npos);
        CHECK_FALSE(error_of("cik,year,form,sic_code,text_path,prefiltered\n").empty());
        CHECK_FALSE(error_of(header + "1,2001,10-K,100\n").empty());
    }

    TEST_CASE("load_manifest reads files and resolves paths")
    {
        const auto records = ingest::load_manifest(test::data("filter_manifest.csv"));
        CHECK(records.size() == 20);
        CHECK(ingest::resolve_text_path(test::data("filter_manifest.csv"), records[0]) == test::data("a.txt"));
        CHECK_THROWS_AS(ingest::load_manifest(test::data("no_such_manifest.csv")), InputError);
    }

    TEST_CASE("filter drops financial and unfiltered records")
    {
        ingest::FilingRecord base;
        base.cik = 1;
        base.year = 2000;
        base.prefiltered = true;
        auto a = base;
        a.sic_code = 6021;
        auto b = base;
        b.sic_code = 5999;
        b.cik = 2;
        auto c = base;
        c.sic_code = 7000;
        c.cik = 3;
        const std::vector<ingest::FilingRecord> in = {a, b, c};
        const auto out = ingest::filter_corpus(in);
        REQUIRE(out.size() == 2);
        CHECK(out[0].sic_code == 5999);
        CHECK(out[1].sic_code == 7000);
        CHECK(ingest::is_financial(6000));
        CHECK(ingest::is_financial(6999));
        CHECK_FALSE(ingest::is_financial(7000));
    }

    TEST_CASE("filter fixture keeps 12 of 20 as an ordered subsequence")
    {
        const auto records = ingest::load_manifest(test::data("filter_manifest.csv"));
        const auto kept = ingest::filter_corpus(records);
        CHECK(kept.size() == 12);
        std::size_t pos = 0;
        for (const auto& k : kept) {
            while (pos < records.size() && !(records[pos] == k)) {
                ++pos;
            }
            REQUIRE(pos < records.size());
            ++pos;
        }
    }

    TEST_CASE("regex tier returns the body between ITEM 1 and ITEM 2")
    {
        const auto body = long_body();
        const auto r = ingest::extract_business_section("ITEM 1. BUSINESS\n" + body + "\nITEM 2. PROPERTIES\nWe lease.\n");
        CHECK(r.method == ExtractionMethod::regex);
        CHECK(r.business_text == artifacts_trimmed(body));
        CHECK(r.chars == r.business_text.size());
        CHECK(r.start_marker == "ITEM 1. BUSINESS");
        CHECK(r.end_marker == "ITEM 2. PROPERTIES");
    }

    TEST_CASE("placeholder body is returned verbatim")
    {
        const auto r = ingest::extract_business_section("ITEM 1. BUSINESS\n<body>\nITEM 2. PROPERTIES\n...");
        CHECK(r.method == ExtractionMethod::regex);
        CHECK(r.business_text == "<body>");
    }

    TEST_CASE("filing without a Business heading fails")
    {
        const auto r = ingest::extract_business_section("PART II\nITEM 5. MARKET\nText.\nITEM 7. MD&A\nMore.\n");
        CHECK(r.method == ExtractionMethod::failed);
        CHECK(r.business_text.empty());
        CHECK(r.chars == 0);
    }

    TEST_CASE("table of contents entries lose to the real section")
    {
        const auto body = long_body();
        const std::string raw = "Item 1. Business ....... 3\nItem 2. Properties ..... 9\nPART I\nItem 1. Business\n" +
                                body + "Item 2. Properties\nOffices.\n";
        const auto r = ingest::extract_business_section(raw);
        CHECK(r.method == ExtractionMethod::regex);
        CHECK(r.business_text.find("engines") != std::string::npos);
        CHECK(r.business_text.find("....") == std::string::npos);
    }

    TEST_CASE("PART I, ITEM 1 prefix and attached numbers")
    {
        const auto body = long_body();
        auto r = ingest::extract_business_section("PART I, ITEM 1: DESCRIPTION OF BUSINESS\n" + body + "PART II\nx\n");
        CHECK(r.method == ExtractionMethod::regex);
        CHECK(r.business_text == artifacts_trimmed(body));
        r = ingest::extract_business_section("Item1.Business\n" + body + "Item 2.\n");
        CHECK(r.method == ExtractionMethod::regex);
        // ITEM 10 is not ITEM 1.
        r = ingest::extract_business_section("ITEM 10. DIRECTORS\n" + body + "ITEM 11. PAY\n");
        CHECK(r.method == ExtractionMethod::failed);
    }

    TEST_CASE("keyword tier and its minimum length")
    {
        const auto body = long_body();
        auto r = ingest::extract_business_section("ANNUAL REPORT\nBUSINESS\n" + body + "ITEM 2. PROPERTIES\nNone.\n");
        CHECK(r.method == ExtractionMethod::keyword);
        CHECK(r.business_text == artifacts_trimmed(body));
        r = ingest::extract_business_section("DESCRIPTION OF BUSINESS\n" + body + "Items 2 and 3\nNone.\n");
        CHECK(r.method == ExtractionMethod::keyword);
        const auto short_body = long_body(5);
        REQUIRE(short_body.size() < 1000);
        r = ingest::extract_business_section("BUSINESS\n" + short_body + "ITEM 2. PROPERTIES\n");
        CHECK(r.method == ExtractionMethod::failed);
        ingest::ExtractionOptions lenient;
        lenient.min_keyword_chars = 100;
        r = ingest::extract_business_section("BUSINESS\n" + short_body + "ITEM 2. PROPERTIES\n", lenient);
        CHECK(r.method == ExtractionMethod::keyword);
    }

    TEST_CASE("risk factors are removed")
    {
        const std::string section = "We make engines.\nITEM 1A. RISK FACTORS\nRisky text here.\nITEM 2\nAfter.\n";
        const auto stripped = ingest::strip_risk_factors(section);
        CHECK(stripped.find("Risky") == std::string::npos);
        CHECK(stripped.find("We make engines.") != std::string::npos);
        CHECK(stripped.find("After.") != std::string::npos);
        CHECK(ingest::strip_risk_factors(stripped) == stripped);
    }

    TEST_CASE("strip leaves text without the heading unchanged")
    {
        const std::string section = "We make engines.\nOur risk of factors is low.\n";
        CHECK(ingest::strip_risk_factors(section) == section);
        CHECK(ingest::strip_risk_factors("") == "");
    }

    TEST_CASE("embedded risk subsection is dropped from the extraction")
    {
        const auto body = long_body();
        const auto r = ingest::extract_business_section("ITEM 1. BUSINESS\n" + body +
                                                        "Risk Factors\nWe might fail.\nITEM 2. PROPERTIES\nNone.\n");
        CHECK(r.method == ExtractionMethod::regex);
        CHECK(r.risk_factors_removed);
        CHECK(r.business_text.find("might fail") == std::string::npos);
    }

    TEST_CASE("fixture filings: outcomes, no item headings inside, idempotent strip, determinism")
    {
        for (const auto& f : synth::extraction_fixture()) {
            CAPTURE(f.index);
            CAPTURE(synth::to_string(f.format));
            const auto r = ingest::extract_business_section(f.text);
            CHECK((r.method != ExtractionMethod::failed) == synth::expect_extracted(f.format));
            CHECK((r.method == ExtractionMethod::failed) == r.business_text.empty());
            if (r.method != ExtractionMethod::failed) {
                CHECK((r.method == ExtractionMethod::keyword) == synth::is_keyword_format(f.format));
                CHECK_FALSE(has_item_heading(r.business_text));
                CHECK(r.business_text.find("RISK FACTORS") == std::string::npos);
            }
            const auto once = ingest::strip_risk_factors(r.business_text);
            CHECK(ingest::strip_risk_factors(once) == once);
            const auto raw_once = ingest::strip_risk_factors(f.text);
            CHECK(ingest::strip_risk_factors(raw_once) == raw_once);
            CHECK(ingest::extract_business_section(f.text).business_text == r.business_text);
        }
    }
}
