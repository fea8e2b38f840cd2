#include "prodiv/synthetic.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"
#include "prodiv/sicmodel.hpp"

#include <algorithm>
#include <set>

namespace prodiv::synth {

namespace fs = std::filesystem;

namespace {

__extension__ using uint128 = unsigned __int128;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// {t} is a topic noun, {g} a generic noun.
const std::vector<std::string>& templates()
{
    static const std::vector<std::string> t = {
        "Our {g} of {t} and {t} serves every {g} across the {g}.",
        "We sell {t} and {t} to each {g} through our {g}.",
        "Demand for {t} depends on {t}, {t} and the overall {g}.",
        "The {g} expects {t} to remain our largest {g} next {g}.",
        "Competition in {t} comes mainly from other {t} and {t} suppliers.",
        "Each {g} relies on our {t} for {t} of consistent {g}.",
        "In addition, the {g} invests in {t} and new {t}.",
        "We believe our {t} and {t} give the {g} an advantage.",
    };
    return t;
}

// Product topics borrow one in ten topic nouns from the next product topic so
// that different industries are similar but not orthogonal.
constexpr std::size_t borrow_one_in = 10;

const Topic* neighbor_of(const Topic& topic)
{
    const auto& all = topics();
    if (topic.financial) {
        return nullptr;
    }
    std::vector<const Topic*> product;
    for (const auto& t : all) {
        if (!t.financial) {
            product.push_back(&t);
        }
    }
    for (std::size_t i = 0; i < product.size(); ++i) {
        if (product[i]->name == topic.name) {
            return product[(i + 1) % product.size()];
        }
    }
    return nullptr;
}

std::string sentence(std::string_view tmpl, const Topic& topic, const Topic* neighbor, std::mt19937_64& rng)
{
    const auto& generic = generic_nouns();
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl.substr(i, 3) == "{t}") {
            const auto& source = (neighbor && draw_index(rng, borrow_one_in) == 0) ? *neighbor : topic;
            out += source.nouns[draw_index(rng, source.nouns.size())];
            i += 3;
        } else if (tmpl.substr(i, 3) == "{g}") {
            out += generic[draw_index(rng, generic.size())];
            i += 3;
        } else {
            out += tmpl[i++];
        }
    }
    return out;
}

std::string cover_page(std::string_view company, std::string_view form)
{
    std::string out = "UNITED STATES\nSECURITIES AND EXCHANGE COMMISSION\nWashington, D.C. 20549\n\n";
    out += "FORM " + std::string(form) + "\n\n";
    out += "ANNUAL REPORT PURSUANT TO SECTION 13 OR 15(d) OF THE SECURITIES EXCHANGE ACT OF 1934\n\n";
    out += std::string(company) + "\n(Exact name of registrant as specified in its charter)\n\n";
    return out;
}

std::string later_parts()
{
    return "ITEM 2. PROPERTIES\n\nWe lease our principal offices and own two plants.\n\n"
           "ITEM 3. LEGAL PROCEEDINGS\n\nNone.\n\n"
           "PART II\n\n"
           "ITEM 5. MARKET FOR REGISTRANT'S COMMON EQUITY\n\nOur common stock trades on a national exchange.\n\n"
           "ITEM 7. MANAGEMENT'S DISCUSSION AND ANALYSIS\n\nSales increased during the period.\n";
}

std::string risk_text()
{
    return "RISK FACTORS\n\n"
           "An investment in our stock involves a high degree of uncertainty. Our results could suffer if the "
           "economy weakens or if we lose key personnel.\n\n";
}

} // namespace

const std::vector<Topic>& topics()
{
    static const std::vector<Topic> t = {
        {"agriculture", 100,
         {"crop", "corn", "soybean", "wheat", "harvest", "acreage", "fertilizer", "irrigation", "tractor", "grain",
          "cotton", "orchard", "livestock", "cattle", "dairy", "farmland", "pesticide", "silo", "barley", "rice",
          "hay", "tillage", "sorghum", "greenhouse"},
         false},
        {"oil and gas", 1311,
         {"wellbore", "drilling", "reservoir", "crude", "petroleum", "rig", "lease", "hydrocarbon", "shale", "barrel",
          "refinery", "seismic", "exploration", "condensate", "fracturing", "basin", "offshore", "derrick", "methane",
          "royalty", "drillship", "casing", "wellhead", "propane"},
         false},
        {"homebuilding", 1531,
         {"homebuilder", "subdivision", "lot", "mortgage", "homebuyer", "townhome", "condominium", "lumber", "framing",
          "roofing", "drywall", "contractor", "builder", "permit", "zoning", "residence", "foundation", "plumbing",
          "carpentry", "blueprint", "masonry", "landscaping", "backlog", "neighborhood"},
         false},
        {"aerospace", 3721,
         {"aircraft", "airframe", "fuselage", "wing", "avionics", "jet", "helicopter", "propulsion", "cockpit",
          "satellite", "missile", "rocket", "aerospace", "hangar", "pilot", "airline", "rotor", "glider", "payload",
          "thruster", "runway", "altimeter", "aileron", "spacecraft"},
         false},
        {"electric utility", 4911,
         {"electricity", "kilowatt", "megawatt", "transmission", "substation", "generator", "turbine", "ratepayer",
          "grid", "outage", "transformer", "coal", "nuclear", "reactor", "hydroelectric", "voltage", "tariff", "meter",
          "utility", "dispatch", "wind", "feeder", "powerline", "steam"},
         false},
        {"medical wholesale", 5047,
         {"syringe", "catheter", "bandage", "glove", "implant", "stent", "scalpel", "wheelchair", "defibrillator",
          "ventilator", "hospital", "clinic", "surgeon", "physician", "nurse", "gauze", "suture", "stethoscope",
          "dialysis", "splint", "thermometer", "infusion", "sterilizer", "laboratory"},
         false},
        {"restaurants", 5812,
         {"restaurant", "menu", "burger", "pizza", "sandwich", "salad", "chef", "kitchen", "diner", "franchisee",
          "dessert", "beverage", "coffee", "breakfast", "lunch", "dinner", "waiter", "patio", "buffet", "grill",
          "fries", "chicken", "taco", "takeout"},
         false},
        {"software", 7372,
         {"software", "license", "subscription", "cloud", "database", "server", "application", "developer", "code",
          "platform", "analytics", "encryption", "browser", "interface", "compiler", "algorithm", "programmer",
          "download", "upgrade", "desktop", "smartphone", "app", "cybersecurity", "middleware"},
         false},
        {"banking", 6021,
         {"deposit", "loan", "branch", "checking", "savings", "teller", "underwriting", "borrower", "lender",
          "interest", "credit", "collateral", "treasury", "bancorp", "overdraft", "mortgagee"},
         true},
    };
    return t;
}

const std::vector<std::string>& generic_nouns()
{
    static const std::vector<std::string> g = {
        "company", "customer", "market", "product", "service", "employee", "competition", "revenue",
        "operation", "segment", "supplier", "facility", "season", "quarter", "price", "brand",
        "demand", "growth", "region", "management", "strategy", "industry", "contract", "quality",
        "cost", "year",
    };
    return g;
}

std::vector<std::string> all_generator_nouns()
{
    std::set<std::string> words(generic_nouns().begin(), generic_nouns().end());
    for (const auto& t : topics()) {
        words.insert(t.nouns.begin(), t.nouns.end());
    }
    return {words.begin(), words.end()};
}

std::string_view to_string(FilingFormat format)
{
    switch (format) {
    case FilingFormat::R1: return "R1";
    case FilingFormat::R2: return "R2";
    case FilingFormat::R3: return "R3";
    case FilingFormat::R4: return "R4";
    case FilingFormat::R5: return "R5";
    case FilingFormat::K1: return "K1";
    case FilingFormat::K2: return "K2";
    case FilingFormat::F1: return "F1";
    case FilingFormat::F2: return "F2";
    case FilingFormat::F3: return "F3";
    }
    return "R1";
}

bool expect_extracted(FilingFormat format)
{
    return format != FilingFormat::F1 && format != FilingFormat::F2 && format != FilingFormat::F3;
}

bool is_keyword_format(FilingFormat format)
{
    return format == FilingFormat::K1 || format == FilingFormat::K2;
}

std::size_t draw_index(std::mt19937_64& rng, std::size_t n)
{
    return static_cast<std::size_t>((static_cast<uint128>(rng()) * n) >> 64);
}

std::string business_text(const Topic& topic, std::mt19937_64& rng, std::size_t sentences)
{
    const auto& tmpl = templates();
    const auto* neighbor = neighbor_of(topic);
    std::string out;
    for (std::size_t i = 0; i < sentences; ++i) {
        out += sentence(tmpl[draw_index(rng, tmpl.size())], topic, neighbor, rng);
        out += (i % 4 == 3 || i + 1 == sentences) ? "\n\n" : " ";
    }
    return out;
}

std::string render_filing(FilingFormat format, std::string_view company, const Topic& topic, std::mt19937_64& rng)
{
    const auto body = [&] { return business_text(topic, rng, 24); };
    std::string out;
    switch (format) {
    case FilingFormat::R1:
        out = cover_page(company, "10-K") + "PART I\n\nITEM 1. BUSINESS\n\n" + body() + later_parts();
        break;
    case FilingFormat::R2:
        out = cover_page(company, "10-K") + "TABLE OF CONTENTS\n\n" +
              "Item 1.    Business ........................ 3\n" +
              "Item 1A.   Risk Factors .................... 9\n" +
              "Item 2.    Properties ...................... 14\n\n" + "PART I\n\nItem 1.    Business\n\n" + body() +
              "Item 1A.   Risk Factors\n\n" + risk_text() + later_parts();
        break;
    case FilingFormat::R3: {
        out = cover_page(company, "10-K405") + "PART I\n\nItem 1 - Business\n\n";
        auto first = business_text(topic, rng, 16);
        out += first + risk_text() + later_parts();
        break;
    }
    case FilingFormat::R4:
        out = cover_page(company, "10-K") + "PART I\n\nitem 1: description of business\n\n" + body() +
              "PART II\n\nItem 5. Market for the Registrant's Common Equity\n\nListed.\n";
        break;
    case FilingFormat::R5:
        out = cover_page(company, "10-K") + "Part I, Item1.Business\n" + body() + "ITEM 2.\nPROPERTIES\n\nNone.\n";
        break;
    case FilingFormat::K1:
        out = cover_page(company, "10-KSB") + "DESCRIPTION OF BUSINESS\n\n" + body() +
              "ITEM 2. DESCRIPTION OF PROPERTY\n\nWe rent office space.\n";
        break;
    case FilingFormat::K2:
        out = cover_page(company, "10-K") + "Business\n\n" + body() + "Items 2 and 3. Properties and Legal\n\nNone.\n";
        break;
    case FilingFormat::F1:
        out = cover_page(company, "10-K") + "PART I\n\n" + later_parts();
        break;
    case FilingFormat::F2:
        out = cover_page(company, "10-K") + "PART I\n\nITEMS 1 AND 2. BUSINESS AND PROPERTIES\n\n" + body() +
              "ITEM 3. LEGAL PROCEEDINGS\n\nNone.\n";
        break;
    case FilingFormat::F3:
        out = cover_page(company, "10-KSB") + "BUSINESS\n\n" + business_text(topic, rng, 6) +
              "ITEM 2. PROPERTIES\n\nNone.\n";
        break;
    }
    return out;
}

std::vector<FixtureFiling> extraction_fixture(std::uint64_t seed)
{
    std::vector<FilingFormat> formats;
    const auto add = [&](FilingFormat f, std::size_t n) { formats.insert(formats.end(), n, f); };
    add(FilingFormat::R1, 14);
    add(FilingFormat::R2, 14);
    add(FilingFormat::R3, 14);
    add(FilingFormat::R4, 14);
    add(FilingFormat::R5, 14);
    add(FilingFormat::K1, 9);
    add(FilingFormat::K2, 9);
    add(FilingFormat::F1, 5);
    add(FilingFormat::F2, 4);
    add(FilingFormat::F3, 3);

    std::mt19937_64 rng(splitmix64(seed));
    for (std::size_t i = formats.size(); i > 1; --i) {
        std::swap(formats[i - 1], formats[draw_index(rng, i)]);
    }
    const auto& all = topics();
    std::vector<FixtureFiling> out;
    for (std::size_t i = 0; i < formats.size(); ++i) {
        const auto& topic = all[i % all.size()];
        out.push_back({i, formats[i], render_filing(formats[i], "FIXTURE CO " + std::to_string(i), topic, rng)});
    }
    return out;
}

CorpusSpec shrinking_corpus_spec()
{
    CorpusSpec spec;
    for (int y = 2008; y <= 2017; ++y) {
        spec.years.push_back(y);
    }
    spec.topics_per_year = {8, 8, 7, 7, 6, 6, 5, 5, 4, 4};
    return spec;
}

fs::path write_corpus(const CorpusSpec& spec, const fs::path& dir)
{
    if (spec.years.size() != spec.topics_per_year.size()) {
        throw ConfigError("corpus spec: one topic count per year is required");
    }
    const auto& all = topics();
    std::vector<const Topic*> product;
    const Topic* bank = nullptr;
    for (const auto& t : all) {
        if (t.financial) {
            bank = &t;
        } else {
            product.push_back(&t);
        }
    }
    const std::vector<FilingFormat> layouts = {FilingFormat::R1, FilingFormat::R2, FilingFormat::R3,
                                               FilingFormat::R4, FilingFormat::R5, FilingFormat::K1,
                                               FilingFormat::K2};

    std::mt19937_64 rng(splitmix64(spec.seed));
    std::string manifest = "cik,year,form_type,sic_code,text_path,prefiltered\n";
    std::set<int> codes;
    const auto add_filing = [&](std::int64_t cik, int year, const Topic& topic, bool prefiltered) {
        const auto layout = layouts[static_cast<std::size_t>(cik + year) % layouts.size()];
        const auto name = std::to_string(cik) + "_" + std::to_string(year) + ".txt";
        const std::string form = layout == FilingFormat::K1 ? "10-KSB" : (year <= 2002 ? "10-K405" : "10-K");
        artifacts::write_text_file(dir / "filings" / name,
                                   render_filing(layout, "REGISTRANT " + std::to_string(cik), topic, rng));
        manifest += std::to_string(cik) + "," + std::to_string(year) + "," + form + "," +
                    std::to_string(topic.sic_code) + ",filings/" + name + "," + (prefiltered ? "1" : "0") + "\n";
        codes.insert(topic.sic_code);
    };

    for (std::size_t y = 0; y < spec.years.size(); ++y) {
        const int year = spec.years[y];
        const auto present = std::min(spec.topics_per_year[y], product.size());
        for (std::size_t t = 0; t < present; ++t) {
            for (std::size_t k = 0; k < spec.firms_per_topic; ++k) {
                add_filing(static_cast<std::int64_t>(1000 + 100 * t + k), year, *product[t], true);
            }
        }
        for (std::size_t k = 0; k < spec.financial_per_year; ++k) {
            add_filing(static_cast<std::int64_t>(5000 + k), year, *bank, true);
        }
        // A filing the upstream screen rejected.
        add_filing(9000, year, *product[0], false);
    }
    artifacts::write_text_file(dir / "manifest.csv", manifest);

    const std::vector<int> code_list(codes.begin(), codes.end());
    artifacts::write_text_file(dir / "sic_tree.csv", sicmodel::tree_csv(sicmodel::standard_tree(code_list)));

    std::string config = "# synthetic corpus\n";
    config += "manifest = manifest.csv\n";
    config += "sic_tree = sic_tree.csv\n";
    config += "output_dir = out\n";
    config += "seed = " + std::to_string(spec.seed) + "\n";
    config += "permutations = " + std::to_string(spec.permutations) + "\n";
    config += "\n[pvdm]\n";
    config += "dim = " + std::to_string(spec.pvdm_dim) + "\n";
    const auto path = dir / "config.ini";
    artifacts::write_text_file(path, config);
    return path;
}

std::vector<textprep::TokenizedDoc> two_topic_docs(std::uint64_t seed, std::size_t docs, std::size_t length)
{
    std::vector<std::vector<std::string>> vocab(2);
    for (std::size_t w = 0; w < 20; ++w) {
        vocab[0].push_back("alpha" + std::string(1, static_cast<char>('a' + w)));
        vocab[1].push_back("omega" + std::string(1, static_cast<char>('a' + w)));
    }
    std::mt19937_64 rng(splitmix64(seed));
    std::vector<textprep::TokenizedDoc> out;
    for (std::size_t i = 0; i < docs; ++i) {
        textprep::TokenizedDoc d;
        d.cik = static_cast<std::int64_t>(i + 1);
        d.year = 2000;
        const auto& words = vocab[i % 2];
        for (std::size_t k = 0; k < length; ++k) {
            d.tokens.push_back(words[draw_index(rng, words.size())]);
        }
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace prodiv::synth
