#include <doctest.h>

#include <sstream>

#include "fixture.hpp"
#include "nippaudit/errors.hpp"
#include "nippaudit/ingest.hpp"

using namespace nippaudit;

namespace {

const std::filesystem::path kData = NIPPAUDIT_TEST_DATA;

const FormatDescriptor& fmt() {
    static const FormatDescriptor f = FormatDescriptor::reference();
    return f;
}

const std::string kGoldenMain =
    "# comment lines and blank lines are skipped\n"
    "\n"
    "genus 1216 15 mass 1/12\n"
    "  form 1,1,11,11,1,0,0,1,0,8 level 304 hasse 2:+1,19:+1 aut 12\n";

const std::string kGoldenAppendix =
    "genus 1216 15\n"
    "  p 2 density 98304 splitting [2A]+[(58/3)+(38/29)]\n"
    "  p 19 density 36 splitting [(1)+(1)+(1)]+[(19)]\n";

template <typename E, typename F>
E expect_throw(F&& f) {
    try {
        f();
    } catch (const E& e) {
        return e;
    }
    FAIL("expected exception");
    throw std::logic_error("unreachable");
}

RawDataset small_main(const std::string& text) { return parse_main_table(text, fmt(), "main.txt"); }

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("golden main-table line") {
    const RawDataset d = small_main(kGoldenMain);
    REQUIRE(d.genera.size() == 1);
    const GenusRecord& g = d.genera[0];
    CHECK(g.discriminant == 1216);
    CHECK(g.genus_id == 15);
    CHECK(g.mass == Rational(1, 12));
    REQUIRE(g.forms.size() == 1);
    CHECK(g.forms[0].form.coeffs() == Coeffs{1, 1, 11, 11, 1, 0, 0, 1, 0, 8});
    CHECK(g.forms[0].level == 304);
    CHECK(g.forms[0].hasse == std::map<long, int>{{2, 1}, {19, 1}});
    CHECK(g.forms[0].aut_count == 12);
    CHECK(d.manifest.at({1216, 15}).main == SourceSpan{"main.txt", 3, 4});
}

TEST_CASE("golden appendix entries") {
    const auto records = parse_appendix(kGoldenAppendix, fmt(), "app.txt");
    REQUIRE(records.size() == 1);
    const auto& e = records[0].entries;
    REQUIRE(e.size() == 2);
    CHECK(e.at(2).density == Rational(98304));
    CHECK(e.at(2).density.is_integer());
    CHECK(e.at(2).splitting.to_string() == "[2A]+[(58/3)+(38/29)]");
    CHECK(e.at(19).splitting.dimension() == 4);
    CHECK(records[0].span == SourceSpan{"app.txt", 1, 3});
}

TEST_CASE("empty input") {
    CHECK(small_main("").genera.empty());
    CHECK(parse_appendix("", fmt()).empty());
    const RawDataset merged = merge_dataset({small_main("")}, {});
    CHECK(merged.genera.empty());
    CHECK(parse_normalized(emit_normalized(merged)) == merged);
}

TEST_CASE("parse errors carry file and line") {
    auto e = expect_throw<ParseError>([] { small_main("genus 16 1 mass 1/384\n  form 1,1,1,1 level 4 hasse 2:+1 aut 384\n"); });
    CHECK(e.source() == "main.txt");
    CHECK(e.line() == 2);
    e = expect_throw<ParseError>([] { small_main("genus 16 1 mass 1/384\nfoo\n"); });
    CHECK(e.line() == 2);
    e = expect_throw<ParseError>([] { small_main("  form 1,1,1,1,0,0,0,0,0,0 level 4 hasse 2:+1 aut 384\n"); });
    CHECK(e.line() == 1);
    e = expect_throw<ParseError>([] { small_main("genus 16 1 mass 1/384\n  form 1,1,1,1,0,0,0,0,0,0 level 4 hasse 2:0 aut 384\n"); });
    CHECK(e.line() == 2);
    const std::string bad_token = "  p 2 density 15 splitting [1A+1C]";
    e = expect_throw<ParseError>([&] { parse_appendix("genus 5 1\n" + bad_token + "\n", fmt(), "app.txt"); });
    CHECK(e.line() == 2);
    CHECK(e.column() == bad_token.find('C') + 1);
    e = expect_throw<ParseError>([] { parse_appendix("genus 5 1\n  p 4 density 15 splitting [1A+1B]\n", fmt(), "app.txt"); });
    CHECK(e.line() == 2);
    e = expect_throw<ParseError>([] { parse_appendix("  p 2 density 15 splitting [1A+1B]\n", fmt(), "app.txt"); });
    CHECK(e.line() == 1);
}

TEST_CASE("structural errors") {
    CHECK_THROWS_AS(small_main("genus 16 1 mass 1/384\ngenus 16 2 mass 1/96\n  form 1,1,1,2,-1,-1,0,0,0,0 level 8 hasse 2:+1 aut 96\n"),
                    StructuralError);
    CHECK_THROWS_AS(small_main("genus 16 1 mass 1/384\n  form 1,1,1,1,0,0,0,0,0,0 level 4 hasse 2:+1 aut 384\n"
                               "genus 16 3 mass 1/96\n  form 1,1,1,2,-1,-1,0,0,0,0 level 8 hasse 2:+1 aut 96\n"),
                    StructuralError);
    const std::string one = "genus 16 1 mass 1/384\n  form 1,1,1,1,0,0,0,0,0,0 level 4 hasse 2:+1 aut 384\n";
    CHECK_THROWS_AS(merge_dataset({small_main(one), small_main(one)}, {}), StructuralError);
    CHECK_THROWS_AS(merge_dataset({small_main(kGoldenMain)}, {}), StructuralError);  // ordinals must start at 1
    const auto orphan = parse_appendix("genus 17 1\n  p 2 density 3 splitting [1A+1B]\n", fmt());
    CHECK_THROWS_AS(merge_dataset({small_main(one)}, orphan), StructuralError);
    const auto twice = parse_appendix("genus 16 1\n  p 2 density 3 splitting [1B+1B]\ngenus 16 1\n  p 2 density 3 splitting [1B+1B]\n", fmt());
    CHECK_THROWS_AS(merge_dataset({small_main(one)}, twice), StructuralError);
}

TEST_CASE("prime-set differences are warnings") {
    const RawDataset main = small_main("genus 5 1 mass 1/240\n  form 1,1,1,1,-1,-1,0,-1,0,1 level 5 hasse 2:-1,5:-1 aut 240\n");
    const auto partial = parse_appendix("genus 5 1\n  p 2 density 15 splitting [1A+1B]\n", fmt());
    const RawDataset merged = merge_dataset({main}, partial);
    REQUIRE(merged.warnings.size() == 1);
    CHECK(merged.warnings[0].find("5#1") != std::string::npos);
    const auto full = parse_appendix("genus 5 1\n  p 2 density 15 splitting [1A+1B]\n  p 5 density 48/5 splitting [(1)+(1)+(2)]+[(10)]\n", fmt());
    CHECK(merge_dataset({main}, full).warnings.empty());
    // A main-only ingest is not flagged genus by genus; a genus missing from a
    // supplied appendix is.
    CHECK(merge_dataset({main}, {}).warnings.empty());
    const RawDataset two = small_main("genus 5 1 mass 1/240\n  form 1,1,1,1,-1,-1,0,-1,0,1 level 5 hasse 2:-1,5:-1 aut 240\n"
                                      "genus 8 1 mass 1/96\n  form 1,1,1,1,-1,-1,0,0,0,0 level 8 hasse 2:+1 aut 96\n");
    const RawDataset gap = merge_dataset({two}, full);
    REQUIRE(gap.warnings.size() == 1);
    CHECK(gap.warnings[0].find("8#1") != std::string::npos);
}

TEST_CASE("hasse columns as sign strings") {
    std::string json = read_file(std::filesystem::path(NIPPAUDIT_DATA_DIR) / "formats" / "reference_layout.json");
    json.replace(json.find("\"pairs\""), 7, "\"signs\"");
    const FormatDescriptor signs = FormatDescriptor::parse(json);
    const RawDataset d = parse_main_table("genus 1216 15 mass 1/12\n  form 1,1,11,11,1,0,0,1,0,8 level 304 hasse +- aut 12\n", signs);
    CHECK(d.genera[0].forms[0].hasse == std::map<long, int>{{2, 1}, {19, -1}});
    CHECK_THROWS_AS(parse_main_table("genus 1216 15 mass 1/12\n  form 1,1,11,11,1,0,0,1,0,8 level 304 hasse + aut 12\n", signs), ParseError);
    json.replace(json.find("\"signs\""), 7, "\"other\"");
    CHECK_THROWS_AS(FormatDescriptor::parse(json), ParseError);
}

TEST_CASE("shipped descriptor matches the built-in reference layout") {
    const FormatDescriptor shipped = FormatDescriptor::load(std::filesystem::path(NIPPAUDIT_DATA_DIR) / "formats" / "reference_layout.json");
    const FormatDescriptor& ref = fmt();
    CHECK(shipped.name == ref.name);
    CHECK(shipped.comment_prefixes == ref.comment_prefixes);
    CHECK(shipped.coeff_separator == ref.coeff_separator);
    CHECK(shipped.hasse_style == ref.hasse_style);
    for (auto [a, b] : {std::pair{&shipped.main_genus, &ref.main_genus}, {&shipped.main_form, &ref.main_form},
                        {&shipped.appendix_genus, &ref.appendix_genus}, {&shipped.appendix_entry, &ref.appendix_entry}}) {
        CHECK(a->source == b->source);
        CHECK(a->groups == b->groups);
    }
    CHECK_THROWS_AS(FormatDescriptor::parse("{\"name\": \"x\"}"), ParseError);
    CHECK_THROWS_AS(FormatDescriptor::parse("not json"), ParseError);
}

TEST_CASE("fixture corpus round trips") {
    const std::string main_text = read_file(kData / "fixture_main.txt");
    const std::string appendix_text = read_file(kData / "fixture_appendix.txt");
    const std::string json = read_file(kData / "fixture.json");
    const RawDataset parsed = merge_dataset({parse_main_table(main_text, fmt(), "fixture_main.txt")},
                                            parse_appendix(appendix_text, fmt(), "fixture_appendix.txt"));
    CHECK(parsed.warnings.empty());
    CHECK(emit_normalized(parsed) == json);

    const RawDataset reloaded = parse_normalized(json);
    CHECK(reloaded == parsed);
    CHECK(emit_normalized(reloaded) == json);
    CHECK(write_reference_layout(reloaded) == std::pair{main_text, appendix_text});

    std::size_t headers = 0;
    std::istringstream lines(main_text);
    for (std::string line; std::getline(lines, line);) headers += line.rfind("genus ", 0) == 0;
    CHECK(parsed.genera.size() == headers);
    for (const auto& g : parsed.genera) {
        CHECK(parsed.manifest.at({g.discriminant, g.genus_id}).main.has_value());
        CHECK(parsed.manifest.at({g.discriminant, g.genus_id}).appendix.has_value());
    }
}

TEST_CASE("committed fixture is current") {
    const auto [main_text, appendix_text] = write_reference_layout(fixture::build(fixture::standard_discriminants()));
    CHECK(main_text == read_file(kData / "fixture_main.txt"));
    CHECK(appendix_text == read_file(kData / "fixture_appendix.txt"));
}

TEST_CASE("appendix determinants agree with the forms") {
    const RawDataset d = load_normalized(kData / "fixture.json");
    for (const auto& g : d.genera) {
        const Rational det_m = determinant(g.forms.front().form.gram());
        for (const auto& [p, e] : g.appendix) {
            const Rational det_s = determinant(e.splitting.matrix());
            CHECK(valuation(det_s, p) == valuation(det_m, p));
            if (p != 2) CHECK(legendre_symbol(unit_part(det_s, p), p) == legendre_symbol(unit_part(det_m, p), p));
        }
    }
}

TEST_CASE("normalized documents are validated") {
    std::string json = read_file(kData / "fixture.json");
    CHECK_THROWS_AS(parse_normalized("{}"), ParseError);
    CHECK_THROWS_AS(parse_normalized("[1,"), ParseError);
    const auto pos = json.find("[1A]+[2A]");
    REQUIRE(pos != std::string::npos);
    json.replace(pos, 9, "[1B]+[2A]");
    CHECK_THROWS_AS(parse_normalized(json), ParseError);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("").substr(0, 8) == "e3b0c442");
}

}
