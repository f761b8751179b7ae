// One PASS/FAIL line per acceptance criterion. Criteria 1-5 need the full
// ingested corpus: pass its normalized dataset as argv[1] or NIPPAUDIT_DATASET.
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "fixture.hpp"
#include "nippaudit/audit.hpp"
#include "nippaudit/autmass.hpp"
#include "nippaudit/symbol.hpp"
#include "oracles.hpp"
#include "table1_grid.hpp"

using namespace nippaudit;

namespace {

constexpr double kGoldenSeconds = 1.0;
constexpr double kOracleSeconds = 300.0;
constexpr long long kCorpusMaxDisc = 1732;
constexpr long long kAgreementMaxDisc = 1213;
constexpr long long kPrintedMaxDisc = 500;
const Coeffs kGoldenCoeffs{1, 1, 11, 11, 1, 0, 0, 1, 0, 8};

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

int failures = 0;

void report(int number, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << name << " (" << secs << " s)\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    if (!o.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const GenusRecord* find(const RawDataset& d, long long disc, int id) {
    for (const auto& g : d.genera)
        if (g.discriminant == disc && g.genus_id == id) return &g;
    return nullptr;
}

long long max_disc(const RawDataset& d) { return d.genera.empty() ? 0 : d.genera.back().discriminant; }

// Corpus-dependent criteria fail outright without a dataset that reaches `needed`.
bool need_corpus(Outcome& o, const std::optional<RawDataset>& corpus, long long needed) {
    if (!corpus) {
        o.require(false, "corpus unavailable: no normalized dataset given (argv[1] or NIPPAUDIT_DATASET)");
        return false;
    }
    if (max_disc(*corpus) < needed) {
        o.require(false, "dataset stops at discriminant " + std::to_string(max_disc(*corpus)) + ", need " +
                             std::to_string(needed));
        return false;
    }
    return true;
}

std::string keys_string(const std::vector<GenusKey>& keys, std::size_t limit = 8) {
    std::string out;
    for (std::size_t i = 0; i < keys.size() && i < limit; ++i)
        out += (i ? " " : "") + std::to_string(keys[i].first) + "#" + std::to_string(keys[i].second);
    if (keys.size() > limit) out += " ...";
    return out;
}

// --- criterion 1 ---------------------------------------------------------

void golden(Outcome& o, const std::optional<RawDataset>& corpus) {
    const auto t0 = std::chrono::steady_clock::now();
    const QuadForm f(kGoldenCoeffs);
    const Rational h(1, 2);
    const Rational displayed[4][4] = {{1, h, 0, h}, {h, 1, 0, 0}, {0, 0, 11, 4}, {h, 0, 4, 11}};
    const RationalMatrix m = f.gram();
    bool same = true;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) same = same && m(i, j) == displayed[i][j];
    o.require(same, "gram_from_coeffs reproduces the displayed matrix");
    o.require(discriminant_of(f) == 1216, "discriminant_of = 1216");

    const RationalMatrix claimed = parse_splitting_expr("[2A]+[(58/3)+(38/29)]", 2).matrix();
    o.require(!equivalent_over_zp(m, claimed, 2), "not Z_2-equivalent to [2A]+[(58/3)+(38/29)]");
    const Rational nipp = nipp_density(f, 2, CalibrationMap::builtin());
    o.require(nipp == Rational(3072), "nipp_density(p=2) = " + nipp.to_string() + ", expected 3072");
    o.require(nipp / Rational(98304) == Rational(1, 32), "tabulated 98304 is 32 times too large");
    const double elapsed = seconds_since(t0);
    o.require(elapsed < kGoldenSeconds, "runtime " + std::to_string(elapsed) + " s < 1 s");

    if (!need_corpus(o, corpus, 1216)) return;
    const GenusRecord* g = find(*corpus, 1216, 15);
    if (g == nullptr || !g->appendix.count(19)) {
        o.require(false, "dataset has no appendix entry for 1216#15 at p=19");
        return;
    }
    o.require(g->forms.front().form.coeffs() == kGoldenCoeffs, "dataset's first form of 1216#15 is the golden form");
    const RationalMatrix tab19 = g->appendix.at(19).splitting.matrix();
    const bool differs = tab19.rows() != 4 || determinant(tab19).is_zero() || !(symbol_odd_p(tab19, 19) == symbol_odd_p(m, 19));
    o.require(differs, "p=19 symbol " + symbol_odd_p(m, 19).to_string() + " differs from the appendix splitting " +
                           g->appendix.at(19).splitting.to_string());
}

// --- criteria 2-5 --------------------------------------------------------

AuditOptions corpus_options(std::set<Check> checks) {
    AuditOptions o;
    o.checks = std::move(checks);
    o.calibration = CalibrationMap::load(std::filesystem::path(NIPPAUDIT_DATA_DIR) / "nipp_calibration.json");
    o.jobs = std::max(1u, std::thread::hardware_concurrency());
    return o;
}

void table1(Outcome& o, const std::optional<RawDataset>& corpus) {
    std::vector<GenusKey> grid;
    for (const auto& row : table1_grid_rows())
        for (const auto& label : row) grid.push_back(parse_label(label));
    o.require(grid.size() == 161 && grid == reference_table1(), "reference list holds the 161 genera of the grid");
    if (!need_corpus(o, corpus, kCorpusMaxDisc)) return;
    AuditOptions opt = corpus_options({Check::Splittings, Check::Densities});
    opt.disc_max = kCorpusMaxDisc;
    const auto got = reproduce_table1(run_audit(*corpus, opt));
    std::vector<GenusKey> extra, missing;
    std::set_difference(got.begin(), got.end(), grid.begin(), grid.end(), std::back_inserter(extra));
    std::set_difference(grid.begin(), grid.end(), got.begin(), got.end(), std::back_inserter(missing));
    o.require(extra.empty(), std::to_string(extra.size()) + " extra genera " + keys_string(extra));
    o.require(missing.empty(), std::to_string(missing.size()) + " missing genera " + keys_string(missing));
}

void agreement(Outcome& o, const std::optional<RawDataset>& corpus) {
    if (!need_corpus(o, corpus, kAgreementMaxDisc)) return;
    AuditOptions opt = corpus_options({Check::Splittings, Check::Densities});
    opt.disc_max = kAgreementMaxDisc;
    const AuditReport r = run_audit(*corpus, opt);
    o.require(r.findings.empty(), std::to_string(r.findings.size()) + " splitting/density findings with disc <= 1213");
    o.require(r.notes.empty(), std::to_string(r.notes.size()) + " densities left unchecked (uncalibrated)");
}

void integrity(Outcome& o, const std::optional<RawDataset>& corpus) {
    if (!need_corpus(o, corpus, kCorpusMaxDisc)) return;
    const AuditReport r = run_audit(*corpus, corpus_options({Check::Membership, Check::Columns}));
    for (const char* field : {"genus_membership", "level", "hasse", "aut", "structural"}) {
        const std::size_t n = r.summary.count(field) ? r.summary.at(field) : 0;
        o.require(n == 0, std::to_string(n) + " " + field + " findings");
    }
}

void mass_closure(Outcome& o, const std::optional<RawDataset>& corpus) {
    if (!need_corpus(o, corpus, kPrintedMaxDisc)) return;
    AuditOptions opt = corpus_options({Check::Mass});
    opt.disc_max = kPrintedMaxDisc;
    const AuditReport printed = run_audit(*corpus, opt);
    o.require(printed.findings.empty(), std::to_string(printed.findings.size()) + " mass findings with disc <= 500");
    if (max_disc(*corpus) < kCorpusMaxDisc) {
        o.require(false, "extended run needs the corpus up to 1732");
        return;
    }
    const AuditReport full = run_audit(*corpus, corpus_options({Check::Mass}));
    o.require(full.findings.empty(), std::to_string(full.findings.size()) + " mass findings corpus-wide");
}

// --- criterion 6 ---------------------------------------------------------

IntMatrix int_diag(const std::vector<long long>& entries) {
    IntMatrix m = IntMatrix::Zero(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
    return m;
}

void oracles(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Integer c = congruence_count_oracle(int_diag({1, 1, 1, 1}), 3, 1);
    o.require(c == 1152, "congruence_count_oracle(identity, 3, 1) = " + c.get_str());
    o.require(c == Integer(static_cast<long>(oracle::congruence_count_naive(int_diag({1, 1, 1, 1}), 3, 1))),
              "exhaustive 3^16 count agrees");

    std::size_t forms = 0, bad = 0;
    for (int n = 1; n <= 4; ++n)
        for (int twos = 0; twos <= n; ++twos) {
            std::vector<long long> entries(n, 1);
            for (int i = 0; i < twos; ++i) entries[i] = 2;
            const IntMatrix m = int_diag(entries);
            const Rational scaled = local_density(to_rational(m), 3) * pow(Rational(3), n * (n - 1) / 2);
            ++forms;
            if (scaled != Rational(congruence_count_oracle(m, 3, 1))) ++bad;
        }
    o.require(bad == 0, "local_density * 3^(n(n-1)/2) = oracle count on " + std::to_string(forms) +
                            " diagonal Z_3-unimodular forms (" + std::to_string(bad) + " mismatches)");

    std::vector<RationalMatrix> grams;
    std::vector<std::array<int, 3>> keys;
    for (long a = -4; a <= 4; ++a)
        for (long b = -4; b <= 4; ++b)
            for (long cc = -4; cc <= 4; ++cc) {
                const long d = a * cc - b * b;
                if (d % 2 == 0 || std::abs(d) > 15) continue;
                RationalMatrix g(2, 2);
                g << Rational(a), Rational(b), Rational(b), Rational(cc);
                grams.push_back(g);
                keys.push_back(oracle::orbit_min_2x2(IntMatrix{{a, b}, {b, cc}}, 5));
            }
    std::size_t pairs = 0, mismatches = 0;
    for (std::size_t i = 0; i < grams.size(); ++i)
        for (std::size_t j = i; j < grams.size(); ++j, ++pairs)
            if (equivalent_over_zp(grams[i], grams[j], 2) != (keys[i] == keys[j])) ++mismatches;
    o.require(mismatches == 0, "2x2 Z_2-equivalence vs mod-2^5 orbit search: " + std::to_string(pairs) + " pairs, " +
                                   std::to_string(mismatches) + " mismatches");
    const double elapsed = seconds_since(t0);
    o.require(elapsed <= kOracleSeconds, "oracle runtime " + std::to_string(elapsed) + " s <= 300 s");
}

// --- criterion 7 ---------------------------------------------------------

void properties(Outcome& o) {
    const RawDataset fixture_set = load_normalized(std::filesystem::path(NIPPAUDIT_TEST_DATA) / "fixture.json");
    std::vector<QuadForm> sample{QuadForm(kGoldenCoeffs)};
    for (const auto& g : fixture_set.genera)
        for (const auto& f : g.forms) sample.push_back(f.form);

    std::mt19937_64 rng(2024);
    std::size_t checks = 0, violations = 0;
    for (const auto& f : sample) {
        const auto primes = bad_primes(Integer(static_cast<long>(discriminant_of(f))));
        const Symbol2 c2 = canonicalize_2(symbol_2(f.gram())).symbol;
        for (int k = 0; k < 20; ++k) {
            const IntMatrix t = oracle::random_unimodular(4, rng);
            const RationalMatrix g = to_rational(IntMatrix(t.transpose() * f.doubled_gram() * t)) * Rational(1, 2);
            for (long p : primes) {
                ++checks;
                const bool same = p == 2 ? canonicalize_2(symbol_2(g)).symbol == c2 : symbol_odd_p(g, p) == symbol_odd_p(f.gram(), p);
                violations += !same;
            }
        }
    }
    o.require(violations == 0, "symbol invariance: " + std::to_string(sample.size()) + " forms x 20 transforms, " +
                                   std::to_string(checks) + " checks, " + std::to_string(violations) + " violations");

    std::uniform_int_distribution<long> pos(1, 100000);
    std::size_t product_violations = 0;
    for (int i = 0; i < 2000; ++i) {
        const long a = pos(rng), b = pos(rng);
        int product = 1;
        for (long p : bad_primes(Integer(Integer(a) * b))) product *= hilbert_symbol(Rational(a), Rational(b), p);
        product_violations += product != 1;
    }
    o.require(product_violations == 0, "hilbert product formula on 2000 random pairs: " +
                                           std::to_string(product_violations) + " violations");

    const auto dir = std::filesystem::path(NIPPAUDIT_TEST_DATA);
    const std::string json = read_file(dir / "fixture.json");
    const FormatDescriptor fmt = FormatDescriptor::reference();
    const RawDataset parsed = merge_dataset({parse_main_table(read_file(dir / "fixture_main.txt"), fmt, "fixture_main.txt")},
                                            parse_appendix(read_file(dir / "fixture_appendix.txt"), fmt, "fixture_appendix.txt"));
    const bool raw_ok = emit_normalized(parsed) == json;
    const bool norm_ok = emit_normalized(parse_normalized(json)) == json;
    const auto layout = write_reference_layout(parsed);
    const bool layout_ok = layout.first == read_file(dir / "fixture_main.txt") && layout.second == read_file(dir / "fixture_appendix.txt");
    std::size_t split_bad = 0;
    for (const auto& g : parsed.genera)
        for (const auto& [p, e] : g.appendix) split_bad += !(parse_splitting_expr(e.splitting.to_string(), p) == e.splitting);
    o.require(raw_ok && norm_ok && layout_ok && split_bad == 0, "parser round trips are byte-identical");

    RawDataset skewed = fixture_set;
    skewed.genera[7].appendix.at(2).density *= Rational(32);
    skewed.genera[11].forms[0].aut_count += 1;
    AuditOptions opt;
    opt.jobs = 1;
    const std::string serial = emit_report(run_audit(skewed, opt), ReportFormat::Machine);
    bool deterministic = true;
    for (unsigned jobs : {2u, 4u, 8u, 16u}) {
        opt.jobs = jobs;
        deterministic = deterministic && emit_report(run_audit(skewed, opt), ReportFormat::Machine) == serial;
    }
    o.require(deterministic, "audit reports identical for 1, 2, 4, 8, 16 jobs");
}

}  // namespace

int main(int argc, char** argv) {
    std::optional<RawDataset> corpus;
    std::string path = argc > 1 ? argv[1] : "";
    if (path.empty())
        if (const char* env = std::getenv("NIPPAUDIT_DATASET")) path = env;
    if (!path.empty()) {
        try {
            corpus = load_normalized(path);
            std::cout << "dataset " << path << ": " << corpus->genera.size() << " genera, max discriminant "
                      << max_disc(*corpus) << "\n";
        } catch (const std::exception& e) {
            std::cout << "dataset " << path << " unreadable: " << e.what() << "\n";
        }
    }

    report(1, "golden example 1216#15", [&](Outcome& o) { golden(o, corpus); });
    report(2, "error list reproduction (161 genera)", [&](Outcome& o) { table1(o, corpus); });
    report(3, "no splitting/density findings up to disc 1213", [&](Outcome& o) { agreement(o, corpus); });
    report(4, "main-table integrity", [&](Outcome& o) { integrity(o, corpus); });
    report(5, "mass closure", [&](Outcome& o) { mass_closure(o, corpus); });
    report(6, "oracle suite", oracles);
    report(7, "property suites", properties);
    std::cout << (7 - failures) << "/7 criteria pass\n";
    return failures == 0 ? 0 : 1;
}
