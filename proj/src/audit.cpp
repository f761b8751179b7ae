#include "nippaudit/audit.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nippaudit/arith.hpp"
#include "nippaudit/autmass.hpp"
#include "nippaudit/errors.hpp"
#include "nippaudit/symbol.hpp"

namespace nippaudit {

using nlohmann::json;

std::string to_string(Check c) {
    switch (c) {
        case Check::Membership: return "membership";
        case Check::Splittings: return "splittings";
        case Check::Densities: return "densities";
        case Check::Columns: return "columns";
        case Check::Mass: return "mass";
    }
    return "?";
}

std::set<Check> all_checks() {
    return {Check::Membership, Check::Splittings, Check::Densities, Check::Columns, Check::Mass};
}

std::set<Check> parse_checks(const std::string& text) {
    std::set<Check> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        bool found = false;
        for (Check c : all_checks())
            if (to_string(c) == item) {
                out.insert(c);
                found = true;
            }
        if (!found) throw DomainError("unknown check '" + item + "'");
    }
    return out;
}

std::string to_string(Field f) {
    switch (f) {
        case Field::Splitting: return "splitting";
        case Field::Density: return "density";
        case Field::Level: return "level";
        case Field::Hasse: return "hasse";
        case Field::Aut: return "aut";
        case Field::Mass: return "mass";
        case Field::GenusMembership: return "genus_membership";
        case Field::Structural: return "structural";
    }
    return "?";
}

namespace {

std::string recomputed_splitting(const RationalMatrix& gram, long p) {
    const RationalMatrix rep = p == 2 ? canonicalize_2(symbol_2(gram)).representative
                                      : odd_symbol_representative(symbol_odd_p(gram, p));
    return splitting_expr_of(rep, p).to_string();
}

std::string form_prefix(std::size_t k) { return "form " + std::to_string(k + 1) + ": "; }

}  // namespace

std::pair<std::vector<AuditFinding>, std::vector<std::string>> audit_genus(const GenusRecord& g,
                                                                            const AuditOptions& options) {
    std::vector<AuditFinding> findings;
    std::vector<std::string> notes;
    auto add = [&](std::optional<long> p, Field field, std::string tab, std::string rec) {
        findings.push_back({g.discriminant, g.genus_id, p, field, std::move(tab), std::move(rec)});
    };
    auto wants = [&](Check c) { return options.checks.count(c) > 0; };

    if (g.forms.empty()) {
        add(std::nullopt, Field::Structural, "no forms", "-");
        return {findings, notes};
    }
    const QuadForm& first = g.forms.front().form;
    try {
        const long long d = discriminant_of(first);
        if (d != g.discriminant) {
            add(std::nullopt, Field::Structural, "discriminant " + std::to_string(g.discriminant),
                "det(2M) = " + std::to_string(d));
            return {findings, notes};
        }
    } catch (const DomainError& e) {
        add(std::nullopt, Field::Structural, first.to_string(), e.what());
        return {findings, notes};
    }
    const auto required = bad_primes(Integer(static_cast<long>(g.discriminant)));
    const RationalMatrix gram = first.gram();

    if (wants(Check::Membership)) {
        for (std::size_t k = 1; k < g.forms.size(); ++k) {
            const QuadForm& f = g.forms[k].form;
            try {
                if (discriminant_of(f) != g.discriminant) {
                    add(std::nullopt, Field::GenusMembership, form_prefix(k) + f.to_string(),
                        "det(2M) = " + std::to_string(discriminant_of(f)));
                    continue;
                }
                for (long p : required)
                    if (!equivalent_over_zp(gram, f.gram(), p)) {
                        add(p, Field::GenusMembership, form_prefix(k) + f.to_string(), "not Z_p-equivalent to form 1");
                        break;
                    }
            } catch (const DomainError& e) {
                add(std::nullopt, Field::GenusMembership, form_prefix(k) + f.to_string(), e.what());
            }
        }
    }

    if (wants(Check::Splittings) || wants(Check::Densities)) {
        for (long p : required)
            if (!g.appendix.count(p)) add(p, Field::Structural, "appendix entry missing", "-");
    }

    if (wants(Check::Splittings)) {
        for (const auto& [p, entry] : g.appendix) {
            try {
                const RationalMatrix tab = entry.splitting.matrix();
                bool same = false;
                if (tab.rows() == gram.rows() && !determinant(tab).is_zero()) same = equivalent_over_zp(gram, tab, p);
                if (!same) add(p, Field::Splitting, entry.splitting.to_string(), recomputed_splitting(gram, p));
            } catch (const DomainError& e) {
                add(p, Field::Splitting, entry.splitting.to_string(), e.what());
            }
        }
    }

    if (wants(Check::Densities)) {
        for (const auto& [p, entry] : g.appendix) {
            try {
                const Rational mine = nipp_density(first, p, options.calibration);
                if (mine != entry.density) add(p, Field::Density, entry.density.to_string(), mine.to_string());
            } catch (const Uncalibrated& e) {
                notes.push_back(g.label() + " p=" + std::to_string(p) + ": " + e.what());
            } catch (const DomainError& e) {
                add(p, Field::Density, entry.density.to_string(), e.what());
            }
        }
    }

    std::vector<std::int64_t> auts(g.forms.size(), 0);
    bool auts_ok = true;
    if (wants(Check::Columns) || wants(Check::Mass)) {
        for (std::size_t k = 0; k < g.forms.size(); ++k) {
            try {
                auts[k] = aut_order(g.forms[k].form);
            } catch (const DomainError& e) {
                auts_ok = false;
                add(std::nullopt, Field::Aut, form_prefix(k) + std::to_string(g.forms[k].aut_count), e.what());
            }
        }
    }

    if (wants(Check::Columns)) {
        for (std::size_t k = 0; k < g.forms.size(); ++k) {
            const FormRecord& f = g.forms[k];
            try {
                const long long level = compute_level(f.form);
                if (level != f.level)
                    add(std::nullopt, Field::Level, form_prefix(k) + std::to_string(f.level), std::to_string(level));
                for (const auto& [p, s] : f.hasse) {
                    const int h = hasse_symbol_of_form(f.form, p, options.hasse);
                    if (h != s) add(p, Field::Hasse, form_prefix(k) + std::to_string(s), std::to_string(h));
                }
            } catch (const DomainError& e) {
                add(std::nullopt, Field::Structural, form_prefix(k) + f.form.to_string(), e.what());
            }
            if (auts_ok && auts[k] != f.aut_count)
                add(std::nullopt, Field::Aut, form_prefix(k) + std::to_string(f.aut_count), std::to_string(auts[k]));
        }
    }

    if (wants(Check::Mass) && auts_ok) {
        Rational from_aut(0);
        for (auto a : auts) from_aut += Rational(1) / Rational(static_cast<long long>(a));
        try {
            const Rational siegel = siegel_mass(first).value;
            if (from_aut != g.mass || siegel != g.mass)
                add(std::nullopt, Field::Mass, g.mass.to_string(),
                    "sum 1/aut = " + from_aut.to_string() + ", siegel = " + siegel.to_string());
        } catch (const DomainError& e) {
            add(std::nullopt, Field::Mass, g.mass.to_string(), e.what());
        }
    }
    return {findings, notes};
}

AuditReport run_audit(const RawDataset& dataset, const AuditOptions& options) {
    std::vector<const GenusRecord*> selected;
    for (const auto& g : dataset.genera) {
        if (options.disc_min && g.discriminant < *options.disc_min) continue;
        if (options.disc_max && g.discriminant > *options.disc_max) continue;
        selected.push_back(&g);
    }

    std::vector<std::pair<std::vector<AuditFinding>, std::vector<std::string>>> results(selected.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < selected.size(); i = next++) results[i] = audit_genus(*selected[i], options);
    };
    const unsigned jobs = std::max(1u, options.jobs);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    AuditReport report;
    report.fingerprint = sha256_hex(emit_normalized(dataset));
    report.checks = options.checks;
    report.genera_audited = selected.size();
    for (auto& [f, n] : results) {
        report.findings.insert(report.findings.end(), f.begin(), f.end());
        report.notes.insert(report.notes.end(), n.begin(), n.end());
    }
    std::sort(report.findings.begin(), report.findings.end());
    std::sort(report.notes.begin(), report.notes.end());
    for (const auto& f : report.findings) ++report.summary[to_string(f.field)];

    auto has = [&](Check c) { return options.checks.count(c) > 0; };
    auto none = [&](auto pred) { return std::none_of(report.findings.begin(), report.findings.end(), pred); };
    if (has(Check::Splittings) && has(Check::Densities)) {
        report.gates["agreement_below_1216"] = none([](const AuditFinding& f) {
            return f.discriminant <= 1213 && (f.field == Field::Splitting || f.field == Field::Density);
        });
        report.gates["table1_match"] = reproduce_table1(report) == reference_table1();
    }
    if (has(Check::Membership) && has(Check::Columns)) {
        report.gates["main_table_integrity"] = none([](const AuditFinding& f) {
            return f.field == Field::GenusMembership || f.field == Field::Level || f.field == Field::Hasse ||
                   f.field == Field::Aut;
        });
    }
    if (has(Check::Mass)) report.gates["mass_closure"] = none([](const AuditFinding& f) { return f.field == Field::Mass; });
    return report;
}

std::vector<GenusKey> reproduce_table1(const AuditReport& report) {
    std::set<GenusKey> keys;
    for (const auto& f : report.findings)
        if (f.field == Field::Splitting || f.field == Field::Density) keys.insert({f.discriminant, f.genus_id});
    return {keys.begin(), keys.end()};
}

const std::vector<GenusKey>& reference_table1() {
    static const std::vector<GenusKey> table = [] {
        const std::vector<std::tuple<long long, int, int>> runs{
            {1216, 15, 20}, {1232, 16, 16}, {1280, 24, 43}, {1296, 30, 40}, {1344, 26, 38}, {1360, 16, 16},
            {1408, 24, 28}, {1472, 16, 20}, {1488, 16, 16}, {1536, 32, 58}, {1600, 25, 31}, {1616, 7, 8},
            {1620, 23, 36}, {1664, 24, 28}, {1680, 28, 32}, {1728, 43, 80}};
        std::vector<GenusKey> out;
        for (const auto& [d, lo, hi] : runs)
            for (int id = lo; id <= hi; ++id) out.emplace_back(d, id);
        return out;
    }();
    return table;
}

std::string format_table1(const std::vector<GenusKey>& genera) {
    std::string out;
    for (std::size_t i = 0; i < genera.size(); ++i) {
        out += std::to_string(genera[i].first) + "#" + std::to_string(genera[i].second);
        out += (i % 7 == 6 || i + 1 == genera.size()) ? "\n" : " & ";
    }
    return out;
}

std::string emit_report(const AuditReport& report, ReportFormat format) {
    const auto table = reproduce_table1(report);
    if (format == ReportFormat::Machine) {
        json j;
        j["format"] = "nippaudit-report/1";
        j["fingerprint"] = report.fingerprint;
        j["checks"] = json::array();
        for (Check c : report.checks) j["checks"].push_back(to_string(c));
        j["genera_audited"] = report.genera_audited;
        j["findings"] = json::array();
        for (const auto& f : report.findings) {
            j["findings"].push_back({{"discriminant", f.discriminant},
                                     {"genus_id", f.genus_id},
                                     {"prime", f.prime ? json(*f.prime) : json(nullptr)},
                                     {"field", to_string(f.field)},
                                     {"tabulated", f.tabulated},
                                     {"recomputed", f.recomputed}});
        }
        j["notes"] = report.notes;
        j["summary"] = report.summary;
        j["gates"] = report.gates;
        j["table1"] = json::array();
        for (const auto& [d, id] : table) j["table1"].push_back(std::to_string(d) + "#" + std::to_string(id));
        return j.dump(1) + "\n";
    }

    std::ostringstream out;
    out << "dataset " << report.fingerprint << "\n";
    out << "genera audited: " << report.genera_audited << "\n";
    out << "checks:";
    for (Check c : report.checks) out << ' ' << to_string(c);
    out << "\n\n";
    out << "Genera with incorrect p-adic density or p-adic splitting (" << table.size() << ")\n";
    out << format_table1(table) << "\n";
    out << "Findings (" << report.findings.size() << ")\n";
    for (const auto& f : report.findings) {
        out << f.label();
        if (f.prime) out << " p=" << *f.prime;
        out << ' ' << to_string(f.field) << ": tabulated " << f.tabulated << "; recomputed " << f.recomputed << "\n";
    }
    if (!report.notes.empty()) {
        out << "\nNotes (" << report.notes.size() << ")\n";
        for (const auto& n : report.notes) out << n << "\n";
    }
    if (!report.gates.empty()) {
        out << "\nGates\n";
        for (const auto& [name, ok] : report.gates) out << (ok ? "PASS " : "FAIL ") << name << "\n";
    }
    return out.str();
}

}  // namespace nippaudit
