#include "nippaudit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "nippaudit/arith.hpp"
#include "nippaudit/audit.hpp"
#include "nippaudit/autmass.hpp"
#include "nippaudit/calibration.hpp"
#include "nippaudit/errors.hpp"
#include "nippaudit/ingest.hpp"
#include "nippaudit/jordan.hpp"
#include "nippaudit/symbol.hpp"

namespace nippaudit {

namespace {

CalibrationMap load_calibration(const std::string& path) {
    if (!path.empty()) return CalibrationMap::load(path);
    const std::filesystem::path shipped = std::filesystem::path(NIPPAUDIT_DATA_DIR) / "nipp_calibration.json";
    if (std::filesystem::exists(shipped)) return CalibrationMap::load(shipped);
    return CalibrationMap::builtin();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

const GenusRecord& find_genus(const RawDataset& data, long long d, int id) {
    for (const auto& g : data.genera)
        if (g.discriminant == d && g.genus_id == id) return g;
    throw std::runtime_error("genus " + std::to_string(d) + "#" + std::to_string(id) + " not in dataset");
}

std::string matrix_string(const RationalMatrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) out += (j ? " " : "") + m(i, j).to_string();
        out += "]\n";
    }
    return out;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact-arithmetic audit of tables of quaternary quadratic forms"};
    app.require_subcommand(1);

    std::vector<std::string> main_paths, appendix_paths;
    std::string descriptor_path, out_path, dataset_path, human_path, checks_text, calibration_path, coeffs_text;
    std::string hasse_text = "i<j";
    long long disc_min = 0, disc_max = 0, disc = 0, calib_disc_max = 1213;
    int genus_id = 0;
    long prime = 0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool nipp_normalized = false;

    auto* ingest = app.add_subcommand("ingest", "parse raw table files into a normalized dataset");
    ingest->add_option("--main", main_paths, "main-table files")->required();
    ingest->add_option("--appendix", appendix_paths, "appendix files");
    ingest->add_option("--descriptor", descriptor_path, "format descriptor (JSON)");
    ingest->add_option("--out", out_path, "normalized dataset to write")->required();

    auto* audit = app.add_subcommand("audit", "cross-check a normalized dataset");
    audit->add_option("--dataset", dataset_path)->required();
    audit->add_option("--checks", checks_text, "membership,splittings,densities,columns,mass");
    audit->add_option("--disc-min", disc_min);
    audit->add_option("--disc-max", disc_max);
    audit->add_option("--out", out_path, "machine-readable report")->required();
    audit->add_option("--human", human_path, "human-readable report");
    audit->add_option("--jobs", jobs);
    audit->add_option("--calibration", calibration_path);
    audit->add_option("--hasse-convention", hasse_text, "i<j or i<=j");

    auto* table1 = app.add_subcommand("table1", "print genera with splitting or density findings");
    table1->add_option("--dataset", dataset_path)->required();
    table1->add_option("--jobs", jobs);
    table1->add_option("--calibration", calibration_path);

    auto* symbol = app.add_subcommand("symbol", "local symbol and canonical representative of a form");
    symbol->add_option("--coeffs", coeffs_text, "10 comma-separated coefficients")->required();
    symbol->add_option("--p", prime)->required();

    auto* density = app.add_subcommand("density", "local density of a form");
    density->add_option("--coeffs", coeffs_text)->required();
    density->add_option("--p", prime)->required();
    density->add_flag("--nipp-normalized", nipp_normalized, "rescale into the appendix normalization");
    density->add_option("--calibration", calibration_path);

    auto* aut = app.add_subcommand("aut", "automorphism group order");
    aut->add_option("--coeffs", coeffs_text)->required();

    auto* mass = app.add_subcommand("mass", "mass of a genus three ways");
    mass->add_option("--d", disc)->required();
    mass->add_option("--id", genus_id)->required();
    mass->add_option("--dataset", dataset_path)->required();

    auto* calibrate = app.add_subcommand("calibrate", "fit the density normalization on a dataset");
    calibrate->add_option("--dataset", dataset_path)->required();
    calibrate->add_option("--disc-max", calib_disc_max);
    calibrate->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed()) {
            const FormatDescriptor fmt =
                descriptor_path.empty() ? FormatDescriptor::reference() : FormatDescriptor::load(descriptor_path);
            std::vector<RawDataset> mains;
            for (const auto& p : main_paths) mains.push_back(parse_main_table(read_file(p), fmt, p));
            std::vector<AppendixRecord> records;
            for (const auto& p : appendix_paths) {
                auto r = parse_appendix(read_file(p), fmt, p);
                records.insert(records.end(), r.begin(), r.end());
            }
            const RawDataset data = merge_dataset(mains, records);
            const std::string text = emit_normalized(data);
            write_file(out_path, text);
            out << data.genera.size() << " genera, " << data.warnings.size() << " warnings, sha256 "
                << sha256_hex(text) << "\n";
            for (const auto& w : data.warnings) err << "warning: " << w << "\n";
            return 0;
        }
        if (audit->parsed() || table1->parsed()) {
            AuditOptions opt;
            opt.calibration = load_calibration(calibration_path);
            opt.jobs = jobs;
            if (table1->parsed()) opt.checks = {Check::Splittings, Check::Densities};
            else if (!checks_text.empty()) opt.checks = parse_checks(checks_text);
            opt.hasse = parse_hasse_convention(hasse_text);
            if (audit->count("--disc-min")) opt.disc_min = disc_min;
            if (audit->count("--disc-max")) opt.disc_max = disc_max;
            const AuditReport report = run_audit(load_normalized(dataset_path), opt);
            if (table1->parsed()) {
                out << format_table1(reproduce_table1(report));
                return 0;
            }
            write_file(out_path, emit_report(report, ReportFormat::Machine));
            if (!human_path.empty()) write_file(human_path, emit_report(report, ReportFormat::Human));
            out << report.findings.size() << " findings over " << report.genera_audited << " genera\n";
            return report.findings.empty() ? 0 : 2;
        }
        if (symbol->parsed()) {
            const QuadForm form = parse_coeffs(coeffs_text);
            const RationalMatrix gram = form.gram();
            if (prime == 2) {
                const Symbol2 s = symbol_2(gram);
                const CanonicalSymbol2 c = canonicalize_2(s);
                out << "symbol: " << s.to_string() << "\ncanonical: " << c.symbol.to_string() << "\n";
                out << "representative: " << splitting_expr_of(c.representative, 2).to_string() << "\n"
                    << matrix_string(c.representative);
            } else {
                const OddSymbol s = symbol_odd_p(gram, prime);
                const RationalMatrix rep = odd_symbol_representative(s);
                out << "symbol: " << s.to_string() << "\n";
                out << "representative: " << splitting_expr_of(rep, prime).to_string() << "\n" << matrix_string(rep);
            }
            return 0;
        }
        if (density->parsed()) {
            const QuadForm form = parse_coeffs(coeffs_text);
            if (nipp_normalized) out << nipp_density(form, prime, load_calibration(calibration_path)).to_string() << "\n";
            else out << local_density(form, prime).to_string() << "\n";
            return 0;
        }
        if (aut->parsed()) {
            out << aut_order(parse_coeffs(coeffs_text)) << "\n";
            return 0;
        }
        if (mass->parsed()) {
            const RawDataset data = load_normalized(dataset_path);
            const GenusRecord& g = find_genus(data, disc, genus_id);
            out << "table: " << g.mass.to_string() << "\n";
            out << "sum 1/aut: " << mass_from_aut(g).value.to_string() << "\n";
            out << "siegel: " << siegel_mass(g).value.to_string() << "\n";
            return 0;
        }
        if (calibrate->parsed()) {
            const CalibrationFit fit = fit_calibration(load_normalized(dataset_path).genera, calib_disc_max);
            fit.map.save(out_path);
            out << fit.samples << " densities fitted\n";
            for (const auto& [key, ratios] : fit.conflicts) {
                err << "conflict " << key << ":";
                for (const auto& r : ratios) err << ' ' << r.to_string();
                err << "\n";
            }
            return fit.conflicts.empty() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace nippaudit
