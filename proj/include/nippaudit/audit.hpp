#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nippaudit/calibration.hpp"
#include "nippaudit/ingest.hpp"
#include "nippaudit/model.hpp"

namespace nippaudit {

enum class Check { Membership, Splittings, Densities, Columns, Mass };

std::string to_string(Check c);
// Comma-separated list, e.g. "splittings,densities".
std::set<Check> parse_checks(const std::string& text);
std::set<Check> all_checks();

enum class Field { Splitting, Density, Level, Hasse, Aut, Mass, GenusMembership, Structural };

std::string to_string(Field f);

struct AuditFinding {
    long long discriminant = 0;
    int genus_id = 0;
    std::optional<long> prime;
    Field field = Field::Structural;
    std::string tabulated;
    std::string recomputed;

    std::string label() const { return std::to_string(discriminant) + "#" + std::to_string(genus_id); }

    friend bool operator==(const AuditFinding&, const AuditFinding&) = default;
    friend auto operator<=>(const AuditFinding&, const AuditFinding&) = default;
};

struct AuditOptions {
    std::set<Check> checks = all_checks();
    CalibrationMap calibration = CalibrationMap::builtin();
    HasseConvention hasse = HasseConvention::PairsStrict;
    std::optional<long long> disc_min;
    std::optional<long long> disc_max;
    unsigned jobs = 1;
};

struct AuditReport {
    std::string fingerprint;
    std::set<Check> checks;
    std::size_t genera_audited = 0;
    std::vector<AuditFinding> findings;  // sorted
    std::vector<std::string> notes;      // non-findings, e.g. uncalibrated densities; sorted
    std::map<std::string, std::size_t> summary;
    std::map<std::string, bool> gates;

    friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

// Findings and notes for a single genus (pure).
std::pair<std::vector<AuditFinding>, std::vector<std::string>> audit_genus(const GenusRecord& genus,
                                                                            const AuditOptions& options);

AuditReport run_audit(const RawDataset& dataset, const AuditOptions& options = {});

// Genera with at least one splitting or density finding, sorted.
std::vector<GenusKey> reproduce_table1(const AuditReport& report);

// Known list of genera with incorrect appendix data (161 entries).
const std::vector<GenusKey>& reference_table1();

enum class ReportFormat { Machine, Human };
std::string emit_report(const AuditReport& report, ReportFormat format);

// Seven labels per row, " & "-separated.
std::string format_table1(const std::vector<GenusKey>& genera);

}  // namespace nippaudit
