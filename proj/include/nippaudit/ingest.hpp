#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nippaudit/model.hpp"

namespace nippaudit {

// Line patterns for the raw table files. Each pattern is an ECMAScript regex
// whose numbered groups are bound to named roles.
struct LinePattern {
    std::string source;
    std::regex re;
    std::map<std::string, int> groups;

    std::string capture(const std::smatch& m, const std::string& role) const;
};

struct FormatDescriptor {
    std::string name;
    std::vector<std::string> comment_prefixes{"#"};
    LinePattern main_genus;      // discriminant, genus_id, mass
    LinePattern main_form;       // coeffs, level, hasse, aut
    LinePattern appendix_genus;  // discriminant, genus_id
    LinePattern appendix_entry;  // prime, density, splitting
    std::string coeff_separator = "[ ,]+";
    // "pairs": "2:+1,19:-1"; "signs": one +/- per prime dividing 2*disc, ascending.
    std::string hasse_style = "pairs";

    static FormatDescriptor parse(const std::string& json_text, const std::string& source = "descriptor");
    static FormatDescriptor load(const std::filesystem::path& path);
    // The layout written by write_reference_layout (data/formats/reference_layout.json).
    static FormatDescriptor reference();
};

struct SourceSpan {
    std::string file;
    std::size_t first_line = 0;
    std::size_t last_line = 0;

    std::string to_string() const;
    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct ManifestEntry {
    std::optional<SourceSpan> main;
    std::optional<SourceSpan> appendix;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

using GenusKey = std::pair<long long, int>;  // (discriminant, genus_id)

struct RawDataset {
    std::vector<GenusRecord> genera;  // sorted by (discriminant, genus_id)
    std::map<GenusKey, ManifestEntry> manifest;
    std::vector<std::string> warnings;

    friend bool operator==(const RawDataset&, const RawDataset&) = default;
};

struct AppendixRecord {
    long long discriminant = 0;
    int genus_id = 0;
    std::map<long, AppendixEntry> entries;
    SourceSpan span;
};

// Every non-blank, non-comment line must match a pattern; anything else is a
// ParseError carrying file and line. Ordinal gaps within a discriminant are
// StructuralErrors.
RawDataset parse_main_table(std::string_view text, const FormatDescriptor& fmt, const std::string& source = "");
std::vector<AppendixRecord> parse_appendix(std::string_view text, const FormatDescriptor& fmt,
                                           const std::string& source = "");

// Joins appendix records onto main-table genera. Orphaned appendix records,
// duplicate genera and ordinals not of the form 1..k are StructuralErrors;
// prime sets other than {2} u {odd p | disc} become warnings.
RawDataset merge_dataset(const std::vector<RawDataset>& mains, const std::vector<AppendixRecord>& appendix);

// Deterministic JSON (sorted keys, genera by discriminant then genus id).
std::string emit_normalized(const RawDataset& data);
RawDataset parse_normalized(std::string_view text, const std::string& source = "dataset");
RawDataset load_normalized(const std::filesystem::path& path);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

// Writes a dataset in the reference raw layout (main table, appendix).
std::pair<std::string, std::string> write_reference_layout(const RawDataset& data);

std::string read_file(const std::filesystem::path& path);

}  // namespace nippaudit
