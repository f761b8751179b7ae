#include "nippaudit/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "nippaudit/arith.hpp"
#include "nippaudit/errors.hpp"

namespace nippaudit {

using nlohmann::json;

namespace {

constexpr const char* kDatasetFormat = "nippaudit-dataset/1";

constexpr const char* kReferenceDescriptor = R"({
  "name": "reference",
  "comment_prefixes": ["#"],
  "coeff_separator": "[ ,]+",
  "hasse_style": "pairs",
  "main": {
    "genus": {
      "regex": "^genus\\s+(\\d+)\\s+(\\d+)\\s+mass\\s+(-?\\d+(?:/\\d+)?)\\s*$",
      "groups": {"discriminant": 1, "genus_id": 2, "mass": 3}
    },
    "form": {
      "regex": "^\\s+form\\s+([-0-9, ]+?)\\s+level\\s+(\\d+)\\s+hasse\\s+(\\S+)\\s+aut\\s+(\\d+)\\s*$",
      "groups": {"coeffs": 1, "level": 2, "hasse": 3, "aut": 4}
    }
  },
  "appendix": {
    "genus": {
      "regex": "^genus\\s+(\\d+)\\s+(\\d+)\\s*$",
      "groups": {"discriminant": 1, "genus_id": 2}
    },
    "entry": {
      "regex": "^\\s+p\\s+(\\d+)\\s+density\\s+(\\S+)\\s+splitting\\s+(.+?)\\s*$",
      "groups": {"prime": 1, "density": 2, "splitting": 3}
    }
  }
}
)";

LinePattern read_pattern(const json& j, const std::string& where, std::initializer_list<const char*> roles) {
    LinePattern lp;
    lp.source = j.at("regex").get<std::string>();
    try {
        lp.re = std::regex(lp.source, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw ParseError(where, 0, 0, std::string("bad regex: ") + e.what());
    }
    for (const auto& [role, idx] : j.at("groups").items()) lp.groups[role] = idx.get<int>();
    for (const char* role : roles)
        if (!lp.groups.count(role)) throw ParseError(where, 0, 0, std::string("missing group role '") + role + "'");
    return lp;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        start = end + 1;
    }
    return out;
}

bool skippable(std::string_view line, const FormatDescriptor& fmt) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) return true;
    line.remove_prefix(first);
    return std::any_of(fmt.comment_prefixes.begin(), fmt.comment_prefixes.end(),
                       [&](const std::string& prefix) { return !prefix.empty() && line.starts_with(prefix); });
}

long long to_ll(const std::string& s) {
    const Rational r = Rational::parse(s);
    if (!r.is_integer() || !r.num().fits_slong_p()) throw DomainError("'" + s + "' is not a machine integer");
    return r.num().get_si();
}

std::map<long, int> parse_hasse(const std::string& text, const FormatDescriptor& fmt, long long disc) {
    std::map<long, int> out;
    if (fmt.hasse_style == "signs") {
        const auto primes = bad_primes(Integer(static_cast<long>(disc)));
        if (text.size() != primes.size())
            throw DomainError("hasse column '" + text + "' needs " + std::to_string(primes.size()) + " signs");
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (text[i] != '+' && text[i] != '-') throw DomainError("bad hasse sign '" + std::string(1, text[i]) + "'");
            out[primes[i]] = text[i] == '+' ? 1 : -1;
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw DomainError("hasse entry '" + item + "' is not p:sign");
        const long p = static_cast<long>(to_ll(item.substr(0, colon)));
        const long long s = to_ll(item.substr(colon + 1));
        if (s != 1 && s != -1) throw DomainError("hasse sign must be +1 or -1 in '" + item + "'");
        if (!out.emplace(p, static_cast<int>(s)).second) throw DomainError("hasse prime repeated in '" + text + "'");
    }
    return out;
}

std::string genus_label(long long d, int id) { return std::to_string(d) + "#" + std::to_string(id); }

json rational_json(const Rational& r) { return json{{"num", r.num().get_str()}, {"den", r.den().get_str()}}; }

Rational rational_from_json(const json& j) {
    auto part = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    return Rational(Integer(part(j.at("num"))), Integer(part(j.at("den"))));
}

SourceSpan parse_span(const std::string& s) {
    const auto colon = s.rfind(':');
    const auto dash = s.rfind('-');
    if (colon == std::string::npos || dash == std::string::npos || dash < colon)
        throw DomainError("bad source span '" + s + "'");
    return {s.substr(0, colon), std::stoul(s.substr(colon + 1, dash - colon - 1)), std::stoul(s.substr(dash + 1))};
}

}  // namespace

// ---------------------------------------------------------------------------

std::string LinePattern::capture(const std::smatch& m, const std::string& role) const {
    const auto it = groups.find(role);
    if (it == groups.end()) return {};
    return m[it->second].str();
}

FormatDescriptor FormatDescriptor::parse(const std::string& json_text, const std::string& source) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(source, 0, e.byte, e.what());
    }
    FormatDescriptor fmt;
    try {
        fmt.name = j.value("name", "");
        if (j.contains("comment_prefixes")) fmt.comment_prefixes = j["comment_prefixes"].get<std::vector<std::string>>();
        fmt.coeff_separator = j.value("coeff_separator", fmt.coeff_separator);
        fmt.hasse_style = j.value("hasse_style", fmt.hasse_style);
        if (fmt.hasse_style != "pairs" && fmt.hasse_style != "signs")
            throw ParseError(source, 0, 0, "unknown hasse_style '" + fmt.hasse_style + "'");
        fmt.main_genus = read_pattern(j.at("main").at("genus"), source, {"discriminant", "genus_id", "mass"});
        fmt.main_form = read_pattern(j.at("main").at("form"), source, {"coeffs", "level", "hasse", "aut"});
        fmt.appendix_genus = read_pattern(j.at("appendix").at("genus"), source, {"discriminant", "genus_id"});
        fmt.appendix_entry = read_pattern(j.at("appendix").at("entry"), source, {"prime", "density", "splitting"});
    } catch (const json::exception& e) {
        throw ParseError(source, 0, 0, e.what());
    }
    return fmt;
}

FormatDescriptor FormatDescriptor::load(const std::filesystem::path& path) {
    return parse(read_file(path), path.string());
}

FormatDescriptor FormatDescriptor::reference() { return parse(kReferenceDescriptor, "reference"); }

std::string SourceSpan::to_string() const {
    return file + ":" + std::to_string(first_line) + "-" + std::to_string(last_line);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Raw files

RawDataset parse_main_table(std::string_view text, const FormatDescriptor& fmt, const std::string& source) {
    RawDataset out;
    const std::regex separator(fmt.coeff_separator);
    GenusRecord* current = nullptr;
    SourceSpan span;

    auto close = [&] {
        if (current == nullptr) return;
        if (current->forms.empty())
            throw StructuralError(source + ":" + std::to_string(span.first_line) + ": genus " + current->label() +
                                  " has no forms");
        out.manifest[{current->discriminant, current->genus_id}].main = span;
    };

    const auto lines = split_lines(text);
    for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
        const std::string line(lines[ln - 1]);
        if (skippable(line, fmt)) continue;
        std::smatch m;
        try {
            if (std::regex_match(line, m, fmt.main_genus.re)) {
                close();
                GenusRecord g;
                g.discriminant = to_ll(fmt.main_genus.capture(m, "discriminant"));
                g.genus_id = static_cast<int>(to_ll(fmt.main_genus.capture(m, "genus_id")));
                g.mass = Rational::parse(fmt.main_genus.capture(m, "mass"));
                if (!out.genera.empty() && out.genera.back().discriminant == g.discriminant &&
                    out.genera.back().genus_id + 1 != g.genus_id)
                    throw StructuralError(source + ":" + std::to_string(ln) + ": genus " + g.label() + " follows " +
                                          out.genera.back().label());
                out.genera.push_back(std::move(g));
                current = &out.genera.back();
                span = {source, ln, ln};
            } else if (std::regex_match(line, m, fmt.main_form.re)) {
                if (current == nullptr) throw ParseError(source, ln, 1, "form line before any genus header");
                Coeffs c{};
                const std::string coeffs = fmt.main_form.capture(m, "coeffs");
                std::size_t k = 0;
                for (std::sregex_token_iterator it(coeffs.begin(), coeffs.end(), separator, -1), end; it != end; ++it) {
                    if (it->length() == 0) continue;
                    if (k == c.size()) throw DomainError("more than 10 coefficients");
                    c[k++] = to_ll(*it);
                }
                if (k != c.size()) throw DomainError("expected 10 coefficients, got " + std::to_string(k));
                FormRecord f;
                f.form = QuadForm(c);
                f.level = to_ll(fmt.main_form.capture(m, "level"));
                f.hasse = parse_hasse(fmt.main_form.capture(m, "hasse"), fmt, current->discriminant);
                f.aut_count = to_ll(fmt.main_form.capture(m, "aut"));
                current->forms.push_back(std::move(f));
                span.last_line = ln;
            } else {
                throw ParseError(source, ln, 1, "unrecognized line: " + line);
            }
        } catch (const DomainError& e) {
            throw ParseError(source, ln, 1, e.what());
        }
    }
    close();
    return out;
}

std::vector<AppendixRecord> parse_appendix(std::string_view text, const FormatDescriptor& fmt,
                                           const std::string& source) {
    std::vector<AppendixRecord> out;
    const auto lines = split_lines(text);
    for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
        const std::string line(lines[ln - 1]);
        if (skippable(line, fmt)) continue;
        std::smatch m;
        try {
            if (std::regex_match(line, m, fmt.appendix_genus.re)) {
                AppendixRecord r;
                r.discriminant = to_ll(fmt.appendix_genus.capture(m, "discriminant"));
                r.genus_id = static_cast<int>(to_ll(fmt.appendix_genus.capture(m, "genus_id")));
                r.span = {source, ln, ln};
                out.push_back(std::move(r));
            } else if (std::regex_match(line, m, fmt.appendix_entry.re)) {
                if (out.empty()) throw ParseError(source, ln, 1, "appendix entry before any genus header");
                AppendixRecord& r = out.back();
                const long p = static_cast<long>(to_ll(fmt.appendix_entry.capture(m, "prime")));
                if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
                AppendixEntry e;
                e.density = Rational::parse(fmt.appendix_entry.capture(m, "density"));
                const int group = fmt.appendix_entry.groups.at("splitting");
                try {
                    e.splitting = parse_splitting_expr(m[group].str(), p);
                } catch (const ParseError& pe) {
                    throw ParseError(source, ln, static_cast<std::size_t>(m.position(group)) + pe.column(), pe.what());
                }
                if (!r.entries.emplace(p, std::move(e)).second)
                    throw ParseError(source, ln, 1, "prime " + std::to_string(p) + " repeated for genus " +
                                                         genus_label(r.discriminant, r.genus_id));
                r.span.last_line = ln;
            } else {
                throw ParseError(source, ln, 1, "unrecognized line: " + line);
            }
        } catch (const DomainError& e) {
            throw ParseError(source, ln, 1, e.what());
        }
    }
    return out;
}

RawDataset merge_dataset(const std::vector<RawDataset>& mains, const std::vector<AppendixRecord>& appendix) {
    RawDataset out;
    std::map<GenusKey, std::size_t> index;
    for (const auto& part : mains) {
        for (const auto& g : part.genera) {
            const GenusKey key{g.discriminant, g.genus_id};
            if (index.count(key)) throw StructuralError("genus " + g.label() + " appears twice in the main tables");
            index[key] = 0;
            out.genera.push_back(g);
        }
        for (const auto& [key, m] : part.manifest) out.manifest[key] = m;
        out.warnings.insert(out.warnings.end(), part.warnings.begin(), part.warnings.end());
    }
    std::sort(out.genera.begin(), out.genera.end(), [](const GenusRecord& a, const GenusRecord& b) {
        return std::tie(a.discriminant, a.genus_id) < std::tie(b.discriminant, b.genus_id);
    });
    for (std::size_t i = 0; i < out.genera.size(); ++i) {
        const auto& g = out.genera[i];
        index[{g.discriminant, g.genus_id}] = i;
        const int expected = (i > 0 && out.genera[i - 1].discriminant == g.discriminant) ? out.genera[i - 1].genus_id + 1 : 1;
        if (g.genus_id != expected)
            throw StructuralError("genus ordinals of discriminant " + std::to_string(g.discriminant) +
                                  " are not consecutive: expected #" + std::to_string(expected) + ", found " +
                                  g.label());
    }

    for (const auto& r : appendix) {
        const auto it = index.find({r.discriminant, r.genus_id});
        if (it == index.end())
            throw StructuralError(r.span.to_string() + ": appendix record " + genus_label(r.discriminant, r.genus_id) +
                                  " has no main-table genus");
        GenusRecord& g = out.genera[it->second];
        auto& m = out.manifest[{g.discriminant, g.genus_id}];
        if (m.appendix) throw StructuralError(r.span.to_string() + ": second appendix record for " + g.label());
        m.appendix = r.span;
        g.appendix = r.entries;
    }

    if (!appendix.empty()) {
        for (const auto& g : out.genera) {
            const auto required = bad_primes(Integer(static_cast<long>(g.discriminant)));
            std::vector<long> have;
            for (const auto& [p, e] : g.appendix) have.push_back(p);
            if (have == required) continue;
            auto list = [](const std::vector<long>& ps) {
                std::string s = "{";
                for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + std::to_string(ps[i]);
                return s + "}";
            };
            out.warnings.push_back(g.label() + ": appendix primes " + list(have) + " differ from required " +
                                   list(required));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Normalized dataset

std::string emit_normalized(const RawDataset& data) {
    json genera = json::array();
    for (const auto& g : data.genera) {
        json jg;
        jg["discriminant"] = g.discriminant;
        jg["genus_id"] = g.genus_id;
        jg["mass"] = rational_json(g.mass);
        jg["forms"] = json::array();
        for (const auto& f : g.forms) {
            json jf;
            jf["coeffs"] = f.form.coeffs();
            jf["level"] = f.level;
            jf["aut"] = f.aut_count;
            jf["hasse"] = json::object();
            for (const auto& [p, s] : f.hasse) jf["hasse"][std::to_string(p)] = s;
            jg["forms"].push_back(jf);
        }
        jg["appendix"] = json::object();
        for (const auto& [p, e] : g.appendix) {
            json blocks = json::array();
            for (const auto& item : e.splitting.items()) {
                const RationalMatrix m = item.matrix();
                json rows = json::array();
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    json row = json::array();
                    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
                    rows.push_back(row);
                }
                blocks.push_back(rows);
            }
            jg["appendix"][std::to_string(p)] = {
                {"density", rational_json(e.density)}, {"splitting", e.splitting.to_string()}, {"blocks", blocks}};
        }
        const auto it = data.manifest.find({g.discriminant, g.genus_id});
        json src = json::object();
        if (it != data.manifest.end()) {
            if (it->second.main) src["main"] = it->second.main->to_string();
            if (it->second.appendix) src["appendix"] = it->second.appendix->to_string();
        }
        jg["source"] = src;
        genera.push_back(jg);
    }
    json root;
    root["format"] = kDatasetFormat;
    root["genera"] = genera;
    root["warnings"] = data.warnings;
    return root.dump(1) + "\n";
}

RawDataset parse_normalized(std::string_view text, const std::string& source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source, 0, e.byte, e.what());
    }
    if (root.value("format", "") != kDatasetFormat)
        throw ParseError(source, 0, 0, "not a " + std::string(kDatasetFormat) + " document");
    RawDataset out;
    try {
        for (const auto& jg : root.at("genera")) {
            GenusRecord g;
            g.discriminant = jg.at("discriminant").get<long long>();
            g.genus_id = jg.at("genus_id").get<int>();
            g.mass = rational_from_json(jg.at("mass"));
            for (const auto& jf : jg.at("forms")) {
                FormRecord f;
                f.form = QuadForm(jf.at("coeffs").get<Coeffs>());
                f.level = jf.at("level").get<long long>();
                f.aut_count = jf.at("aut").get<long long>();
                for (const auto& [p, s] : jf.at("hasse").items()) f.hasse[std::stol(p)] = s.get<int>();
                g.forms.push_back(std::move(f));
            }
            for (const auto& [ps, je] : jg.at("appendix").items()) {
                const long p = std::stol(ps);
                AppendixEntry e;
                e.density = rational_from_json(je.at("density"));
                e.splitting = parse_splitting_expr(je.at("splitting").get<std::string>(), p);
                if (je.contains("blocks")) {
                    const auto items = e.splitting.items();
                    const auto& blocks = je["blocks"];
                    bool ok = blocks.size() == items.size();
                    for (std::size_t k = 0; ok && k < items.size(); ++k) {
                        const RationalMatrix m = items[k].matrix();
                        for (Eigen::Index i = 0; ok && i < m.rows(); ++i)
                            for (Eigen::Index j = 0; ok && j < m.cols(); ++j)
                                ok = Rational::parse(blocks[k].at(i).at(j).get<std::string>()) == m(i, j);
                    }
                    if (!ok) throw ParseError(source, 0, 0, g.label() + ": blocks disagree with splitting at p=" + ps);
                }
                g.appendix[p] = std::move(e);
            }
            ManifestEntry m;
            if (jg.contains("source")) {
                const auto& src = jg["source"];
                if (src.contains("main")) m.main = parse_span(src["main"].get<std::string>());
                if (src.contains("appendix")) m.appendix = parse_span(src["appendix"].get<std::string>());
            }
            out.manifest[{g.discriminant, g.genus_id}] = m;
            out.genera.push_back(std::move(g));
        }
        out.warnings = root.value("warnings", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw ParseError(source, 0, 0, e.what());
    } catch (const DomainError& e) {
        throw ParseError(source, 0, 0, e.what());
    }
    return out;
}

RawDataset load_normalized(const std::filesystem::path& path) { return parse_normalized(read_file(path), path.string()); }

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::pair<std::string, std::string> write_reference_layout(const RawDataset& data) {
    std::string main, app;
    for (const auto& g : data.genera) {
        main += "genus " + std::to_string(g.discriminant) + " " + std::to_string(g.genus_id) + " mass " +
                g.mass.to_string() + "\n";
        for (const auto& f : g.forms) {
            std::string coeffs, hasse;
            for (std::size_t i = 0; i < f.form.coeffs().size(); ++i)
                coeffs += (i ? "," : "") + std::to_string(f.form.coeffs()[i]);
            for (const auto& [p, s] : f.hasse)
                hasse += (hasse.empty() ? "" : ",") + std::to_string(p) + ":" + (s > 0 ? "+1" : "-1");
            main += "  form " + coeffs + " level " + std::to_string(f.level) + " hasse " + hasse + " aut " +
                    std::to_string(f.aut_count) + "\n";
        }
        if (g.appendix.empty()) continue;
        app += "genus " + std::to_string(g.discriminant) + " " + std::to_string(g.genus_id) + "\n";
        for (const auto& [p, e] : g.appendix)
            app += "  p " + std::to_string(p) + " density " + e.density.to_string() + " splitting " +
                   e.splitting.to_string() + "\n";
    }
    return {main, app};
}

}  // namespace nippaudit
