#include "nippaudit/calibration.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nippaudit/autmass.hpp"
#include "nippaudit/errors.hpp"
#include "nippaudit/model.hpp"

namespace nippaudit {

namespace {

constexpr const char* kFormat = "nippaudit-calibration/1";

}  // namespace

std::string prime_class(long p) { return p == 2 ? "2" : "odd"; }

CalibrationMap CalibrationMap::builtin() {
    CalibrationMap m;
    m.set_default("2", Rational(1, 2));
    return m;
}

CalibrationMap CalibrationMap::parse(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("calibration", 0, e.byte, e.what());
    }
    if (j.value("format", "") != kFormat) throw ParseError("calibration", 0, 0, "expected format " + std::string(kFormat));
    CalibrationMap m;
    for (const auto& [cls, entry] : j.at("classes").items()) {
        if (cls != "2" && cls != "odd") throw ParseError("calibration", 0, 0, "unknown prime class '" + cls + "'");
        auto& e = m.classes_[cls];
        if (entry.contains("default") && !entry["default"].is_null())
            e.fallback = Rational::parse(entry["default"].get<std::string>());
        if (entry.contains("profiles"))
            for (const auto& [profile, r] : entry["profiles"].items()) e.profiles[profile] = Rational::parse(r.get<std::string>());
    }
    return m;
}

CalibrationMap CalibrationMap::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read calibration file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string CalibrationMap::to_json() const {
    nlohmann::json j;
    j["format"] = kFormat;
    j["classes"] = nlohmann::json::object();
    for (const auto& [cls, entry] : classes_) {
        nlohmann::json e;
        e["default"] = entry.fallback ? nlohmann::json(entry.fallback->to_string()) : nlohmann::json(nullptr);
        e["profiles"] = nlohmann::json::object();
        for (const auto& [profile, r] : entry.profiles) e["profiles"][profile] = r.to_string();
        j["classes"][cls] = e;
    }
    return j.dump(2) + "\n";
}

void CalibrationMap::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write calibration file " + path.string());
    out << to_json();
}

bool CalibrationMap::covers(long p, const std::string& profile) const {
    auto it = classes_.find(prime_class(p));
    if (it == classes_.end()) return false;
    return it->second.profiles.count(profile) > 0 || it->second.fallback.has_value();
}

Rational CalibrationMap::ratio(long p, const std::string& profile) const {
    auto it = classes_.find(prime_class(p));
    if (it != classes_.end()) {
        auto pit = it->second.profiles.find(profile);
        if (pit != it->second.profiles.end()) return pit->second;
        if (it->second.fallback) return *it->second.fallback;
    }
    throw Uncalibrated("no density calibration for p = " + std::to_string(p) + ", profile " + profile);
}

CalibrationFit fit_calibration(const std::vector<GenusRecord>& genera, long long disc_max) {
    // class -> profile -> distinct ratios
    std::map<std::string, std::map<std::string, std::set<Rational>>> seen;
    CalibrationFit fit;
    for (const auto& g : genera) {
        if (g.discriminant > disc_max || g.forms.empty()) continue;
        const QuadForm& form = g.forms.front().form;
        for (const auto& [p, entry] : g.appendix) {
            const Rational r = entry.density / local_density(form, p);
            seen[prime_class(p)][valuation_profile(form, p)].insert(r);
            ++fit.samples;
        }
    }
    for (const auto& [cls, profiles] : seen) {
        std::set<Rational> all;
        for (const auto& [profile, ratios] : profiles) all.insert(ratios.begin(), ratios.end());
        // A single ratio across the class collapses to a default.
        if (all.size() == 1) {
            fit.map.set_default(cls, *all.begin());
            continue;
        }
        for (const auto& [profile, ratios] : profiles) {
            if (ratios.size() == 1) fit.map.set_profile(cls, profile, *ratios.begin());
            else fit.conflicts[cls + "/" + profile] = {ratios.begin(), ratios.end()};
        }
    }
    return fit;
}

}  // namespace nippaudit
