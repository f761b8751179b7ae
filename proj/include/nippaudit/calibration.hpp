#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nippaudit/rational.hpp"

namespace nippaudit {

struct GenusRecord;

// Ratio (appendix density) / alpha_p, keyed by prime class ("2" or "odd")
// and the Jordan valuation profile of 2M at p. A class default covers
// profiles without their own entry.
class CalibrationMap {
public:
    struct ClassEntry {
        std::optional<Rational> fallback;
        std::map<std::string, Rational> profiles;

        friend bool operator==(const ClassEntry&, const ClassEntry&) = default;
    };

    // p = 2 halved, odd primes uncalibrated.
    static CalibrationMap builtin();
    static CalibrationMap load(const std::filesystem::path& path);
    static CalibrationMap parse(const std::string& json_text);

    std::string to_json() const;
    void save(const std::filesystem::path& path) const;

    // Throws Uncalibrated when neither the profile nor the class default is known.
    Rational ratio(long p, const std::string& profile) const;
    bool covers(long p, const std::string& profile) const;

    void set_default(const std::string& prime_class, const Rational& r) { classes_[prime_class].fallback = r; }
    void set_profile(const std::string& prime_class, const std::string& profile, const Rational& r) {
        classes_[prime_class].profiles[profile] = r;
    }
    const std::map<std::string, ClassEntry>& classes() const { return classes_; }

    friend bool operator==(const CalibrationMap&, const CalibrationMap&) = default;

private:
    std::map<std::string, ClassEntry> classes_;
};

std::string prime_class(long p);

struct CalibrationFit {
    CalibrationMap map;
    std::size_t samples = 0;
    // Profiles whose observed ratios disagree, with the distinct ratios seen.
    std::map<std::string, std::vector<Rational>> conflicts;
};

// Fits the ratio on every appendix density of genera with disc <= disc_max,
// using the first form of each genus.
CalibrationFit fit_calibration(const std::vector<GenusRecord>& genera, long long disc_max = 1213);

}  // namespace nippaudit
