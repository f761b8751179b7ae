#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "nippaudit/matrix.hpp"
#include "nippaudit/model.hpp"

namespace nippaudit {

class CalibrationMap;

struct DensityValue {
    long prime = 0;
    Rational alpha;
    std::optional<Rational> nipp_scaled;
};

struct MassValue {
    Rational value;

    friend bool operator==(const MassValue&, const MassValue&) = default;
};

// |O(L)| for the lattice with Gram matrix M. Works on any positive definite
// integral Gram matrix; the QuadForm overload uses 2M (same group).
std::int64_t aut_order(const IntMatrix& gram);
std::int64_t aut_order(const QuadForm& form);

// Sum of 1/aut_order over the forms of the genus.
MassValue mass_from_aut(const GenusRecord& genus);

// Candidate budget for congruence_count_oracle: NIPPAUDIT_ORACLE_BUDGET, else 10^8.
std::uint64_t oracle_budget();

// #{X mod p^r : X^t G X = G mod p^r}. Refuses (BudgetExceeded) when the
// naive candidate count p^(n*n*r) is above `budget`.
Integer congruence_count_oracle(const IntMatrix& gram, long p, int r, std::uint64_t budget = oracle_budget());

// Stable value of congruence_count(p, r) / p^(r n(n-1)/2), from the Jordan
// splitting. The QuadForm overload evaluates it on 2M.
Rational local_density(const RationalMatrix& gram, long p);
Rational local_density(const QuadForm& form, long p);

// Jordan scales and dimensions of 2M at p, e.g. "0:2,1:1,3:1".
std::string valuation_profile(const QuadForm& form, long p);

// local_density rescaled into the appendix normalization. Throws Uncalibrated.
Rational nipp_density(const QuadForm& form, long p, const CalibrationMap& calibration);
DensityValue density_value(const QuadForm& form, long p, const CalibrationMap* calibration = nullptr);

// Generalized Bernoulli number B_{2,chi} for chi = (f/.), f a fundamental discriminant (f = 1: B_2).
Rational bernoulli2_chi(long f);
// Fundamental discriminant of Q(sqrt(d)), 1 for squares.
long fundamental_discriminant(long d);

// Mass from the local densities of the first form. `alpha_override` replaces
// the computed alpha_p at the given primes.
MassValue siegel_mass(const QuadForm& form, const std::map<long, Rational>& alpha_override = {});
MassValue siegel_mass(const GenusRecord& genus, const std::map<long, Rational>& alpha_override = {});

}  // namespace nippaudit
