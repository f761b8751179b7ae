#include "nippaudit/autmass.hpp"

#include <cstdlib>
#include <functional>
#include <unordered_map>

#include "nippaudit/arith.hpp"
#include "nippaudit/calibration.hpp"
#include "nippaudit/errors.hpp"
#include "nippaudit/jordan.hpp"
#include "nippaudit/symbol.hpp"

namespace nippaudit {

// ---------------------------------------------------------------------------
// Automorphisms

namespace {

// floor(sqrt(x)) for a nonnegative rational.
Integer isqrt_floor(const Rational& x) {
    Integer q = x.num() / x.den();
    Integer s;
    mpz_sqrt(s.get_mpz_t(), q.get_mpz_t());
    return s;
}

// All nonzero x with x^t G x <= bound, by Fincke-Pohst over the rationals.
std::vector<IntVector> short_vectors(const IntMatrix& gram, long long bound) {
    const Eigen::Index n = gram.rows();
    RationalMatrix q = to_rational(gram);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            q(j, i) = q(i, j);
            q(i, j) = q(i, j) / q(i, i);
        }
        for (Eigen::Index k = i + 1; k < n; ++k)
            for (Eigen::Index l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
    }

    std::vector<IntVector> out;
    IntVector x = IntVector::Zero(n);
    std::function<void(Eigen::Index, const Rational&)> recurse = [&](Eigen::Index i, const Rational& remaining) {
        Rational c(0);
        for (Eigen::Index j = i + 1; j < n; ++j) c += q(i, j) * Rational(x(j));
        const Rational t = remaining / q(i, i);
        const Integer reach = isqrt_floor(t) + 1;
        const Rational centre = -c;
        const Integer lo = centre.num() / centre.den() - reach - 1;  // mpz division truncates
        const Integer hi = centre.num() / centre.den() + reach + 1;
        for (long xi = lo.get_si(); xi <= hi.get_si(); ++xi) {
            const Rational d = Rational(xi) + c;
            const Rational used = q(i, i) * d * d;
            if (used > remaining) continue;
            x(i) = xi;
            if (i == 0) {
                if (!x.isZero()) out.push_back(x);
            } else {
                recurse(i - 1, remaining - used);
            }
        }
        x(i) = 0;
    };
    recurse(n - 1, Rational(bound));
    return out;
}

// Pairwise size reduction: b_i -= k b_j whenever that shortens b_i. The
// trace drops strictly at each step, so this terminates.
IntMatrix pair_reduced(IntMatrix g) {
    const Eigen::Index n = g.rows();
    for (bool changed = true; changed;) {
        changed = false;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                // k = nearest integer to g_ij / g_jj
                const long long num = 2 * g(i, j) + g(j, j);
                const long long den = 2 * g(j, j);
                const long long k = num >= 0 ? num / den : -((-num + den - 1) / den);
                if (k == 0 || 2 * std::llabs(g(i, j)) <= g(j, j)) continue;
                g(i, i) += k * k * g(j, j) - 2 * k * g(i, j);
                for (Eigen::Index l = 0; l < n; ++l)
                    if (l != i) g(i, l) = g(l, i) = g(i, l) - k * g(j, l);
                changed = true;
            }
    }
    return g;
}

}  // namespace

std::int64_t aut_order(const IntMatrix& input) {
    if (!is_symmetric(input) || !is_positive_definite(to_rational(input)))
        throw NotPositiveDefinite("aut_order needs a positive definite Gram matrix");
    const IntMatrix gram = pair_reduced(input);
    const Eigen::Index n = gram.rows();
    long long bound = 0;
    for (Eigen::Index i = 0; i < n; ++i) bound = std::max(bound, gram(i, i));

    std::map<long long, std::vector<std::pair<IntVector, IntVector>>> by_norm;  // norm -> (v, G v)
    for (auto& v : short_vectors(gram, bound)) {
        IntVector gv = gram * v;
        by_norm[v.dot(gv)].emplace_back(std::move(v), std::move(gv));
    }

    std::vector<const std::vector<std::pair<IntVector, IntVector>>*> candidates(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto it = by_norm.find(gram(i, i));
        if (it == by_norm.end()) return 0;
        candidates[i] = &it->second;
    }

    std::vector<const IntVector*> chosen_gv(n);
    std::int64_t count = 0;
    std::function<void(Eigen::Index)> extend = [&](Eigen::Index i) {
        if (i == n) {
            ++count;
            return;
        }
        for (const auto& [v, gv] : *candidates[i]) {
            bool ok = true;
            for (Eigen::Index j = 0; j < i && ok; ++j) ok = v.dot(*chosen_gv[j]) == gram(j, i);
            if (!ok) continue;
            chosen_gv[i] = &gv;
            extend(i + 1);
        }
    };
    extend(0);
    return count;
}

std::int64_t aut_order(const QuadForm& form) { return aut_order(form.doubled_gram()); }

MassValue mass_from_aut(const GenusRecord& genus) {
    Rational total(0);
    for (const auto& f : genus.forms) total += Rational(1) / Rational(static_cast<long long>(aut_order(f.form)));
    return {total};
}

// ---------------------------------------------------------------------------
// Congruence oracle

std::uint64_t oracle_budget() {
    if (const char* env = std::getenv("NIPPAUDIT_ORACLE_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return 100'000'000ULL;
}

Integer congruence_count_oracle(const IntMatrix& gram, long p, int r, std::uint64_t budget) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (r < 1) throw DomainError("congruence_count_oracle needs r >= 1");
    const Eigen::Index n = gram.rows();
    Integer candidates;
    mpz_ui_pow_ui(candidates.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n * n * r));
    if (candidates > Integer(static_cast<unsigned long>(budget)))
        throw BudgetExceeded("congruence oracle: " + candidates.get_str() + " candidates exceed budget " +
                             std::to_string(budget));

    long long q = 1;
    for (int i = 0; i < r; ++i) q *= p;
    auto mod = [q](long long x) { return ((x % q) + q) % q; };

    // Every vector mod q, bucketed by norm.
    std::unordered_map<long long, std::vector<std::pair<IntVector, IntVector>>> by_norm;
    IntVector v = IntVector::Zero(n);
    for (;;) {
        IntVector gv = gram * v;
        for (Eigen::Index i = 0; i < n; ++i) gv(i) = mod(gv(i));
        by_norm[mod(v.dot(gv))].emplace_back(v, gv);
        Eigen::Index k = 0;
        while (k < n && ++v(k) == q) v(k++) = 0;
        if (k == n) break;
    }

    std::vector<const std::vector<std::pair<IntVector, IntVector>>*> columns(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto it = by_norm.find(mod(gram(i, i)));
        if (it == by_norm.end()) return 0;
        columns[i] = &it->second;
    }
    std::vector<const IntVector*> chosen(n);
    Integer count = 0;
    std::function<void(Eigen::Index)> extend = [&](Eigen::Index i) {
        if (i == n) {
            ++count;
            return;
        }
        for (const auto& [x, gx] : *columns[i]) {
            bool ok = true;
            for (Eigen::Index j = 0; j < i && ok; ++j) ok = mod(x.dot(*chosen[j]) - gram(j, i)) == 0;
            if (!ok) continue;
            chosen[i] = &gx;
            extend(i + 1);
        }
    };
    extend(0);
    return count;
}

// ---------------------------------------------------------------------------
// Local densities

namespace {

// Mass factor of a species (0 for empty constituents).
Rational species_factor(int species, long p) {
    if (species == 0) return Rational(1);
    const Rational pinv = Rational(1) / Rational(p);
    Rational prod(2);
    const int s = std::abs(species);
    if (s % 2 == 1) {
        for (int k = 1; k <= (s - 1) / 2; ++k) prod *= Rational(1) - pow(pinv, 2 * k);
    } else {
        for (int k = 1; k <= s / 2 - 1; ++k) prod *= Rational(1) - pow(pinv, 2 * k);
        prod *= species > 0 ? Rational(1) - pow(pinv, s / 2) : Rational(1) + pow(pinv, s / 2);
    }
    return Rational(1) / prod;
}

Rational species_product_odd(const JordanSplitting& split) {
    const long p = split.prime;
    const int minus_one = legendre_symbol(Integer(-1), p);
    Rational prod(1);
    for (const auto& e : odd_symbol_of(split).entries) {
        int species = e.dim;
        if (e.dim % 2 == 0) {
            const int expected = (e.dim / 2) % 2 == 0 ? 1 : minus_one;
            if (e.sign != expected) species = -e.dim;
        }
        prod *= species_factor(species, p);
    }
    return prod;
}

Rational species_product_2(const JordanSplitting& split) {
    const Symbol2 sym = symbol2_of(split);
    const auto& cs = sym.constituents;
    const int lo = cs.front().scale_exp - 1;
    const int hi = cs.back().scale_exp + 1;
    std::vector<Symbol2Entry> dense;
    for (int k = lo; k <= hi; ++k) {
        Symbol2Entry e;
        e.scale_exp = k;
        for (const auto& c : cs)
            if (c.scale_exp == k) e = c;
        dense.push_back(e);
    }

    Rational prod(1);
    int adjacent_odd_pairs = 0, even_dims = 0;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        const auto& e = dense[i];
        if (!e.odd) even_dims += e.dim;
        if (i > 0 && e.odd && dense[i - 1].odd) ++adjacent_odd_pairs;

        const bool free = (i == 0 || !dense[i - 1].odd) && (i + 1 == dense.size() || !dense[i + 1].odd);
        const int octane = (e.oddity + (e.sign < 0 ? 4 : 0)) % 8;
        const int t = (!e.odd || e.dim % 2 == 1) ? e.dim / 2 : e.dim / 2 - 1;
        int species;
        if (free && (octane == 0 || octane == 1 || octane == 7)) species = 2 * t;
        else if (free && (octane == 3 || octane == 4 || octane == 5)) species = -2 * t;
        else species = 2 * t + 1;
        prod *= species_factor(species, 2);
    }
    return prod * pow(Rational(2), adjacent_odd_pairs - even_dims);
}

}  // namespace

Rational local_density(const RationalMatrix& gram, long p) {
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
            if (!gram(i, j).is_zero() && valuation(gram(i, j).den(), p) > 0)
                throw DomainError("local_density needs a " + std::to_string(p) + "-integral Gram matrix");
    const JordanSplitting split = jordan_split(gram, p);
    const auto cs = split.constituents();

    // p^(((n+1) v(det) - sum_{i<j} (s_j - s_i) n_i n_j) / 2), regrouped per constituent.
    long exponent = 0;
    int above = split.dimension();
    for (const auto& c : cs) {
        const long ni = c.dimension();
        above -= static_cast<int>(ni);
        exponent += c.scale_exp * ni * (ni + 1) / 2 + static_cast<long>(c.scale_exp) * ni * above;
    }
    const Rational power = pow(Rational(p), static_cast<int>(exponent));
    const Rational denom = p == 2 ? species_product_2(split) : species_product_odd(split);
    return power / denom;
}

Rational local_density(const QuadForm& form, long p) { return local_density(to_rational(form.doubled_gram()), p); }

std::string valuation_profile(const QuadForm& form, long p) {
    std::string out;
    for (const auto& c : jordan_split(to_rational(form.doubled_gram()), p).constituents()) {
        if (!out.empty()) out += ',';
        out += std::to_string(c.scale_exp) + ":" + std::to_string(c.dimension());
    }
    return out;
}

Rational nipp_density(const QuadForm& form, long p, const CalibrationMap& calibration) {
    return local_density(form, p) * calibration.ratio(p, valuation_profile(form, p));
}

DensityValue density_value(const QuadForm& form, long p, const CalibrationMap* calibration) {
    DensityValue d{p, local_density(form, p), std::nullopt};
    if (calibration != nullptr) d.nipp_scaled = nipp_density(form, p, *calibration);
    return d;
}

// ---------------------------------------------------------------------------
// Mass

long fundamental_discriminant(long d) {
    if (d <= 0) throw DomainError("fundamental_discriminant needs d > 0");
    long squarefree = 1;
    long rest = d;
    for (long q = 2; q * q <= rest; ++q) {
        int e = 0;
        while (rest % q == 0) {
            rest /= q;
            ++e;
        }
        if (e % 2 == 1) squarefree *= q;
    }
    squarefree *= rest;
    if (squarefree == 1) return 1;
    return squarefree % 4 == 1 ? squarefree : 4 * squarefree;
}

Rational bernoulli2_chi(long f) {
    if (f == 1) return Rational(1, 6);
    Rational sum(0);
    const Rational ff(f);
    for (long a = 1; a <= f; ++a) {
        const int chi = kronecker_symbol(Integer(f), Integer(a));
        if (chi == 0) continue;
        const Rational x = Rational(a) / ff;
        sum += Rational(chi) * (x * x - x + Rational(1, 6));
    }
    return ff * sum;
}

MassValue siegel_mass(const QuadForm& form, const std::map<long, Rational>& alpha_override) {
    const long long d = discriminant_of(form);
    const long f = fundamental_discriminant(d);
    const Rational m2 = Rational(static_cast<long long>(d)) / Rational(f);
    if (!m2.is_integer() || !mpz_perfect_square_p(m2.num().get_mpz_t()))
        throw DomainError("discriminant " + std::to_string(d) + " is not f*m^2");
    Integer m;
    mpz_sqrt(m.get_mpz_t(), m2.num().get_mpz_t());

    Rational mass = Rational(f) * pow(Rational(m), 5) * bernoulli2_chi(f) / Rational(6);
    for (long p : bad_primes(Integer(static_cast<long>(d)))) {
        const int chi = f == 1 ? 1 : kronecker_symbol(Integer(f), Integer(p));
        const Rational pinv2 = Rational(1, p * p);
        auto it = alpha_override.find(p);
        const Rational alpha = it != alpha_override.end() ? it->second : local_density(form, p);
        mass *= (Rational(1) - pinv2) * (Rational(1) - Rational(chi) * pinv2) * Rational(2) / alpha;
    }
    return {mass};
}

MassValue siegel_mass(const GenusRecord& genus, const std::map<long, Rational>& alpha_override) {
    if (genus.forms.empty()) throw DomainError("siegel_mass of genus " + genus.label() + " without forms");
    return siegel_mass(genus.forms.front().form, alpha_override);
}

}  // namespace nippaudit
