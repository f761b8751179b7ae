#include "nippaudit/model.hpp"

#include <numeric>
#include <sstream>

#include "nippaudit/errors.hpp"

namespace nippaudit {

namespace {

// (row, col) of the off-diagonal coefficients f12, f13, f23, f14, f24, f34.
constexpr std::array<std::pair<int, int>, 6> kOffDiagonal{{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}}};

}  // namespace

IntMatrix doubled_gram_from_coeffs(const Coeffs& coeffs) {
    IntMatrix s = IntMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) s(i, i) = 2 * coeffs[i];
    for (std::size_t k = 0; k < kOffDiagonal.size(); ++k) {
        const auto [i, j] = kOffDiagonal[k];
        s(i, j) = coeffs[4 + k];
        s(j, i) = coeffs[4 + k];
    }
    return s;
}

RationalMatrix gram_from_coeffs(const Coeffs& coeffs) {
    RationalMatrix m = to_rational(doubled_gram_from_coeffs(coeffs));
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) m(i, j) /= Rational(2);
    return m;
}

Coeffs coeffs_from_doubled_gram(const IntMatrix& doubled) {
    if (doubled.rows() != 4 || doubled.cols() != 4 || !is_symmetric(doubled))
        throw DomainError("expected a symmetric 4x4 matrix");
    Coeffs c{};
    for (int i = 0; i < 4; ++i) {
        if (doubled(i, i) % 2 != 0) throw DomainError("doubled Gram matrix must have even diagonal");
        c[i] = doubled(i, i) / 2;
    }
    for (std::size_t k = 0; k < kOffDiagonal.size(); ++k) c[4 + k] = doubled(kOffDiagonal[k].first, kOffDiagonal[k].second);
    return c;
}

bool QuadForm::is_primitive() const {
    long long g = 0;
    for (long long c : coeffs_) g = std::gcd(g, c);
    return g == 1;
}

std::string QuadForm::to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(coeffs_[i]);
    }
    return out + "]";
}

QuadForm parse_coeffs(std::string_view text) {
    Coeffs c{};
    std::size_t count = 0;
    std::string token;
    auto flush = [&] {
        if (token.empty()) throw DomainError("empty coefficient in '" + std::string(text) + "'");
        if (count == c.size()) throw DomainError("more than 10 coefficients in '" + std::string(text) + "'");
        const Rational v = Rational::parse(token);
        if (!v.is_integer() || !v.num().fits_slong_p())
            throw DomainError("coefficient '" + token + "' is not a machine integer");
        c[count++] = v.num().get_si();
        token.clear();
    };
    for (char ch : text) {
        if (ch == ',' ) flush();
        else if (ch != '[' && ch != ']' && ch != ' ') token += ch;
    }
    flush();
    if (count != c.size()) throw DomainError("expected 10 coefficients, got " + std::to_string(count));
    return QuadForm(c);
}

long long discriminant_of(const QuadForm& form) {
    const Rational d = determinant(form.doubled_gram());
    if (d.sign() <= 0) throw NotPositiveDefinite("form " + form.to_string() + " has det(2M) = " + d.to_string());
    return d.num().get_si();
}

bool is_positive_definite(const QuadForm& form) { return is_positive_definite(form.gram()); }

long long compute_level(const QuadForm& form) {
    const RationalMatrix s = to_rational(form.doubled_gram());
    if (determinant(s).is_zero()) throw DegenerateForm("level of degenerate form " + form.to_string());
    const RationalMatrix inv = inverse(s);
    Integer level = 1;
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            const Rational& r = inv(i, j);
            Integer need = r.den();
            if (i == j && r.num() % 2 != 0) need *= 2;
            mpz_lcm(level.get_mpz_t(), level.get_mpz_t(), need.get_mpz_t());
        }
    }
    return level.get_si();
}

std::vector<Rational> diagonalize(const RationalMatrix& gram) {
    RationalMatrix g = gram;
    const Eigen::Index n = g.rows();
    std::vector<Rational> diag;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = k;
        while (pivot < n && g(pivot, pivot).is_zero()) ++pivot;
        if (pivot == n) {
            // All remaining diagonal entries vanish: e_i += e_j for a nonzero g(i, j).
            Eigen::Index pi = -1, pj = -1;
            for (Eigen::Index i = k; i < n && pi < 0; ++i)
                for (Eigen::Index j = i + 1; j < n; ++j)
                    if (!g(i, j).is_zero()) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi < 0) throw DegenerateForm("diagonalize: singular matrix");
            g.row(pi) += g.row(pj);
            g.col(pi) += g.col(pj);
            pivot = pi;
        }
        if (pivot != k) {
            g.row(pivot).swap(g.row(k));
            g.col(pivot).swap(g.col(k));
        }
        const Rational a = g(k, k);
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (g(i, k).is_zero()) continue;
            const Rational f = g(i, k) / a;
            for (Eigen::Index j = k + 1; j < n; ++j) g(i, j) -= f * g(k, j);
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            g(i, k) = Rational(0);
            g(k, i) = Rational(0);
        }
        diag.push_back(a);
    }
    return diag;
}

int hasse_symbol(const RationalMatrix& gram, long p, HasseConvention convention) {
    const std::vector<Rational> a = diagonalize(gram);
    int s = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t first = convention == HasseConvention::PairsWithSelf ? i : i + 1;
        for (std::size_t j = first; j < a.size(); ++j) s *= hilbert_symbol(a[i], a[j], p);
    }
    return s;
}

int hasse_symbol_of_form(const QuadForm& form, long p, HasseConvention convention) {
    return hasse_symbol(form.gram(), p, convention);
}

std::string to_string(HasseConvention convention) {
    return convention == HasseConvention::PairsStrict ? "i<j" : "i<=j";
}

HasseConvention parse_hasse_convention(std::string_view text) {
    if (text == "i<j" || text == "strict") return HasseConvention::PairsStrict;
    if (text == "i<=j" || text == "with-self") return HasseConvention::PairsWithSelf;
    throw DomainError("unknown Hasse convention '" + std::string(text) + "'");
}

}  // namespace nippaudit
