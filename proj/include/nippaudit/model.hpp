#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nippaudit/arith.hpp"
#include "nippaudit/matrix.hpp"
#include "nippaudit/splitting_expr.hpp"

namespace nippaudit {

// Coefficients in table order [f11, f22, f33, f44, f12, f13, f23, f14, f24, f34].
using Coeffs = std::array<long long, 10>;

RationalMatrix gram_from_coeffs(const Coeffs& coeffs);
// 2M: integral with even diagonal.
IntMatrix doubled_gram_from_coeffs(const Coeffs& coeffs);
// Inverse of doubled_gram_from_coeffs; requires an integral symmetric 4x4 matrix with even diagonal.
Coeffs coeffs_from_doubled_gram(const IntMatrix& doubled);

class QuadForm {
public:
    QuadForm() = default;
    explicit QuadForm(const Coeffs& coeffs) : coeffs_(coeffs) {}
    static QuadForm from_doubled_gram(const IntMatrix& doubled) { return QuadForm(coeffs_from_doubled_gram(doubled)); }

    const Coeffs& coeffs() const { return coeffs_; }
    RationalMatrix gram() const { return gram_from_coeffs(coeffs_); }
    IntMatrix doubled_gram() const { return doubled_gram_from_coeffs(coeffs_); }
    bool is_primitive() const;
    std::string to_string() const;

    friend bool operator==(const QuadForm&, const QuadForm&) = default;

private:
    Coeffs coeffs_{};
};

// Parses "a,b,c,..." (exactly 10 integers).
QuadForm parse_coeffs(std::string_view text);

// det(2M). Throws NotPositiveDefinite when det(2M) <= 0.
long long discriminant_of(const QuadForm& form);

template <typename Derived>
bool is_positive_definite(const Eigen::MatrixBase<Derived>& gram) {
    const Eigen::Index n = gram.rows();
    if (n == 0 || gram.cols() != n) return false;
    for (Eigen::Index k = 1; k <= n; ++k)
        if (determinant(gram.topLeftCorner(k, k)).sign() <= 0) return false;
    return true;
}
bool is_positive_definite(const QuadForm& form);

// Smallest N > 0 with N * (2M)^-1 integral and of even diagonal.
long long compute_level(const QuadForm& form);

// Diagonal of a rational diagonalization of a symmetric matrix (symmetric
// Gaussian elimination; off-diagonal pivots when a diagonal pivot vanishes).
// Throws DegenerateForm for singular input.
std::vector<Rational> diagonalize(const RationalMatrix& gram);

enum class HasseConvention {
    PairsStrict,    // prod_{i<j} (a_i, a_j)_p
    PairsWithSelf,  // prod_{i<=j} (a_i, a_j)_p
};

int hasse_symbol(const RationalMatrix& gram, long p, HasseConvention convention = HasseConvention::PairsStrict);
int hasse_symbol_of_form(const QuadForm& form, long p,
                         HasseConvention convention = HasseConvention::PairsStrict);

std::string to_string(HasseConvention convention);
HasseConvention parse_hasse_convention(std::string_view text);

struct FormRecord {
    QuadForm form;
    long long level = 0;
    std::map<long, int> hasse;
    long long aut_count = 0;

    friend bool operator==(const FormRecord&, const FormRecord&) = default;
};

struct AppendixEntry {
    Rational density;
    SplittingExpr splitting;

    friend bool operator==(const AppendixEntry&, const AppendixEntry&) = default;
};

struct GenusRecord {
    long long discriminant = 0;
    int genus_id = 0;
    std::vector<FormRecord> forms;
    Rational mass;
    std::map<long, AppendixEntry> appendix;

    std::string label() const { return std::to_string(discriminant) + "#" + std::to_string(genus_id); }

    friend bool operator==(const GenusRecord&, const GenusRecord&) = default;
};

}  // namespace nippaudit
