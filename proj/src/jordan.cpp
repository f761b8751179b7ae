#include "nippaudit/jordan.hpp"

#include <limits>

#include "nippaudit/arith.hpp"
#include "nippaudit/errors.hpp"

namespace nippaudit {

int JordanConstituent::dimension() const {
    int n = 0;
    for (const auto& u : units) n += static_cast<int>(u.rows());
    return n;
}

RationalMatrix JordanConstituent::unit_gram() const { return block_diagonal(units); }

int JordanSplitting::dimension() const {
    int n = 0;
    for (const auto& b : blocks) n += b.dimension();
    return n;
}

std::vector<JordanConstituent> JordanSplitting::constituents() const {
    std::vector<JordanConstituent> out;
    for (const auto& b : blocks) {
        if (out.empty() || out.back().scale_exp != b.scale_exp) out.push_back({b.scale_exp, {}});
        out.back().units.push_back(b.unit);
    }
    return out;
}

namespace {

constexpr int kInfinity = std::numeric_limits<int>::max();

int val(const Rational& x, long p) { return x.is_zero() ? kInfinity : valuation(x, p); }

// Removes rows/columns `idx` (sorted ascending) from g.
RationalMatrix drop(const RationalMatrix& g, const std::vector<Eigen::Index>& idx) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) keep.push_back(i);
    RationalMatrix out(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) out(i, j) = g(keep[i], keep[j]);
    return out;
}

}  // namespace

JordanSplitting jordan_split(const RationalMatrix& gram, long p) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (!is_symmetric(gram)) throw DomainError("jordan_split: Gram matrix is not symmetric");
    if (determinant(gram).is_zero()) throw DegenerateForm("jordan_split: degenerate Gram matrix");

    JordanSplitting out{p, {}};
    RationalMatrix g = gram;
    while (g.rows() > 0) {
        const Eigen::Index n = g.rows();
        int diag_min = kInfinity;
        Eigen::Index diag_at = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int v = val(g(i, i), p);
            if (v < diag_min) {
                diag_min = v;
                diag_at = i;
            }
        }
        int off_min = kInfinity;
        Eigen::Index off_i = -1, off_j = -1;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const int v = val(g(i, j), p);
                if (v < off_min) {
                    off_min = v;
                    off_i = i;
                    off_j = j;
                }
            }

        if (diag_min <= off_min) {
            const Rational a = g(diag_at, diag_at);
            for (Eigen::Index i = 0; i < n; ++i) {
                if (i == diag_at || g(i, diag_at).is_zero()) continue;
                const Rational f = g(i, diag_at) / a;
                for (Eigen::Index j = 0; j < n; ++j)
                    if (j != diag_at && i != diag_at) g(i, j) -= f * g(diag_at, j);
            }
            RationalMatrix unit(1, 1);
            unit(0, 0) = unit_part(a, p);
            out.blocks.push_back({diag_min, unit});
            g = drop(g, {diag_at});
            continue;
        }

        if (p != 2) {
            // Odd p: e_i += e_j makes the diagonal reach the minimal valuation.
            g.row(off_i) += g.row(off_j);
            g.col(off_i) += g.col(off_j);
            continue;
        }

        // p = 2 with every diagonal entry of larger valuation: split a binary block.
        const Eigen::Index i0 = off_i, j0 = off_j;
        const Rational a = g(i0, i0), b = g(i0, j0), c = g(j0, j0);
        const Rational det = a * c - b * b;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == i0 || k == j0) continue;
            const Rational x = g(k, i0), y = g(k, j0);
            if (x.is_zero() && y.is_zero()) continue;
            // Coefficients of the projection of e_k onto span(e_i0, e_j0).
            const Rational s = (c * x - b * y) / det;
            const Rational t = (a * y - b * x) / det;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i0 || j == j0) continue;
                g(k, j) -= s * g(i0, j) + t * g(j0, j);
            }
        }
        // The row updates above act on rows only; restore symmetry from the upper triangle.
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = k + 1; j < n; ++j)
                if (k != i0 && k != j0 && j != i0 && j != j0) g(j, k) = g(k, j);

        const Rational scale = pow(Rational(2), off_min);
        RationalMatrix unit(2, 2);
        unit(0, 0) = a / scale;
        unit(0, 1) = b / scale;
        unit(1, 0) = b / scale;
        unit(1, 1) = c / scale;
        out.blocks.push_back({off_min, unit});
        g = drop(g, {i0, j0});
    }
    return out;
}

JordanSplitting jordan_split(const QuadForm& form, long p) { return jordan_split(form.gram(), p); }

RationalMatrix reassemble(const JordanSplitting& split) {
    std::vector<RationalMatrix> parts;
    for (const auto& b : split.blocks) {
        RationalMatrix m = b.unit;
        const Rational s = pow(Rational(split.prime), b.scale_exp);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) *= s;
        parts.push_back(m);
    }
    return block_diagonal(parts);
}

}  // namespace nippaudit
