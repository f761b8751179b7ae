#include "nippaudit/matrix.hpp"

#include "nippaudit/errors.hpp"

namespace nippaudit {

RationalMatrix inverse(const RationalMatrix& m) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw DomainError("inverse of a non-square matrix");
    RationalMatrix a = m;
    RationalMatrix inv = RationalMatrix::Identity(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index pivot = c;
        while (pivot < n && a(pivot, c).is_zero()) ++pivot;
        if (pivot == n) throw DegenerateForm("singular matrix");
        if (pivot != c) {
            a.row(pivot).swap(a.row(c));
            inv.row(pivot).swap(inv.row(c));
        }
        const Rational d = a(c, c);
        for (Eigen::Index k = 0; k < n; ++k) {
            a(c, k) /= d;
            inv(c, k) /= d;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == c || a(r, c).is_zero()) continue;
            const Rational f = a(r, c);
            for (Eigen::Index k = 0; k < n; ++k) {
                a(r, k) -= f * a(c, k);
                inv(r, k) -= f * inv(c, k);
            }
        }
    }
    return inv;
}

RationalMatrix block_diagonal(const std::vector<RationalMatrix>& blocks) {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.rows();
    RationalMatrix out = RationalMatrix::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
    }
    return out;
}

}  // namespace nippaudit
