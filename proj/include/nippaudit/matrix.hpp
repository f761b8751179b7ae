#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nippaudit/rational.hpp"

namespace nippaudit {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RationalMatrix = Matrix<Rational>;
using IntMatrix = Matrix<long long>;
using IntVector = Vector<long long>;

template <typename Derived>
RationalMatrix to_rational(const Eigen::MatrixBase<Derived>& m) {
    RationalMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(static_cast<long long>(m(i, j)));
    return out;
}

// Exact determinant by Gaussian elimination over the rationals.
template <typename Derived>
Rational determinant(const Eigen::MatrixBase<Derived>& m) {
    RationalMatrix a = [&] {
        if constexpr (std::is_same_v<typename Derived::Scalar, Rational>) {
            return RationalMatrix(m);
        } else {
            return to_rational(m);
        }
    }();
    const Eigen::Index n = a.rows();
    Rational det(1);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index pivot = c;
        while (pivot < n && a(pivot, c).is_zero()) ++pivot;
        if (pivot == n) return Rational(0);
        if (pivot != c) {
            a.row(pivot).swap(a.row(c));
            det = -det;
        }
        det *= a(c, c);
        for (Eigen::Index r = c + 1; r < n; ++r) {
            if (a(r, c).is_zero()) continue;
            const Rational f = a(r, c) / a(c, c);
            for (Eigen::Index k = c; k < n; ++k) a(r, k) -= f * a(c, k);
        }
    }
    return det;
}

// Inverse of a nonsingular rational matrix (Gauss-Jordan).
RationalMatrix inverse(const RationalMatrix& m);

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j)
            if (!(m(i, j) == m(j, i))) return false;
    return true;
}

// T^t * G * T with exact arithmetic.
template <typename Scalar>
Matrix<Scalar> congruent(const Matrix<Scalar>& gram, const Matrix<Scalar>& t) {
    return t.transpose() * gram * t;
}

RationalMatrix block_diagonal(const std::vector<RationalMatrix>& blocks);

}  // namespace nippaudit
