// Small dense linear-algebra helpers: deterministic Gram-Schmidt and
// nullspace bases.
#pragma once

#include "multirail/types.hpp"

namespace multirail {

// Orthonormalizes the columns of m in order, dropping columns whose residual
// falls below tol. Deterministic; uses two projection passes for stability.
inline Matrix orthonormal_columns(const Matrix& m, double tol = 1e-10) {
    Matrix q(m.rows(), m.cols());
    int kept = 0;
    for (int c = 0; c < m.cols(); ++c) {
        Vector v = m.col(c);
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < kept; ++k) {
                v -= q.col(k).dot(v) * q.col(k);
            }
        }
        const double norm = v.norm();
        if (norm > tol) {
            q.col(kept++) = v / norm;
        }
    }
    return q.leftCols(kept);
}

// Extends orthonormal columns to a full orthonormal basis by Gram-Schmidt
// over the standard basis vectors in index order.
inline Matrix complete_orthonormal(const Matrix& partial) {
    const int n = static_cast<int>(partial.rows());
    Matrix full(n, n);
    full.leftCols(partial.cols()) = partial;
    int kept = static_cast<int>(partial.cols());
    for (int j = 0; j < n && kept < n; ++j) {
        Vector v = Vector::Unit(n, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < kept; ++k) {
                v -= full.col(k).dot(v) * full.col(k);
            }
        }
        const double norm = v.norm();
        if (norm > 1e-6) {
            full.col(kept++) = v / norm;
        }
    }
    if (kept != n) {
        throw std::runtime_error("orthonormal completion failed");
    }
    return full;
}

// Orthonormal basis of the kernel of m (vectors x with m x = 0).
inline Matrix nullspace(const Matrix& m, double tol = 1e-10) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace multirail
