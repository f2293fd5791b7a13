// Shared helpers for the test suites: seeded random states, ensembles, and
// unitaries.
#pragma once

#include <random>
#include <vector>

#include "multirail/states.hpp"

namespace multirail::testsupport {

inline Vector random_unit_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
        v(i) = Complex(gauss(rng), gauss(rng));
    }
    return v / v.norm();
}

// Random unitary via QR of a complex Gaussian matrix, phase-fixed so the
// diagonal of R is positive (Haar distributed).
inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            m(r, c) = Complex(gauss(rng), gauss(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 1e-12) q.col(i) *= d / std::abs(d);
    }
    return q;
}

// Linearly independent ensemble with random priors; the min-singular-value
// floor keeps instances comfortably away from dependence.
inline StateEnsemble random_independent_ensemble(int n, int dim,
                                                 std::mt19937_64& rng) {
    while (true) {
        std::vector<PureState> states;
        Matrix m(dim, n);
        for (int i = 0; i < n; ++i) {
            const Vector v = random_unit_vector(dim, rng);
            m.col(i) = v;
            states.emplace_back(v);
        }
        Eigen::JacobiSVD<Matrix> svd(m);
        if (svd.singularValues()(n - 1) < 0.2) continue;

        std::uniform_real_distribution<double> unif(0.2, 1.0);
        std::vector<double> priors(static_cast<std::size_t>(n));
        double total = 0.0;
        for (auto& p : priors) {
            p = unif(rng);
            total += p;
        }
        for (auto& p : priors) p /= total;
        return StateEnsemble(std::move(states), std::move(priors));
    }
}

}  // namespace multirail::testsupport
