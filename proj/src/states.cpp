#include "multirail/states.hpp"

#include <cmath>
#include <set>

namespace multirail {

namespace {
constexpr double kNormTol = 1e-12;
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
        throw std::invalid_argument("state needs at least one rail");
    }
    const double norm2 = amplitudes_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTol) {
        throw std::invalid_argument("state is not normalized: |amplitudes|^2 = " +
                                    std::to_string(norm2));
    }
}

PureState PureState::normalized(Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (norm == 0.0) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    return PureState(amplitudes / norm);
}

StateEnsemble::StateEnsemble(std::vector<PureState> states, std::vector<double> priors,
                             std::vector<std::string> labels)
    : states_(std::move(states)), priors_(std::move(priors)), labels_(std::move(labels)) {
    if (states_.empty()) {
        throw std::invalid_argument("ensemble needs at least one state");
    }
    if (priors_.size() != states_.size()) {
        throw std::invalid_argument("priors count does not match state count");
    }
    const int d = states_.front().dim();
    for (const auto& s : states_) {
        if (s.dim() != d) {
            throw std::invalid_argument("all states must share a rail count");
        }
    }
    double sum = 0.0;
    for (double p : priors_) {
        if (p <= 0.0) {
            throw std::invalid_argument("priors must be positive");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kNormTol) {
        throw std::invalid_argument("priors must sum to 1, got " + std::to_string(sum));
    }
    if (labels_.empty()) {
        for (std::size_t i = 0; i < states_.size(); ++i) {
            labels_.push_back("psi" + std::to_string(i + 1));
        }
    } else if (labels_.size() != states_.size()) {
        throw std::invalid_argument("labels count does not match state count");
    }
}

MixedState::MixedState(Matrix density) : density_(std::move(density)) {
    if (!is_hermitian(density_, 1e-12)) {
        throw std::invalid_argument("density operator must be Hermitian");
    }
    if (std::abs(density_.trace().real() - 1.0) > 1e-12) {
        throw std::invalid_argument("density operator must have unit trace");
    }
    if (min_eigenvalue(density_) < -1e-12) {
        throw std::invalid_argument("density operator must be positive semidefinite");
    }
}

Matrix gram(const StateEnsemble& ensemble) {
    const int n = ensemble.size();
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = ensemble.state(i).amplitudes().dot(ensemble.state(j).amplitudes());
        }
    }
    return g;
}

bool is_linearly_independent(const StateEnsemble& ensemble, double tol) {
    return min_eigenvalue(gram(ensemble)) > tol;
}

std::vector<Vector> dual_basis(const StateEnsemble& ensemble) {
    if (!is_linearly_independent(ensemble)) {
        throw std::invalid_argument("dual basis requires linearly independent states");
    }
    const int n = ensemble.size();
    const Matrix g = gram(ensemble);
    // dual_i = sum_k (G^-1)_ki psi_k  gives  <dual_i|psi_j> = delta_ij.
    const Matrix ginv = g.inverse();
    std::vector<Vector> duals;
    duals.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vector d = Vector::Zero(ensemble.dim());
        for (int k = 0; k < n; ++k) {
            d += ginv(k, i) * ensemble.state(k).amplitudes();
        }
        duals.push_back(std::move(d));
    }
    return duals;
}

MixedState mixed_from_subset(const StateEnsemble& ensemble, const std::vector<int>& subset) {
    if (subset.empty()) {
        throw std::invalid_argument("subset must not be empty");
    }
    std::set<int> seen;
    double total = 0.0;
    for (int idx : subset) {
        if (idx < 0 || idx >= ensemble.size()) {
            throw std::invalid_argument("subset index out of range");
        }
        if (!seen.insert(idx).second) {
            throw std::invalid_argument("subset indices must be distinct");
        }
        total += ensemble.prior(idx);
    }
    Matrix rho = Matrix::Zero(ensemble.dim(), ensemble.dim());
    for (int idx : subset) {
        const Vector& a = ensemble.state(idx).amplitudes();
        rho += (ensemble.prior(idx) / total) * (a * a.adjoint());
    }
    return MixedState(rho);
}

StateEnsemble sd_paper_set() {
    const double r13 = 1.0 / std::sqrt(3.0);
    const double r23 = std::sqrt(2.0 / 3.0);
    Vector v1(3), v2(3), v3(3);
    v1 << r23, 0.0, r13;
    v2 << 0.0, r13, r23;
    v3 << 0.0, -r13, r23;
    return StateEnsemble({PureState(v1), PureState(v2), PureState(v3)},
                         {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

StateEnsemble filter_family(double a) {
    if (!(a > 0.0) || a > 1.0) {
        throw std::invalid_argument("filter family requires a in (0, 1]");
    }
    const double r2 = 1.0 / std::sqrt(2.0);
    Vector v1(3), v2(3), v3(3);
    v1 << std::sqrt(1.0 - a * a), 0.0, a;
    v2 << 0.0, r2, r2;
    v3 << 0.0, -r2, r2;
    return StateEnsemble({PureState(v1), PureState(v2), PureState(v3)},
                         {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

}  // namespace multirail
