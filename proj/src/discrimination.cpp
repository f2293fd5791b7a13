#include "multirail/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "multirail/linalg.hpp"

namespace multirail {

namespace {

constexpr double kBoundaryTol = 1e-6;

// Smallest eigenvalue of a Hermitian 2x2 [[a, b], [conj(b), c]].
double eigmin2(double a, Complex b, double c) {
    const double mid = 0.5 * (a + c);
    const double off = 0.5 * (a - c);
    return mid - std::sqrt(off * off + std::norm(b));
}

// Smallest eigenvalue of a Hermitian 3x3 via the trigonometric form of the
// characteristic cubic.  Much faster than an iterative solver inside the
// grid scans.
double eigmin3(const Matrix& h) {
    const double a1 = h(0, 0).real(), a2 = h(1, 1).real(), a3 = h(2, 2).real();
    const Complex A = h(0, 1), B = h(0, 2), C = h(1, 2);
    const double q = (a1 + a2 + a3) / 3.0;
    const double k1 = a1 - q, k2 = a2 - q, k3 = a3 - q;
    const double p1 = std::norm(A) + std::norm(B) + std::norm(C);
    const double p2 = k1 * k1 + k2 * k2 + k3 * k3 + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    if (p < 1e-300) {
        return q;
    }
    const double detK = k1 * k2 * k3 + 2.0 * (A * C * std::conj(B)).real() -
                        k1 * std::norm(C) - k2 * std::norm(B) - k3 * std::norm(A);
    const double r = std::clamp(detK / (2.0 * p * p * p), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
}

double eigmin_small(const Matrix& h) {
    switch (h.rows()) {
        case 1:
            return h(0, 0).real();
        case 2:
            return eigmin2(h(0, 0).real(), h(0, 1), h(1, 1).real());
        case 3:
            return eigmin3(h);
        default:
            return min_eigenvalue(h);
    }
}

bool feasible_point(const Matrix& gram, const RealVector& p) {
    for (int i = 0; i < p.size(); ++i) {
        if (!(p(i) > 0.0) || p(i) >= 1.0) return false;
    }
    Matrix g = gram;
    g.diagonal().array() -= p.cast<Complex>().array();
    Eigen::LLT<Matrix> llt(g);
    return llt.info() == Eigen::Success;
}

// Barrier objective: -sum eta_i p_i - mu (log det G(p) + sum log p_i).
double barrier_value(const Matrix& gram, const RealVector& eta,
                     const RealVector& p, double mu) {
    Matrix g = gram;
    g.diagonal().array() -= p.cast<Complex>().array();
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success) {
        return std::numeric_limits<double>::infinity();
    }
    double logdet = 0.0;
    for (int i = 0; i < g.rows(); ++i) {
        logdet += 2.0 * std::log(llt.matrixL()(i, i).real());
    }
    double value = -eta.dot(p) - mu * logdet;
    for (int i = 0; i < p.size(); ++i) {
        value -= mu * std::log(p(i));
    }
    return value;
}

// Path-following interior-point solver for
//   maximize sum eta_i p_i  s.t.  Gram - diag(p) >= 0,  p >= 0.
// Both barrier gradient and Hessian are available in closed form; the
// Hessian is positive definite on the feasible interior, so plain damped
// Newton steps converge at every barrier level.
RealVector solve_ud_barrier(const Matrix& gram, const RealVector& eta) {
    const int n = static_cast<int>(gram.rows());
    const double lam_min = min_eigenvalue(gram);
    RealVector p = RealVector::Constant(n, 0.5 * lam_min);

    for (double mu = 0.5; mu > 2e-14; mu *= 0.12) {
        for (int iter = 0; iter < 80; ++iter) {
            Matrix g = gram;
            g.diagonal().array() -= p.cast<Complex>().array();
            const Matrix ginv = g.inverse();

            RealVector grad(n);
            RealMatrix hess(n, n);
            for (int i = 0; i < n; ++i) {
                grad(i) = -eta(i) + mu * ginv(i, i).real() - mu / p(i);
                for (int j = 0; j < n; ++j) {
                    hess(i, j) = mu * std::norm(ginv(i, j));
                }
                hess(i, i) += mu / (p(i) * p(i));
            }

            const RealVector dp = hess.ldlt().solve(-grad);
            if (dp.lpNorm<Eigen::Infinity>() < 1e-14) break;

            const double f0 = barrier_value(gram, eta, p, mu);
            const double slope = grad.dot(dp);
            double alpha = 1.0;
            while (alpha > 1e-16) {
                const RealVector trial = p + alpha * dp;
                if (feasible_point(gram, trial) &&
                    barrier_value(gram, eta, trial, mu) <=
                        f0 + 1e-4 * alpha * slope) {
                    break;
                }
                alpha *= 0.5;
            }
            if (alpha <= 1e-16) break;
            p += alpha * dp;
        }
    }
    return p;
}

RealVector solve_ud_two_state(const Matrix& gram, const RealVector& eta) {
    const double s = std::abs(gram(0, 1));
    if (s < 1e-15) {
        return RealVector::Ones(2);
    }
    // With q_i = 1 - p_i, the constraint boundary is q1 q2 = s^2 and the
    // unconstrained stationary point is q1 = s sqrt(eta2/eta1).
    const double q1 = std::clamp(s * std::sqrt(eta(1) / eta(0)), s * s, 1.0);
    const double q2 = s * s / q1;
    RealVector p(2);
    p << 1.0 - q1, 1.0 - q2;
    return p;
}

UDSolution finish_ud(const StateEnsemble& ensemble, RealVector p) {
    const int n = static_cast<int>(ensemble.size());
    const Matrix g = gram(ensemble);
    for (int i = 0; i < n; ++i) {
        p(i) = std::clamp(p(i), 0.0, 1.0);
    }
    UDSolution sol;
    sol.success_probs.assign(p.data(), p.data() + n);
    sol.average_success = 0.0;
    for (int i = 0; i < n; ++i) {
        sol.average_success += ensemble.prior(i) * p(i);
    }
    sol.failure_gram = g;
    sol.failure_gram.diagonal().array() -= p.cast<Complex>().array();
    sol.status = p.minCoeff() < kBoundaryTol ? SolutionStatus::boundary
                                             : SolutionStatus::optimal;
    return sol;
}

Vector overlaps_with_target(const Matrix& g, int target,
                            const std::vector<int>& subset) {
    Vector out(static_cast<int>(subset.size()));
    for (std::size_t k = 0; k < subset.size(); ++k) {
        out(static_cast<int>(k)) = g(subset[k], target);
    }
    return out;
}

// ||P_S psi_t||^2 where P_S projects onto the span of the subset states,
// computed from Gram data alone via the pseudoinverse of the subset Gram.
double projection_norm_sq(const Matrix& gram_s, const Vector& g) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram_s);
    const auto& vals = es.eigenvalues();
    const double cutoff = 1e-12 * std::max(1.0, vals(vals.size() - 1));
    double total = 0.0;
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) > cutoff) {
            total += std::norm(es.eigenvectors().col(i).dot(g)) / vals(i);
        }
    }
    return total;
}

struct BasisScore {
    double success = 0.0;
    std::vector<char> kinds;
};

// Classifies each basis vector against the exact-unambiguity tolerance and
// accumulates the conclusive detection probability.
BasisScore score_filter_basis(const Matrix& basis, const StateEnsemble& ensemble,
                              int target, const std::vector<int>& subset) {
    constexpr double kConclusiveTol = 1e-8;
    BasisScore out;
    out.kinds.resize(static_cast<std::size_t>(basis.cols()), 'i');
    for (int c = 0; c < basis.cols(); ++c) {
        const Vector v = basis.col(c);
        const double t_amp = std::abs(v.dot(ensemble.state(target).amplitudes()));
        double s_max = 0.0;
        double s_sum = 0.0;
        for (int k : subset) {
            const double amp = std::abs(v.dot(ensemble.state(k).amplitudes()));
            s_max = std::max(s_max, amp);
            s_sum += ensemble.prior(k) * amp * amp;
        }
        if (s_max <= kConclusiveTol) {
            out.kinds[static_cast<std::size_t>(c)] = 't';
            out.success += ensemble.prior(target) * t_amp * t_amp;
        } else if (t_amp <= kConclusiveTol) {
            out.kinds[static_cast<std::size_t>(c)] = 's';
            out.success += s_sum;
        }
    }
    return out;
}

// Builds a projective basis from a chosen unit vector v inside the
// orthocomplement of the subset span: v itself answers "target", the space
// orthogonal to both v and psi_t answers "subset", and anything left is
// inconclusive.
Matrix assemble_filter_basis(const Vector& v, const Vector& psi_t) {
    const int d = static_cast<int>(v.size());
    Matrix constraints(2, d);
    constraints.row(0) = v.adjoint();
    constraints.row(1) = psi_t.adjoint();
    const Matrix subset_block = nullspace(constraints);
    Matrix partial(d, 1 + subset_block.cols());
    partial.col(0) = v;
    partial.rightCols(subset_block.cols()) = subset_block;
    return complete_orthonormal(orthonormal_columns(partial, 1e-12));
}

Vector random_unit_in(const Matrix& basis, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector coeff(basis.cols());
    for (int i = 0; i < coeff.size(); ++i) {
        coeff(i) = Complex(gauss(rng), gauss(rng));
    }
    Vector v = basis * coeff;
    const double norm = v.norm();
    if (norm < 1e-12) {
        v = basis.col(0);
        return v;
    }
    return v / norm;
}

}  // namespace

std::string to_string(SolutionStatus status) {
    switch (status) {
        case SolutionStatus::optimal:
            return "optimal";
        case SolutionStatus::boundary:
            return "boundary";
        case SolutionStatus::infeasible:
            return "infeasible";
    }
    return "unknown";
}

UDSolution optimize_ud(const StateEnsemble& ensemble) {
    const int n = static_cast<int>(ensemble.size());
    if (n < 2 || n > 4) {
        throw std::invalid_argument("optimize_ud supports 2 to 4 states");
    }
    if (!is_linearly_independent(ensemble)) {
        throw InfeasibleError(
            "unambiguous discrimination requires linearly independent states");
    }
    const Matrix g = gram(ensemble);
    RealVector eta(n);
    for (int i = 0; i < n; ++i) eta(i) = ensemble.prior(i);

    const RealVector p =
        n == 2 ? solve_ud_two_state(g, eta) : solve_ud_barrier(g, eta);
    return finish_ud(ensemble, p);
}

FilteringSolution optimize_filtering(const StateEnsemble& ensemble, int target) {
    const int n = static_cast<int>(ensemble.size());
    if (n < 2) {
        throw std::invalid_argument("filtering needs at least two states");
    }
    if (target < 0 || target >= n) {
        throw std::invalid_argument("target index out of range");
    }
    const Matrix g = gram(ensemble);
    std::vector<int> subset;
    for (int k = 0; k < n; ++k) {
        if (k != target) subset.push_back(k);
    }
    const Vector g_vec = overlaps_with_target(g, target, subset);
    Matrix gram_s(subset.size(), subset.size());
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = 0; b < subset.size(); ++b) {
            gram_s(static_cast<int>(a), static_cast<int>(b)) =
                g(subset[a], subset[b]);
        }
    }

    const double eta_t = ensemble.prior(target);
    double overlap_coupling = 0.0;
    double max_overlap_sq = 0.0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const double w = std::norm(g_vec(static_cast<int>(k)));
        overlap_coupling += ensemble.prior(subset[k]) * w;
        max_overlap_sq = std::max(max_overlap_sq, w);
    }

    FilteringSolution sol;
    sol.target = target;
    sol.failure_amplitudes.assign(static_cast<std::size_t>(n), Complex(0, 0));
    if (overlap_coupling == 0.0) {
        // Target orthogonal to every other state: perfect filtering.
        sol.q1 = 0.0;
        sol.success_target = 1.0;
        sol.success_subset.assign(subset.size(), 1.0);
        sol.average_success = 1.0;
        return sol;
    }

    // W(q) = 1 - eta_t q - overlap_coupling / q is concave on q > 0, so the
    // clamped stationary point is the constrained maximizer.
    const double q_min =
        std::max(projection_norm_sq(gram_s, g_vec), max_overlap_sq);
    const double q_lo = std::min(1.0, std::max(q_min, 1e-300));
    const double q = std::clamp(std::sqrt(overlap_coupling / eta_t), q_lo, 1.0);

    sol.q1 = q;
    sol.success_target = 1.0 - q;
    sol.failure_amplitudes[static_cast<std::size_t>(target)] = std::sqrt(q);
    sol.average_success = eta_t * sol.success_target;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        // g_vec holds (k, target) Gram entries; conj(f_t) * f_k must equal
        // the (target, k) entry, hence the conjugate.
        const Complex f_k = std::conj(g_vec(static_cast<int>(k))) / std::sqrt(q);
        sol.failure_amplitudes[static_cast<std::size_t>(subset[k])] = f_k;
        const double p_k = std::max(0.0, 1.0 - std::norm(f_k));
        sol.success_subset.push_back(p_k);
        sol.average_success += ensemble.prior(subset[k]) * p_k;
    }
    return sol;
}

PVMOutcome optimal_pvm_ud(const StateEnsemble& ensemble) {
    const int n = static_cast<int>(ensemble.size());
    const int d = static_cast<int>(ensemble.dim());
    if (!is_linearly_independent(ensemble)) {
        throw InfeasibleError(
            "projective unambiguous discrimination requires independent states");
    }
    PVMOutcome out;
    out.best_index = -1;
    out.success = 0.0;
    out.per_state.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        Matrix others(d, n - 1);
        int c = 0;
        for (int j = 0; j < n; ++j) {
            if (j != i) others.col(c++) = ensemble.state(j).amplitudes();
        }
        const Matrix kernel = nullspace(others.adjoint());
        if (kernel.cols() < 1) continue;
        // A projective outcome can only single out psi_i from inside the
        // orthocomplement of the other states; the best choice there is the
        // normalized projection of psi_i.
        const Vector proj = kernel * (kernel.adjoint() * ensemble.state(i).amplitudes());
        const double weight = proj.squaredNorm();
        const double success = ensemble.prior(i) * weight;
        out.per_state[static_cast<std::size_t>(i)] = success;
        if (success > out.success + 1e-12) {
            out.success = success;
            out.best_index = i;
        }
    }
    if (out.best_index < 0) {
        throw InfeasibleError("no projective outcome can exclude the other states");
    }
    return out;
}

PVMFilterResult optimal_pvm_filtering(const StateEnsemble& ensemble, int target,
                                      int search_budget) {
    const int n = static_cast<int>(ensemble.size());
    const int d = static_cast<int>(ensemble.dim());
    if (target < 0 || target >= n) {
        throw std::invalid_argument("target index out of range");
    }
    std::vector<int> subset;
    for (int k = 0; k < n; ++k) {
        if (k != target) subset.push_back(k);
    }
    Matrix subset_states(d, static_cast<int>(subset.size()));
    for (std::size_t k = 0; k < subset.size(); ++k) {
        subset_states.col(static_cast<int>(k)) =
            ensemble.state(subset[k]).amplitudes();
    }
    const Matrix t_perp = nullspace(subset_states.adjoint());
    const Vector psi_t = ensemble.state(target).amplitudes();

    std::mt19937_64 rng(0x6d726c5f70766dULL);
    Matrix best_basis = Matrix::Identity(d, d);
    BasisScore best = score_filter_basis(best_basis, ensemble, target, subset);

    const auto consider = [&](const Matrix& basis) {
        const BasisScore score = score_filter_basis(basis, ensemble, target, subset);
        if (score.success > best.success + 1e-12) {
            best = score;
            best_basis = basis;
        }
    };

    if (t_perp.cols() > 0) {
        // Deterministic seed: project the target into the subset
        // orthocomplement, which maximizes the target-conclusive term alone.
        const Vector proj = t_perp * (t_perp.adjoint() * psi_t);
        Vector v0 = proj.norm() > 1e-12 ? Vector(proj / proj.norm())
                                        : Vector(t_perp.col(0));
        consider(assemble_filter_basis(v0, psi_t));

        for (int restart = 0; restart < search_budget; ++restart) {
            consider(assemble_filter_basis(random_unit_in(t_perp, rng), psi_t));
        }

        // Pattern refinement of the conclusive direction inside t_perp.
        if (t_perp.cols() > 1) {
            Vector v = best_basis.col(0);
            double step = 0.2;
            for (int iter = 0; iter < 80 && step > 1e-7; ++iter) {
                bool improved = false;
                for (int axis = 0; axis < t_perp.cols(); ++axis) {
                    for (const Complex dir :
                         {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
                        Vector trial = v + step * dir * t_perp.col(axis);
                        trial /= trial.norm();
                        const Matrix basis = assemble_filter_basis(trial, psi_t);
                        const BasisScore score =
                            score_filter_basis(basis, ensemble, target, subset);
                        if (score.success > best.success + 1e-12) {
                            best = score;
                            best_basis = basis;
                            v = trial;
                            improved = true;
                        }
                    }
                }
                if (!improved) step *= 0.5;
            }
        }
    }

    // Pure subset-answering bases (no target-conclusive vector) as fallback:
    // every vector orthogonal to psi_t answers "subset".
    {
        Matrix t_row(1, d);
        t_row.row(0) = psi_t.adjoint();
        const Matrix w_perp = nullspace(t_row);
        consider(complete_orthonormal(w_perp));
    }

    PVMFilterResult out;
    out.success = best.success;
    out.basis = best_basis;
    out.kinds = best.kinds;
    return out;
}

POVMSet povm_from_solution(const StateEnsemble& ensemble, const UDSolution& sol) {
    const int n = static_cast<int>(ensemble.size());
    const int d = static_cast<int>(ensemble.dim());
    if (static_cast<int>(sol.success_probs.size()) != n) {
        throw std::invalid_argument("solution does not match ensemble size");
    }
    const std::vector<Vector> duals = dual_basis(ensemble);
    POVMSet out;
    out.inconclusive = Matrix::Identity(d, d);
    for (int i = 0; i < n; ++i) {
        const Vector& dual = duals[static_cast<std::size_t>(i)];
        const Matrix e =
            sol.success_probs[static_cast<std::size_t>(i)] * dual * dual.adjoint();
        out.elements.push_back(e);
        out.labels.push_back(ensemble.label(i));
        out.inconclusive -= e;
    }
    const double lam = min_eigenvalue(out.inconclusive);
    if (lam < -1e-10) {
        std::ostringstream msg;
        msg << "success probabilities are infeasible (inconclusive element has "
               "eigenvalue "
            << lam << ")";
        throw InfeasibleError(msg.str());
    }
    return out;
}

MixedCheckReport verify_mixed_discrimination(const StateEnsemble& ensemble,
                                             int target, const POVMSet& povm) {
    const int n = static_cast<int>(ensemble.size());
    if (target < 0 || target >= n) {
        throw std::invalid_argument("target index out of range");
    }
    int e_target = -1;
    int e_subset = -1;
    for (std::size_t i = 0; i < povm.labels.size(); ++i) {
        if (povm.labels[i] == "target") e_target = static_cast<int>(i);
        if (povm.labels[i] == "subset") e_subset = static_cast<int>(i);
    }
    if (e_target < 0 || e_subset < 0) {
        throw std::invalid_argument(
            "verification needs POVM elements labeled 'target' and 'subset'");
    }
    std::vector<int> subset;
    for (int k = 0; k < n; ++k) {
        if (k != target) subset.push_back(k);
    }
    const MixedState rho_t = mixed_from_subset(ensemble, {target});
    const MixedState rho_s = mixed_from_subset(ensemble, subset);
    const double eta_t = ensemble.prior(target);
    const double eta_s = 1.0 - eta_t;

    const auto trace_prob = [](const Matrix& e, const MixedState& rho) {
        return std::max(0.0, (e * rho.density()).trace().real());
    };

    MixedCheckReport report;
    report.target_success = trace_prob(povm.elements[e_target], rho_t);
    report.subset_success = trace_prob(povm.elements[e_subset], rho_s);
    report.target_false_positive = trace_prob(povm.elements[e_target], rho_s);
    report.subset_false_positive = trace_prob(povm.elements[e_subset], rho_t);
    report.average_success =
        eta_t * report.target_success + eta_s * report.subset_success;

    const FilteringSolution ref = optimize_filtering(ensemble, target);
    report.reference_average = ref.average_success;
    report.unambiguous = report.target_false_positive < 1e-10 &&
                         report.subset_false_positive < 1e-10;
    report.matches_reference =
        std::abs(report.average_success - report.reference_average) <= 1e-9;
    return report;
}

UDSolution grid_oracle_ud(const StateEnsemble& ensemble, int resolution) {
    const int n = static_cast<int>(ensemble.size());
    if (n > 3) {
        throw std::invalid_argument("grid oracle supports at most three states");
    }
    if (resolution < 2) {
        throw std::invalid_argument("resolution must be at least 2");
    }
    const Matrix g = gram(ensemble);
    RealVector eta(n);
    for (int i = 0; i < n; ++i) eta(i) = ensemble.prior(i);

    const auto admissible = [&](const RealVector& p) {
        Matrix m = g;
        m.diagonal().array() -= p.cast<Complex>().array();
        return eigmin_small(m) >= -kPsdTol;
    };

    RealVector best_p = RealVector::Zero(n);
    double best_value = -1.0;
    // Lexicographic ascending scan keeps the first (smallest) maximizer on
    // exact ties.
    const auto scan = [&](const RealVector& lo, const RealVector& hi) {
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        RealVector p(n);
        while (true) {
            for (int i = 0; i < n; ++i) {
                const double f =
                    static_cast<double>(idx[static_cast<std::size_t>(i)]) /
                    static_cast<double>(resolution);
                p(i) = std::clamp(lo(i) + f * (hi(i) - lo(i)), 0.0, 1.0);
            }
            if (admissible(p)) {
                const double value = eta.dot(p);
                if (value > best_value) {
                    best_value = value;
                    best_p = p;
                }
            }
            int carry = n - 1;
            while (carry >= 0 && ++idx[static_cast<std::size_t>(carry)] > resolution) {
                idx[static_cast<std::size_t>(carry)] = 0;
                --carry;
            }
            if (carry < 0) break;
        }
    };

    scan(RealVector::Zero(n), RealVector::Ones(n));
    const double half = 2.0 / static_cast<double>(resolution);
    RealVector lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        lo(i) = std::max(0.0, best_p(i) - half);
        hi(i) = std::min(1.0, best_p(i) + half);
    }
    scan(lo, hi);
    return finish_ud(ensemble, best_p);
}

}  // namespace multirail
