#include "multirail/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "multirail/linalg.hpp"

namespace multirail {

namespace {

constexpr double kFactorRankTol = 1e-9;

// Factors a PSD Gram g as F^dagger F with F of shape rank x n: rows are
// sqrt(lambda_k) v_k^dagger in descending eigenvalue order, each row rotated
// so its first nonvanishing entry is real positive.
Matrix factor_gram(const Matrix& g, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    const auto& vals = es.eigenvalues();
    if (vals.size() > 0 && vals(0) < -kPsdTol) {
        std::ostringstream msg;
        msg << what << " is not positive semidefinite (eigenvalue " << vals(0)
            << ")";
        throw InfeasibleError(msg.str());
    }
    std::vector<int> kept;
    for (int i = static_cast<int>(vals.size()) - 1; i >= 0; --i) {
        if (vals(i) > kFactorRankTol) kept.push_back(i);
    }
    Matrix f(static_cast<int>(kept.size()), g.cols());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const int row = static_cast<int>(k);
        f.row(row) =
            std::sqrt(vals(kept[k])) * es.eigenvectors().col(kept[k]).adjoint();
        for (int c = 0; c < f.cols(); ++c) {
            const Complex lead = f(row, c);
            if (std::abs(lead) > 1e-10) {
                f.row(row) *= std::conj(lead) / std::abs(lead);
                break;
            }
        }
    }
    return f;
}

void check_normalized(const std::vector<Vector>& outputs) {
    for (const auto& v : outputs) {
        if (std::abs(v.norm() - 1.0) > 1e-12) {
            throw std::runtime_error("dilated output failed normalization");
        }
    }
}

}  // namespace

DilatedStates build_outputs_ud(const StateEnsemble& ensemble,
                               const UDSolution& solution) {
    const int n = static_cast<int>(ensemble.size());
    const int d = static_cast<int>(ensemble.dim());
    if (static_cast<int>(solution.success_probs.size()) != n) {
        throw std::invalid_argument("solution does not match ensemble size");
    }
    const Matrix f = factor_gram(solution.failure_gram, "failure Gram");
    const int r = static_cast<int>(f.rows());

    DilatedStates out;
    out.system_dim = d;
    out.ancilla_rank = r;
    for (int i = 0; i < n; ++i) {
        Vector v = Vector::Zero(d + r);
        v(i) = std::sqrt(std::max(0.0, solution.success_probs[static_cast<std::size_t>(i)]));
        v.tail(r) = f.col(i);
        out.outputs.push_back(std::move(v));
        out.conclusive_rails[ensemble.label(i)] = {i + 1};
    }
    for (int k = 0; k < r; ++k) {
        out.inconclusive_rails.push_back(d + 1 + k);
    }
    check_normalized(out.outputs);
    return out;
}

DilatedStates build_outputs_filtering(const StateEnsemble& ensemble, int target,
                                      const FilteringSolution& solution) {
    const int n = static_cast<int>(ensemble.size());
    const int d = static_cast<int>(ensemble.dim());
    if (target < 0 || target >= n) {
        throw std::invalid_argument("target index out of range");
    }
    if (static_cast<int>(solution.failure_amplitudes.size()) != n) {
        throw std::invalid_argument("solution does not match ensemble size");
    }
    std::vector<int> subset;
    for (int k = 0; k < n; ++k) {
        if (k != target) subset.push_back(k);
    }
    const int m = static_cast<int>(subset.size());
    const Matrix g = gram(ensemble);
    const auto f_of = [&](int i) {
        return solution.failure_amplitudes[static_cast<std::size_t>(i)];
    };

    // Conclusive Gram of the subset states after removing the shared failure
    // component.
    Matrix c(m, m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            c(a, b) = g(subset[static_cast<std::size_t>(a)],
                        subset[static_cast<std::size_t>(b)]) -
                      std::conj(f_of(subset[static_cast<std::size_t>(a)])) *
                          f_of(subset[static_cast<std::size_t>(b)]);
        }
    }
    const Matrix cf = factor_gram(c, "subset conclusive Gram");
    if (cf.rows() > d - 1) {
        throw InfeasibleError("subset conclusive parts do not fit in rails 2..d");
    }

    double failure_weight = 0.0;
    for (int i = 0; i < n; ++i) failure_weight += std::norm(f_of(i));
    const int r = failure_weight > kFactorRankTol ? 1 : 0;

    DilatedStates out;
    out.system_dim = d;
    out.ancilla_rank = r;
    out.outputs.assign(static_cast<std::size_t>(n), Vector());
    for (int i = 0; i < n; ++i) {
        Vector v = Vector::Zero(d + r);
        if (i == target) {
            v(0) = std::sqrt(std::max(0.0, solution.success_target));
        }
        if (r == 1) v(d) = f_of(i);
        out.outputs[static_cast<std::size_t>(i)] = std::move(v);
    }
    for (int a = 0; a < m; ++a) {
        out.outputs[static_cast<std::size_t>(subset[static_cast<std::size_t>(a)])]
            .segment(1, cf.rows()) = cf.col(a);
    }
    out.conclusive_rails["target"] = {1};
    std::vector<int> subset_rails;
    for (int rail = 2; rail <= d; ++rail) subset_rails.push_back(rail);
    out.conclusive_rails["subset"] = subset_rails;
    if (r == 1) out.inconclusive_rails = {d + 1};
    check_normalized(out.outputs);
    return out;
}

Matrix build_unitary(const StateEnsemble& ensemble, const DilatedStates& dilated) {
    const int n = static_cast<int>(ensemble.size());
    const int d = static_cast<int>(ensemble.dim());
    const int total = dilated.total_dim();
    if (static_cast<int>(dilated.outputs.size()) != n || dilated.system_dim != d) {
        throw std::invalid_argument("dilated states do not match ensemble");
    }

    std::vector<Vector> inputs;
    for (int i = 0; i < n; ++i) {
        Vector v = Vector::Zero(total);
        v.head(d) = ensemble.state(i).amplitudes();
        inputs.push_back(std::move(v));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Complex gin = inputs[static_cast<std::size_t>(i)].dot(
                inputs[static_cast<std::size_t>(j)]);
            const Complex gout = dilated.outputs[static_cast<std::size_t>(i)].dot(
                dilated.outputs[static_cast<std::size_t>(j)]);
            if (std::abs(gin - gout) > 1e-9) {
                std::ostringstream msg;
                msg << "no unitary exists: Gram mismatch for states (" << i + 1
                    << "," << j + 1 << "), deviation " << std::abs(gin - gout);
                throw InfeasibleError(msg.str());
            }
        }
    }

    // Matched Gram-Schmidt: orthonormalize the inputs and apply the same
    // combination coefficients to the outputs, so the resulting bases pair up.
    Matrix bin(total, n), bout(total, n);
    int kept = 0;
    for (int i = 0; i < n; ++i) {
        Vector v = inputs[static_cast<std::size_t>(i)];
        Vector w = dilated.outputs[static_cast<std::size_t>(i)];
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < kept; ++k) {
                const Complex coeff = bin.col(k).dot(v);
                v -= coeff * bin.col(k);
                w -= coeff * bout.col(k);
            }
        }
        const double norm = v.norm();
        if (norm > 1e-9) {
            bin.col(kept) = v / norm;
            bout.col(kept) = w / w.norm();
            ++kept;
        }
    }
    const Matrix bin_full = complete_orthonormal(bin.leftCols(kept));
    const Matrix bout_full = complete_orthonormal(bout.leftCols(kept));
    Matrix u = bout_full * bin_full.adjoint();

    if (unitarity_residual(u) > kUnitarityTol) {
        throw std::runtime_error("constructed transfer matrix is not unitary");
    }
    return u;
}

POVMSet extract_povm(const Matrix& u, int system_dim,
                     const std::map<std::string, std::vector<int>>& outcome_rails) {
    const int total = static_cast<int>(u.rows());
    if (system_dim < 1 || system_dim > total) {
        throw std::invalid_argument("system dimension out of range");
    }
    std::set<int> seen;
    for (const auto& [label, rails] : outcome_rails) {
        for (int rail : rails) {
            if (rail < 1 || rail > total || !seen.insert(rail).second) {
                throw std::invalid_argument(
                    "outcome rails must partition the output rails");
            }
        }
    }
    if (static_cast<int>(seen.size()) != total) {
        throw std::invalid_argument(
            "outcome rails must partition the output rails");
    }

    POVMSet out;
    out.inconclusive = Matrix::Zero(system_dim, system_dim);
    Matrix sum = Matrix::Zero(system_dim, system_dim);
    for (const auto& [label, rails] : outcome_rails) {
        Matrix block(static_cast<int>(rails.size()), system_dim);
        for (std::size_t k = 0; k < rails.size(); ++k) {
            block.row(static_cast<int>(k)) =
                u.row(rails[k] - 1).head(system_dim);
        }
        Matrix element = block.adjoint() * block;
        sum += element;
        if (label == "inconclusive") {
            out.inconclusive = std::move(element);
        } else {
            out.elements.push_back(std::move(element));
            out.labels.push_back(label);
        }
    }
    if ((sum - Matrix::Identity(system_dim, system_dim)).cwiseAbs().maxCoeff() >
        1e-10) {
        throw std::runtime_error("extracted POVM does not resolve the identity");
    }
    return out;
}

}  // namespace multirail
