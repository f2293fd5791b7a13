// Pure/mixed states over optical rails, ensembles with priors, Gram utilities,
// and the built-in demonstration ensembles.
//
// Rails are 1-indexed in every user-facing report; internally amplitude
// vectors use ordinary 0-based Eigen indexing.
#pragma once

#include <string>
#include <vector>

#include "multirail/types.hpp"

namespace multirail {

// Single-photon pure state: one complex amplitude per rail, unit norm.
class PureState {
public:
    explicit PureState(Vector amplitudes);
    static PureState normalized(Vector amplitudes);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }

private:
    Vector amplitudes_;
};

// States with prior probabilities. Priors must be positive and sum to one;
// all states must share a rail count.
class StateEnsemble {
public:
    StateEnsemble(std::vector<PureState> states, std::vector<double> priors,
                  std::vector<std::string> labels = {});

    int size() const { return static_cast<int>(states_.size()); }
    int dim() const { return states_.front().dim(); }
    const PureState& state(int i) const { return states_.at(i); }
    double prior(int i) const { return priors_.at(i); }
    const std::vector<double>& priors() const { return priors_; }
    const std::string& label(int i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<PureState> states_;
    std::vector<double> priors_;
    std::vector<std::string> labels_;
};

// Density operator: Hermitian, unit trace, eigenvalues >= -1e-12.
class MixedState {
public:
    explicit MixedState(Matrix density);
    const Matrix& density() const { return density_; }
    int dim() const { return static_cast<int>(density_.rows()); }

private:
    Matrix density_;
};

// Gram matrix G_ij = <psi_i|psi_j>.
Matrix gram(const StateEnsemble& ensemble);

// True iff the smallest Gram eigenvalue exceeds tol.
bool is_linearly_independent(const StateEnsemble& ensemble, double tol = kRankTol);

// Reciprocal states: <dual_i|psi_j> = delta_ij. Requires linear independence.
std::vector<Vector> dual_basis(const StateEnsemble& ensemble);

// Prior-weighted density operator of a subset, priors renormalized over it.
// Indices are 0-based.
MixedState mixed_from_subset(const StateEnsemble& ensemble, const std::vector<int>& subset);

// Canonical three-state demonstration set on three rails, equal priors:
//   psi1 = (sqrt(2/3), 0, 1/sqrt3), psi2/3 = (0, +-1/sqrt3, sqrt(2/3)).
StateEnsemble sd_paper_set();

// One-parameter filtering family, a in (0, 1], equal priors:
//   psi1 = (sqrt(1-a^2), 0, a), psi2/3 = (0, +-1/sqrt2, 1/sqrt2).
StateEnsemble filter_family(double a);

}  // namespace multirail
