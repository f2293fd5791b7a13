// Optimal unambiguous discrimination (UD) and state filtering for small
// nonorthogonal pure-state ensembles, plus projective-measurement baselines
// and an exhaustive grid oracle used to validate the optimizers.
//
// UD: maximize P = sum_i eta_i p_i subject to Gram - diag(p) being positive
// semidefinite (the failure operator must stay a valid Gram matrix).
// Filtering: unambiguously separate one target state from the rest, which
// only requires a one-dimensional failure space.
#pragma once

#include <string>
#include <vector>

#include "multirail/states.hpp"
#include "multirail/types.hpp"

namespace multirail {

enum class SolutionStatus { optimal, boundary, infeasible };

std::string to_string(SolutionStatus status);

struct UDSolution {
    std::vector<double> success_probs;  // p_i, per state
    double average_success = 0.0;       // P = sum eta_i p_i
    Matrix failure_gram;                // Gram - diag(p), PSD at a valid solution
    SolutionStatus status = SolutionStatus::infeasible;
};

struct FilteringSolution {
    int target = 0;                       // 0-based index of the filtered state
    double q1 = 0.0;                      // squared failure amplitude of the target
    double success_target = 0.0;          // p_target = 1 - q1
    std::vector<double> success_subset;   // p_k for the remaining states, in index order
    double average_success = 0.0;
    std::vector<Complex> failure_amplitudes;  // f_i per state (one ancilla dimension)
};

// Conclusive POVM elements plus the inconclusive remainder E0 = I - sum E_i.
struct POVMSet {
    std::vector<Matrix> elements;
    std::vector<std::string> labels;  // aligned with elements
    Matrix inconclusive;
};

struct PVMOutcome {
    int best_index = 0;              // state whose exclusion projector wins
    double success = 0.0;
    std::vector<double> per_state;   // eta_i |<v_i|psi_i>|^2 for each candidate
};

struct PVMFilterResult {
    double success = 0.0;
    Matrix basis;              // orthonormal basis vectors as columns
    std::vector<char> kinds;   // per basis vector: 't' target, 's' subset, 'i' inconclusive
};

struct MixedCheckReport {
    double target_success = 0.0;         // Tr(rho_target E_target)
    double subset_success = 0.0;         // Tr(rho_subset E_subset)
    double average_success = 0.0;        // prior-weighted
    double target_false_positive = 0.0;  // Tr(rho_subset E_target)
    double subset_false_positive = 0.0;  // Tr(rho_target E_subset)
    double reference_average = 0.0;      // from optimize_filtering
    bool unambiguous = false;            // both false positives below 1e-10
    bool matches_reference = false;      // |average - reference| <= 1e-9
};

// Globally optimal UD success probabilities. Requires 2 <= N <= 4 linearly
// independent states; throws InfeasibleError for dependent ensembles.
UDSolution optimize_ud(const StateEnsemble& ensemble);

// Optimal filtering of `target` (0-based) against the remaining states.
// Degenerates gracefully (p_target = 0) when the target lies in the span of
// the subset.
FilteringSolution optimize_filtering(const StateEnsemble& ensemble, int target);

// Best single projective measurement that unambiguously identifies one state:
// for each i, project onto the vector orthogonal to all other states.
PVMOutcome optimal_pvm_ud(const StateEnsemble& ensemble);

// Randomized search (with deterministic seeding) over orthonormal bases for
// the best projective filtering measurement. A basis vector counts as
// target-conclusive when it is orthogonal (within 1e-8) to every subset
// state, subset-conclusive when orthogonal to the target.
PVMFilterResult optimal_pvm_filtering(const StateEnsemble& ensemble, int target,
                                      int search_budget = 200);

// POVM elements E_i = p_i |dual_i><dual_i| realizing a UD solution.
POVMSet povm_from_solution(const StateEnsemble& ensemble, const UDSolution& solution);

// Filtering viewed as pure-vs-mixed discrimination: checks unambiguity and
// that the achieved average matches optimize_filtering. The POVM must carry
// labels "target" and "subset".
MixedCheckReport verify_mixed_discrimination(const StateEnsemble& ensemble, int target,
                                             const POVMSet& povm);

// Exhaustive grid search over p in [0,1]^N (N <= 3) with a PSD feasibility
// check per cell and one local refinement pass around the winner. Slow but
// independent of the optimizer; ties break toward lexicographically smaller p.
UDSolution grid_oracle_ud(const StateEnsemble& ensemble, int resolution);

}  // namespace multirail
