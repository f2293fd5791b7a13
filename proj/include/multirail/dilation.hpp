// Embedding optimal measurements into a larger unitary: output-state
// construction on system + ancilla rails, the unitary that connects embedded
// inputs to those outputs, and POVM extraction from unitary blocks.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "multirail/discrimination.hpp"
#include "multirail/states.hpp"

namespace multirail {

// Output states in the enlarged space. Rail indices are 1-based: rails
// 1..d are the system, rails d+1..d+r the ancilla.
struct DilatedStates {
    std::vector<Vector> outputs;  // each of length system_dim + ancilla_rank
    std::map<std::string, std::vector<int>> conclusive_rails;
    std::vector<int> inconclusive_rails;
    int system_dim = 0;
    int ancilla_rank = 0;

    int total_dim() const { return system_dim + ancilla_rank; }
};

// Each state i ends up as sqrt(p_i) on system rail i plus a failure vector
// on the ancilla rails; the failure vectors factor the failure Gram.
DilatedStates build_outputs_ud(const StateEnsemble& ensemble,
                               const UDSolution& solution);

// Target goes to rail 1 (plus ancilla), subset states occupy rails 2..d with
// conclusive parts factoring the subset conclusive Gram.
DilatedStates build_outputs_filtering(const StateEnsemble& ensemble, int target,
                                      const FilteringSolution& solution);

// Unitary with U * embed(psi_i) = outputs[i], where embed pads with ancilla
// vacuum. Requires input and output Gram matrices to agree (within 1e-9);
// the action on the orthocomplement is completed deterministically.
Matrix build_unitary(const StateEnsemble& ensemble, const DilatedStates& dilated);

// POVM induced on the system by measuring which rail the photon exits:
// E_o = A_o^dagger A_o with A_o the block of U formed by outcome o's rows
// and the system columns. outcome_rails must partition rails 1..dim(U);
// the outcome labeled "inconclusive" is routed to POVMSet::inconclusive.
POVMSet extract_povm(const Matrix& u, int system_dim,
                     const std::map<std::string, std::vector<int>>& outcome_rails);

}  // namespace multirail
