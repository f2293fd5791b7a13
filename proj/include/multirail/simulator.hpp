// Single-photon propagation through a beam-splitter mesh, ideal and under a
// stochastic noise model, plus outcome-rate summaries.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "multirail/dilation.hpp"
#include "multirail/mesh.hpp"
#include "multirail/states.hpp"

namespace multirail {

// Phase jitter and systematic offsets act on each stage's phase; waveplate
// jitter perturbs the middle half-wave-plate angle and maps back to the
// transmission. Offsets are keyed by 0-based stage index. Results are
// deterministic in (seed, state index, trial index).
struct NoiseModel {
    double phase_jitter_sigma = 0.0;      // radians, fresh draw per trial
    double waveplate_jitter_sigma = 0.0;  // degrees, fresh draw per trial
    std::map<int, double> systematic_phase_offsets;  // stage -> radians
    long long trials = 100000;
    std::uint64_t seed = 1;
    bool sample_photons = false;  // count one sampled click per trial

    bool stochastic() const {
        return phase_jitter_sigma > 0.0 || waveplate_jitter_sigma > 0.0 ||
               sample_photons;
    }
};

// Detection probabilities: rows = prepared states, columns = output rails.
struct DetectionReport {
    RealMatrix matrix;
    std::string normalization;
};

struct OutcomeSummary {
    double success_rate = 0.0;
    double error_rate = 0.0;
    double inconclusive_rate = 0.0;
};

// rail (1-based) -> prepared-state indices for which a click on that rail is
// a success; an empty list marks an inconclusive rail.
using OutcomeMap = std::map<int, std::vector<int>>;

RealVector propagate_ideal(const Matrix& u, const PureState& state);
RealVector propagate_ideal(const MeshPlan& plan, const PureState& state);

DetectionReport run_ensemble(const MeshPlan& plan, const StateEnsemble& ensemble,
                             const NoiseModel& noise);

OutcomeSummary summarize(const DetectionReport& report,
                         const OutcomeMap& outcome_map,
                         const std::vector<double>& priors);

// Outcome maps matching the rail layout of the dilation module.
OutcomeMap ud_outcome_map(const DilatedStates& dilated,
                          const StateEnsemble& ensemble);
OutcomeMap filtering_outcome_map(const DilatedStates& dilated,
                                 const StateEnsemble& ensemble, int target);

}  // namespace multirail
