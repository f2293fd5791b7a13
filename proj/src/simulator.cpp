#include "multirail/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace multirail {

namespace {

Vector embed_state(const PureState& state, int total) {
    const int d = static_cast<int>(state.amplitudes().size());
    if (d > total) {
        throw std::invalid_argument("state does not fit in the mesh");
    }
    Vector v = Vector::Zero(total);
    v.head(d) = state.amplitudes();
    return v;
}

struct StageParams {
    int j, k;
    double t, phi;
};

void apply_stages(Vector& v, const std::vector<StageParams>& stages) {
    for (const auto& s : stages) {
        const double r = std::sqrt(std::max(0.0, 1.0 - s.t * s.t));
        const Complex ph = std::polar(1.0, s.phi);
        const Complex aj = v(s.j);
        const Complex ak = v(s.k);
        v(s.j) = s.t * aj - r * ph * ak;
        v(s.k) = r * aj + s.t * ph * ak;
    }
}

std::vector<StageParams> base_params(const MeshPlan& plan,
                                     const NoiseModel& noise) {
    std::vector<StageParams> out;
    for (std::size_t idx = 0; idx < plan.stages.size(); ++idx) {
        const auto& s = plan.stages[idx];
        StageParams p{s.rail_j - 1, s.rail_k - 1, s.transmission, s.phase};
        const auto offset =
            noise.systematic_phase_offsets.find(static_cast<int>(idx));
        if (offset != noise.systematic_phase_offsets.end()) {
            p.phi += offset->second;
        }
        out.push_back(p);
    }
    return out;
}

RealVector probabilities(const Vector& v) {
    return v.cwiseAbs2().real();
}

std::uint64_t trial_seed(std::uint64_t seed, int state, long long trial) {
    const std::uint64_t per_state =
        splitmix64(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(state + 1));
    return splitmix64(per_state + static_cast<std::uint64_t>(trial));
}

}  // namespace

RealVector propagate_ideal(const Matrix& u, const PureState& state) {
    const Vector out = u * embed_state(state, static_cast<int>(u.rows()));
    return probabilities(out);
}

RealVector propagate_ideal(const MeshPlan& plan, const PureState& state) {
    return propagate_ideal(recompose(plan), state);
}

DetectionReport run_ensemble(const MeshPlan& plan, const StateEnsemble& ensemble,
                             const NoiseModel& noise) {
    if (noise.phase_jitter_sigma < 0.0 || noise.waveplate_jitter_sigma < 0.0) {
        throw std::invalid_argument("noise sigmas must be nonnegative");
    }
    if (noise.trials < 1) {
        throw std::invalid_argument("trials must be positive");
    }
    const int dim = plan.dim();
    const int n = static_cast<int>(ensemble.size());
    const std::vector<StageParams> base = base_params(plan, noise);

    DetectionReport report;
    report.matrix.setZero(n, dim);

    if (!noise.stochastic()) {
        // Deterministic path: systematic offsets only, no averaging needed.
        for (int i = 0; i < n; ++i) {
            Vector v = embed_state(ensemble.state(i), dim);
            apply_stages(v, base);
            report.matrix.row(i) = probabilities(v).transpose();
        }
        report.normalization = "deterministic propagation; rows sum to 1";
        for (int i = 0; i < n; ++i) {
            report.matrix.row(i) /= report.matrix.row(i).sum();
        }
        return report;
    }

    // Pre-convert transmissions to middle-plate angles once; jitter acts on
    // the angle, scaled draws keep trials coupled across sigma sweeps.
    std::vector<double> theta(base.size());
    for (std::size_t s = 0; s < base.size(); ++s) {
        theta[s] = 0.5 * std::acos(std::clamp(base[s].t, 0.0, 1.0));
    }
    const double wave_sigma_rad =
        noise.waveplate_jitter_sigma * M_PI / 180.0;

    for (int i = 0; i < n; ++i) {
        const Vector input = embed_state(ensemble.state(i), dim);
        RealVector acc = RealVector::Zero(dim);
        std::vector<StageParams> stages = base;
        for (long long trial = 0; trial < noise.trials; ++trial) {
            std::mt19937_64 rng(trial_seed(noise.seed, i, trial));
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (std::size_t s = 0; s < base.size(); ++s) {
                const double z_phase = gauss(rng);
                const double z_wave = gauss(rng);
                stages[s].phi = base[s].phi + noise.phase_jitter_sigma * z_phase;
                stages[s].t =
                    std::cos(2.0 * (theta[s] + wave_sigma_rad * z_wave));
            }
            Vector v = input;
            apply_stages(v, stages);
            const RealVector probs = probabilities(v);
            if (noise.sample_photons) {
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                double u = unif(rng) * probs.sum();
                int rail = 0;
                while (rail < dim - 1 && u > probs(rail)) {
                    u -= probs(rail);
                    ++rail;
                }
                acc(rail) += 1.0;
            } else {
                acc += probs;
            }
        }
        report.matrix.row(i) = (acc / acc.sum()).transpose();
    }
    report.normalization = "Monte Carlo average; rows normalized to their sum";
    return report;
}

OutcomeSummary summarize(const DetectionReport& report,
                         const OutcomeMap& outcome_map,
                         const std::vector<double>& priors) {
    const int n = static_cast<int>(report.matrix.rows());
    const int dim = static_cast<int>(report.matrix.cols());
    if (static_cast<int>(priors.size()) != n) {
        throw std::invalid_argument("priors do not match report rows");
    }
    for (int rail = 1; rail <= dim; ++rail) {
        if (outcome_map.find(rail) == outcome_map.end()) {
            std::ostringstream msg;
            msg << "rail " << rail << " has no outcome assignment";
            throw std::invalid_argument(msg.str());
        }
    }
    OutcomeSummary out;
    for (int i = 0; i < n; ++i) {
        for (const auto& [rail, winners] : outcome_map) {
            if (rail < 1 || rail > dim) {
                throw std::invalid_argument("outcome map rail out of range");
            }
            const double mass = priors[static_cast<std::size_t>(i)] *
                                report.matrix(i, rail - 1);
            if (winners.empty()) {
                out.inconclusive_rate += mass;
            } else if (std::find(winners.begin(), winners.end(), i) !=
                       winners.end()) {
                out.success_rate += mass;
            } else {
                out.error_rate += mass;
            }
        }
    }
    return out;
}

OutcomeMap ud_outcome_map(const DilatedStates& dilated,
                          const StateEnsemble& ensemble) {
    OutcomeMap map;
    for (int i = 0; i < static_cast<int>(ensemble.size()); ++i) {
        const auto rails = dilated.conclusive_rails.find(ensemble.label(i));
        if (rails == dilated.conclusive_rails.end()) {
            throw std::invalid_argument("dilated states lack a rail for " +
                                        ensemble.label(i));
        }
        for (int rail : rails->second) {
            map[rail].push_back(i);
        }
    }
    for (int rail : dilated.inconclusive_rails) {
        map[rail];
    }
    for (int rail = 1; rail <= dilated.total_dim(); ++rail) {
        map.emplace(rail, std::vector<int>{});
    }
    return map;
}

OutcomeMap filtering_outcome_map(const DilatedStates& dilated,
                                 const StateEnsemble& ensemble, int target) {
    const auto t_rails = dilated.conclusive_rails.find("target");
    const auto s_rails = dilated.conclusive_rails.find("subset");
    if (t_rails == dilated.conclusive_rails.end() ||
        s_rails == dilated.conclusive_rails.end()) {
        throw std::invalid_argument(
            "dilated states lack target/subset rail assignments");
    }
    OutcomeMap map;
    for (int rail : t_rails->second) {
        map[rail] = {target};
    }
    std::vector<int> subset;
    for (int k = 0; k < static_cast<int>(ensemble.size()); ++k) {
        if (k != target) subset.push_back(k);
    }
    for (int rail : s_rails->second) {
        map[rail] = subset;
    }
    for (int rail = 1; rail <= dilated.total_dim(); ++rail) {
        map.emplace(rail, std::vector<int>{});
    }
    return map;
}

}  // namespace multirail
