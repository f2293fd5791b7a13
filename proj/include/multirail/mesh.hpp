// Compilation of unitaries into ordered two-rail beam-splitter stages plus
// output phase shifters, and the mapping from stage settings to waveplate
// angles and phase-shifter tilts.
#pragma once

#include <array>
#include <vector>

#include "multirail/types.hpp"

namespace multirail {

// One variable beam splitter coupling rails (j, k), 1-based. Acting on
// amplitudes (a_j, a_k):
//   out_j = t a_j - sqrt(1-t^2) e^{i phi} a_k
//   out_k = sqrt(1-t^2) a_j + t e^{i phi} a_k
struct BeamSplitterSetting {
    int rail_j = 0;
    int rail_k = 0;
    double transmission = 1.0;  // amplitude transmission t in [0, 1]
    double phase = 0.0;         // phi, radians
};

// Ordered stage list; stages apply first-to-last, then the diagonal output
// phases. output_phases fixes the rail count.
struct MeshPlan {
    std::vector<BeamSplitterSetting> stages;
    std::vector<double> output_phases;

    int dim() const { return static_cast<int>(output_phases.size()); }
};

// Half-wave-plate angles (degrees) realizing one stage: two fixed outer
// plates and the variable middle plate with t = cos(2 theta).
struct VBSAngles {
    std::array<double, 3> hwp_angles{};
};

// Triangular nulling: zero sub-diagonal entries row by row from the bottom
// with two-rail rotations. recompose(decompose(u)) == u within 1e-10.
MeshPlan decompose(const Matrix& u);

Matrix recompose(const MeshPlan& plan);

// Hand-specified four-rail plans for the two canonical instances; both use
// zero stage phases and zero output phases.
MeshPlan paper_plan_sd();
MeshPlan paper_plan_filtering(double a);

VBSAngles vbs_angles(const BeamSplitterSetting& setting);

// Inverse of the middle-plate mapping, for perturbed-angle simulation.
double transmission_from_angle(double theta_degrees);

// Linearized glass-slide tilt increment (degrees) around the operating
// point: a pi phase shift corresponds to 0.05 degrees.
double phase_to_tilt(double phi_radians);

}  // namespace multirail
