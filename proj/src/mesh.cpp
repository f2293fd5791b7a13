#include "multirail/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace multirail {

namespace {

double wrap_phase(double phi) {
    phi = std::remainder(phi, 2.0 * M_PI);
    if (phi <= -M_PI) phi += 2.0 * M_PI;
    return phi;
}

void validate_stage(const BeamSplitterSetting& s, int dim) {
    if (s.rail_j < 1 || s.rail_j > dim || s.rail_k < 1 || s.rail_k > dim ||
        s.rail_j == s.rail_k) {
        throw std::invalid_argument("stage rails out of range");
    }
    if (!(s.transmission >= 0.0 && s.transmission <= 1.0)) {
        throw std::invalid_argument("transmission must lie in [0, 1]");
    }
}

void apply_stage_inplace(Matrix& m, const BeamSplitterSetting& s) {
    const int j = s.rail_j - 1;
    const int k = s.rail_k - 1;
    const double t = s.transmission;
    const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
    const Complex ph = std::polar(1.0, s.phase);
    const Eigen::RowVectorXcd row_j = m.row(j);
    const Eigen::RowVectorXcd row_k = m.row(k);
    m.row(j) = t * row_j - r * ph * row_k;
    m.row(k) = r * row_j + t * ph * row_k;
}

}  // namespace

Matrix recompose(const MeshPlan& plan) {
    const int dim = plan.dim();
    if (dim < 1) {
        throw std::invalid_argument("plan has no rails");
    }
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto& stage : plan.stages) {
        validate_stage(stage, dim);
        apply_stage_inplace(u, stage);
    }
    for (int i = 0; i < dim; ++i) {
        u.row(i) *= std::polar(1.0, plan.output_phases[static_cast<std::size_t>(i)]);
    }
    return u;
}

MeshPlan decompose(const Matrix& u) {
    if (u.rows() != u.cols() || u.rows() < 1) {
        throw std::invalid_argument("matrix must be square");
    }
    if (unitarity_residual(u) > kUnitarityTol) {
        throw std::invalid_argument("matrix is not unitary");
    }
    const int n = static_cast<int>(u.rows());
    Matrix v = u;
    MeshPlan plan;
    plan.output_phases.assign(static_cast<std::size_t>(n), 0.0);

    // Null V(i, j) by right-multiplying the adjoint of a rotation on rails
    // (j, i); recorded stages then apply first-to-last in recompose.
    for (int i = n - 1; i >= 1; --i) {
        for (int j = 0; j < i; ++j) {
            const double off = std::abs(v(i, j));
            if (off <= 1e-13) continue;
            const double diag = std::abs(v(i, i));
            BeamSplitterSetting s;
            s.rail_j = j + 1;
            s.rail_k = i + 1;
            if (diag <= 1e-13) {
                s.transmission = 0.0;
                s.phase = 0.0;
            } else {
                const double h = std::hypot(diag, off);
                s.transmission = diag / h;
                s.phase = wrap_phase(std::arg(v(i, i)) - std::arg(v(i, j)));
            }
            const double t = s.transmission;
            const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
            const Complex phc = std::polar(1.0, -s.phase);
            const Vector col_j = v.col(j);
            const Vector col_k = v.col(i);
            v.col(j) = t * col_j - r * phc * col_k;
            v.col(i) = r * col_j + t * phc * col_k;
            plan.stages.push_back(s);
        }
    }
    for (int i = 0; i < n; ++i) {
        const Complex diag = v(i, i);
        plan.output_phases[static_cast<std::size_t>(i)] =
            std::abs(diag) > 1e-13 ? wrap_phase(std::arg(diag)) : 0.0;
    }
    return plan;
}

MeshPlan paper_plan_sd() {
    MeshPlan plan;
    plan.output_phases.assign(4, 0.0);
    plan.stages = {
        {1, 4, 1.0 / std::sqrt(2.0), 0.0},
        {3, 4, 1.0 / std::sqrt(2.0), 0.0},
        {3, 2, 1.0 / std::sqrt(2.0), 0.0},
    };
    return plan;
}

MeshPlan paper_plan_filtering(double a) {
    if (!(a > 0.0 && a <= 1.0)) {
        throw std::invalid_argument("family parameter must lie in (0, 1]");
    }
    MeshPlan plan;
    plan.output_phases.assign(4, 0.0);
    plan.stages = {
        {1, 4, 1.0 / std::sqrt(1.0 + a), 0.0},
        {3, 4, std::sqrt(1.0 - a), 0.0},
    };
    return plan;
}

VBSAngles vbs_angles(const BeamSplitterSetting& setting) {
    if (!(setting.transmission >= 0.0 && setting.transmission <= 1.0)) {
        throw std::invalid_argument("transmission must lie in [0, 1]");
    }
    double theta =
        0.5 * std::acos(std::clamp(setting.transmission, 0.0, 1.0)) * 180.0 /
        M_PI;
    // Angles land on clean hardware settings (e.g. 22.5 degrees for a 50/50
    // splitter); snap away the acos rounding at the 1e-12 degree level.
    theta = std::round(theta * 1e12) / 1e12;
    VBSAngles out;
    out.hwp_angles = {45.0, theta, 45.0};
    return out;
}

double transmission_from_angle(double theta_degrees) {
    return std::cos(2.0 * theta_degrees * M_PI / 180.0);
}

double phase_to_tilt(double phi_radians) {
    return 0.05 * phi_radians / M_PI;
}

}  // namespace multirail
