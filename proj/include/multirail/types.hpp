// Shared aliases, tolerances, and small Hermitian-matrix helpers.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace multirail {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Default tolerances used across modules.
constexpr double kPsdTol = 1e-9;           // eigenvalue slack for feasibility checks
constexpr double kRankTol = 1e-9;          // eigenvalue cutoff for ancilla rank
constexpr double kGramMatchTol = 1e-9;     // input/output Gram agreement for dilation
constexpr double kUnitarityTol = 1e-10;

// Thrown when a discrimination problem has no solution for the given ensemble
// (e.g. unambiguous discrimination of linearly dependent states).
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline double min_eigenvalue(const Matrix& herm) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline bool is_psd(const Matrix& herm, double tol = kPsdTol) {
    return min_eigenvalue(herm) >= -tol;
}

inline double unitarity_residual(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

// splitmix64: deterministic stream derivation for per-trial RNG seeding.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace multirail
