// Collective spin-1/2 operators on computational-basis states.
// Basis convention: bit k of the index set <=> site k in |1>, so
// Jz|1> = +1/2 |1> and the all-zero index is the fully polarized |0...0>.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace ryd {

using cplx = std::complex<double>;

enum class Axis { X, Y, Z };

/// First and second moments of the collective spin J = sum_k J^(k).
struct SpinMoments {
  double jx = 0.0, jy = 0.0, jz = 0.0;
  double jx2 = 0.0;    // <Jx^2>
  double jy2 = 0.0;    // <Jy^2>
  double cross = 0.0;  // <Jx Jy + Jy Jx>
};

std::size_t hilbert_dim(int n_sites);

/// Sum of m_j (+-1/2) for a computational basis state.
double basis_jz(std::uint64_t state, int n_sites);

/// 2x2 gate exp(-i angle J_axis) with J = sigma/2.
Eigen::Matrix2cd rotation_gate(Axis axis, double angle);

// --- state vectors ---
void apply_site_gate(Eigen::VectorXcd& psi, int n_sites, int site,
                     const Eigen::Matrix2cd& gate);
void apply_collective_rotation(Eigen::VectorXcd& psi, int n_sites, Axis axis,
                               double angle);
Eigen::VectorXcd apply_jx(const Eigen::VectorXcd& psi, int n_sites);
Eigen::VectorXcd apply_jy(const Eigen::VectorXcd& psi, int n_sites);

/// Moments <psi|A|psi> without normalizing (callers decide what the norm means).
SpinMoments state_moments(const Eigen::VectorXcd& psi, int n_sites);

// --- density matrices ---
void apply_site_gate(Eigen::MatrixXcd& rho, int n_sites, int site,
                     const Eigen::Matrix2cd& gate);
void apply_collective_rotation(Eigen::MatrixXcd& rho, int n_sites, Axis axis,
                               double angle);
SpinMoments density_moments(const Eigen::MatrixXcd& rho, int n_sites);

}  // namespace ryd
