// Conditional (non-Hermitian) dynamics with mean-field two-body decay, and
// the closed-form spin moments of the echo protocol.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ryd/collective.hpp"
#include "ryd/spin_model.hpp"

namespace ryd {

/// Mean-field decoherence constants entering the conditional Hamiltonian.
struct MeanFieldRates {
  double gamma0 = 0.0;    // bulk displacement sum of gamma2
  double gamma_bar = 0.0; // global decay (N/2)[g1 + Gamma0 (1/4 - jz_bar^2)]
  double gamma_z = 0.0;   // linear-Jz decay g1 + Gamma0 (1/2 + jz_bar)
  double jz_bar = 0.0;    // time-averaged per-atom <Jz>
  double gamma_g = 0.0;   // N g1/2 + (1/2) sum_{i<j} gamma2_ij / 2
};

/// kappa_ij = V_ij - i gamma2_ij / 2.
std::complex<double> kappa_bar(const SpinChainModel& model, int i, int j);

/// Rates for a given per-atom jz_bar in [-1/2, 1/2]. Gamma0 uses the
/// two-sided bulk convention 2 sum_{d=1}^{N-1} gamma2(d a).
MeanFieldRates mean_field_rates(const SpinChainModel& model, double jz_bar);

/// Coherent post-echo <Jz> at dressing time t: -1/2 sum_i prod_{j!=i} cos(V_ij t / 2).
double analytic_jz(const SpinChainModel& model, double t);

/// (1/(N tau)) integral_0^tau <Jz(t)> dt via adaptive Simpson quadrature.
double jz_time_average(const SpinChainModel& model, double tau);

/// Entangling phases phi_ij = V_ij tau / 2.
struct PhaseTable {
  Eigen::MatrixXd phi;  // symmetric, zero diagonal

  double phi_plus(int i, int j, int k) const { return phi(i, k) + phi(j, k); }
  double phi_minus(int i, int j, int k) const { return phi(i, k) - phi(j, k); }

  static PhaseTable from_couplings(const Eigen::MatrixXd& couplings, double tau);
};

/// Closed-form coherent moments of the spin-echo sequence
/// (pi/2_x, phases tau/2, pi_x, phases tau/2, pi/2_x) on |0...0>:
///   <Jx> = <Jy> = 0,  <Jz> = -1/2 sum_i prod_{j!=i} cos phi_ij,
///   <Jx^2> = N/4 + 1/4 sum_{i<j} [prod_k cos phi-_ijk - prod_k cos phi+_ijk],
///   <Jy^2> = N/4,
///   <JxJy + JyJx> = +1/2 sum_{i<j} sin phi_ij [prod_k cos phi_ik + prod_k cos phi_jk].
/// O(N^3) via cached cosine products.
SpinMoments analytic_moments(const PhaseTable& phases, int n_sites);

/// Scale all first and second moments by exp(-gamma_bar * tau).
SpinMoments apply_dissipative_scaling(const SpinMoments& m, double gamma_bar,
                                      double tau);

/// exp(-i H_c tau)|psi> with H_c = (1/2) sum_j (sum_{k!=j} V_jk - i Gamma_z) Jz^j
/// + sum_{j<k} V_jk Jz^j Jz^k - i Gamma_bar / 2, evaluated as a diagonal
/// phase/damping table. Output is intentionally unnormalized.
Eigen::VectorXcd evolve_conditional(const SpinChainModel& model,
                                    const Eigen::VectorXcd& psi, double tau,
                                    const MeanFieldRates& rates);

/// Product rotation exp(-i angle J_axis) on every site; norm preserving.
Eigen::VectorXcd collective_rotation(const Eigen::VectorXcd& psi, int n_sites,
                                     Axis axis, double angle);

/// State-vector cap for evolve_conditional (2^20 amplitudes).
inline constexpr int kConditionalSiteCap = 20;

}  // namespace ryd
