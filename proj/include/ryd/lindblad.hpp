// Exact open-system evolution: the dressed many-body master equation with
// single- and two-body dephasing, plus the two-atom three-level model and
// its effective two-level reduction.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ryd/collective.hpp"
#include "ryd/dressing.hpp"
#include "ryd/spin_model.hpp"

namespace ryd {

struct DensityState {
  Eigen::MatrixXcd rho;

  static DensityState all_zero(int n_sites);  // |0...0><0...0|
  static DensityState plus_x(int n_sites);    // product of (|0>+|1>)/sqrt2
  static DensityState product(const std::vector<Eigen::Vector2cd>& site_states);

  int n_sites() const;
  /// Trace within tr_tol of 1, Hermiticity within herm_tol, eigenvalues
  /// above -pos_tol. Throws std::runtime_error on violation.
  void check(double tr_tol = 1e-9, double herm_tol = 1e-9,
             double pos_tol = 1e-8) const;
};

struct ObservableSeries {
  Eigen::VectorXd times;
  Eigen::VectorXd jx, jy, jz, jz_var;
  std::vector<std::string> population_labels;
  Eigen::MatrixXd populations;  // n_times x n_labels
};

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  bool check_state = true;  // run DensityState::check at output times
  int me_cap = 8;           // dense-solver site cap
};

/// Integrate rho' = -i[H, rho] + sum_k L[o_k] + sum_{k<l} L[o_kl] with
/// H = sum_k (g Jx^k + delta_k Jz^k) + sum_{k<l} V_kl Jz^k Jz^l,
/// o_k = sqrt(gamma1) |1_k><1_k|, o_kl = sqrt(gamma2_kl) |1_k 1_l><1_k 1_l|.
ObservableSeries evolve_master_equation(const SpinChainModel& model,
                                        const DensityState& initial,
                                        const Eigen::VectorXd& times,
                                        const EvolveOptions& opt = {});

/// Advance a density matrix in place by t under the model (same generator
/// as evolve_master_equation). Used by the echo sequence.
void evolve_density(const SpinChainModel& model, Eigen::MatrixXcd& rho, double t,
                    const EvolveOptions& opt = {});

// --- two-atom validation models (fixed-step Liouvillian propagator) ---

/// |00> of two atoms with `levels` internal states each.
Eigen::MatrixXcd pair_ground_state(int levels);

/// Three-level pair {0,1,r}: H = sum_j [delta srr + delta0 s00 +
/// (g/2 s01 + omega/2 s1r + h.c.)] + u12 srr x srr, decay r -> 1 at gamma.
/// Population labels: p00, p01s, p11.
ObservableSeries evolve_three_level_pair(const DressingParams& p, double u12,
                                         const Eigen::MatrixXcd& initial,
                                         const Eigen::VectorXd& times);

/// Effective two-level pair: H = V12 n1 n2 + g(Jx1 + Jx2) with
/// V12 = dressed_potential(u12), jumps sqrt(gamma1) n_j and
/// sqrt(gamma2(u12)) n1 n2. Population labels as above.
ObservableSeries evolve_effective_pair(const DressingParams& p, double u12,
                                       const Eigen::MatrixXcd& initial,
                                       const Eigen::VectorXd& times);

/// Lindblad superoperator as a dense matrix over vectorized rho
/// (column-major vectorization).
Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& h,
                             const std::vector<Eigen::MatrixXcd>& jumps,
                             const std::vector<double>& rates);

}  // namespace ryd
