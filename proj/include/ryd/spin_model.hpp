// Effective spin-1/2 chain of dressed atoms: pairwise couplings and
// dephasing rates sampled from the dressed interaction at lattice distances.
#pragma once

#include <Eigen/Dense>

#include "ryd/dressing.hpp"
#include "ryd/pair_potential.hpp"

namespace ryd {

enum class Scheme { Rmd, Srd };

struct SpinChainModel {
  int n_sites = 0;
  double spacing = 0.0;            // lattice constant a (length units)
  Eigen::MatrixXd couplings;       // V_jk, symmetric, zero diagonal
  double gamma1 = 0.0;             // single-body dephasing rate
  Eigen::MatrixXd gamma2_matrix;   // two-body dephasing, symmetric, zero diagonal
  double g = 0.0;                  // Raman drive
  Eigen::VectorXd site_detunings;  // delta^(k), default 0

  void validate() const;  // throws std::invalid_argument on contract violation
};

/// Chain with lattice constant a = r_min / lattice_ratio. Rmd samples the
/// dressed potential and two-body dephasing at the realized distances; Srd
/// uses the soft-core form with the same plateau V0 and no two-body term.
SpinChainModel make_chain(const PairCurveSet& curves, const MolecularPotential& pot,
                          const DressingParams& params, int n_sites,
                          double lattice_ratio, Scheme scheme);

/// Chain from an explicit coupling matrix (tests, synthetic models).
SpinChainModel make_chain_from_couplings(const Eigen::MatrixXd& couplings,
                                         double gamma1_rate,
                                         const Eigen::MatrixXd& gamma2_matrix,
                                         double g = 0.0);

}  // namespace ryd
