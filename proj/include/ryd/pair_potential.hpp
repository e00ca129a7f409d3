// Microwave-coupled two-atom Rydberg pair Hamiltonian, its eigenenergy
// branches over a distance grid, and the molecular potential extracted from
// the branch the dressing laser addresses.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace ryd {

/// Microwave field coupling the two Rydberg states.
struct MwCoupling {
  double omega_mw = 0.0;  // Rabi frequency (angular frequency units)
  double delta_mw = 0.0;  // detuning
};

/// Dispersion coefficients of the pair channels (energy * length^n).
/// The ss and pp van der Waals coefficients are expected to carry opposite
/// signs so one channel is repulsive where the other attracts.
struct DispersionCoeffs {
  double c6_ss = 0.0;
  double c6_pp = 0.0;
  double c3_sp = 0.0;
};

/// Mixing angle atan2(2 omega_mw, delta_mw) in (-pi/2, pi]; delta_mw = 0
/// gives pi/2. Throws std::domain_error when both fields vanish.
double mixing_angle(const MwCoupling& mw);

/// Pair Hamiltonian in the basis {|ss>, (|sp>+|ps>)/sqrt2, |pp>}:
/// diag(-c6_ss/r^6, delta_mw + c3_sp/r^3, 2 delta_mw - c6_pp/r^6) with
/// omega_mw/sqrt2 on the two ladder couplings. Throws std::domain_error
/// for r <= 0.
Eigen::Matrix3d build_pair_hamiltonian(double r, const MwCoupling& mw,
                                       const DispersionCoeffs& coeffs);

/// Default distance grid: 2000 log-spaced points, 0.3 um to 20 um.
Eigen::VectorXd default_r_grid();

/// Eigenenergy branches tracked adiabatically along the grid.
struct PairCurveSet {
  Eigen::VectorXd r_grid;
  Eigen::MatrixXd branches;            // 3 x M, row n = branch n
  std::array<double, 3> asymptotes{};  // r -> infinity eigenvalues, ascending
  int branch_of_interest = 0;
  MwCoupling mw;
  DispersionCoeffs coeffs;
  // eigenvectors per grid point (columns in branch order); kept so that
  // off-grid evaluations can identify the branch by overlap
  std::vector<Eigen::Matrix3d> vectors;
};

/// Diagonalize on the grid and order branches by adiabatic continuation
/// (maximal eigenvector overlap with the neighboring point, seeded at the
/// largest distance from the asymptotic eigenstates). branch_of_interest is
/// the branch connecting to two atoms in the upper microwave-dressed state
/// (the ss channel when omega_mw = 0).
PairCurveSet eigencurves(const Eigen::VectorXd& r_grid, const MwCoupling& mw,
                         const DispersionCoeffs& coeffs);

/// Molecular potential U(R) = E(R) - E(R_max) for the branch of interest.
struct MolecularPotential {
  Eigen::VectorXd r_grid;
  Eigen::VectorXd u;
  double r_min = 0.0;   // location of the minimum (parabolic refinement)
  double u_min = 0.0;   // U(r_min)
  bool interior_minimum = false;  // false: minimum sits on a grid edge
  double asymptote = 0.0;         // branch energy at the grid tail
};

/// Extract U(R) from the tracked branch. Throws std::invalid_argument when
/// the tail of the branch has not flattened out (grid too short).
MolecularPotential molecular_potential(const PairCurveSet& curves);

/// U at an arbitrary distance: exact diagonalization with the branch
/// identified by overlap against the nearest tracked grid point. Distances
/// beyond the grid tail return 0 (flat tail).
double u_at(const PairCurveSet& curves, const MolecularPotential& pot, double r);

/// Scale factor s such that scaling all coefficients and the microwave
/// field by s moves the potential minimum to u_target (shape-preserving).
double depth_scale(const MwCoupling& mw, const DispersionCoeffs& coeffs,
                   double u_target);

}  // namespace ryd
