// Closed-form dressed quantities: interaction V(R), single- and two-body
// dephasing rates, coherence strength, and the non-perturbative two-atom
// dressed potential used to validate the perturbative formula.
#pragma once

#include <Eigen/Dense>

namespace ryd {

/// Dressing laser / Raman drive parameters, angular frequency units.
struct DressingParams {
  double omega = 1.0;   // dressing Rabi frequency
  double delta = 0.0;   // single-photon detuning (signed)
  double gamma = 0.0;   // Rydberg decay rate
  double g = 0.0;       // ground-state Raman coupling
  double delta0 = 0.0;  // two-photon / hyperfine detuning

  // diagnostic only: |delta| >= 3 omega marks the weak-dressing regime
  bool weak_dressing() const;
};

/// Saturated dressed interaction V0 = omega^4 / (8 delta^3).
double v0(const DressingParams& p);

/// Two-photon detuning of the collective |11> -> |rr> transition.
double delta2(double u_at_r, const DressingParams& p);

/// Dressed pair interaction V = V0 * delta2 * U / (delta2^2 + gamma^2).
double dressed_potential(double u_at_r, const DressingParams& p);

/// Single-body dephasing rate omega^2 gamma / (4 delta^2).
double gamma1(const DressingParams& p);

/// Two-body dephasing rate omega^4 gamma / (2 delta^2 [delta2^2 + gamma^2]).
double gamma2(double u_at_r, const DressingParams& p);

/// Coherence strength, the exact ratio V / (2 gamma1 + gamma2).
double coherence(double u_at_r, const DressingParams& p);

/// Approximate coherence (omega^2 / 4 delta gamma) * delta2 U / (omega^2 + delta2^2).
double coherence_approx(double u_at_r, const DressingParams& p);

/// Soft-core limit C_s = omega^2 / (4 |delta| gamma).
double coherence_srd_limit(const DressingParams& p);

/// Molecular-resonance limit C_m = omega / (4 gamma), reached at |delta2| = omega.
double coherence_molecular_limit(const DressingParams& p);

/// Effective two-photon Rabi frequency omega^2 / delta.
double two_photon_rabi(const DressingParams& p);

/// Conventional soft-core dressed interaction V0 / (1 + (r/r_c)^6).
double srd_potential(double r, double r_c, const DressingParams& p);

/// Non-perturbative dressed pair energy: diagonalize the two-atom ladder
/// {|11>, |1r>_s, |rr>} = diag(0, delta, 2 delta + U) with couplings
/// sqrt(2) omega / 2, follow the |11>-character branch, subtract the same
/// branch at U = 0. Throws std::runtime_error at the antiblockade resonance.
double full_dressed_potential(double u_at_r, const DressingParams& p);

/// Dressed profile sampled over a distance grid.
struct DressedProfile {
  Eigen::VectorXd r_grid;
  Eigen::VectorXd v;          // V(R)
  Eigen::VectorXd gamma2;     // two-body dephasing
  Eigen::VectorXd coherence;  // exact C(R)
  Eigen::VectorXd delta2;     // two-photon detuning
};

DressedProfile dressed_profile(const Eigen::VectorXd& r_grid,
                               const Eigen::VectorXd& u, const DressingParams& p);

}  // namespace ryd
