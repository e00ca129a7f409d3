// Spin-echo squeezing: Wineland parameter, optimal quadrature, dressing-time
// optimization and scheme/size scaling scans.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ryd/collective.hpp"
#include "ryd/lindblad.hpp"
#include "ryd/meanfield.hpp"
#include "ryd/spin_model.hpp"

namespace ryd {

enum class Method { ExactMe, ConditionalNh, Analytic };

struct EchoProtocol {
  double tau = 0.0;  // total dressing time (two windows of tau/2)
  Scheme scheme = Scheme::Rmd;
  Method method = Method::Analytic;
  bool dissipative = true;  // false: coherent reference (all rates off)
  bool include_tbd = true;  // false: drop two-body dephasing from the rates
  int me_cap = 8;           // dense master-equation site cap
};

struct SqueezingResult {
  double xi2 = 0.0;
  double theta_star = 0.0;  // optimal quadrature angle in [-pi/2, pi/2)
  double tau = 0.0;
  double gamma_bar = 0.0;   // 0 for coherent runs
  SpinMoments moments;
};

struct MinVariance {
  double theta = 0.0;
  double variance = 0.0;
};

/// Minimal transverse variance over theta: with A = Var(Jx), B = Var(Jy),
/// C = cov, returns (A+B)/2 - sqrt(((A-B)/2)^2 + C^2) and the minimizer.
MinVariance min_variance(const SpinMoments& m);

/// Wineland parameter N * min-variance / |<J>|^2. Throws std::runtime_error
/// when the mean spin length vanishes (contrast lost).
double xi_squared(const SpinMoments& m, int n_sites);

/// Execute the five-stage echo for the chosen method. t_pi/2 = pi/(2g) is
/// reported by the CLI as metadata; pulses are instantaneous unitaries.
SqueezingResult run_echo(const EchoProtocol& protocol, const SpinChainModel& model);

struct TauOptimum {
  double tau = 0.0;
  double xi2 = 1.0;
  double theta_star = 0.0;
  bool squeezed = false;  // false: xi2 >= 1 everywhere (sentinel tau = 0)
};

/// Coarse log-spaced scan followed by golden-section refinement
/// (relative tau tolerance 1e-3); reports the smallest xi2 found.
TauOptimum optimize_tau(const EchoProtocol& protocol, const SpinChainModel& model,
                        double tau_lo, double tau_hi, int coarse_points = 400);

struct ScanRow {
  Scheme scheme = Scheme::Rmd;
  double rc_over_a = 1.0;
  int n_sites = 0;
  double gamma = 0.0;
  double xi2_min = 1.0;
  double v0_tau_min = 0.0;
};

struct ScanGrid {
  std::vector<Scheme> schemes;
  std::vector<double> lattice_ratios;
  std::vector<int> n_list;
  std::vector<double> gamma_list;
  double v0tau_lo = 0.005;
  double v0tau_hi = 4.0;
  int coarse_points = 400;
  int threads = 1;
};

/// Dissipative (xi2_min, V0 tau_min) table over scheme x ratio x N x gamma.
/// Rows are independent; N > 20 rows always use the analytic method.
std::vector<ScanRow> scan_scaling(const PairCurveSet& curves,
                                  const MolecularPotential& pot,
                                  const DressingParams& base_params,
                                  const ScanGrid& grid);

}  // namespace ryd
