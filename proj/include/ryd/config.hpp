// JSON run configuration: strict schema, unit handling, shipped presets.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "ryd/dressing.hpp"
#include "ryd/pair_potential.hpp"
#include "ryd/spin_model.hpp"
#include "ryd/squeezing.hpp"

namespace ryd {

struct TauWindow {
  double v0tau_lo = 0.01;
  double v0tau_hi = 0.5;
  int coarse_points = 400;
};

/// Fully validated configuration, already converted to internal units
/// (omega = 1, lengths in um).
struct RunConfig {
  std::string units = "omega";  // "omega" | "mhz_2pi"
  double omega_mhz = 0.0;       // original Rabi frequency when units = mhz_2pi

  DressingParams dressing;
  MwCoupling mw;
  DispersionCoeffs coeffs;
  bool depth_calibrated = false;
  double u_target = 0.0;  // potential minimum after calibration

  struct Chain {
    int n_sites = 7;
    double lattice_ratio = 1.0;
    int me_cap = 8;
  } chain;

  struct Protocol {
    Scheme scheme = Scheme::Rmd;
    Method method = Method::Analytic;
    TauWindow tau;
  } protocol;

  struct PairValidation {
    std::vector<double> u12_list;  // empty: dynamics runs the spin chain
    double v0t_max = 10.0;
    int points = 400;
  } pair;

  struct Scan {
    std::vector<std::string> schemes = {"rmd", "srd"};
    std::vector<double> lattice_ratios = {1.0, 2.0, 3.0};
    std::vector<int> n_list;
    std::vector<double> gamma_list;
    TauWindow tau{0.005, 4.0, 400};
  } scan;

  struct Output {
    std::string path = ".";
    std::string format = "csv";
  } output;

  struct Dynamics {
    double v0t_max = 20.0;
    int points = 400;
    // "plus_x", "all_zero", or one [re0, im0, re1, im1] entry per site
    std::string initial = "plus_x";
    std::vector<std::array<double, 4>> initial_sites;
  } dynamics;
};

/// Parse + validate a config file. Unknown keys are rejected; errors name
/// the offending field; parse errors carry line/column.
RunConfig load_config(const std::string& path);

/// Same, from an in-memory JSON string (used for presets and tests).
RunConfig load_config_text(const std::string& text, const std::string& origin);

/// Path of a shipped preset (fig1, fig2, fig3, fig4, figS1, figS2).
std::string preset_path(const std::string& name);

/// Convert an internal angular frequency back to the config's declared unit.
double to_output_units(const RunConfig& cfg, double value);

}  // namespace ryd
