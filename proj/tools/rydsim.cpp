// rydsim: pair potentials, dressed interactions, driven-dissipative spin
// chains and spin-echo squeezing from one JSON configuration.
#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "ryd/config.hpp"
#include "ryd/csv.hpp"
#include "ryd/dressing.hpp"
#include "ryd/lindblad.hpp"
#include "ryd/meanfield.hpp"
#include "ryd/pair_potential.hpp"
#include "ryd/squeezing.hpp"
#include "ryd/validation.hpp"

namespace {

using namespace ryd;

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  int threads = 1;
};

RunConfig resolve_config(const CommonArgs& args) {
  if (!args.config_path.empty() && !args.preset.empty())
    throw std::invalid_argument("use either --config or --preset, not both");
  if (!args.config_path.empty()) return load_config(args.config_path);
  if (!args.preset.empty()) return load_config(preset_path(args.preset));
  throw std::invalid_argument("a configuration is required (--config or --preset)");
}

std::string out_file(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

int cmd_potential(const CommonArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const PairCurveSet curves = eigencurves(default_r_grid(), cfg.mw, cfg.coeffs);
  const MolecularPotential pot = molecular_potential(curves);
  CsvWriter csv(out_file(args, "potential.csv"),
                {"R_um", "E1", "E2", "E3", "U", "branch_index"});
  for (Eigen::Index i = 0; i < curves.r_grid.size(); ++i) {
    csv.row({curves.r_grid[i], to_output_units(cfg, curves.branches(0, i)),
             to_output_units(cfg, curves.branches(1, i)),
             to_output_units(cfg, curves.branches(2, i)),
             to_output_units(cfg, pot.u[i]),
             static_cast<double>(curves.branch_of_interest)});
  }
  std::cout << "potential: branch " << curves.branch_of_interest << ", Rc = "
            << pot.r_min << " um, U(Rc) = " << to_output_units(cfg, pot.u_min)
            << (cfg.units == "mhz_2pi" ? " (2pi MHz)" : " (units of Omega)")
            << (pot.interior_minimum ? "" : " [minimum at grid edge]") << "\n";
  return 0;
}

int cmd_dressed(const CommonArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const PairCurveSet curves = eigencurves(default_r_grid(), cfg.mw, cfg.coeffs);
  const MolecularPotential pot = molecular_potential(curves);
  const DressedProfile prof = dressed_profile(pot.r_grid, pot.u, cfg.dressing);
  const double v0_val = v0(cfg.dressing);
  const double g1 = gamma1(cfg.dressing);
  const double cs = coherence_srd_limit(cfg.dressing);

  CsvWriter csv(out_file(args, "dressed.csv"),
                {"R_um", "V_over_V0", "gamma2_over_gamma1", "C_over_Cs"});
  for (Eigen::Index i = 0; i < prof.r_grid.size(); ++i)
    csv.row({prof.r_grid[i], prof.v[i] / v0_val, prof.gamma2[i] / g1,
             prof.coherence[i] / cs});

  CsvWriter full(out_file(args, "dressed_full.csv"),
                 {"R_um", "V_over_V0", "Vfull_over_V0", "delta2_over_omega"});
  DressingParams coherent = cfg.dressing;
  coherent.gamma = 0.0;
  for (Eigen::Index i = 0; i < prof.r_grid.size(); ++i)
    full.row({prof.r_grid[i], dressed_potential(pot.u[i], coherent) / v0_val,
              full_dressed_potential(pot.u[i], cfg.dressing) / v0_val,
              prof.delta2[i] / cfg.dressing.omega});

  const double u_rc = u_at(curves, pot, pot.r_min);
  std::cout << "dressed: V(Rc)/V0 = " << dressed_potential(u_rc, cfg.dressing) / v0_val
            << ", gamma2(Rc)/gamma1 = " << gamma2(u_rc, cfg.dressing) / g1
            << ", C(Rc)/Cs = " << coherence(u_rc, cfg.dressing) / cs << "\n";
  return 0;
}

int cmd_dynamics(const CommonArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const double v0_abs = std::abs(v0(cfg.dressing));

  if (!cfg.pair.u12_list.empty()) {
    // two-atom model validation: three-level vs effective two-level
    CsvWriter csv(out_file(args, "dynamics_pair.csv"),
                  {"u12", "t", "V0t", "p00_3lv", "p01s_3lv", "p11_3lv",
                   "p00_eff", "p01s_eff", "p11_eff"});
    for (const double u12 : cfg.pair.u12_list) {
      const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(
          cfg.pair.points, 0.0, cfg.pair.v0t_max / v0_abs);
      const ObservableSeries three =
          evolve_three_level_pair(cfg.dressing, u12, pair_ground_state(3), times);
      const ObservableSeries eff =
          evolve_effective_pair(cfg.dressing, u12, pair_ground_state(2), times);
      for (Eigen::Index i = 0; i < times.size(); ++i)
        csv.row({u12, times[i], times[i] * v0_abs, three.populations(i, 0),
                 three.populations(i, 1), three.populations(i, 2),
                 eff.populations(i, 0), eff.populations(i, 1), eff.populations(i, 2)});
    }
    std::cout << "dynamics: pair-model comparison for " << cfg.pair.u12_list.size()
              << " interaction value(s), V0t <= " << cfg.pair.v0t_max << "\n";
    return 0;
  }

  const PairCurveSet curves = eigencurves(default_r_grid(), cfg.mw, cfg.coeffs);
  const MolecularPotential pot = molecular_potential(curves);
  const SpinChainModel model =
      make_chain(curves, pot, cfg.dressing, cfg.chain.n_sites,
                 cfg.chain.lattice_ratio, cfg.protocol.scheme);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(
      cfg.dynamics.points, 0.0, cfg.dynamics.v0t_max / v0_abs);
  EvolveOptions opt;
  opt.me_cap = cfg.chain.me_cap;
  opt.rtol = 1e-10;  // long-horizon runs need the headroom to keep rho positive
  DensityState initial = DensityState::plus_x(model.n_sites);
  if (cfg.dynamics.initial == "all_zero") {
    initial = DensityState::all_zero(model.n_sites);
  } else if (cfg.dynamics.initial == "product") {
    if (static_cast<int>(cfg.dynamics.initial_sites.size()) != model.n_sites)
      throw std::invalid_argument("dynamics.initial: one entry per site required");
    std::vector<Eigen::Vector2cd> sites;
    for (const auto& a : cfg.dynamics.initial_sites)
      sites.emplace_back(cplx(a[0], a[1]), cplx(a[2], a[3]));
    initial = DensityState::product(sites);
  }

  SpinChainModel no_tbd = model;
  no_tbd.gamma2_matrix.setZero();
  SpinChainModel coherent = no_tbd;
  coherent.gamma1 = 0.0;

  const ObservableSeries full = evolve_master_equation(model, initial, times, opt);
  const ObservableSeries sbd = evolve_master_equation(no_tbd, initial, times, opt);
  const ObservableSeries coh = evolve_master_equation(coherent, initial, times, opt);

  std::vector<std::string> cols = {"t",       "V0t",      "jx_me",   "jz_me",
                                   "jzvar_me", "jx_notbd", "jz_notbd", "jzvar_notbd",
                                   "jx_coh",  "jz_coh",   "jzvar_coh"};
  const bool pops = !full.population_labels.empty();
  if (pops)
    for (const char* s : {"p00_me", "p01s_me", "p11_me", "p00_coh", "p01s_coh", "p11_coh"})
      cols.push_back(s);
  CsvWriter csv(out_file(args, "dynamics.csv"), cols);
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    std::vector<double> row = {times[i],        times[i] * v0_abs, full.jx[i],
                               full.jz[i],      full.jz_var[i],    sbd.jx[i],
                               sbd.jz[i],       sbd.jz_var[i],     coh.jx[i],
                               coh.jz[i],       coh.jz_var[i]};
    if (pops) {
      for (int c = 0; c < 3; ++c) row.push_back(full.populations(i, c));
      for (int c = 0; c < 3; ++c) row.push_back(coh.populations(i, c));
    }
    csv.row(row);
  }
  std::cout << "dynamics: N = " << model.n_sites << ", V0t <= "
            << cfg.dynamics.v0t_max << ", three dissipation variants\n";
  return 0;
}

int cmd_squeeze(const CommonArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const PairCurveSet curves = eigencurves(default_r_grid(), cfg.mw, cfg.coeffs);
  const MolecularPotential pot = molecular_potential(curves);
  const SpinChainModel model =
      make_chain(curves, pot, cfg.dressing, cfg.chain.n_sites,
                 cfg.chain.lattice_ratio, cfg.protocol.scheme);
  const double v0_abs = std::abs(v0(cfg.dressing));
  const int n_pts = cfg.protocol.tau.coarse_points;

  auto xi_or_nan = [&](Method method, bool dissipative, bool tbd, double tau) {
    EchoProtocol p;
    p.method = method;
    p.dissipative = dissipative;
    p.include_tbd = tbd;
    p.scheme = cfg.protocol.scheme;
    p.me_cap = cfg.chain.me_cap;
    p.tau = tau;
    try {
      return run_echo(p, model).xi2;
    } catch (const std::exception&) {
      return std::nan("");
    }
  };

  CsvWriter csv(out_file(args, "squeeze.csv"),
                {"V0tau", "xi2_me", "xi2_nh", "xi2_nh_notbd", "xi2_coherent"});
  const double lo = std::log(cfg.protocol.tau.v0tau_lo),
               hi = std::log(cfg.protocol.tau.v0tau_hi);
  const bool me_feasible = model.n_sites <= cfg.chain.me_cap;
  for (int i = 0; i < n_pts; ++i) {
    const double v0tau = std::exp(lo + (hi - lo) * i / (n_pts - 1));
    const double tau = v0tau / v0_abs;
    csv.row({v0tau,
             me_feasible ? xi_or_nan(Method::ExactMe, true, true, tau) : std::nan(""),
             xi_or_nan(Method::ConditionalNh, true, true, tau),
             xi_or_nan(Method::ConditionalNh, true, false, tau),
             xi_or_nan(Method::Analytic, false, true, tau)});
  }

  EchoProtocol p;
  p.method = Method::Analytic;
  p.dissipative = true;
  p.scheme = cfg.protocol.scheme;
  const TauOptimum best =
      optimize_tau(p, model, cfg.protocol.tau.v0tau_lo / v0_abs,
                   cfg.protocol.tau.v0tau_hi / v0_abs, cfg.protocol.tau.coarse_points);
  const double t_pulse = model.g > 0.0 ? M_PI / (2.0 * model.g) : 0.0;
  std::cout << "squeeze: N = " << model.n_sites << ", xi2_min = " << best.xi2
            << " at V0tau = " << best.tau * v0_abs
            << " (theta* = " << best.theta_star << " rad, t_pi/2 = " << t_pulse
            << ")\n";
  return 0;
}

int cmd_scan(const CommonArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const PairCurveSet curves = eigencurves(default_r_grid(), cfg.mw, cfg.coeffs);
  const MolecularPotential pot = molecular_potential(curves);

  ScanGrid grid;
  grid.schemes.clear();
  for (const std::string& s : cfg.scan.schemes)
    grid.schemes.push_back(s == "rmd" ? Scheme::Rmd : Scheme::Srd);
  grid.lattice_ratios = cfg.scan.lattice_ratios;
  grid.n_list = cfg.scan.n_list.empty()
                    ? std::vector<int>{10, 20, 30, 40, 50, 75, 100, 150, 200}
                    : cfg.scan.n_list;
  grid.gamma_list = cfg.scan.gamma_list.empty()
                        ? std::vector<double>{cfg.dressing.gamma}
                        : cfg.scan.gamma_list;
  grid.v0tau_lo = cfg.scan.tau.v0tau_lo;
  grid.v0tau_hi = cfg.scan.tau.v0tau_hi;
  grid.coarse_points = cfg.scan.tau.coarse_points;
  grid.threads = args.threads;

  const std::vector<ScanRow> rows = scan_scaling(curves, pot, cfg.dressing, grid);
  CsvWriter csv(out_file(args, "scan.csv"),
                {"scheme", "Rc_over_a", "N", "gamma", "xi2_min", "V0tau_min"});
  for (const ScanRow& row : rows)
    csv.row_mixed({row.scheme == Scheme::Rmd ? "rmd" : "srd",
                   CsvWriter::format(row.rc_over_a), std::to_string(row.n_sites),
                   CsvWriter::format(row.gamma), CsvWriter::format(row.xi2_min),
                   CsvWriter::format(row.v0_tau_min)});
  std::cout << "scan: " << rows.size() << " rows (" << grid.threads
            << " thread(s))\n";
  return 0;
}

int cmd_validate() {
  const std::vector<CheckResult> results = run_validation_suite();
  int failed = 0;
  for (const CheckResult& r : results)
    if (!r.passed) ++failed;
  std::cout << (failed == 0 ? "validate: all checks passed\n"
                            : "validate: " + std::to_string(failed) + " check(s) failed\n");
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg-molecule-dressed spin chains: potentials, dressed "
               "interactions, open-system dynamics and spin squeezing"};
  app.require_subcommand(1);

  CommonArgs args;
  const char* env_threads = std::getenv("RYD_SEED_THREADS");
  if (env_threads) args.threads = std::max(1, std::atoi(env_threads));

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "JSON configuration file");
    cmd->add_option("--preset", args.preset,
                    "shipped preset: fig1|fig2|fig3|fig4|figS1|figS2");
    cmd->add_option("--out", args.out_dir, "output directory (default .)");
    cmd->add_option("--threads", args.threads,
                    "parallelism cap, 1 = reference mode");
  };

  CLI::App* potential = app.add_subcommand("potential", "pair eigencurves and U(R)");
  CLI::App* dressed = app.add_subcommand("dressed", "dressed interaction profile");
  CLI::App* dynamics = app.add_subcommand("dynamics", "driven-dissipative dynamics");
  CLI::App* squeeze = app.add_subcommand("squeeze", "squeezing parameter vs dressing time");
  CLI::App* scan = app.add_subcommand("scan", "optimal squeezing vs N, lattice constant");
  CLI::App* validate = app.add_subcommand("validate", "run the validation suite");
  for (CLI::App* c : {potential, dressed, dynamics, squeeze, scan}) add_common(c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (potential->parsed()) return cmd_potential(args);
    if (dressed->parsed()) return cmd_dressed(args);
    if (dynamics->parsed()) return cmd_dynamics(args);
    if (squeeze->parsed()) return cmd_squeeze(args);
    if (scan->parsed()) return cmd_scan(args);
    if (validate->parsed()) return cmd_validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
