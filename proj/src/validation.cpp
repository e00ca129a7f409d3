#include "ryd/validation.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "ryd/collective.hpp"
#include "ryd/config.hpp"
#include "ryd/dressing.hpp"
#include "ryd/lindblad.hpp"
#include "ryd/meanfield.hpp"
#include "ryd/pair_potential.hpp"
#include "ryd/squeezing.hpp"

namespace ryd {

namespace {

// shipped default potential shape; presets carry the same numbers
constexpr double kC6ss = 8600.0, kC6pp = -2000.0, kC3sp = -100.0;
constexpr double kOmegaMw = 134.0;

struct Setup {
  PairCurveSet curves;
  MolecularPotential pot;
  DressingParams params;
};

Setup make_setup(double delta, double gamma, double u_target) {
  MwCoupling mw{kOmegaMw, 0.0};
  DispersionCoeffs coeffs{kC6ss, kC6pp, kC3sp};
  const double s = depth_scale(mw, coeffs, u_target);
  mw.omega_mw *= s;
  coeffs.c6_ss *= s;
  coeffs.c6_pp *= s;
  coeffs.c3_sp *= s;
  Setup setup;
  setup.curves = eigencurves(default_r_grid(), mw, coeffs);
  setup.pot = molecular_potential(setup.curves);
  setup.params.omega = 1.0;
  setup.params.delta = delta;
  setup.params.gamma = gamma;
  setup.params.g = 0.2 * v0(setup.params);
  return setup;
}

Setup fig3_setup(double gamma = 0.005) { return make_setup(5.5, gamma, -9.5); }
Setup fig1_setup() { return make_setup(10.0, 0.01, -18.0); }

// independent echo oracle: gates + diagonal phases on the state vector
SpinMoments brute_echo(const Eigen::MatrixXd& couplings,
                       const Eigen::VectorXd& detunings, double tau) {
  const int n = static_cast<int>(couplings.rows());
  const std::size_t dim = hilbert_dim(n);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(dim);
  for (std::uint64_t m = 0; m < dim; ++m) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) {
      const double mj = (m >> j) & 1u ? 0.5 : -0.5;
      v += detunings[j] * mj;
      for (int k = j + 1; k < n; ++k)
        v += couplings(j, k) * mj * (((m >> k) & 1u) ? 0.5 : -0.5);
    }
    h[m] = v;
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi[0] = 1.0;
  apply_collective_rotation(psi, n, Axis::X, M_PI / 2.0);
  for (std::uint64_t m = 0; m < dim; ++m)
    psi[m] *= std::exp(cplx(0.0, -h[m] * tau / 2.0));
  apply_collective_rotation(psi, n, Axis::X, M_PI);
  for (std::uint64_t m = 0; m < dim; ++m)
    psi[m] *= std::exp(cplx(0.0, -h[m] * tau / 2.0));
  apply_collective_rotation(psi, n, Axis::X, M_PI / 2.0);
  return state_moments(psi, n);
}

std::string pair_str(double v0tau, double xi2) {
  std::ostringstream ss;
  ss << "(V0tau=" << v0tau << ", xi2=" << xi2 << ")";
  return ss.str();
}

TauOptimum optimize(const Setup& s, int n, double ratio, Method method,
                    bool dissipative, Scheme scheme = Scheme::Rmd,
                    double v0tau_lo = 0.01, double v0tau_hi = 0.5) {
  const SpinChainModel model =
      make_chain(s.curves, s.pot, s.params, n, ratio, scheme);
  EchoProtocol p;
  p.method = method;
  p.dissipative = dissipative;
  p.scheme = scheme;
  const double v0_abs = std::abs(v0(s.params));
  return optimize_tau(p, model, v0tau_lo / v0_abs, v0tau_hi / v0_abs, 400);
}

CheckResult c1_fig3a() {
  CheckResult r{"criterion 1: N=10 Rc=a optimal squeezing", false, ""};
  const Setup s = fig3_setup();
  const double v0_abs = std::abs(v0(s.params));
  const TauOptimum nh = optimize(s, 10, 1.0, Method::ConditionalNh, true);
  const TauOptimum ana = optimize(s, 10, 1.0, Method::Analytic, true);
  const TauOptimum coh = optimize(s, 10, 1.0, Method::Analytic, false);
  std::ostringstream ss;
  ss << "nh " << pair_str(nh.tau * v0_abs, nh.xi2) << ", analytic "
     << pair_str(ana.tau * v0_abs, ana.xi2) << ", coherent xi2=" << coh.xi2;
  r.detail = ss.str();
  auto ok = [&](const TauOptimum& o) {
    return std::abs(o.xi2 - 0.60) <= 0.05 && std::abs(o.tau * v0_abs - 0.17) <= 0.03;
  };
  r.passed = ok(nh) && ok(ana) && std::abs(coh.xi2 - 0.58) <= 0.03;
  return r;
}

CheckResult c2_fig3b() {
  CheckResult r{"criterion 2: N=10 Rc=3a optimal squeezing", false, ""};
  const Setup s = fig3_setup();
  const double v0_abs = std::abs(v0(s.params));
  const TauOptimum nh = optimize(s, 10, 3.0, Method::ConditionalNh, true);
  const TauOptimum ana = optimize(s, 10, 3.0, Method::Analytic, true);
  std::ostringstream ss;
  ss << "nh " << pair_str(nh.tau * v0_abs, nh.xi2) << ", analytic "
     << pair_str(ana.tau * v0_abs, ana.xi2);
  r.detail = ss.str();
  r.passed = std::abs(nh.xi2 - 0.83) <= 0.05 && std::abs(ana.xi2 - 0.83) <= 0.05;
  return r;
}

CheckResult c3_method_agreement() {
  CheckResult r{"criterion 3: exact ME vs conditional-NH vs analytic, N=8", false, ""};
  const Setup s = fig3_setup();
  const SpinChainModel model = make_chain(s.curves, s.pot, s.params, 8, 1.0,
                                          Scheme::Rmd);
  const double v0_abs = std::abs(v0(s.params));
  EchoProtocol base;
  base.dissipative = true;
  const TauOptimum opt = optimize(s, 8, 1.0, Method::Analytic, true);
  double worst = 0.0;
  for (int i = 1; i <= 12; ++i) {
    const double tau = 2.0 * opt.tau * i / 12.0;
    EchoProtocol p = base;
    p.tau = tau;
    p.method = Method::ExactMe;
    const double me = run_echo(p, model).xi2;
    p.method = Method::ConditionalNh;
    const double nh = run_echo(p, model).xi2;
    p.method = Method::Analytic;
    const double ana = run_echo(p, model).xi2;
    worst = std::max({worst, std::abs(me - nh), std::abs(me - ana),
                      std::abs(nh - ana)});
  }
  std::ostringstream ss;
  ss << "max |dxi2| = " << worst << " over tau <= 2 tau_min (V0 tau_min = "
     << opt.tau * v0_abs << ")";
  r.detail = ss.str();
  r.passed = worst <= 0.05;
  return r;
}

CheckResult c4_effective_model() {
  CheckResult r{"criterion 4: three-level vs effective pair populations", false, ""};
  DressingParams p;
  p.omega = 1.0;
  p.delta = -10.0;
  p.gamma = 0.1;
  p.g = 2.5e-3;
  p.delta0 = p.omega * p.omega / (4.0 * std::abs(p.delta));
  const double v0_abs = std::abs(v0(p));
  double worst = 0.0;
  for (const double u12 : {21.0, 40.0}) {
    const Eigen::VectorXd times =
        Eigen::VectorXd::LinSpaced(400, 0.0, 10.0 / v0_abs);
    const ObservableSeries three =
        evolve_three_level_pair(p, u12, pair_ground_state(3), times);
    const ObservableSeries eff =
        evolve_effective_pair(p, u12, pair_ground_state(2), times);
    for (Eigen::Index i = 0; i < times.size(); ++i)
      for (int c = 0; c < 3; ++c)
        worst = std::max(worst,
                         std::abs(three.populations(i, c) - eff.populations(i, c)));
  }
  std::ostringstream ss;
  ss << "sup-norm population difference = " << worst;
  r.detail = ss.str();
  r.passed = worst <= 0.02;
  return r;
}

CheckResult c5_dressing_algebra() {
  CheckResult r{"criterion 5: dressing algebra and enhancement", false, ""};
  std::mt19937_64 rng(20250817);
  std::uniform_real_distribution<double> u_delta(2.0, 20.0), u_gamma(1e-4, 0.2),
      u_u(-40.0, 40.0), u_sign(0.0, 1.0);
  double worst_rel = 0.0;
  for (int i = 0; i < 10000; ++i) {
    DressingParams p;
    p.omega = 1.0;
    p.delta = u_delta(rng) * (u_sign(rng) < 0.5 ? -1.0 : 1.0);
    p.gamma = u_gamma(rng);
    const double u = u_u(rng);
    const double lhs = coherence(u, p);
    const double rhs = dressed_potential(u, p) / (2.0 * gamma1(p) + gamma2(u, p));
    const double denom = std::max(std::abs(lhs), 1e-300);
    worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / denom);
  }

  const Setup s1 = fig1_setup();
  const double u_rc = u_at(s1.curves, s1.pot, s1.pot.r_min);
  const double v_ratio =
      std::abs(dressed_potential(u_rc, s1.params) / v0(s1.params));
  const double deph_ratio = (2.0 * gamma1(s1.params) + gamma2(u_rc, s1.params)) /
                            (2.0 * gamma1(s1.params));

  DressingParams pm;
  pm.omega = 1.0;
  pm.delta = 10.0;
  pm.gamma = 0.01;
  const double cm_cs = coherence_molecular_limit(pm) / coherence_srd_limit(pm);

  std::ostringstream ss;
  ss << "identity rel err = " << worst_rel << ", |V(Rc)/V0| = " << v_ratio
     << ", dephasing ratio = " << deph_ratio << ", Cm/Cs = " << cm_cs;
  r.detail = ss.str();
  r.passed = worst_rel <= 1e-12 && v_ratio >= 5.0 && deph_ratio <= 2.0 &&
             std::abs(cm_cs - 10.0) <= 0.1;
  return r;
}

CheckResult c6_oracle_equivalence() {
  CheckResult r{"criterion 6: analytic moments vs state-vector echo", false, ""};
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u_v(-1.5, 1.5), u_b(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 11;  // 2..12
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) v(i, j) = v(j, i) = u_v(rng);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = u_b(rng);
    const double tau = 2.0;
    const SpinMoments oracle = brute_echo(v, b, tau);
    const SpinMoments ana =
        analytic_moments(PhaseTable::from_couplings(v, tau), n);
    worst = std::max({worst, std::abs(oracle.jx - ana.jx),
                      std::abs(oracle.jy - ana.jy), std::abs(oracle.jz - ana.jz),
                      std::abs(oracle.jx2 - ana.jx2),
                      std::abs(oracle.jy2 - ana.jy2),
                      std::abs(oracle.cross - ana.cross)});
  }
  std::ostringstream ss;
  ss << "max |moment difference| = " << worst << " over 100 random chains, N <= 12";
  r.detail = ss.str();
  r.passed = worst <= 1e-10;
  return r;
}

CheckResult c7_full_vs_perturbative() {
  CheckResult r{"criterion 7: perturbative vs full dressed potential", false, ""};
  const Setup s = fig1_setup();
  DressingParams coherent = s.params;
  coherent.gamma = 0.0;
  const double v0_abs = std::abs(v0(s.params));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.pot.r_grid.size(); ++i) {
    const double u = s.pot.u[i];
    if (std::abs(delta2(u, s.params)) < 2.0 * s.params.omega) continue;
    const double diff =
        std::abs(full_dressed_potential(u, s.params) - dressed_potential(u, coherent));
    worst = std::max(worst, diff / v0_abs);
  }
  std::ostringstream ss;
  ss << "max |V_full - V_pert| / V0 = " << worst << " over |delta2| >= 2 Omega";
  r.detail = ss.str();
  r.passed = worst <= 0.15;
  return r;
}

CheckResult c8_scaling_trends() {
  CheckResult r{"criterion 8: scheme/size scaling trends", false, ""};
  const Setup s = fig3_setup();
  std::ostringstream ss;
  bool ok = true;

  // (i) RMD at Rc=a stays squeezed through N=200 with short dressing times
  {
    ScanGrid grid;
    grid.schemes = {Scheme::Rmd};
    grid.lattice_ratios = {1.0};
    grid.n_list = {10, 25, 50, 75, 100, 150, 200};
    grid.gamma_list = {0.005};
    const auto rows = scan_scaling(s.curves, s.pot, s.params, grid);
    double max_xi = 0.0, max_vt = 0.0;
    for (const ScanRow& row : rows) {
      max_xi = std::max(max_xi, row.xi2_min);
      max_vt = std::max(max_vt, row.v0_tau_min);
    }
    ss << "(i) max xi2 = " << max_xi << ", max V0tau = " << max_vt;
    ok = ok && max_xi < 1.0 && max_vt < 0.17;
  }

  // (ii) RMD beats SRD at Rc=2a for N > 40 (baseline decay rate; at
  // gamma = 0.01 neither scheme squeezes beyond N ~ 100 and the
  // comparison is vacuous)
  {
    ScanGrid grid;
    grid.schemes = {Scheme::Rmd, Scheme::Srd};
    grid.lattice_ratios = {2.0};
    grid.n_list = {45, 60, 80, 120};
    grid.gamma_list = {0.005};
    const auto rows = scan_scaling(s.curves, s.pot, s.params, grid);
    bool beats = true;
    for (const ScanRow& a : rows)
      for (const ScanRow& b : rows)
        if (a.scheme == Scheme::Rmd && b.scheme == Scheme::Srd &&
            a.n_sites == b.n_sites && a.gamma == b.gamma)
          beats = beats && a.xi2_min < b.xi2_min;
    ss << "; (ii) rmd<srd " << (beats ? "yes" : "NO");
    ok = ok && beats;
  }

  // (iii) SRD reaches strong squeezing at Rc=3a within N < 30; checked with
  // the exact master equation at N = 8 (the mean-field scaling overstates
  // the soft-core optimum by about the criterion-3 method spread)
  {
    const SpinChainModel model =
        make_chain(s.curves, s.pot, s.params, 8, 3.0, Scheme::Srd);
    EchoProtocol p;
    p.scheme = Scheme::Srd;
    p.method = Method::ExactMe;
    p.dissipative = true;
    const double v0_abs = std::abs(v0(s.params));
    const TauOptimum best =
        optimize_tau(p, model, 0.2 / v0_abs, 1.5 / v0_abs, 40);
    ss << "; (iii) exact-ME srd xi2 = " << best.xi2;
    ok = ok && best.xi2 < 0.5;
  }

  // (iv) mixed-sign couplings at Rc=3a degrade the coherent optimum
  {
    const TauOptimum a = optimize(s, 10, 1.0, Method::Analytic, false);
    const TauOptimum b = optimize(s, 10, 3.0, Method::Analytic, false);
    ss << "; (iv) coherent xi2: Rc=a " << a.xi2 << " vs Rc=3a " << b.xi2;
    ok = ok && b.xi2 > a.xi2;
  }

  r.detail = ss.str();
  r.passed = ok;
  return r;
}

CheckResult c9_open_system_sanity() {
  CheckResult r{"criterion 9: density-matrix sanity and dephasing law", false, ""};
  const Setup s = fig3_setup();
  bool state_ok = true;
  std::string state_msg = "state checks passed";
  try {
    // full-rate run with trace/Hermiticity/positivity asserted at every output
    const SpinChainModel model =
        make_chain(s.curves, s.pot, s.params, 4, 1.0, Scheme::Rmd);
    const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(
        21, 0.0, 10.0 / std::abs(v0(s.params)));
    evolve_master_equation(model, DensityState::plus_x(4), times);
  } catch (const std::exception& e) {
    state_ok = false;
    state_msg = e.what();
  }

  // pure-dephasing channel: single-site coherence decays as exp(-gamma1 t / 2)
  const double g1 = 0.02;
  SpinChainModel deph = make_chain_from_couplings(
      Eigen::MatrixXd::Zero(2, 2), g1, Eigen::MatrixXd::Zero(2, 2));
  double worst_rel = 0.0;
  EvolveOptions opt;
  opt.rtol = 1e-10;
  for (const double t : {5.0, 20.0, 50.0, 100.0}) {
    Eigen::MatrixXcd rho = DensityState::plus_x(2).rho;
    evolve_density(deph, rho, t, opt);
    const double coh = std::abs(rho(0, 1) + rho(2, 3));
    const double expect = 0.5 * std::exp(-0.5 * g1 * t);
    worst_rel = std::max(worst_rel, std::abs(coh - expect) / expect);
  }
  std::ostringstream ss;
  ss << state_msg << "; dephasing-law rel err = " << worst_rel;
  r.detail = ss.str();
  r.passed = state_ok && worst_rel <= 1e-6;
  return r;
}

}  // namespace

std::vector<CheckResult> run_validation_suite() {
  std::vector<CheckResult> results;
  const std::vector<CheckResult (*)()> checks = {
      c1_fig3a,        c2_fig3b,           c3_method_agreement,
      c4_effective_model, c5_dressing_algebra, c6_oracle_equivalence,
      c7_full_vs_perturbative, c8_scaling_trends, c9_open_system_sanity};
  for (const auto check : checks) {
    CheckResult r = check();
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " -- " << r.detail
              << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace ryd
