#include <doctest.h>

#include <cmath>
#include <random>

#include "ryd/squeezing.hpp"

using namespace ryd;

namespace {

SpinMoments raw(double a, double b, double c) {
  SpinMoments m;
  m.jx2 = a;
  m.jy2 = b;
  m.cross = 2.0 * c;
  m.jz = 1.0;
  return m;
}

struct Fig3 {
  PairCurveSet curves;
  MolecularPotential pot;
  DressingParams params;
  Fig3() {
    MwCoupling mw{134.0, 0.0};
    DispersionCoeffs c{8600.0, -2000.0, -100.0};
    const double s = depth_scale(mw, c, -9.5);
    mw.omega_mw *= s;
    c.c6_ss *= s;
    c.c6_pp *= s;
    c.c3_sp *= s;
    curves = eigencurves(default_r_grid(), mw, c);
    pot = molecular_potential(curves);
    params.omega = 1.0;
    params.delta = 5.5;
    params.gamma = 0.005;
    params.g = 0.2 * v0(params);
  }
};

}  // namespace

TEST_CASE("minimal transverse variance") {
  SUBCASE("isotropic moments: flat in theta") {
    const MinVariance mv = min_variance(raw(1.5, 1.5, 0.0));
    CHECK(mv.variance == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(mv.theta == 0.0);
  }
  SUBCASE("pure Jx noise is removed a quarter turn away") {
    const MinVariance mv = min_variance(raw(1.0, 0.0, 0.0));
    CHECK(mv.variance == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(std::abs(mv.theta) - M_PI / 2) < 1e-12);
  }
  SUBCASE("matches a dense angle scan") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 3.0), uc(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      const double a = u(rng), b = u(rng), c = uc(rng);
      const MinVariance mv = min_variance(raw(a, b, c));
      double best = 1e300;
      for (int i = 0; i < 10000; ++i) {
        const double th = -M_PI / 2 + M_PI * i / 10000.0;
        const double v = std::cos(th) * std::cos(th) * a +
                         std::sin(th) * std::sin(th) * b +
                         std::sin(2 * th) * c;
        best = std::min(best, v);
      }
      CHECK(mv.variance == doctest::Approx(best).epsilon(1e-7));
      CHECK(mv.theta >= -M_PI / 2);
      CHECK(mv.theta < M_PI / 2);
    }
  }
}

TEST_CASE("Wineland parameter") {
  SpinMoments css;  // coherent spin state after a trivial echo
  css.jz = -5.0;    // N = 10
  css.jx2 = 2.5;
  css.jy2 = 2.5;
  CHECK(xi_squared(css, 10) == doctest::Approx(1.0).epsilon(1e-14));
  SpinMoments dead;
  CHECK_THROWS_AS(xi_squared(dead, 4), std::runtime_error);
}

TEST_CASE("echo with zero dressing time is the standard quantum limit") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
  v(0, 1) = v(1, 0) = 0.3;
  v(1, 2) = v(2, 1) = 0.2;
  SpinChainModel m =
      make_chain_from_couplings(v, 1e-4, Eigen::MatrixXd::Zero(4, 4));
  for (const Method method : {Method::Analytic, Method::ConditionalNh, Method::ExactMe}) {
    EchoProtocol p;
    p.method = method;
    p.tau = 0.0;
    const SqueezingResult r = run_echo(p, m);
    CHECK(r.xi2 == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("two-spin echo follows the closed form in every method") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 2);
  v(0, 1) = v(1, 0) = 0.05;
  SpinChainModel m =
      make_chain_from_couplings(v, 0.0, Eigen::MatrixXd::Zero(2, 2));
  for (const double tau : {4.0, 14.0, 30.0}) {
    const double phi = 0.5 * 0.05 * tau;
    const double expect =
        (1.0 - std::abs(std::sin(phi))) / (std::cos(phi) * std::cos(phi));
    for (const Method method :
         {Method::Analytic, Method::ConditionalNh, Method::ExactMe}) {
      EchoProtocol p;
      p.method = method;
      p.dissipative = false;
      p.tau = tau;
      CHECK(run_echo(p, m).xi2 == doctest::Approx(expect).epsilon(1e-7));
    }
  }
}

TEST_CASE("conditional-NH echo reproduces the scaled analytic moments") {
  const Fig3 f;
  const SpinChainModel m =
      make_chain(f.curves, f.pot, f.params, 6, 1.0, Scheme::Rmd);
  for (const double v0tau : {0.05, 0.15, 0.25}) {
    EchoProtocol p;
    p.tau = v0tau / std::abs(v0(f.params));
    p.dissipative = true;
    p.method = Method::ConditionalNh;
    const SqueezingResult nh = run_echo(p, m);
    p.method = Method::Analytic;
    const SqueezingResult ana = run_echo(p, m);
    CHECK(nh.xi2 == doctest::Approx(ana.xi2).epsilon(1e-9));
    CHECK(nh.gamma_bar == doctest::Approx(ana.gamma_bar).epsilon(1e-12));
  }
}

TEST_CASE("exact master equation tracks the mean-field methods at small N") {
  const Fig3 f;
  const SpinChainModel m =
      make_chain(f.curves, f.pot, f.params, 6, 1.0, Scheme::Rmd);
  for (const double v0tau : {0.08, 0.16, 0.24}) {
    EchoProtocol p;
    p.tau = v0tau / std::abs(v0(f.params));
    p.dissipative = true;
    p.method = Method::ExactMe;
    const double me = run_echo(p, m).xi2;
    p.method = Method::ConditionalNh;
    const double nh = run_echo(p, m).xi2;
    CHECK(std::abs(me - nh) <= 0.05);
  }
}

TEST_CASE("squeezing sets in immediately once phases accumulate") {
  const Fig3 f;
  const SpinChainModel m =
      make_chain(f.curves, f.pot, f.params, 8, 1.0, Scheme::Rmd);
  EchoProtocol p;
  p.dissipative = false;
  const double tau0 = 1.0 / std::abs(v0(f.params)) * 0.01;
  p.tau = tau0;
  const double x1 = run_echo(p, m).xi2;
  p.tau = 2.0 * tau0;
  const double x2 = run_echo(p, m).xi2;
  CHECK(x1 < 1.0);
  CHECK(x2 < x1);  // d xi^2 / d tau < 0 at small tau
}

TEST_CASE("mixed-sign couplings at Rc=3a weaken the coherent optimum") {
  const Fig3 f;
  const double v0_abs = std::abs(v0(f.params));
  EchoProtocol p;
  p.dissipative = false;
  const SpinChainModel m1 =
      make_chain(f.curves, f.pot, f.params, 10, 1.0, Scheme::Rmd);
  const SpinChainModel m3 =
      make_chain(f.curves, f.pot, f.params, 10, 3.0, Scheme::Rmd);
  const TauOptimum o1 = optimize_tau(p, m1, 0.01 / v0_abs, 0.5 / v0_abs, 150);
  const TauOptimum o3 = optimize_tau(p, m3, 0.01 / v0_abs, 0.5 / v0_abs, 150);
  CHECK(o3.xi2 > o1.xi2);
}

TEST_CASE("soft-core chains carry no two-body dephasing by construction") {
  const Fig3 f;
  const SpinChainModel srd =
      make_chain(f.curves, f.pot, f.params, 8, 3.0, Scheme::Srd);
  CHECK(srd.gamma2_matrix.cwiseAbs().maxCoeff() == 0.0);
  CHECK(srd.couplings(0, 1) > 0.0);  // plateau is repulsive
  // plateau matches V0 at vanishing distance
  CHECK(srd.couplings(0, 1) <= v0(f.params));
}

TEST_CASE("exact-ME echo respects the dense-solver cap") {
  SpinChainModel m = make_chain_from_couplings(
      Eigen::MatrixXd::Zero(9, 9), 1e-4, Eigen::MatrixXd::Zero(9, 9));
  EchoProtocol p;
  p.method = Method::ExactMe;
  p.tau = 1.0;
  CHECK_THROWS_AS(run_echo(p, m), std::invalid_argument);  // default cap is 8
}

TEST_CASE("optimizer reports the sentinel when nothing squeezes") {
  SpinChainModel m = make_chain_from_couplings(
      Eigen::MatrixXd::Zero(5, 5), 1e-4, Eigen::MatrixXd::Zero(5, 5));
  EchoProtocol p;
  p.dissipative = true;
  const TauOptimum opt = optimize_tau(p, m, 1.0, 1e4, 60);
  CHECK_FALSE(opt.squeezed);
  CHECK(opt.tau == 0.0);
  CHECK(opt.xi2 == 1.0);
}

TEST_CASE("optimizer finds the figure-window optimum at N=10") {
  const Fig3 f;
  const double v0_abs = std::abs(v0(f.params));
  const SpinChainModel m =
      make_chain(f.curves, f.pot, f.params, 10, 1.0, Scheme::Rmd);
  EchoProtocol p;
  p.dissipative = true;
  p.method = Method::Analytic;
  const TauOptimum opt = optimize_tau(p, m, 0.01 / v0_abs, 0.5 / v0_abs, 150);
  CHECK(opt.squeezed);
  CHECK(opt.xi2 > 0.55);
  CHECK(opt.xi2 < 0.65);
  CHECK(opt.tau * v0_abs > 0.13);
  CHECK(opt.tau * v0_abs < 0.21);
  CHECK_THROWS_AS(optimize_tau(p, m, 0.0, 1.0, 10), std::invalid_argument);
}
