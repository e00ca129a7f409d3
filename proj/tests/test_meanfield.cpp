#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "ryd/meanfield.hpp"
#include "ryd/spin_model.hpp"

using namespace ryd;

namespace {

// self-contained echo simulator used as the oracle: local 2x2 gates, diagonal
// phases, and moments assembled from pair correlators
struct EchoOracle {
  int n;
  Eigen::VectorXcd psi;

  explicit EchoOracle(int n_sites) : n(n_sites) {
    psi = Eigen::VectorXcd::Zero(std::size_t{1} << n);
    psi[0] = 1.0;
  }

  void gate(int site, const Eigen::Matrix2cd& g) {
    const std::uint64_t bit = std::uint64_t{1} << site;
    for (std::uint64_t m = 0; m < psi.size(); ++m) {
      if (m & bit) continue;
      const cplx a0 = psi[m], a1 = psi[m | bit];
      psi[m] = g(0, 0) * a0 + g(0, 1) * a1;
      psi[m | bit] = g(1, 0) * a0 + g(1, 1) * a1;
    }
  }

  void rotate_x(double angle) {
    Eigen::Matrix2cd g;
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    g << cplx(c, 0), cplx(0, -s), cplx(0, -s), cplx(c, 0);
    for (int k = 0; k < n; ++k) gate(k, g);
  }

  void phases(const Eigen::MatrixXd& v, const Eigen::VectorXd& b, double t) {
    for (std::uint64_t m = 0; m < psi.size(); ++m) {
      double h = 0.0;
      for (int j = 0; j < n; ++j) {
        const double mj = (m >> j) & 1u ? 0.5 : -0.5;
        h += b[j] * mj;
        for (int k = j + 1; k < n; ++k)
          h += v(j, k) * mj * (((m >> k) & 1u) ? 0.5 : -0.5);
      }
      psi[m] *= std::exp(cplx(0.0, -h * t));
    }
  }

  cplx site_op(std::uint64_t m, int k, char op, std::uint64_t* target) const {
    // returns <target| sigma_op_k frac... amplitude factor mapping m -> target
    const std::uint64_t bit = std::uint64_t{1} << k;
    switch (op) {
      case 'x':
        *target = m ^ bit;
        return 1.0;
      case 'y':
        *target = m ^ bit;
        return (m & bit) ? cplx(0, -1) : cplx(0, 1);  // <target|sy|m>
      default:
        *target = m;
        return (m & bit) ? 1.0 : -1.0;
    }
  }

  double corr(char a, int k, char b, int l) const {
    // <sigma_a_k sigma_b_l>, k != l or k == l with a == b handled by caller
    cplx sum = 0.0;
    for (std::uint64_t m = 0; m < psi.size(); ++m) {
      std::uint64_t t1, t2;
      const cplx f1 = site_op(m, l, b, &t1);
      const cplx f2 = site_op(t1, k, a, &t2);
      sum += std::conj(psi[t2]) * f2 * f1 * psi[m];
    }
    return std::real(sum);
  }

  SpinMoments moments() const {
    SpinMoments mom;
    double sx = 0, sy = 0, sz = 0, xx = 0, yy = 0, xy = 0, yx = 0;
    for (int k = 0; k < n; ++k) {
      sx += corr('x', k, 'x', k) / 2.0;  // sigma_x^2 = 1; use single-op form below
    }
    // single-site means
    sx = sy = sz = 0;
    for (int k = 0; k < n; ++k) {
      cplx ax = 0, ay = 0, az = 0;
      for (std::uint64_t m = 0; m < psi.size(); ++m) {
        std::uint64_t t;
        ax += std::conj(psi[m ^ (std::uint64_t{1} << k)]) * psi[m];
        const cplx fy = site_op(m, k, 'y', &t);
        ay += std::conj(psi[t]) * fy * psi[m];
        const cplx fz = site_op(m, k, 'z', &t);
        az += std::conj(psi[t]) * fz * psi[m];
      }
      sx += std::real(ax);
      sy += std::real(ay);
      sz += std::real(az);
    }
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        if (k == l) continue;
        xx += corr('x', k, 'x', l);
        yy += corr('y', k, 'y', l);
        xy += corr('x', k, 'y', l);
        yx += corr('y', k, 'x', l);
      }
    mom.jx = sx / 2.0;
    mom.jy = sy / 2.0;
    mom.jz = sz / 2.0;
    mom.jx2 = n / 4.0 + xx / 4.0;
    mom.jy2 = n / 4.0 + yy / 4.0;
    mom.cross = (xy + yx) / 4.0;
    return mom;
  }
};

SpinMoments oracle_echo(const Eigen::MatrixXd& v, const Eigen::VectorXd& b,
                        double tau) {
  EchoOracle sim(static_cast<int>(v.rows()));
  sim.rotate_x(M_PI / 2);
  sim.phases(v, b, tau / 2);
  sim.rotate_x(M_PI);
  sim.phases(v, b, tau / 2);
  sim.rotate_x(M_PI / 2);
  return sim.moments();
}

Eigen::MatrixXd random_couplings(int n, double scale, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(i, j) = v(j, i) = u(rng);
  return v;
}

}  // namespace

TEST_CASE("mean-field rates") {
  // nearest-neighbor rates only: Gamma0 = 2 gamma2(a), the 1D coordination sum
  const int n = 6;
  Eigen::MatrixXd g2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) g2(i, i + 1) = g2(i + 1, i) = 3e-5;
  SpinChainModel m = make_chain_from_couplings(Eigen::MatrixXd::Zero(n, n), 1e-5, g2);
  const MeanFieldRates r = mean_field_rates(m, -0.2);
  CHECK(r.gamma0 == doctest::Approx(2.0 * 3e-5).epsilon(1e-12));
  CHECK(r.gamma_bar ==
        doctest::Approx(0.5 * n * (1e-5 + 6e-5 * (0.25 - 0.04))).epsilon(1e-12));
  CHECK(r.gamma_z == doctest::Approx(1e-5 + 6e-5 * 0.3).epsilon(1e-12));

  // fully polarized down: the two-body terms cancel
  const MeanFieldRates down = mean_field_rates(m, -0.5);
  CHECK(down.gamma_bar == doctest::Approx(0.5 * n * 1e-5).epsilon(1e-12));
  CHECK(down.gamma_z == doctest::Approx(1e-5).epsilon(1e-12));

  // no two-body dephasing: gamma_bar independent of jz_bar
  SpinChainModel sbd =
      make_chain_from_couplings(Eigen::MatrixXd::Zero(n, n), 1e-5,
                                Eigen::MatrixXd::Zero(n, n));
  CHECK(mean_field_rates(sbd, 0.1).gamma_bar ==
        doctest::Approx(mean_field_rates(sbd, -0.5).gamma_bar).epsilon(1e-14));
  CHECK_THROWS_AS(mean_field_rates(m, 0.7), std::invalid_argument);

  // recorded intermediates
  CHECK(kappa_bar(m, 0, 1) == std::complex<double>(0.0, -1.5e-5));
  CHECK(r.gamma_g ==
        doctest::Approx(0.5 * n * 1e-5 + 0.25 * 5 * 3e-5).epsilon(1e-12));
}

TEST_CASE("time-averaged jz") {
  const int n = 4;
  SpinChainModel frozen = make_chain_from_couplings(
      Eigen::MatrixXd::Zero(n, n), 0.0, Eigen::MatrixXd::Zero(n, n));
  CHECK(jz_time_average(frozen, 5.0) == doctest::Approx(-0.5).epsilon(1e-12));

  // two spins: closed-form sinc
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 2);
  v(0, 1) = v(1, 0) = 0.3;
  SpinChainModel two =
      make_chain_from_couplings(v, 0.0, Eigen::MatrixXd::Zero(2, 2));
  const double tau = 11.0;
  const double x = 0.5 * 0.3 * tau;
  CHECK(jz_time_average(two, tau) ==
        doctest::Approx(-0.5 * std::sin(x) / x).epsilon(1e-7));
  // continuity at small tau
  CHECK(jz_time_average(two, 1e-8) == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("analytic moments: closed-form special cases") {
  SUBCASE("no phases: coherent spin state") {
    const int n = 7;
    const SpinMoments m = analytic_moments(
        PhaseTable::from_couplings(Eigen::MatrixXd::Zero(n, n), 3.0), n);
    CHECK(m.jz == doctest::Approx(-3.5).epsilon(1e-14));
    CHECK(m.jx2 == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(m.jy2 == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(m.cross == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("two spins") {
    const double phi = 0.8;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 2);
    v(0, 1) = v(1, 0) = 2.0 * phi;  // tau = 1 -> phi
    const SpinMoments m = analytic_moments(PhaseTable::from_couplings(v, 1.0), 2);
    CHECK(m.jz == doctest::Approx(-std::cos(phi)).epsilon(1e-14));
    CHECK(m.jx2 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.cross == doctest::Approx(std::sin(phi)).epsilon(1e-14));
  }
  SUBCASE("three spins, uniform coupling") {
    const double phi = 0.37;
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(3, 3, 2.0 * phi);
    v.diagonal().setZero();
    const SpinMoments m = analytic_moments(PhaseTable::from_couplings(v, 1.0), 3);
    CHECK(m.jz == doctest::Approx(-1.5 * std::cos(phi) * std::cos(phi)).epsilon(1e-14));
  }
  SUBCASE("phase table accessors") {
    Eigen::MatrixXd v = random_couplings(5, 1.0, 4);
    const PhaseTable t = PhaseTable::from_couplings(v, 3.0);
    CHECK(t.phi(1, 2) == doctest::Approx(1.5 * v(1, 2)).epsilon(1e-14));
    CHECK(t.phi_plus(0, 1, 3) == doctest::Approx(t.phi(0, 3) + t.phi(1, 3)));
    CHECK(t.phi_minus(0, 1, 3) == doctest::Approx(t.phi(0, 3) - t.phi(1, 3)));
  }
}

TEST_CASE("analytic moments match the state-vector echo oracle") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ub(-2.0, 2.0);
  double worst = 0.0;
  for (const int n : {2, 3, 5, 8, 10}) {
    for (int trial = 0; trial < 4; ++trial) {
      const Eigen::MatrixXd v = random_couplings(n, 1.5, 1000 + 10 * n + trial);
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) b[i] = ub(rng);
      const double tau = 2.0;
      const SpinMoments oracle = oracle_echo(v, b, tau);
      const SpinMoments ana = analytic_moments(PhaseTable::from_couplings(v, tau), n);
      worst = std::max({worst, std::abs(oracle.jx - ana.jx),
                        std::abs(oracle.jy - ana.jy), std::abs(oracle.jz - ana.jz),
                        std::abs(oracle.jx2 - ana.jx2),
                        std::abs(oracle.jy2 - ana.jy2),
                        std::abs(oracle.cross - ana.cross)});
      // single-body detunings cancel: oracle must not depend on b
      const SpinMoments no_b = oracle_echo(v, Eigen::VectorXd::Zero(n), tau);
      CHECK(std::abs(oracle.jz - no_b.jz) < 1e-10);
      CHECK(std::abs(oracle.jx2 - no_b.jx2) < 1e-10);
      CHECK(std::abs(oracle.cross - no_b.cross) < 1e-10);
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("moments with phases at pi/2 exercise the zero-cosine guard") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 3);
  v(0, 1) = v(1, 0) = M_PI;        // phi_01 = pi/2 -> cos = 0
  v(0, 2) = v(2, 0) = 0.6;
  v(1, 2) = v(2, 1) = -1.1;
  const SpinMoments ana = analytic_moments(PhaseTable::from_couplings(v, 1.0), 3);
  const SpinMoments oracle = oracle_echo(v, Eigen::VectorXd::Zero(3), 1.0);
  CHECK(ana.jz == doctest::Approx(oracle.jz).epsilon(1e-12));
  CHECK(ana.cross == doctest::Approx(oracle.cross).epsilon(1e-12));
}

TEST_CASE("dissipative scaling of the moments") {
  SpinMoments m;
  m.jz = -2.0;
  m.jx2 = 1.3;
  m.jy2 = 1.0;
  m.cross = -0.4;
  const SpinMoments id = apply_dissipative_scaling(m, 0.0, 10.0);
  CHECK(id.jz == m.jz);
  CHECK(id.jx2 == m.jx2);
  const SpinMoments half = apply_dissipative_scaling(m, std::log(2.0), 1.0);
  CHECK(half.jz == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(half.jx2 == doctest::Approx(0.65).epsilon(1e-14));
  CHECK(half.jy2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half.cross == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK_THROWS_AS(apply_dissipative_scaling(m, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("conditional evolution") {
  SUBCASE("zero time is the identity") {
    const Eigen::MatrixXd v = random_couplings(3, 1.0, 8);
    SpinChainModel m =
        make_chain_from_couplings(v, 1e-3, Eigen::MatrixXd::Zero(3, 3));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Random(8);
    const MeanFieldRates r = mean_field_rates(m, -0.3);
    CHECK((evolve_conditional(m, psi, 0.0, r) - psi).norm() < 1e-14);
  }

  SUBCASE("matches a dense matrix exponential of the conditional Hamiltonian") {
    const int n = 4;
    const Eigen::MatrixXd v = random_couplings(n, 0.8, 17);
    Eigen::MatrixXd g2 = random_couplings(n, 0.0, 1);  // zero
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) g2(i, j) = g2(j, i) = 0.01 * (i + j + 1);
    SpinChainModel m = make_chain_from_couplings(v, 4e-3, g2);
    const MeanFieldRates r = mean_field_rates(m, -0.27);

    // dense H_c, built independently
    const std::size_t dim = 16;
    Eigen::MatrixXcd hc = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint64_t s = 0; s < dim; ++s) {
      cplx e = cplx(0.0, -0.5) * r.gamma_bar;
      for (int j = 0; j < n; ++j) {
        const double mj = (s >> j) & 1u ? 0.5 : -0.5;
        double vsum = 0.0;
        for (int k = 0; k < n; ++k)
          if (k != j) vsum += v(j, k);
        e += 0.5 * (vsum + cplx(0.0, -1.0) * r.gamma_z) * mj;
        for (int k = j + 1; k < n; ++k)
          e += v(j, k) * mj * (((s >> k) & 1u) ? 0.5 : -0.5);
      }
      hc(s, s) = e;
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Random(dim);
    psi.normalize();
    const double tau = 2.7;
    const Eigen::VectorXcd expect = (cplx(0, -1) * hc * tau).exp() * psi;
    const Eigen::VectorXcd got = evolve_conditional(m, psi, tau, r);
    CHECK((expect - got).norm() < 1e-12);
    CHECK(got.norm() <= psi.norm() + 1e-12);
  }

  SUBCASE("norm decay follows the global rate on the equator") {
    const int n = 4;
    SpinChainModel m = make_chain_from_couplings(
        Eigen::MatrixXd::Zero(n, n), 3e-3, Eigen::MatrixXd::Zero(n, n));
    MeanFieldRates r = mean_field_rates(m, 0.0);
    r.gamma_z = 0.0;  // isolate the state-independent term
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(16);
    psi[0] = 1.0;
    psi = collective_rotation(psi, n, Axis::X, M_PI / 2.0);
    const double tau = 50.0;
    const Eigen::VectorXcd out = evolve_conditional(m, psi, tau, r);
    CHECK(out.squaredNorm() ==
          doctest::Approx(std::exp(-r.gamma_bar * tau)).epsilon(1e-12));
  }

  SUBCASE("linear-z damping cancels across the echo") {
    const int n = 5;
    const Eigen::MatrixXd v = random_couplings(n, 1.0, 23);
    SpinChainModel m =
        make_chain_from_couplings(v, 0.0, Eigen::MatrixXd::Zero(n, n));
    MeanFieldRates r;
    r.gamma_z = 0.02;  // gamma_bar = 0: only the state-dependent part
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(std::size_t{1} << n);
    psi[0] = 1.0;
    psi = collective_rotation(psi, n, Axis::X, M_PI / 2.0);
    psi = evolve_conditional(m, psi, 3.0, r);
    psi = collective_rotation(psi, n, Axis::X, M_PI);
    psi = evolve_conditional(m, psi, 3.0, r);
    psi = collective_rotation(psi, n, Axis::X, M_PI / 2.0);
    const SpinMoments withz = state_moments(psi, n);
    const SpinMoments coherent =
        analytic_moments(PhaseTable::from_couplings(v, 6.0), n);
    CHECK(withz.jz == doctest::Approx(coherent.jz).epsilon(1e-10));
    CHECK(withz.jx2 == doctest::Approx(coherent.jx2).epsilon(1e-10));
    CHECK(withz.cross == doctest::Approx(coherent.cross).epsilon(1e-10));
  }

  SUBCASE("site cap") {
    SpinChainModel m = make_chain_from_couplings(
        Eigen::MatrixXd::Zero(21, 21), 0.0, Eigen::MatrixXd::Zero(21, 21));
    Eigen::VectorXcd psi(1);
    CHECK_THROWS_AS(evolve_conditional(m, psi, 1.0, MeanFieldRates{}),
                    std::invalid_argument);
  }
}
