#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "ryd/lindblad.hpp"
#include "ryd/ode.hpp"

using namespace ryd;

namespace {

// dense Hamiltonian of the spin model, built independently via kron products
Eigen::MatrixXcd dense_hamiltonian(const SpinChainModel& m) {
  const int n = m.n_sites;
  Eigen::Matrix2cd sx, sz, id;
  sx << 0, 0.5, 0.5, 0;
  sz << -0.5, 0, 0, 0.5;  // |0> = m_z - 1/2 with site bit 0
  id.setIdentity();
  auto site_op = [&](const Eigen::Matrix2cd& op, int k) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int j = 0; j < n; ++j)  // site 0 = least significant bit
      out = Eigen::kroneckerProduct(j == k ? op : id, out).eval();
    return out;
  };
  const std::size_t dim = hilbert_dim(n);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    h += m.g * site_op(sx, k) + m.site_detunings[k] * site_op(sz, k);
    for (int l = k + 1; l < n; ++l)
      h += m.couplings(k, l) * (site_op(sz, k) * site_op(sz, l));
  }
  return h;
}

SpinChainModel random_model(int n, double scale, double g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(i, j) = v(j, i) = u(rng);
  return make_chain_from_couplings(v, 0.0, Eigen::MatrixXd::Zero(n, n), g);
}

}  // namespace

TEST_CASE("diagonal Hamiltonian conserves Jz without drive or dephasing") {
  SpinChainModel m = random_model(4, 0.3, 0.0, 21);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(6, 0.0, 30.0);
  const ObservableSeries s =
      evolve_master_equation(m, DensityState::plus_x(4), times);
  for (Eigen::Index i = 0; i < times.size(); ++i)
    CHECK(std::abs(s.jz[i]) < 1e-9);
}

TEST_CASE("coherent evolution matches the matrix-exponential oracle") {
  for (const int n : {2, 3, 4}) {
    SpinChainModel m = random_model(n, 0.4, 0.25, 50 + n);
    m.site_detunings.setConstant(0.1);
    const Eigen::MatrixXcd h = dense_hamiltonian(m);
    const double t = 7.0;
    Eigen::MatrixXcd rho = DensityState::plus_x(n).rho;
    const Eigen::MatrixXcd u = (cplx(0, -1) * h * t).exp();
    const Eigen::MatrixXcd expect = u * rho * u.adjoint();
    EvolveOptions opt;
    opt.rtol = 1e-10;
    evolve_density(m, rho, t, opt);
    CHECK((rho - expect).norm() < 1e-8);
  }
}

TEST_CASE("pure dephasing damps single-site coherence as exp(-gamma1 t / 2)") {
  const double g1 = 0.05;
  SpinChainModel m = make_chain_from_couplings(Eigen::MatrixXd::Zero(2, 2), g1,
                                               Eigen::MatrixXd::Zero(2, 2));
  EvolveOptions opt;
  opt.rtol = 1e-10;
  for (const double t : {3.0, 17.0, 60.0}) {
    Eigen::MatrixXcd rho = DensityState::plus_x(2).rho;
    evolve_density(m, rho, t, opt);
    const double coh = std::abs(rho(0, 1) + rho(2, 3));  // site-0 reduced coherence
    const double expect = 0.5 * std::exp(-0.5 * g1 * t);
    CHECK(std::abs(coh - expect) / expect < 1e-6);
  }
}

TEST_CASE("dissipative runs keep trace, Hermiticity and positivity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1e-3);
  Eigen::MatrixXd v(3, 3), g2(3, 3);
  v.setZero();
  g2.setZero();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      v(i, j) = v(j, i) = u(rng);
      g2(i, j) = g2(j, i) = u(rng);
    }
  SpinChainModel m = make_chain_from_couplings(v, 5e-4, g2, 2e-4);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(11, 0.0, 4000.0);
  // DensityState::check runs at every output time inside the solver
  CHECK_NOTHROW(evolve_master_equation(m, DensityState::plus_x(3), times));
}

TEST_CASE("dephasing barely perturbs the early driven dynamics of two atoms") {
  // driven pair at the dressing operating point: full master equation vs
  // coherent dynamics stay close over the first interaction periods
  MwCoupling mw{134.0, 0.0};
  DispersionCoeffs c{8600.0, -2000.0, -100.0};
  const double s = depth_scale(mw, c, -9.5);
  mw.omega_mw *= s;
  c.c6_ss *= s;
  c.c6_pp *= s;
  c.c3_sp *= s;
  const PairCurveSet curves = eigencurves(default_r_grid(), mw, c);
  const MolecularPotential pot = molecular_potential(curves);
  DressingParams params;
  params.omega = 1.0;
  params.delta = 5.5;
  params.gamma = 0.005;
  params.g = 0.2 * v0(params);
  const SpinChainModel model = make_chain(curves, pot, params, 2, 1.0, Scheme::Rmd);
  SpinChainModel coherent = model;
  coherent.gamma1 = 0.0;
  coherent.gamma2_matrix.setZero();

  const Eigen::VectorXd times =
      Eigen::VectorXd::LinSpaced(81, 0.0, 10.0 / v0(params));
  const DensityState initial = DensityState::plus_x(2);
  const ObservableSeries full = evolve_master_equation(model, initial, times);
  const ObservableSeries coh = evolve_master_equation(coherent, initial, times);

  // t = 0 observables match the product state analytically
  CHECK(full.jx[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(full.jz[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(full.jz_var[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(full.populations(0, 0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(full.populations(0, 1) == doctest::Approx(0.5).epsilon(1e-9));

  double sup = 0.0;
  for (Eigen::Index i = 0; i < times.size(); ++i)
    for (int p = 0; p < 3; ++p)
      sup = std::max(sup, std::abs(full.populations(i, p) - coh.populations(i, p)));
  CHECK(sup < 0.15);
}

TEST_CASE("master equation refuses to exceed the dense cap") {
  SpinChainModel m = random_model(9, 0.1, 0.0, 77);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
  CHECK_THROWS_AS(evolve_master_equation(m, DensityState::all_zero(9), times),
                  std::invalid_argument);
}

TEST_CASE("three-level pair with neither drive nor dressing is frozen") {
  DressingParams p;
  p.omega = 0.0;
  p.delta = -10.0;
  p.gamma = 0.1;
  p.g = 0.0;
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(5, 0.0, 50.0);
  const ObservableSeries s =
      evolve_three_level_pair(p, 21.0, pair_ground_state(3), times);
  for (Eigen::Index i = 0; i < times.size(); ++i)
    CHECK(s.populations(i, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("effective pair without interaction or decay is plain Rabi") {
  DressingParams p;
  p.omega = 1.0;
  p.delta = -10.0;
  p.gamma = 0.0;  // gamma1 = gamma2 = 0
  p.g = 2.5e-3;
  // V12 = 0 exactly at U = -2 delta... instead pass u12 = 0 -> V12 = 0
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(9, 0.0, 2000.0);
  const ObservableSeries s =
      evolve_effective_pair(p, 0.0, pair_ground_state(2), times);
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double c = std::cos(0.5 * p.g * times[i]);
    CHECK(s.populations(i, 0) == doctest::Approx(std::pow(c, 4)).epsilon(1e-8));
  }
}

TEST_CASE("strong pair interaction blockades the double excitation") {
  DressingParams p;
  p.omega = 1.0;
  p.delta = -10.0;
  p.gamma = 0.0;
  p.g = 2.5e-5;  // V12/g >> 1
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(40, 0.0, 2.0 / p.g);
  const ObservableSeries s =
      evolve_effective_pair(p, 21.0, pair_ground_state(2), times);
  for (Eigen::Index i = 0; i < times.size(); ++i)
    CHECK(s.populations(i, 2) < 0.05);
}

TEST_CASE("pair propagator agrees with direct integration of the Liouvillian") {
  DressingParams p;
  p.omega = 1.0;
  p.delta = -10.0;
  p.gamma = 0.1;
  p.g = 2.5e-3;
  p.delta0 = 0.025;
  Eigen::MatrixXcd n1 = Eigen::MatrixXcd::Zero(2, 2);
  n1(1, 1) = 1.0;
  Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 0.5;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  const double v12 = dressed_potential(21.0, p), g12 = gamma2(21.0, p),
               g1 = gamma1(p);
  const Eigen::MatrixXcd h =
      v12 * Eigen::kroneckerProduct(n1, n1).eval() +
      p.g * (Eigen::kroneckerProduct(sx, id).eval() +
             Eigen::kroneckerProduct(id, sx).eval());
  const Eigen::MatrixXcd L =
      liouvillian(h,
                  {Eigen::kroneckerProduct(n1, id).eval(),
                   Eigen::kroneckerProduct(id, n1).eval(),
                   Eigen::kroneckerProduct(n1, n1).eval()},
                  {g1, g1, g12});
  const double t = 800.0;
  // reference: adaptive Runge-Kutta on vec(rho)
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(
      pair_ground_state(2).data(), 16);
  OdeOptions opt;
  opt.rtol = 1e-10;
  integrate_dp54([&](const Eigen::VectorXcd& y,
                     Eigen::VectorXcd& dy) { dy = L * y; },
                 v, 0.0, t, opt);
  Eigen::VectorXd times(2);
  times << 0.0, t;
  const ObservableSeries s =
      evolve_effective_pair(p, 21.0, pair_ground_state(2), times);
  const Eigen::MatrixXcd rho_ref = Eigen::Map<const Eigen::MatrixXcd>(v.data(), 4, 4);
  const double p11_ref = std::real(rho_ref(3, 3));
  CHECK(s.populations(1, 2) == doctest::Approx(p11_ref).epsilon(1e-7));
}

TEST_CASE("three-level and effective pair stay close in the dressing regime") {
  DressingParams p;
  p.omega = 1.0;
  p.delta = -10.0;
  p.gamma = 0.1;
  p.g = 2.5e-3;
  p.delta0 = p.omega * p.omega / (4.0 * std::abs(p.delta));
  const double v0_abs = std::abs(v0(p));
  const Eigen::VectorXd times =
      Eigen::VectorXd::LinSpaced(100, 0.0, 10.0 / v0_abs);
  const ObservableSeries a =
      evolve_three_level_pair(p, 21.0, pair_ground_state(3), times);
  const ObservableSeries b =
      evolve_effective_pair(p, 21.0, pair_ground_state(2), times);
  double sup = 0.0;
  for (Eigen::Index i = 0; i < times.size(); ++i)
    for (int c = 0; c < 3; ++c)
      sup = std::max(sup, std::abs(a.populations(i, c) - b.populations(i, c)));
  CHECK(sup <= 0.02);
}

TEST_CASE("initial states") {
  const DensityState z = DensityState::all_zero(3);
  CHECK(std::real(z.rho(0, 0)) == doctest::Approx(1.0));
  CHECK_NOTHROW(z.check());
  const DensityState x = DensityState::plus_x(2);
  CHECK(std::real(x.rho.trace()) == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 0; i < 4; ++i)
    CHECK(std::real(x.rho(i, i)) == doctest::Approx(0.25).epsilon(1e-14));
}
