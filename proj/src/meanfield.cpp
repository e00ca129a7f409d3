#include "ryd/meanfield.hpp"

#include <cmath>
#include <stdexcept>

namespace ryd {

namespace {

constexpr double kJzAverageTol = 1e-6;  // absolute, on the per-atom average
constexpr double kTinyCos = 1e-12;      // guard for cached-product division

// adaptive Simpson on [a, b]
template <class F>
double simpson_segment(F& f, double a, double fa, double b, double fb,
                       double fm, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_segment(f, a, fa, m, fm, flm, 0.5 * tol, depth - 1) +
         simpson_segment(f, m, fm, b, fb, frm, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson_segment(f, a, fa, b, fb, fm, tol, 48);
}

}  // namespace

std::complex<double> kappa_bar(const SpinChainModel& model, int i, int j) {
  return {model.couplings(i, j), -0.5 * model.gamma2_matrix(i, j)};
}

MeanFieldRates mean_field_rates(const SpinChainModel& model, double jz_bar) {
  if (std::abs(jz_bar) > 0.5 + 1e-12)
    throw std::invalid_argument("mean_field_rates: |jz_bar| exceeds 1/2");
  const int n = model.n_sites;
  MeanFieldRates rates;
  rates.jz_bar = jz_bar;
  // two-sided bulk displacement sum, truncated at the chain length
  double g0 = 0.0;
  for (int d = 1; d < n; ++d) g0 += 2.0 * model.gamma2_matrix(0, d);
  rates.gamma0 = g0;
  rates.gamma_bar =
      0.5 * n * (model.gamma1 + g0 * (0.25 - jz_bar * jz_bar));
  rates.gamma_z = model.gamma1 + g0 * (0.5 + jz_bar);
  double pair_sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pair_sum += model.gamma2_matrix(i, j);
  rates.gamma_g = 0.5 * n * model.gamma1 + 0.25 * pair_sum;
  return rates;
}

double analytic_jz(const SpinChainModel& model, double t) {
  const int n = model.n_sites;
  double jz = 0.0;
  for (int i = 0; i < n; ++i) {
    double prod = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      prod *= std::cos(0.5 * model.couplings(i, j) * t);
    }
    jz += prod;
  }
  return -0.5 * jz;
}

double jz_time_average(const SpinChainModel& model, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("jz_time_average: tau must be positive");
  const int n = model.n_sites;
  auto f = [&](double t) { return analytic_jz(model, t); };
  const double integral =
      adaptive_simpson(f, 0.0, tau, kJzAverageTol * n * tau);
  return integral / (n * tau);
}

PhaseTable PhaseTable::from_couplings(const Eigen::MatrixXd& couplings, double tau) {
  PhaseTable table;
  table.phi = 0.5 * tau * couplings;
  return table;
}

SpinMoments analytic_moments(const PhaseTable& phases, int n_sites) {
  const int n = n_sites;
  if (phases.phi.rows() != n || phases.phi.cols() != n)
    throw std::invalid_argument("analytic_moments: phase table size mismatch");

  Eigen::MatrixXd C(n, n), S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      C(i, j) = (i == j) ? 1.0 : std::cos(phases.phi(i, j));
      S(i, j) = (i == j) ? 0.0 : std::sin(phases.phi(i, j));
    }

  // cached row products P_i = prod_{j != i} cos phi_ij, with explicit
  // recomputation wherever a factor is too small to divide out
  Eigen::VectorXd P(n);
  std::vector<int> tiny_count(n, 0);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      p *= C(i, j);
      if (std::abs(C(i, j)) < kTinyCos) ++tiny_count[i];
    }
    P[i] = p;
  }
  auto row_product_excluding = [&](int i, int j) {
    if (tiny_count[i] == 0 && std::abs(C(i, j)) >= kTinyCos)
      return P[i] / C(i, j);
    double p = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != i && k != j) p *= C(i, k);
    return p;
  };

  SpinMoments mom;
  mom.jx = 0.0;
  mom.jy = 0.0;
  mom.jz = -0.5 * P.sum();
  mom.jy2 = 0.25 * n;

  double jx2 = 0.25 * n;
  double cross = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double prod_minus = 1.0, prod_plus = 1.0;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double cc = C(i, k) * C(j, k);
        const double ss = S(i, k) * S(j, k);
        prod_minus *= cc + ss;  // cos(phi_ik - phi_jk)
        prod_plus *= cc - ss;   // cos(phi_ik + phi_jk)
      }
      jx2 += 0.25 * (prod_minus - prod_plus);
      cross += 0.5 * S(i, j) *
               (row_product_excluding(i, j) + row_product_excluding(j, i));
    }
  }
  mom.jx2 = jx2;
  mom.cross = cross;
  return mom;
}

SpinMoments apply_dissipative_scaling(const SpinMoments& m, double gamma_bar,
                                      double tau) {
  if (gamma_bar < 0.0)
    throw std::invalid_argument("apply_dissipative_scaling: negative gamma_bar");
  const double s = std::exp(-gamma_bar * tau);
  SpinMoments out = m;
  out.jx *= s;
  out.jy *= s;
  out.jz *= s;
  out.jx2 *= s;
  out.jy2 *= s;
  out.cross *= s;
  return out;
}

Eigen::VectorXcd evolve_conditional(const SpinChainModel& model,
                                    const Eigen::VectorXcd& psi, double tau,
                                    const MeanFieldRates& rates) {
  if (tau < 0.0) throw std::invalid_argument("evolve_conditional: negative tau");
  const int n = model.n_sites;
  if (n > kConditionalSiteCap)
    throw std::invalid_argument("evolve_conditional: site cap exceeded");
  const std::size_t dim = hilbert_dim(n);
  if (static_cast<std::size_t>(psi.size()) != dim)
    throw std::invalid_argument("evolve_conditional: state dimension mismatch");

  const Eigen::VectorXd row_sums = model.couplings.rowwise().sum();
  Eigen::VectorXcd out(psi.size());
  for (std::uint64_t m = 0; m < dim; ++m) {
    double phase = 0.0, mz = 0.0;
    for (int j = 0; j < n; ++j) {
      const double mj = (m >> j) & 1u ? 0.5 : -0.5;
      mz += mj;
      phase += 0.5 * row_sums[j] * mj;
      for (int k = j + 1; k < n; ++k) {
        const double mk = (m >> k) & 1u ? 0.5 : -0.5;
        phase += model.couplings(j, k) * mj * mk;
      }
    }
    const double damp = 0.5 * rates.gamma_z * mz + 0.5 * rates.gamma_bar;
    out[m] = psi[m] * std::exp(cplx(-damp * tau, -phase * tau));
  }
  return out;
}

Eigen::VectorXcd collective_rotation(const Eigen::VectorXcd& psi, int n_sites,
                                     Axis axis, double angle) {
  Eigen::VectorXcd out = psi;
  apply_collective_rotation(out, n_sites, axis, angle);
  return out;
}

}  // namespace ryd
