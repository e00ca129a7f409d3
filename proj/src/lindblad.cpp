#include "ryd/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ryd/ode.hpp"

namespace ryd {

namespace {

// diagonal of the z-basis Hamiltonian: site detunings + pair couplings
Eigen::VectorXd hamiltonian_diagonal(const SpinChainModel& model) {
  const std::size_t dim = hilbert_dim(model.n_sites);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(dim);
  for (std::uint64_t m = 0; m < dim; ++m) {
    double v = 0.0;
    for (int k = 0; k < model.n_sites; ++k) {
      const double mk = (m >> k) & 1u ? 0.5 : -0.5;
      v += model.site_detunings[k] * mk;
      for (int l = k + 1; l < model.n_sites; ++l) {
        const double ml = (m >> l) & 1u ? 0.5 : -0.5;
        v += model.couplings(k, l) * mk * ml;
      }
    }
    h[m] = v;
  }
  return h;
}

// Gamma_mn = 1/2 sum_jumps (d_m - d_n)^2 over the diagonal jump operators
Eigen::MatrixXd dephasing_matrix(const SpinChainModel& model) {
  const std::size_t dim = hilbert_dim(model.n_sites);
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd d(dim);
  auto accumulate = [&](double rate) {
    if (rate == 0.0) return;
    for (std::size_t m = 0; m < dim; ++m)
      for (std::size_t n = 0; n < dim; ++n) {
        const double diff = d[m] - d[n];
        gamma(m, n) += 0.5 * rate * diff * diff;
      }
  };
  for (int k = 0; k < model.n_sites; ++k) {
    for (std::uint64_t m = 0; m < dim; ++m) d[m] = (m >> k) & 1u ? 1.0 : 0.0;
    accumulate(model.gamma1);
  }
  for (int k = 0; k < model.n_sites; ++k)
    for (int l = k + 1; l < model.n_sites; ++l) {
      for (std::uint64_t m = 0; m < dim; ++m)
        d[m] = ((m >> k) & 1u) && ((m >> l) & 1u) ? 1.0 : 0.0;
      accumulate(model.gamma2_matrix(k, l));
    }
  return gamma;
}

struct MasterEquationRhs {
  const SpinChainModel* model;
  Eigen::VectorXd hdiag;
  Eigen::MatrixXd gamma;
  std::size_t dim;

  explicit MasterEquationRhs(const SpinChainModel& m)
      : model(&m),
        hdiag(hamiltonian_diagonal(m)),
        gamma(dephasing_matrix(m)),
        dim(hilbert_dim(m.n_sites)) {}

  void operator()(const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) const {
    dydt.resize(y.size());
    const auto rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), dim, dim);
    auto out = Eigen::Map<Eigen::MatrixXcd>(dydt.data(), dim, dim);
    const cplx mi(0.0, -1.0);
    for (std::size_t m = 0; m < dim; ++m)
      for (std::size_t n = 0; n < dim; ++n)
        out(n, m) = (mi * (hdiag[n] - hdiag[m]) - gamma(n, m)) * rho(n, m);
    if (model->g != 0.0) {
      // -i g [Sx, rho], assembled column-by-column to stay cache-friendly
      const cplx f(0.0, -0.5 * model->g);
      for (int k = 0; k < model->n_sites; ++k) {
        const std::uint64_t bit = std::uint64_t{1} << k;
        for (std::uint64_t n = 0; n < dim; ++n) {
          out.col(n) -= f * rho.col(n ^ bit);  // rho Sx term
          auto dst = out.col(n);
          const auto src = rho.col(n);
          for (std::uint64_t m = 0; m < dim; ++m) dst[m] += f * src[m ^ bit];
        }
      }
    }
  }
};

void pair_populations(const Eigen::MatrixXcd& rho01,
                      double* p00, double* p01s, double* p11) {
  // two-atom {0,1} basis, site-0 bit least significant
  *p00 = std::real(rho01(0, 0));
  *p11 = std::real(rho01(3, 3));
  *p01s = 0.5 * std::real(rho01(1, 1) + rho01(2, 2)) + std::real(rho01(1, 2));
}

}  // namespace

DensityState DensityState::all_zero(int n_sites) {
  const std::size_t dim = hilbert_dim(n_sites);
  DensityState s;
  s.rho = Eigen::MatrixXcd::Zero(dim, dim);
  s.rho(0, 0) = 1.0;
  return s;
}

DensityState DensityState::plus_x(int n_sites) {
  std::vector<Eigen::Vector2cd> sites(
      n_sites, Eigen::Vector2cd(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)));
  return product(sites);
}

DensityState DensityState::product(const std::vector<Eigen::Vector2cd>& site_states) {
  const int n = static_cast<int>(site_states.size());
  const std::size_t dim = hilbert_dim(n);
  Eigen::VectorXcd psi(dim);
  for (std::uint64_t m = 0; m < dim; ++m) {
    cplx a = 1.0;
    for (int k = 0; k < n; ++k) a *= site_states[k][(m >> k) & 1u];
    psi[m] = a;
  }
  psi.normalize();
  DensityState s;
  s.rho = psi * psi.adjoint();
  return s;
}

int DensityState::n_sites() const {
  int n = 0;
  while ((Eigen::Index{1} << n) < rho.rows()) ++n;
  return n;
}

void DensityState::check(double tr_tol, double herm_tol, double pos_tol) const {
  const double tr_err = std::abs(rho.trace() - 1.0);
  if (tr_err > tr_tol)
    throw std::runtime_error("DensityState: trace deviates by " + std::to_string(tr_err));
  const double herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > herm_tol)
    throw std::runtime_error("DensityState: non-Hermitian by " + std::to_string(herm_err));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.eigenvalues().minCoeff() < -pos_tol)
    throw std::runtime_error("DensityState: negative eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()));
}

void evolve_density(const SpinChainModel& model, Eigen::MatrixXcd& rho, double t,
                    const EvolveOptions& opt) {
  if (t < 0.0) throw std::invalid_argument("evolve_density: negative time");
  if (t == 0.0) return;
  model.validate();
  if (model.n_sites > opt.me_cap)
    throw std::invalid_argument("evolve_density: n_sites exceeds the dense-solver cap");
  MasterEquationRhs rhs(model);
  Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
  OdeOptions ode;
  ode.rtol = opt.rtol;
  ode.atol = opt.atol;
  integrate_dp54(rhs, y, 0.0, t, ode);
  rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), rho.rows(), rho.cols());
}

ObservableSeries evolve_master_equation(const SpinChainModel& model,
                                        const DensityState& initial,
                                        const Eigen::VectorXd& times,
                                        const EvolveOptions& opt) {
  model.validate();
  if (model.n_sites > opt.me_cap)
    throw std::invalid_argument(
        "evolve_master_equation: n_sites exceeds the dense-solver cap");
  const std::size_t dim = hilbert_dim(model.n_sites);
  if (static_cast<std::size_t>(initial.rho.rows()) != dim)
    throw std::invalid_argument("evolve_master_equation: initial state dimension");
  const Eigen::Index nt = times.size();
  for (Eigen::Index i = 0; i < nt; ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] <= times[i - 1]))
      throw std::invalid_argument("evolve_master_equation: times must increase");
  }

  MasterEquationRhs rhs(model);
  OdeOptions ode;
  ode.rtol = opt.rtol;
  ode.atol = opt.atol;

  ObservableSeries series;
  series.times = times;
  series.jx.resize(nt);
  series.jy.resize(nt);
  series.jz.resize(nt);
  series.jz_var.resize(nt);
  const bool pair = (model.n_sites == 2);
  if (pair) {
    series.population_labels = {"p00", "p01s", "p11"};
    series.populations.resize(nt, 3);
  }

  Eigen::VectorXcd y =
      Eigen::Map<const Eigen::VectorXcd>(initial.rho.data(), initial.rho.size());
  double t = 0.0;
  for (Eigen::Index i = 0; i < nt; ++i) {
    if (times[i] > t) {
      ode.h_init = integrate_dp54(rhs, y, t, times[i], ode);
      t = times[i];
    }
    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), dim, dim);
    if (opt.check_state) {
      DensityState s;
      s.rho = rho;
      s.check();
    }
    const SpinMoments mom = density_moments(rho, model.n_sites);
    series.jx[i] = mom.jx;
    series.jy[i] = mom.jy;
    series.jz[i] = mom.jz;
    double jz2 = 0.0;
    for (std::uint64_t m = 0; m < dim; ++m) {
      const double mz = basis_jz(m, model.n_sites);
      jz2 += std::real(rho(m, m)) * mz * mz;
    }
    series.jz_var[i] = jz2 - mom.jz * mom.jz;
    if (pair) {
      double p00, p01s, p11;
      pair_populations(rho, &p00, &p01s, &p11);
      series.populations(i, 0) = p00;
      series.populations(i, 1) = p01s;
      series.populations(i, 2) = p11;
    }
  }
  return series;
}

Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& h,
                             const std::vector<Eigen::MatrixXcd>& jumps,
                             const std::vector<double>& rates) {
  if (jumps.size() != rates.size())
    throw std::invalid_argument("liouvillian: jumps/rates size mismatch");
  const Eigen::Index d = h.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd L =
      cplx(0.0, -1.0) *
      (Eigen::kroneckerProduct(id, h).eval() -
       Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    const Eigen::MatrixXcd& a = jumps[j];
    const Eigen::MatrixXcd aa = a.adjoint() * a;
    L += rates[j] * (Eigen::kroneckerProduct(a.conjugate(), a).eval() -
                     0.5 * Eigen::kroneckerProduct(id, aa).eval() -
                     0.5 * Eigen::kroneckerProduct(aa.transpose(), id).eval());
  }
  return L;
}

Eigen::MatrixXcd pair_ground_state(int levels) {
  const Eigen::Index d = static_cast<Eigen::Index>(levels) * levels;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  rho(0, 0) = 1.0;
  return rho;
}

namespace {

// propagate vec(rho) through exp(L dt) between output times, collecting the
// {0,1}-manifold observables; `levels` is the per-atom dimension
ObservableSeries propagate_pair(const Eigen::MatrixXcd& L, int levels,
                                const Eigen::MatrixXcd& initial,
                                const Eigen::VectorXd& times) {
  const Eigen::Index d = initial.rows();
  const Eigen::Index nt = times.size();
  ObservableSeries series;
  series.times = times;
  series.jx.resize(nt);
  series.jy.resize(nt);
  series.jz.resize(nt);
  series.jz_var.resize(nt);
  series.population_labels = {"p00", "p01s", "p11"};
  series.populations.resize(nt, 3);

  // single-atom {0,1} submanifold spin operators embedded in `levels` states
  Eigen::MatrixXcd jx1 = Eigen::MatrixXcd::Zero(levels, levels);
  Eigen::MatrixXcd jy1 = jx1, jz1 = jx1;
  jx1(0, 1) = jx1(1, 0) = 0.5;
  jy1(0, 1) = cplx(0.0, 0.5);
  jy1(1, 0) = cplx(0.0, -0.5);
  jz1(0, 0) = -0.5;
  jz1(1, 1) = 0.5;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(levels, levels);
  const Eigen::MatrixXcd Jx = Eigen::kroneckerProduct(jx1, id).eval() +
                              Eigen::kroneckerProduct(id, jx1).eval();
  const Eigen::MatrixXcd Jy = Eigen::kroneckerProduct(jy1, id).eval() +
                              Eigen::kroneckerProduct(id, jy1).eval();
  const Eigen::MatrixXcd Jz = Eigen::kroneckerProduct(jz1, id).eval() +
                              Eigen::kroneckerProduct(id, jz1).eval();

  Eigen::VectorXcd k00 = Eigen::VectorXcd::Zero(d), k11 = k00, k01s = k00;
  // kron(a, b) index = i_a * levels + i_b
  k00[0] = 1.0;
  k11[1 * levels + 1] = 1.0;
  k01s[0 * levels + 1] = 1.0 / std::sqrt(2.0);
  k01s[1 * levels + 0] = 1.0 / std::sqrt(2.0);

  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(initial.data(), d * d);
  std::map<double, Eigen::MatrixXcd> props;
  double t = 0.0;
  for (Eigen::Index i = 0; i < nt; ++i) {
    const double dt = times[i] - t;
    if (dt < 0.0) throw std::invalid_argument("propagate_pair: times must increase");
    if (dt > 0.0) {
      auto it = props.find(dt);
      if (it == props.end())
        it = props.emplace(dt, (L * dt).exp().eval()).first;
      v = it->second * v;
      t = times[i];
    }
    const Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
    series.jx[i] = std::real((Jx * rho).trace());
    series.jy[i] = std::real((Jy * rho).trace());
    series.jz[i] = std::real((Jz * rho).trace());
    series.jz_var[i] =
        std::real((Jz * Jz * rho).trace()) - series.jz[i] * series.jz[i];
    series.populations(i, 0) = std::real(k00.dot(rho * k00));
    series.populations(i, 1) = std::real(k01s.dot(rho * k01s));
    series.populations(i, 2) = std::real(k11.dot(rho * k11));
  }
  return series;
}

}  // namespace

ObservableSeries evolve_three_level_pair(const DressingParams& p, double u12,
                                         const Eigen::MatrixXcd& initial,
                                         const Eigen::VectorXd& times) {
  if (initial.rows() != 9 || initial.cols() != 9)
    throw std::invalid_argument("evolve_three_level_pair: state must be 9x9");
  Eigen::MatrixXcd s01 = Eigen::MatrixXcd::Zero(3, 3);
  s01(0, 1) = 1.0;
  Eigen::MatrixXcd s1r = Eigen::MatrixXcd::Zero(3, 3);
  s1r(1, 2) = 1.0;
  Eigen::MatrixXcd s00 = Eigen::MatrixXcd::Zero(3, 3);
  s00(0, 0) = 1.0;
  Eigen::MatrixXcd srr = Eigen::MatrixXcd::Zero(3, 3);
  srr(2, 2) = 1.0;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);

  const Eigen::MatrixXcd h1 = p.delta * srr + p.delta0 * s00 +
                              0.5 * p.g * (s01 + s01.adjoint()) +
                              0.5 * p.omega * (s1r + s1r.adjoint());
  const Eigen::MatrixXcd H = Eigen::kroneckerProduct(h1, id).eval() +
                             Eigen::kroneckerProduct(id, h1).eval() +
                             u12 * Eigen::kroneckerProduct(srr, srr).eval();
  const std::vector<Eigen::MatrixXcd> jumps = {
      Eigen::kroneckerProduct(s1r, id).eval(),
      Eigen::kroneckerProduct(id, s1r).eval()};
  const Eigen::MatrixXcd L = liouvillian(H, jumps, {p.gamma, p.gamma});
  return propagate_pair(L, 3, initial, times);
}

ObservableSeries evolve_effective_pair(const DressingParams& p, double u12,
                                       const Eigen::MatrixXcd& initial,
                                       const Eigen::VectorXd& times) {
  if (initial.rows() != 4 || initial.cols() != 4)
    throw std::invalid_argument("evolve_effective_pair: state must be 4x4");
  Eigen::MatrixXcd n1 = Eigen::MatrixXcd::Zero(2, 2);
  n1(1, 1) = 1.0;
  Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 0.5;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);

  const double v12 = dressed_potential(u12, p);
  const double g12 = gamma2(u12, p);
  const double g1 = gamma1(p);
  const Eigen::MatrixXcd H =
      v12 * Eigen::kroneckerProduct(n1, n1).eval() +
      p.g * (Eigen::kroneckerProduct(sx, id).eval() +
             Eigen::kroneckerProduct(id, sx).eval());
  const std::vector<Eigen::MatrixXcd> jumps = {
      Eigen::kroneckerProduct(n1, id).eval(),
      Eigen::kroneckerProduct(id, n1).eval(),
      Eigen::kroneckerProduct(n1, n1).eval()};
  const Eigen::MatrixXcd L = liouvillian(H, jumps, {g1, g1, g12});
  return propagate_pair(L, 2, initial, times);
}

}  // namespace ryd
