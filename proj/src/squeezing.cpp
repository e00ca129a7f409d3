#include "ryd/squeezing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ryd {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5)-1)/2
constexpr double kTauRelTol = 1e-3;

SpinChainModel with_rates(const SpinChainModel& model, bool dissipative,
                          bool include_tbd) {
  SpinChainModel m = model;
  if (!dissipative) {
    m.gamma1 = 0.0;
    m.gamma2_matrix.setZero();
  } else if (!include_tbd) {
    m.gamma2_matrix.setZero();
  }
  return m;
}

}  // namespace

MinVariance min_variance(const SpinMoments& m) {
  const double a = m.jx2 - m.jx * m.jx;
  const double b = m.jy2 - m.jy * m.jy;
  const double c = 0.5 * m.cross - m.jx * m.jy;
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw std::invalid_argument("min_variance: non-finite second moments");
  const double r = std::hypot(0.5 * (a - b), c);
  MinVariance mv;
  mv.variance = 0.5 * (a + b) - r;
  if (r < 1e-15 * std::max(1.0, std::abs(a) + std::abs(b))) {
    mv.theta = 0.0;  // isotropic: any quadrature, pick theta = 0
    return mv;
  }
  double theta = 0.5 * (std::atan2(c, 0.5 * (a - b)) + M_PI);
  if (theta >= M_PI / 2.0) theta -= M_PI;
  mv.theta = theta;
  return mv;
}

double xi_squared(const SpinMoments& m, int n_sites) {
  const double j2 = m.jx * m.jx + m.jy * m.jy + m.jz * m.jz;
  if (!(j2 > 0.0))
    throw std::runtime_error("xi_squared: mean spin length vanished (contrast lost)");
  return n_sites * min_variance(m).variance / j2;
}

SqueezingResult run_echo(const EchoProtocol& protocol, const SpinChainModel& model) {
  if (protocol.tau < 0.0) throw std::invalid_argument("run_echo: negative tau");
  model.validate();
  const int n = model.n_sites;

  SqueezingResult result;
  result.tau = protocol.tau;

  switch (protocol.method) {
    case Method::Analytic: {
      const PhaseTable phases =
          PhaseTable::from_couplings(model.couplings, protocol.tau);
      SpinMoments mom = analytic_moments(phases, n);
      double gamma_bar = 0.0;
      if (protocol.dissipative && protocol.tau > 0.0) {
        const SpinChainModel m = with_rates(model, true, protocol.include_tbd);
        const double jzb = jz_time_average(m, protocol.tau);
        gamma_bar = mean_field_rates(m, jzb).gamma_bar;
        mom = apply_dissipative_scaling(mom, gamma_bar, protocol.tau);
      }
      result.moments = mom;
      result.gamma_bar = gamma_bar;
      break;
    }
    case Method::ConditionalNh: {
      if (n > kConditionalSiteCap)
        throw std::invalid_argument("run_echo: conditional-NH site cap exceeded");
      MeanFieldRates rates;  // zero-rate default covers the coherent run
      const SpinChainModel m = with_rates(model, protocol.dissipative,
                                          protocol.include_tbd);
      if (protocol.dissipative && protocol.tau > 0.0)
        rates = mean_field_rates(m, jz_time_average(m, protocol.tau));
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(hilbert_dim(n));
      psi[0] = 1.0;
      psi = collective_rotation(psi, n, Axis::X, M_PI / 2.0);
      psi = evolve_conditional(m, psi, 0.5 * protocol.tau, rates);
      psi = collective_rotation(psi, n, Axis::X, M_PI);
      psi = evolve_conditional(m, psi, 0.5 * protocol.tau, rates);
      psi = collective_rotation(psi, n, Axis::X, M_PI / 2.0);
      result.moments = state_moments(psi, n);
      result.gamma_bar = rates.gamma_bar;
      break;
    }
    case Method::ExactMe: {
      if (n > protocol.me_cap)
        throw std::invalid_argument("run_echo: exact-ME site cap exceeded");
      SpinChainModel m = with_rates(model, protocol.dissipative,
                                    protocol.include_tbd);
      m.g = 0.0;  // dressing windows run with the Raman drive off
      EvolveOptions opt;
      opt.me_cap = protocol.me_cap;
      Eigen::MatrixXcd rho = DensityState::all_zero(n).rho;
      apply_collective_rotation(rho, n, Axis::X, M_PI / 2.0);
      evolve_density(m, rho, 0.5 * protocol.tau, opt);
      apply_collective_rotation(rho, n, Axis::X, M_PI);
      evolve_density(m, rho, 0.5 * protocol.tau, opt);
      apply_collective_rotation(rho, n, Axis::X, M_PI / 2.0);
      result.moments = density_moments(rho, n);
      result.gamma_bar = 0.0;
      break;
    }
  }

  const MinVariance mv = min_variance(result.moments);
  result.theta_star = mv.theta;
  result.xi2 = xi_squared(result.moments, n);
  return result;
}

TauOptimum optimize_tau(const EchoProtocol& protocol, const SpinChainModel& model,
                        double tau_lo, double tau_hi, int coarse_points) {
  if (!(tau_lo > 0.0) || !(tau_hi > tau_lo))
    throw std::invalid_argument("optimize_tau: empty or invalid tau range");
  if (coarse_points < 2)
    throw std::invalid_argument("optimize_tau: need at least two scan points");

  auto eval = [&](double tau) {
    EchoProtocol p = protocol;
    p.tau = tau;
    try {
      const SqueezingResult r = run_echo(p, model);
      return std::isfinite(r.xi2) ? r.xi2
                                  : std::numeric_limits<double>::infinity();
    } catch (const std::runtime_error&) {
      return std::numeric_limits<double>::infinity();  // contrast lost
    }
  };

  const double step = std::log(tau_hi / tau_lo) / (coarse_points - 1);
  double best_tau = tau_lo, best_val = std::numeric_limits<double>::infinity();
  int best_idx = 0;
  std::vector<double> taus(coarse_points);
  for (int i = 0; i < coarse_points; ++i) {
    taus[i] = tau_lo * std::exp(step * i);
    const double v = eval(taus[i]);
    if (v < best_val) {
      best_val = v;
      best_tau = taus[i];
      best_idx = i;
    }
  }

  // golden-section refinement in the bracketing interval
  double a = taus[std::max(0, best_idx - 1)];
  double b = taus[std::min(coarse_points - 1, best_idx + 1)];
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  double fc = eval(c), fd = eval(d);
  while ((b - a) > kTauRelTol * b) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      fd = eval(d);
    }
  }
  const double tau_ref = 0.5 * (a + b);
  const double val_ref = eval(tau_ref);
  if (val_ref < best_val) {
    best_val = val_ref;
    best_tau = tau_ref;
  }

  TauOptimum opt;
  if (best_val >= 1.0 - 1e-12) {
    // no squeezing anywhere in the window
    opt.tau = 0.0;
    opt.xi2 = 1.0;
    opt.theta_star = 0.0;
    opt.squeezed = false;
    return opt;
  }
  EchoProtocol p = protocol;
  p.tau = best_tau;
  const SqueezingResult r = run_echo(p, model);
  opt.tau = best_tau;
  opt.xi2 = r.xi2;
  opt.theta_star = r.theta_star;
  opt.squeezed = true;
  return opt;
}

std::vector<ScanRow> scan_scaling(const PairCurveSet& curves,
                                  const MolecularPotential& pot,
                                  const DressingParams& base_params,
                                  const ScanGrid& grid) {
  std::vector<ScanRow> rows;
  for (const Scheme scheme : grid.schemes)
    for (const double ratio : grid.lattice_ratios)
      for (const double gamma : grid.gamma_list)
        for (const int n : grid.n_list) {
          ScanRow row;
          row.scheme = scheme;
          row.rc_over_a = ratio;
          row.n_sites = n;
          row.gamma = gamma;
          rows.push_back(row);
        }

  std::vector<std::exception_ptr> errors;
  std::mutex errors_mutex;
  auto worker = [&](std::size_t begin, std::size_t stride) {
    try {
      for (std::size_t i = begin; i < rows.size(); i += stride) {
        ScanRow& row = rows[i];
        DressingParams params = base_params;
        params.gamma = row.gamma;
        const SpinChainModel model = make_chain(curves, pot, params, row.n_sites,
                                                row.rc_over_a, row.scheme);
        const double v0_abs = std::abs(v0(params));
        EchoProtocol protocol;
        protocol.scheme = row.scheme;
        protocol.method = Method::Analytic;
        protocol.dissipative = true;
        const TauOptimum opt =
            optimize_tau(protocol, model, grid.v0tau_lo / v0_abs,
                         grid.v0tau_hi / v0_abs, grid.coarse_points);
        row.xi2_min = opt.xi2;
        row.v0_tau_min = opt.tau * v0_abs;
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(errors_mutex);
      errors.push_back(std::current_exception());
    }
  };

  const int n_threads = std::max(1, grid.threads);
  if (n_threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back(worker, static_cast<std::size_t>(t),
                        static_cast<std::size_t>(n_threads));
    for (auto& th : pool) th.join();
  }
  if (!errors.empty()) std::rethrow_exception(errors.front());
  return rows;
}

}  // namespace ryd
