#include "ryd/dressing.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ryd {

bool DressingParams::weak_dressing() const { return std::abs(delta) >= 3.0 * omega; }

double v0(const DressingParams& p) {
  if (p.delta == 0.0) throw std::domain_error("v0: delta must be nonzero");
  const double d3 = p.delta * p.delta * p.delta;
  return std::pow(p.omega, 4) / (8.0 * d3);
}

double delta2(double u_at_r, const DressingParams& p) {
  return u_at_r + 2.0 * p.delta;
}

double dressed_potential(double u_at_r, const DressingParams& p) {
  const double d2 = delta2(u_at_r, p);
  const double denom = d2 * d2 + p.gamma * p.gamma;
  if (denom == 0.0)
    throw std::runtime_error(
        "dressed_potential: antiblockade resonance (delta2 = 0, gamma = 0)");
  return v0(p) * d2 * u_at_r / denom;
}

double gamma1(const DressingParams& p) {
  if (p.delta == 0.0) throw std::domain_error("gamma1: delta must be nonzero");
  return p.omega * p.omega * p.gamma / (4.0 * p.delta * p.delta);
}

double gamma2(double u_at_r, const DressingParams& p) {
  const double d2 = delta2(u_at_r, p);
  const double denom = 2.0 * p.delta * p.delta * (d2 * d2 + p.gamma * p.gamma);
  if (denom == 0.0)
    throw std::runtime_error("gamma2: antiblockade resonance");
  return std::pow(p.omega, 4) * p.gamma / denom;
}

double coherence(double u_at_r, const DressingParams& p) {
  if (!(p.gamma > 0.0)) throw std::domain_error("coherence: gamma must be positive");
  return dressed_potential(u_at_r, p) / (2.0 * gamma1(p) + gamma2(u_at_r, p));
}

double coherence_approx(double u_at_r, const DressingParams& p) {
  if (!(p.gamma > 0.0))
    throw std::domain_error("coherence_approx: gamma must be positive");
  const double d2 = delta2(u_at_r, p);
  return p.omega * p.omega / (4.0 * p.delta * p.gamma) * d2 * u_at_r /
         (p.omega * p.omega + d2 * d2);
}

double coherence_srd_limit(const DressingParams& p) {
  if (!(p.gamma > 0.0))
    throw std::domain_error("coherence_srd_limit: gamma must be positive");
  return p.omega * p.omega / (4.0 * std::abs(p.delta) * p.gamma);
}

double coherence_molecular_limit(const DressingParams& p) {
  if (!(p.gamma > 0.0))
    throw std::domain_error("coherence_molecular_limit: gamma must be positive");
  return p.omega / (4.0 * p.gamma);
}

double two_photon_rabi(const DressingParams& p) {
  if (p.delta == 0.0)
    throw std::domain_error("two_photon_rabi: delta must be nonzero");
  return p.omega * p.omega / p.delta;
}

double srd_potential(double r, double r_c, const DressingParams& p) {
  if (!(r_c > 0.0)) throw std::domain_error("srd_potential: r_c must be positive");
  const double x = r / r_c;
  return v0(p) / (1.0 + std::pow(x, 6));
}

double full_dressed_potential(double u_at_r, const DressingParams& p) {
  if (p.omega == 0.0) return 0.0;
  const double d2 = delta2(u_at_r, p);
  const double res_tol = 1e-9 * std::max(p.omega, std::abs(p.delta));
  if (std::abs(d2) < res_tol)
    throw std::runtime_error(
        "full_dressed_potential: antiblockade crossing, |delta2| ~ 0");

  const double c = std::sqrt(2.0) * p.omega / 2.0;
  auto level = [&](double u) {
    Eigen::Matrix3d h;
    h << 0.0, c, 0.0,
         c, p.delta, c,
         0.0, c, 2.0 * p.delta + u;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("full_dressed_potential: eigensolve failed");
    // branch with dominant |11> character
    int n = 0;
    es.eigenvectors().row(0).cwiseAbs().maxCoeff(&n);
    return es.eigenvalues()(n);
  };
  return level(u_at_r) - level(0.0);
}

DressedProfile dressed_profile(const Eigen::VectorXd& r_grid,
                               const Eigen::VectorXd& u, const DressingParams& p) {
  if (r_grid.size() != u.size())
    throw std::invalid_argument("dressed_profile: grid/potential size mismatch");
  DressedProfile prof;
  prof.r_grid = r_grid;
  const Eigen::Index n = r_grid.size();
  prof.v.resize(n);
  prof.gamma2.resize(n);
  prof.coherence.resize(n);
  prof.delta2.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    prof.v[i] = dressed_potential(u[i], p);
    prof.gamma2[i] = ryd::gamma2(u[i], p);
    prof.coherence[i] = ryd::coherence(u[i], p);
    prof.delta2[i] = ryd::delta2(u[i], p);
  }
  return prof;
}

}  // namespace ryd
