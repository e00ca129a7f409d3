#include "ryd/collective.hpp"

#include <cmath>
#include <stdexcept>

namespace ryd {

std::size_t hilbert_dim(int n_sites) {
  if (n_sites < 1 || n_sites > 30)
    throw std::invalid_argument("hilbert_dim: n_sites out of range");
  return std::size_t{1} << n_sites;
}

double basis_jz(std::uint64_t state, int n_sites) {
  double mz = 0.0;
  for (int k = 0; k < n_sites; ++k)
    mz += ((state >> k) & 1u) ? 0.5 : -0.5;
  return mz;
}

Eigen::Matrix2cd rotation_gate(Axis axis, double angle) {
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  Eigen::Matrix2cd g;
  switch (axis) {
    case Axis::X:
      g << cplx(c, 0), cplx(0, -s), cplx(0, -s), cplx(c, 0);
      break;
    case Axis::Y:
      // basis order (|0>, |1>) with Jy = (i/2)(|0><1| - |1><0|)
      g << cplx(c, 0), cplx(s, 0), cplx(-s, 0), cplx(c, 0);
      break;
    case Axis::Z:
      g << cplx(c, s), cplx(0, 0), cplx(0, 0), cplx(c, -s);
      break;
  }
  return g;
}

void apply_site_gate(Eigen::VectorXcd& psi, int n_sites, int site,
                     const Eigen::Matrix2cd& gate) {
  const std::size_t dim = hilbert_dim(n_sites);
  if (static_cast<std::size_t>(psi.size()) != dim)
    throw std::invalid_argument("apply_site_gate: dimension mismatch");
  const std::uint64_t bit = std::uint64_t{1} << site;
  for (std::uint64_t m = 0; m < dim; ++m) {
    if (m & bit) continue;  // visit each (0,1) pair once, via the 0 index
    const cplx a0 = psi[m], a1 = psi[m | bit];
    psi[m] = gate(0, 0) * a0 + gate(0, 1) * a1;
    psi[m | bit] = gate(1, 0) * a0 + gate(1, 1) * a1;
  }
}

void apply_collective_rotation(Eigen::VectorXcd& psi, int n_sites, Axis axis,
                               double angle) {
  if (!std::isfinite(angle))
    throw std::invalid_argument("apply_collective_rotation: non-finite angle");
  const Eigen::Matrix2cd g = rotation_gate(axis, angle);
  for (int k = 0; k < n_sites; ++k) apply_site_gate(psi, n_sites, k, g);
}

Eigen::VectorXcd apply_jx(const Eigen::VectorXcd& psi, int n_sites) {
  const std::size_t dim = hilbert_dim(n_sites);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (int k = 0; k < n_sites; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << k;
    for (std::uint64_t m = 0; m < dim; ++m) out[m] += 0.5 * psi[m ^ bit];
  }
  return out;
}

Eigen::VectorXcd apply_jy(const Eigen::VectorXcd& psi, int n_sites) {
  const std::size_t dim = hilbert_dim(n_sites);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (int k = 0; k < n_sites; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << k;
    for (std::uint64_t m = 0; m < dim; ++m) {
      // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
      const double sgn = (m & bit) ? 1.0 : -1.0;
      out[m] += cplx(0.0, 0.5 * sgn) * psi[m ^ bit];
    }
  }
  return out;
}

SpinMoments state_moments(const Eigen::VectorXcd& psi, int n_sites) {
  const std::size_t dim = hilbert_dim(n_sites);
  SpinMoments mom;
  const Eigen::VectorXcd jxp = apply_jx(psi, n_sites);
  const Eigen::VectorXcd jyp = apply_jy(psi, n_sites);
  mom.jx = std::real(psi.dot(jxp));
  mom.jy = std::real(psi.dot(jyp));
  mom.jx2 = std::real(jxp.dot(jxp));
  mom.jy2 = std::real(jyp.dot(jyp));
  mom.cross = 2.0 * std::real(jxp.dot(jyp));
  double jz = 0.0;
  for (std::uint64_t m = 0; m < dim; ++m)
    jz += std::norm(psi[m]) * basis_jz(m, n_sites);
  mom.jz = jz;
  return mom;
}

void apply_site_gate(Eigen::MatrixXcd& rho, int n_sites, int site,
                     const Eigen::Matrix2cd& gate) {
  const std::size_t dim = hilbert_dim(n_sites);
  if (static_cast<std::size_t>(rho.rows()) != dim ||
      static_cast<std::size_t>(rho.cols()) != dim)
    throw std::invalid_argument("apply_site_gate: dimension mismatch");
  const std::uint64_t bit = std::uint64_t{1} << site;
  // rho -> (g x I) rho (g x I)^dagger, applied as row then column updates
  for (std::uint64_t m = 0; m < dim; ++m) {
    if (m & bit) continue;
    const Eigen::RowVectorXcd r0 = rho.row(m), r1 = rho.row(m | bit);
    rho.row(m) = gate(0, 0) * r0 + gate(0, 1) * r1;
    rho.row(m | bit) = gate(1, 0) * r0 + gate(1, 1) * r1;
  }
  const Eigen::Matrix2cd gc = gate.conjugate();
  for (std::uint64_t m = 0; m < dim; ++m) {
    if (m & bit) continue;
    const Eigen::VectorXcd c0 = rho.col(m), c1 = rho.col(m | bit);
    rho.col(m) = gc(0, 0) * c0 + gc(0, 1) * c1;
    rho.col(m | bit) = gc(1, 0) * c0 + gc(1, 1) * c1;
  }
}

void apply_collective_rotation(Eigen::MatrixXcd& rho, int n_sites, Axis axis,
                               double angle) {
  const Eigen::Matrix2cd g = rotation_gate(axis, angle);
  for (int k = 0; k < n_sites; ++k) apply_site_gate(rho, n_sites, k, g);
}

SpinMoments density_moments(const Eigen::MatrixXcd& rho, int n_sites) {
  const std::size_t dim = hilbert_dim(n_sites);
  SpinMoments mom;
  double jz = 0.0;
  for (std::uint64_t m = 0; m < dim; ++m)
    jz += std::real(rho(m, m)) * basis_jz(m, n_sites);
  mom.jz = jz;

  // X = Jx rho, Y = Jy rho built from the bit-flip structure
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < n_sites; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << k;
    for (std::uint64_t m = 0; m < dim; ++m) {
      const double sy = (m & bit) ? 1.0 : -1.0;
      X.row(m) += 0.5 * rho.row(m ^ bit);
      Y.row(m) += cplx(0.0, 0.5 * sy) * rho.row(m ^ bit);
    }
  }
  mom.jx = std::real(X.trace());
  mom.jy = std::real(Y.trace());

  cplx jx2 = 0, jy2 = 0, cross = 0;
  for (int k = 0; k < n_sites; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << k;
    for (std::uint64_t m = 0; m < dim; ++m) {
      const double sy = (m & bit) ? 1.0 : -1.0;
      const cplx jx_elem = 0.5;                 // <m|Jx|m^k>
      const cplx jy_elem = cplx(0.0, 0.5 * sy); // <m|Jy|m^k>
      jx2 += jx_elem * X(m ^ bit, m);
      jy2 += jy_elem * Y(m ^ bit, m);
      cross += jx_elem * Y(m ^ bit, m) + jy_elem * X(m ^ bit, m);
    }
  }
  mom.jx2 = std::real(jx2);
  mom.jy2 = std::real(jy2);
  mom.cross = std::real(cross);
  return mom;
}

}  // namespace ryd
