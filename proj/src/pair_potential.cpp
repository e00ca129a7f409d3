#include "ryd/pair_potential.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ryd {

namespace {

// relative flatness required of the branch tail before U(R_max) is treated
// as the asymptote
constexpr double kTailTol = 1e-4;

Eigen::Matrix3d asymptotic_hamiltonian(const MwCoupling& mw) {
  const double b = mw.omega_mw / std::sqrt(2.0);
  Eigen::Matrix3d h;
  h << 0.0, b, 0.0,
       b, mw.delta_mw, b,
       0.0, b, 2.0 * mw.delta_mw;
  return h;
}

// pair state |E+ E+> of two atoms in the upper microwave-dressed state,
// written in the {ss, sp_sym, pp} basis; the ss channel when the microwave
// is off
Eigen::Vector3d upper_dressed_pair_state(const MwCoupling& mw) {
  if (mw.omega_mw == 0.0) return Eigen::Vector3d(1.0, 0.0, 0.0);
  Eigen::Matrix2d h1;
  h1 << 0.0, mw.omega_mw / 2.0, mw.omega_mw / 2.0, mw.delta_mw;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h1);
  const Eigen::Vector2d ep = es.eigenvectors().col(1);  // upper state
  return Eigen::Vector3d(ep(0) * ep(0), std::sqrt(2.0) * ep(0) * ep(1),
                         ep(1) * ep(1));
}

// permutation of the current eigenvectors maximizing total overlap with the
// previous point's branch vectors; ties broken by energy proximity
std::array<int, 3> assign_branches(const Eigen::Matrix3d& prev_vecs,
                                   const Eigen::Vector3d& prev_vals,
                                   const Eigen::Matrix3d& vecs,
                                   const Eigen::Vector3d& vals) {
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  double best_overlap = -1.0, best_dist = 0.0;
  int best = 0;
  for (int p = 0; p < 6; ++p) {
    double overlap = 0.0, dist = 0.0;
    for (int n = 0; n < 3; ++n) {
      overlap += std::abs(prev_vecs.col(n).dot(vecs.col(perms[p][n])));
      dist += std::abs(prev_vals(n) - vals(perms[p][n]));
    }
    if (overlap > best_overlap + 1e-12 ||
        (overlap > best_overlap - 1e-12 && dist < best_dist)) {
      best_overlap = overlap;
      best_dist = dist;
      best = p;
    }
  }
  return {perms[best][0], perms[best][1], perms[best][2]};
}

}  // namespace

double mixing_angle(const MwCoupling& mw) {
  if (mw.omega_mw == 0.0 && mw.delta_mw == 0.0)
    throw std::domain_error("mixing_angle: omega_mw and delta_mw both zero");
  return std::atan2(2.0 * mw.omega_mw, mw.delta_mw);
}

Eigen::Matrix3d build_pair_hamiltonian(double r, const MwCoupling& mw,
                                       const DispersionCoeffs& coeffs) {
  if (!(r > 0.0))
    throw std::domain_error("build_pair_hamiltonian: r must be positive");
  const double r3 = r * r * r;
  const double r6 = r3 * r3;
  const double b = mw.omega_mw / std::sqrt(2.0);
  Eigen::Matrix3d h;
  h << -coeffs.c6_ss / r6, b, 0.0,
       b, mw.delta_mw + coeffs.c3_sp / r3, b,
       0.0, b, 2.0 * mw.delta_mw - coeffs.c6_pp / r6;
  return h;
}

Eigen::VectorXd default_r_grid() {
  const int n = 2000;
  const double lo = 0.3, hi = 20.0;
  Eigen::VectorXd r(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) r[i] = lo * std::exp(step * i);
  r[n - 1] = hi;
  return r;
}

PairCurveSet eigencurves(const Eigen::VectorXd& r_grid, const MwCoupling& mw,
                         const DispersionCoeffs& coeffs) {
  const Eigen::Index m = r_grid.size();
  if (m < 1) throw std::invalid_argument("eigencurves: empty grid");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(r_grid[i] > 0.0))
      throw std::invalid_argument("eigencurves: grid points must be positive");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
      throw std::invalid_argument("eigencurves: grid must be strictly increasing");
  }

  PairCurveSet set;
  set.r_grid = r_grid;
  set.mw = mw;
  set.coeffs = coeffs;
  set.branches.resize(3, m);
  set.vectors.assign(static_cast<std::size_t>(m), Eigen::Matrix3d::Identity());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.compute(asymptotic_hamiltonian(mw));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigencurves: asymptotic eigensolve failed");
  Eigen::Matrix3d prev_vecs = es.eigenvectors();  // ascending asymptote order
  Eigen::Vector3d prev_vals = es.eigenvalues();
  for (int n = 0; n < 3; ++n) set.asymptotes[n] = prev_vals(n);

  const Eigen::Vector3d target = upper_dressed_pair_state(mw);
  Eigen::Vector3d ov = (target.transpose() * prev_vecs).cwiseAbs();
  int boi = 0;
  ov.maxCoeff(&boi);
  set.branch_of_interest = boi;

  for (Eigen::Index i = m - 1; i >= 0; --i) {
    es.compute(build_pair_hamiltonian(r_grid[i], mw, coeffs));
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigencurves: eigensolve failed at grid point " +
                               std::to_string(i));
    const auto order =
        assign_branches(prev_vecs, prev_vals, es.eigenvectors(), es.eigenvalues());
    Eigen::Matrix3d vecs;
    Eigen::Vector3d vals;
    for (int n = 0; n < 3; ++n) {
      vecs.col(n) = es.eigenvectors().col(order[n]);
      vals(n) = es.eigenvalues()(order[n]);
    }
    set.branches.col(i) = vals;
    set.vectors[static_cast<std::size_t>(i)] = vecs;
    prev_vecs = vecs;
    prev_vals = vals;
  }
  return set;
}

MolecularPotential molecular_potential(const PairCurveSet& curves) {
  const int b = curves.branch_of_interest;
  if (b < 0 || b > 2)
    throw std::invalid_argument("molecular_potential: invalid branch index");
  const Eigen::Index m = curves.r_grid.size();
  const Eigen::VectorXd branch = curves.branches.row(b);

  MolecularPotential pot;
  pot.r_grid = curves.r_grid;
  pot.asymptote = branch[m - 1];
  pot.u = branch.array() - pot.asymptote;

  // flat-tail precondition: the outermost step must be negligible against
  // the well depth (fallback: a small fraction of the full branch span)
  const double span = pot.u.cwiseAbs().maxCoeff();
  const double depth = std::abs(pot.u.minCoeff());
  const double scale = std::max(depth, 1e-6 * span);
  if (m >= 2 && scale > 0.0) {
    const double tail_step = std::abs(branch[m - 1] - branch[m - 2]);
    if (tail_step > kTailTol * scale)
      throw std::invalid_argument(
          "molecular_potential: branch tail not flat; extend the grid to larger R");
  }

  Eigen::Index imin = 0;
  pot.u.minCoeff(&imin);
  pot.interior_minimum = (imin > 0 && imin < m - 1);
  if (!pot.interior_minimum) {
    pot.r_min = curves.r_grid[imin];
    pot.u_min = pot.u[imin];
    return pot;
  }

  // 3-point parabolic refinement around the grid minimum
  const double x1 = curves.r_grid[imin - 1], x2 = curves.r_grid[imin],
               x3 = curves.r_grid[imin + 1];
  const double y1 = pot.u[imin - 1], y2 = pot.u[imin], y3 = pot.u[imin + 1];
  const double denom = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
  if (denom != 0.0) {
    pot.r_min = x2 - 0.5 *
                         ((x2 - x1) * (x2 - x1) * (y2 - y3) -
                          (x2 - x3) * (x2 - x3) * (y2 - y1)) /
                         denom;
  } else {
    pot.r_min = x2;
  }
  // vertex value of the same parabola
  const double l1 = (pot.r_min - x2) * (pot.r_min - x3) / ((x1 - x2) * (x1 - x3));
  const double l2 = (pot.r_min - x1) * (pot.r_min - x3) / ((x2 - x1) * (x2 - x3));
  const double l3 = (pot.r_min - x1) * (pot.r_min - x2) / ((x3 - x1) * (x3 - x2));
  pot.u_min = l1 * y1 + l2 * y2 + l3 * y3;
  return pot;
}

double u_at(const PairCurveSet& curves, const MolecularPotential& pot, double r) {
  if (!(r > 0.0)) throw std::domain_error("u_at: r must be positive");
  const Eigen::Index m = curves.r_grid.size();
  if (r >= curves.r_grid[m - 1]) return 0.0;  // flat tail

  // nearest grid point for branch identification
  const double* begin = curves.r_grid.data();
  const double* it = std::lower_bound(begin, begin + m, r);
  Eigen::Index idx = it - begin;
  if (idx > 0 &&
      (idx == m || r - curves.r_grid[idx - 1] < curves.r_grid[idx] - r))
    --idx;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(
      build_pair_hamiltonian(r, curves.mw, curves.coeffs));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("u_at: eigensolve failed");
  const Eigen::Vector3d ref =
      curves.vectors[static_cast<std::size_t>(idx)].col(curves.branch_of_interest);
  Eigen::Vector3d ov = (ref.transpose() * es.eigenvectors()).cwiseAbs();
  int n = 0;
  ov.maxCoeff(&n);
  return es.eigenvalues()(n) - pot.asymptote;
}

double depth_scale(const MwCoupling& mw, const DispersionCoeffs& coeffs,
                   double u_target) {
  if (!(u_target < 0.0))
    throw std::invalid_argument("depth_scale: target depth must be negative");
  const PairCurveSet curves = eigencurves(default_r_grid(), mw, coeffs);
  const MolecularPotential pot = molecular_potential(curves);
  if (!pot.interior_minimum || !(pot.u_min < 0.0))
    throw std::invalid_argument(
        "depth_scale: potential has no attractive interior minimum");
  return u_target / pot.u_min;
}

}  // namespace ryd
