#include "ryd/spin_model.hpp"

#include <cmath>
#include <stdexcept>

namespace ryd {

void SpinChainModel::validate() const {
  if (n_sites < 1) throw std::invalid_argument("SpinChainModel: n_sites < 1");
  if (couplings.rows() != n_sites || couplings.cols() != n_sites ||
      gamma2_matrix.rows() != n_sites || gamma2_matrix.cols() != n_sites)
    throw std::invalid_argument("SpinChainModel: matrix size mismatch");
  if (site_detunings.size() != n_sites)
    throw std::invalid_argument("SpinChainModel: detuning size mismatch");
  for (int j = 0; j < n_sites; ++j) {
    if (couplings(j, j) != 0.0 || gamma2_matrix(j, j) != 0.0)
      throw std::invalid_argument("SpinChainModel: nonzero diagonal");
    for (int k = 0; k < n_sites; ++k) {
      if (couplings(j, k) != couplings(k, j) ||
          gamma2_matrix(j, k) != gamma2_matrix(k, j))
        throw std::invalid_argument("SpinChainModel: matrices must be symmetric");
      if (gamma2_matrix(j, k) < 0.0)
        throw std::invalid_argument("SpinChainModel: negative dephasing rate");
    }
  }
  if (gamma1 < 0.0) throw std::invalid_argument("SpinChainModel: negative gamma1");
}

SpinChainModel make_chain(const PairCurveSet& curves, const MolecularPotential& pot,
                          const DressingParams& params, int n_sites,
                          double lattice_ratio, Scheme scheme) {
  if (n_sites < 1) throw std::invalid_argument("make_chain: n_sites < 1");
  if (!(lattice_ratio > 0.0))
    throw std::invalid_argument("make_chain: lattice_ratio must be positive");

  SpinChainModel model;
  model.n_sites = n_sites;
  model.spacing = pot.r_min / lattice_ratio;
  model.couplings = Eigen::MatrixXd::Zero(n_sites, n_sites);
  model.gamma2_matrix = Eigen::MatrixXd::Zero(n_sites, n_sites);
  model.gamma1 = gamma1(params);
  model.g = params.g;
  model.site_detunings = Eigen::VectorXd::Zero(n_sites);

  // one dressed-interaction evaluation per realized distance
  for (int d = 1; d < n_sites; ++d) {
    const double r = d * model.spacing;
    double v = 0.0, g2 = 0.0;
    if (scheme == Scheme::Rmd) {
      const double u = u_at(curves, pot, r);
      v = dressed_potential(u, params);
      g2 = gamma2(u, params);
    } else {
      v = srd_potential(r, pot.r_min, params);
      g2 = 0.0;  // two-body dephasing excluded from the soft-core comparison
    }
    for (int j = 0; j + d < n_sites; ++j) {
      model.couplings(j, j + d) = model.couplings(j + d, j) = v;
      model.gamma2_matrix(j, j + d) = model.gamma2_matrix(j + d, j) = g2;
    }
  }
  model.validate();
  return model;
}

SpinChainModel make_chain_from_couplings(const Eigen::MatrixXd& couplings,
                                         double gamma1_rate,
                                         const Eigen::MatrixXd& gamma2_matrix,
                                         double g) {
  SpinChainModel model;
  model.n_sites = static_cast<int>(couplings.rows());
  model.spacing = 1.0;
  model.couplings = couplings;
  model.gamma1 = gamma1_rate;
  model.gamma2_matrix = gamma2_matrix;
  model.g = g;
  model.site_detunings = Eigen::VectorXd::Zero(model.n_sites);
  model.validate();
  return model;
}

}  // namespace ryd
