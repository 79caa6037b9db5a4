#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "ocoo/fock.hpp"

namespace ocoo {

enum class TrimerKind { symmetric, antisymmetric };

/// Open-chain 1-2-3 Hubbard trimer. All energies in units of t.
struct HubbardParams {
  double t = 1.0;
  double u = 0.0;
  Eigen::Vector3d mu = Eigen::Vector3d::Zero();

  static HubbardParams make_symmetric(double u, double mu_central, double t = 1.0) {
    HubbardParams p;
    p.t = t;
    p.u = u;
    p.mu = Eigen::Vector3d(0.0, mu_central, 0.0);
    p.validate();
    return p;
  }

  static HubbardParams make_antisymmetric(double u, double mu_edge, double t = 1.0) {
    HubbardParams p;
    p.t = t;
    p.u = u;
    p.mu = Eigen::Vector3d(mu_edge, 0.0, -mu_edge);
    p.validate();
    return p;
  }

  void validate() const {
    if (!(t > 0.0)) throw std::invalid_argument("HubbardParams: t must be > 0");
    if (!(u >= 0.0)) throw std::invalid_argument("HubbardParams: u must be >= 0");
    if (!mu.allFinite()) throw std::invalid_argument("HubbardParams: mu must be finite");
  }
};

inline Eigen::Matrix3d build_one_body(const HubbardParams& params) {
  params.validate();
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h.diagonal() = params.mu;
  h(0, 1) = h(1, 0) = -params.t;
  h(1, 2) = h(2, 1) = -params.t;
  return h;
}

/// Closed-form one-body eigenvalue spread (max - min).
inline double spectral_band(const HubbardParams& params, TrimerKind kind) {
  params.validate();
  const double t = params.t;
  if (kind == TrimerKind::symmetric) {
    if (params.mu[0] != 0.0 || params.mu[2] != 0.0)
      throw std::invalid_argument("spectral_band: mu pattern is not symmetric");
    const double m = params.mu[1];
    return std::sqrt(m * m + 8.0 * t * t);
  }
  if (params.mu[1] != 0.0 || params.mu[0] != -params.mu[2])
    throw std::invalid_argument("spectral_band: mu pattern is not anti-symmetric");
  const double m = params.mu[0];
  return 2.0 * std::sqrt(m * m + 2.0 * t * t);
}

struct SectorHamiltonian {
  Eigen::MatrixXd matrix;
  HubbardParams params;
  Sector sector;
};

/// H = sum_{ij,sigma} h_ij a+_{i sigma} a_{j sigma} + U sum_i n_{i up} n_{i dn},
/// assembled over the full Fock space through mode operators and restricted
/// to the sector.
inline SectorHamiltonian build_sector_hamiltonian(const HubbardParams& params,
                                                  const Sector& sector) {
  const int L = sector.n_sites;
  const Eigen::Matrix3d h = build_one_body(params);
  if (L != 3) throw std::invalid_argument("build_sector_hamiltonian: L must be 3");

  std::vector<ModeOperator> cre, ann;
  for (int m = 0; m < 2 * L; ++m) {
    cre.push_back(build_mode_operator(L, m, OpKind::creation));
    ann.push_back(build_mode_operator(L, m, OpKind::annihilation));
  }

  const std::uint32_t full_dim = 1u << (2 * L);
  const int d = sector.dimension();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(full_dim);
    v[sector.basis[col].occ] = 1.0;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(full_dim);
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) {
        if (h(i, j) == 0.0) continue;
        for (int spin = 0; spin < 2; ++spin)
          acc += h(i, j) *
                 cre[mode_index(i, spin)].apply(ann[mode_index(j, spin)].apply(v));
      }
    for (int i = 0; i < L; ++i) {
      Eigen::VectorXd ndn = cre[mode_index(i, 1)].apply(ann[mode_index(i, 1)].apply(v));
      acc += params.u * cre[mode_index(i, 0)].apply(ann[mode_index(i, 0)].apply(ndn));
    }
    H.col(col) = restrict_to_sector(acc, sector);
  }
  H = 0.5 * (H + H.transpose()).eval();
  return SectorHamiltonian{std::move(H), params, sector};
}

/// One-body eigenbasis with ascending eigenvalues, deterministic column signs
/// (largest-magnitude component positive) and det = +1. Serves as the kappa = 0
/// reference for all orbital rotations.
inline Eigen::Matrix3d reference_basis(const HubbardParams& params) {
  const Eigen::Matrix3d h = build_one_body(params);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
  Eigen::Matrix3d c = es.eigenvectors();
  for (int col = 0; col < 3; ++col) {
    int arg = 0;
    c.col(col).cwiseAbs().maxCoeff(&arg);
    if (c(arg, col) < 0.0) c.col(col) *= -1.0;
  }
  if (c.determinant() < 0.0) c.col(2) *= -1.0;
  return c;
}

}  // namespace ocoo
