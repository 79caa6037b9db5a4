#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocoo/fock.hpp"

namespace ocoo {

/// Amplitudes over the canonical Sector basis; the common arena in which
/// wavefunctions from different orbital bases are compared.
using SectorVector = Eigen::VectorXd;

/// Orbital-rotation parameters (kappa_12, kappa_13, kappa_23) filling a real
/// antisymmetric 3x3 generator.
struct Kappa {
  Eigen::Vector3d params = Eigen::Vector3d::Zero();

  Kappa() = default;
  Kappa(double k12, double k13, double k23) : params(k12, k13, k23) {}
  explicit Kappa(const Eigen::Vector3d& p) : params(p) {}

  Eigen::Matrix3d generator() const {
    Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
    k(0, 1) = params[0];
    k(0, 2) = params[1];
    k(1, 2) = params[2];
    return (k - k.transpose()).eval();
  }
};

/// Orthonormal orbital coefficients; column p is MO p in the site basis.
struct OrbitalBasis {
  Eigen::Matrix3d coeffs = Eigen::Matrix3d::Identity();
  Kappa source_kappa;
};

/// Closed-form exp(-K) for the antisymmetric generator of `kappa` (Rodrigues).
inline OrbitalBasis exponentiate(const Kappa& kappa) {
  if (!kappa.params.allFinite())
    throw std::invalid_argument("exponentiate: non-finite kappa");
  const Eigen::Matrix3d k = -kappa.generator();
  // K = theta * [w]_x with axis w: exp(K) = I + sin(theta) W + (1-cos) W^2.
  const double theta = kappa.params.norm();
  OrbitalBasis basis;
  basis.source_kappa = kappa;
  if (theta < 1e-300) {
    basis.coeffs = Eigen::Matrix3d::Identity() + k;
    return basis;
  }
  const Eigen::Matrix3d w = k / theta;
  basis.coeffs = Eigen::Matrix3d::Identity() + std::sin(theta) * w +
                 (1.0 - std::cos(theta)) * (w * w);
  return basis;
}

/// C = reference * exp(-K): rotation applied on top of a fixed reference basis.
inline OrbitalBasis rotated(const Eigen::Matrix3d& reference, const Kappa& kappa) {
  OrbitalBasis basis = exponentiate(kappa);
  basis.coeffs = (reference * basis.coeffs).eval();
  return basis;
}

/// MO occupation: (orbital, spin) with orbital in [0,3) and spin 0 = alpha.
using MoOccupation = std::pair<int, int>;

/// CAS[2,2] determinants over one inactive orbital, in the fixed order
/// |1 1b 2 2b>, |1 1b 2 3b>, |1 1b 2b 3>, |1 1b 3 3b>.
inline const std::vector<std::vector<MoOccupation>>& cas_occupations() {
  static const std::vector<std::vector<MoOccupation>> dets = {
      {{0, 0}, {0, 1}, {1, 0}, {1, 1}},
      {{0, 0}, {0, 1}, {1, 0}, {2, 1}},
      {{0, 0}, {0, 1}, {1, 1}, {2, 0}},
      {{0, 0}, {0, 1}, {2, 0}, {2, 1}},
  };
  return dets;
}

/// Sector components of prod_{(p,s) in occ, list order} (sum_l C[l][p] a+_{l s}) |vac>.
/// The creation order is the list order, which fixes the determinant's phase.
inline SectorVector embed_determinant(const OrbitalBasis& basis,
                                      const std::vector<MoOccupation>& occ_mos,
                                      const Sector& sector) {
  const int L = sector.n_sites;
  int sz2 = 0;
  for (std::size_t a = 0; a < occ_mos.size(); ++a) {
    const auto& [p, s] = occ_mos[a];
    if (p < 0 || p >= L || (s != 0 && s != 1))
      throw std::invalid_argument("embed_determinant: occupation out of range");
    sz2 += (s == 0) ? 1 : -1;
    for (std::size_t b = a + 1; b < occ_mos.size(); ++b)
      if (occ_mos[a] == occ_mos[b])
        throw std::invalid_argument("embed_determinant: repeated spin-orbital");
  }
  if (static_cast<int>(occ_mos.size()) != sector.n_particles ||
      sz2 != sector.sz_doubled)
    throw std::invalid_argument("embed_determinant: (N, Sz) does not match sector");

  std::vector<ModeOperator> cre;
  for (int m = 0; m < 2 * L; ++m)
    cre.push_back(build_mode_operator(L, m, OpKind::creation));

  const std::uint32_t full_dim = 1u << (2 * L);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(full_dim);
  v[0] = 1.0;
  for (const auto& [p, s] : occ_mos) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(full_dim);
    for (int l = 0; l < L; ++l) {
      const double c = basis.coeffs(l, p);
      if (c != 0.0) next += c * cre[mode_index(l, s)].apply(v);
    }
    v = std::move(next);
  }
  return restrict_to_sector(v, sector);
}

inline double cross_overlap(const SectorVector& v, const SectorVector& w) {
  if (v.size() != w.size())
    throw std::invalid_argument("cross_overlap: dimension mismatch");
  return v.dot(w);
}

/// 9x4 matrix whose columns are the embedded CAS determinants of `basis`.
inline Eigen::MatrixXd cas_determinant_matrix(const OrbitalBasis& basis,
                                              const Sector& sector) {
  const auto& dets = cas_occupations();
  Eigen::MatrixXd d(sector.dimension(), static_cast<int>(dets.size()));
  for (std::size_t i = 0; i < dets.size(); ++i)
    d.col(static_cast<int>(i)) = embed_determinant(basis, dets[i], sector);
  return d;
}

struct CasProjection {
  Eigen::Vector4d coeffs;
  double weight;
};

/// Components of `v` along the four CAS determinants of `basis`;
/// weight = sum of squares, the share of `v` inside that CAS subspace.
inline CasProjection cas_projection(const SectorVector& v, const OrbitalBasis& basis,
                                    const Sector& sector) {
  const Eigen::MatrixXd d = cas_determinant_matrix(basis, sector);
  CasProjection out;
  out.coeffs = d.transpose() * v;
  out.weight = out.coeffs.squaredNorm();
  return out;
}

}  // namespace ocoo
