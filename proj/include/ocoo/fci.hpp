#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ocoo/fock.hpp"
#include "ocoo/model.hpp"
#include "ocoo/rotation.hpp"

namespace ocoo {

struct FciResult {
  Eigen::VectorXd energies;      // ascending
  Eigen::MatrixXd states;        // column k = eigenstate k over the sector basis
  Eigen::VectorXd spin_squared;  // <S^2> per state
  std::vector<int> singlet_indices;  // states with <S^2> < 0.1, ascending energy
  HubbardParams params;
  Sector sector;
};

inline FciResult solve_fci(const HubbardParams& params, const Sector& sector) {
  const SectorHamiltonian h = build_sector_hamiltonian(params, sector);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
  FciResult res;
  res.energies = es.eigenvalues();
  res.states = es.eigenvectors();
  res.params = params;
  res.sector = sector;
  for (int k = 0; k < res.states.cols(); ++k) {
    int arg = 0;
    res.states.col(k).cwiseAbs().maxCoeff(&arg);
    if (res.states(arg, k) < 0.0) res.states.col(k) *= -1.0;
  }
  const Eigen::MatrixXd s2 = spin_squared_sector(sector);
  res.spin_squared.resize(res.states.cols());
  for (int k = 0; k < res.states.cols(); ++k) {
    res.spin_squared[k] = res.states.col(k).dot(s2 * res.states.col(k));
    if (res.spin_squared[k] < 0.1) res.singlet_indices.push_back(k);
  }
  return res;
}

inline FciResult solve_fci(const HubbardParams& params) {
  return solve_fci(params, enumerate_sector(3, 4, 0));
}

/// E1 - E0 over the full sector spectrum.
inline double fci_gap(const FciResult& result) {
  if (result.energies.size() < 2)
    throw std::invalid_argument("fci_gap: need at least two states");
  return result.energies[1] - result.energies[0];
}

inline bool fci_gap_degenerate(const FciResult& result, double tol = 1e-10) {
  return fci_gap(result) < tol;
}

/// Excitation energy within the ground state's spin symmetry: the gap between
/// the two lowest singlet eigenstates. This is the reference the orbital-
/// optimized singlet CI methods are judged against.
inline double fci_singlet_gap(const FciResult& result) {
  if (result.singlet_indices.size() < 2)
    throw std::invalid_argument("fci_singlet_gap: need two singlet states");
  return result.energies[result.singlet_indices[1]] -
         result.energies[result.singlet_indices[0]];
}

inline double project(const SectorVector& a, const SectorVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("project: dimension mismatch");
  return std::abs(a.dot(b));
}

}  // namespace ocoo
