#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocoo/fock.hpp"
#include "ocoo/model.hpp"
#include "ocoo/optimize.hpp"
#include "ocoo/rotation.hpp"

namespace ocoo {

struct CasMatrix {
  Eigen::Matrix4d matrix;
  OrbitalBasis basis;
};

struct CasWavefunction {
  Eigen::Vector4d amps = Eigen::Vector4d::Zero();  // determinant order |1 1b 2 2b>, |1 1b 2 3b>, |1 1b 2b 3>, |1 1b 3 3b>
  OrbitalBasis basis;
  double energy = 0.0;
  bool degenerate = false;
};

inline void fix_sign_first_nonzero(Eigen::Ref<Eigen::VectorXd> v, double tol = 1e-12) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tol) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

/// M[i][j] = <d_i|H|d_j> over the four CAS determinants embedded in the sector.
inline CasMatrix build_cas_matrix(const SectorHamiltonian& h, const OrbitalBasis& basis) {
  const Eigen::MatrixXd d = cas_determinant_matrix(basis, h.sector);
  Eigen::Matrix4d m = d.transpose() * h.matrix * d;
  m = 0.5 * (m + m.transpose()).eval();
  return CasMatrix{m, basis};
}

inline CasWavefunction solve_casci(const CasMatrix& m, int root) {
  if (root < 0 || root > 3)
    throw std::invalid_argument("solve_casci: root out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m.matrix);
  CasWavefunction psi;
  psi.basis = m.basis;
  psi.energy = es.eigenvalues()[root];
  psi.amps = es.eigenvectors().col(root);
  fix_sign_first_nonzero(psi.amps);
  const auto& w = es.eigenvalues();
  psi.degenerate = (root > 0 && w[root] - w[root - 1] < 1e-10) ||
                   (root < 3 && w[root + 1] - w[root] < 1e-10);
  return psi;
}

/// Shared per-parameter-point state for the orbital optimizers: sector
/// Hamiltonian, the kappa = 0 reference orbitals, and the sector S^2 matrix
/// used to spin-adapt the 4-determinant CI space.
struct CasContext {
  SectorHamiltonian h;
  Eigen::Matrix3d reference;
  Eigen::MatrixXd s2;
};

inline CasContext make_cas_context(const HubbardParams& params, const Sector& sector) {
  CasContext ctx{build_sector_hamiltonian(params, sector), reference_basis(params),
                 spin_squared_sector(sector)};
  return ctx;
}

/// Orthonormal basis (4x3) of the spin-singlet part of the CAS determinant
/// space. The four Sz = 0 determinants span three singlets plus one triplet
/// component; CI roots are taken inside the singlet block so that ground and
/// excited states carry the spin symmetry of the exact ground state.
inline Eigen::Matrix<double, 4, 3> singlet_transform(const Eigen::MatrixXd& d,
                                                     const Eigen::MatrixXd& s2) {
  Eigen::Matrix4d s2d = d.transpose() * s2 * d;
  s2d = 0.5 * (s2d + s2d.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(s2d);
  if (es.eigenvalues()[2] > 0.1 || es.eigenvalues()[3] < 1.9)
    throw std::runtime_error("singlet_transform: unexpected spin structure");
  Eigen::Matrix<double, 4, 3> t = es.eigenvectors().leftCols<3>();
  for (int c = 0; c < 3; ++c) {
    int arg = 0;
    t.col(c).cwiseAbs().maxCoeff(&arg);
    if (t(arg, c) < 0.0) t.col(c) *= -1.0;
  }
  return t;
}

/// One CI evaluation at a given kappa: embedded determinants, singlet
/// transform, and the 3x3 singlet-block CI matrix.
struct CasEvaluation {
  OrbitalBasis basis;
  Eigen::MatrixXd d;               // 9x4 embedded determinants
  Eigen::Matrix<double, 4, 3> t;   // singlet transform
  Eigen::Matrix3d m_singlet;       // t' (d' H d) t
};

inline CasEvaluation evaluate_cas(const CasContext& ctx, const Kappa& kappa) {
  CasEvaluation ev;
  ev.basis = rotated(ctx.reference, kappa);
  ev.d = cas_determinant_matrix(ev.basis, ctx.h.sector);
  ev.t = singlet_transform(ev.d, ctx.s2);
  Eigen::Matrix4d m = ev.d.transpose() * ctx.h.matrix * ev.d;
  m = 0.5 * (m + m.transpose()).eval();
  ev.m_singlet = ev.t.transpose() * m * ev.t;
  ev.m_singlet = (0.5 * (ev.m_singlet + ev.m_singlet.transpose())).eval();
  return ev;
}

enum class CasObjective { ground, state_average };

struct ConvergenceError : std::runtime_error {
  Kappa best_kappa;
  double best_objective;
  ConvergenceError(const std::string& what, const Kappa& k, double f)
      : std::runtime_error(what), best_kappa(k), best_objective(f) {}
};

struct CasscfResult {
  Kappa kappa;
  double e0 = 0.0;                     // lowest CI root at the optimum
  double e1 = 0.0;                     // second root (meaningful for state_average)
  CasWavefunction psi0;                // ground root in the determinant basis
  SectorVector psi0_embedded;          // ground root in the sector basis
  bool converged = false;
  bool degenerate = false;
  int winning_start = -1;
  std::vector<double> trace;
};

/// CASSCF over the three rotation parameters. `objective` selects the
/// state-specific ground energy or the equal-weight mean of the two lowest
/// roots (state average). Starts: kappa = 0, any extra warm starts, plus
/// random restarts; the best objective wins.
inline CasscfResult optimize_casscf(const CasContext& ctx, CasObjective objective,
                                    const OptimizerOptions& opts,
                                    const std::vector<Kappa>& extra_starts = {}) {
  Objective f = [&](const Eigen::Vector3d& x) {
    const CasEvaluation ev = evaluate_cas(ctx, Kappa(x));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(ev.m_singlet,
                                                      Eigen::EigenvaluesOnly);
    if (objective == CasObjective::ground) return es.eigenvalues()[0];
    return 0.5 * (es.eigenvalues()[0] + es.eigenvalues()[1]);
  };
  std::vector<Eigen::Vector3d> starts{Eigen::Vector3d::Zero()};
  for (const Kappa& k : extra_starts) starts.push_back(k.params);

  CasscfResult res;
  MinimizeResult mr = minimize_multistart(f, starts, opts, &res.winning_start);
  res.kappa = Kappa(mr.x);
  res.converged = mr.converged;
  res.trace = mr.trace;

  const CasEvaluation ev = evaluate_cas(ctx, res.kappa);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(ev.m_singlet);
  res.e0 = es.eigenvalues()[0];
  res.e1 = es.eigenvalues()[1];
  res.degenerate = (es.eigenvalues()[1] - es.eigenvalues()[0]) < 1e-10;
  res.psi0.basis = ev.basis;
  res.psi0.energy = res.e0;
  res.psi0.amps = ev.t * es.eigenvectors().col(0);
  fix_sign_first_nonzero(res.psi0.amps);
  res.psi0.degenerate = res.degenerate;
  res.psi0_embedded = ev.d * res.psi0.amps;
  const double nrm = res.psi0_embedded.norm();
  if (nrm > 0.0) res.psi0_embedded /= nrm;
  if (!res.converged)
    throw ConvergenceError("optimize_casscf: no start converged", res.kappa, mr.f);
  return res;
}

inline CasscfResult optimize_casscf(const HubbardParams& params, CasObjective objective,
                                    const OptimizerOptions& opts) {
  const Sector sector = enumerate_sector(3, 4, 0);
  const CasContext ctx = make_cas_context(params, sector);
  return optimize_casscf(ctx, objective, opts);
}

}  // namespace ocoo
