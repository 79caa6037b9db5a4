#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocoo/cas.hpp"
#include "ocoo/fock.hpp"
#include "ocoo/model.hpp"
#include "ocoo/optimize.hpp"
#include "ocoo/rotation.hpp"

namespace ocoo {

struct OcooSettings {
  double shift = 1e8;           // units of t
  double lambda_penalty = 1e8;  // units of t
  double cf_tol = 1e-7;         // units of t
  OptimizerOptions optimizer;

  void validate() const {
    if (!(shift > 0.0) || !(lambda_penalty > 0.0) || !(cf_tol > 0.0))
      throw std::invalid_argument("OcooSettings: shift, lambda, cf_tol must be > 0");
  }
};

struct OcooResult {
  Kappa kappa1;
  CasWavefunction psi1;
  SectorVector psi1_embedded;
  double energy_e1 = 0.0;
  double overlap_with_psi0 = 0.0;
  std::vector<std::pair<int, double>> cf_trace;
  bool converged = false;
  bool degenerate = false;
  int winning_start = -1;
};

/// Lowest root of M_eff = M + shift * s s', with s_i = <d_i(basis)|psi0>.
/// The reported energy is the unshifted expectation <psi|M|psi>. Solved inside
/// the singlet block (psi0 is a singlet, so s has no triplet component).
inline CasWavefunction solve_shifted_eigenproblem(const CasContext& ctx,
                                                  const OrbitalBasis& basis,
                                                  const SectorVector& psi0,
                                                  double shift) {
  if (shift <= 0.0)
    throw std::invalid_argument("solve_shifted_eigenproblem: shift must be > 0");
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("solve_shifted_eigenproblem: psi0 not normalized");
  const Kappa kappa = basis.source_kappa;
  const CasEvaluation ev = evaluate_cas(ctx, kappa);
  const Eigen::Vector3d s = ev.t.transpose() * (ev.d.transpose() * psi0);
  Eigen::Matrix3d m_eff = ev.m_singlet + shift * (s * s.transpose());
  m_eff = 0.5 * (m_eff + m_eff.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m_eff);

  int root = 0;
  bool degenerate = false;
  if (es.eigenvalues()[1] - es.eigenvalues()[0] < 1e-10) {
    degenerate = true;
    // tie-break: prefer the root with the smaller overlap against psi0
    if (std::abs(s.dot(es.eigenvectors().col(1))) <
        std::abs(s.dot(es.eigenvectors().col(0))))
      root = 1;
  }
  const Eigen::Vector3d c = es.eigenvectors().col(root);
  CasWavefunction psi;
  psi.basis = ev.basis;
  psi.amps = ev.t * c;
  fix_sign_first_nonzero(psi.amps);
  psi.energy = c.dot(ev.m_singlet * c);
  psi.degenerate = degenerate;
  return psi;
}

struct OcooContext {
  const CasContext& cas;
  SectorVector psi0;  // frozen CASSCF ground state, embedded in the sector
  OcooSettings settings;
};

struct CostEvaluation {
  double cf = 0.0;
  double e1 = 0.0;
  double overlap = 0.0;
  CasWavefunction psi1;
};

/// CF(kappa) = E1(kappa) + lambda |<psi0|psi1(kappa)>|^2, with psi1 the lowest
/// root of the shifted eigenproblem at kappa.
inline CostEvaluation cost_function(const Kappa& kappa, const OcooContext& ctx) {
  CostEvaluation out;
  const OrbitalBasis basis = rotated(ctx.cas.reference, kappa);
  out.psi1 = solve_shifted_eigenproblem(ctx.cas, basis, ctx.psi0, ctx.settings.shift);
  const SectorVector psi1_embedded =
      cas_determinant_matrix(out.psi1.basis, ctx.cas.h.sector) * out.psi1.amps;
  out.e1 = out.psi1.energy;
  out.overlap = cross_overlap(ctx.psi0, psi1_embedded);
  out.cf = out.e1 + ctx.settings.lambda_penalty * out.overlap * out.overlap;
  return out;
}

/// Excited-state orbital optimization: minimize CF over kappa starting from
/// the CASSCF ground kappa0 (plus any warm starts and random restarts).
inline OcooResult run_ocoo(const CasContext& ctx, const SectorVector& psi0,
                           const Kappa& kappa0, const OcooSettings& settings,
                           const std::vector<Kappa>& extra_starts = {}) {
  settings.validate();
  OcooContext octx{ctx, psi0, settings};
  Objective f = [&](const Eigen::Vector3d& x) {
    return cost_function(Kappa(x), octx).cf;
  };
  std::vector<Eigen::Vector3d> starts{kappa0.params};
  for (const Kappa& k : extra_starts) starts.push_back(k.params);

  OptimizerOptions opts = settings.optimizer;
  opts.f_tol = std::min(opts.f_tol, settings.cf_tol);
  OcooResult res;
  MinimizeResult mr = minimize_multistart(f, starts, opts, &res.winning_start);

  res.kappa1 = Kappa(mr.x);
  res.converged = mr.converged;
  for (std::size_t i = 0; i < mr.trace.size(); ++i)
    res.cf_trace.emplace_back(static_cast<int>(i), mr.trace[i]);

  const CostEvaluation ev = cost_function(res.kappa1, octx);
  res.psi1 = ev.psi1;
  res.psi1_embedded =
      cas_determinant_matrix(ev.psi1.basis, ctx.h.sector) * ev.psi1.amps;
  res.energy_e1 = ev.e1;
  res.overlap_with_psi0 = ev.overlap;
  res.degenerate = ev.psi1.degenerate;
  if (!res.converged)
    throw ConvergenceError("run_ocoo: no start converged", res.kappa1, mr.f);
  return res;
}

inline OcooResult run_ocoo(const HubbardParams& params, const SectorVector& psi0,
                           const Kappa& kappa0, const OcooSettings& settings) {
  const Sector sector = enumerate_sector(3, 4, 0);
  const CasContext ctx = make_cas_context(params, sector);
  return run_ocoo(ctx, psi0, kappa0, settings);
}

}  // namespace ocoo
