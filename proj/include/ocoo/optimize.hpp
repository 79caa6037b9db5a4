#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace ocoo {

struct OptimizerOptions {
  int max_iters = 400;
  int restarts = 8;            // random restarts beyond the provided starts
  double restart_scale = 0.3;  // radians
  std::uint64_t seed = 20240915;
  double fd_step = 1e-5;       // central-difference step
  double f_tol = 1e-10;        // |delta f| convergence threshold
  double g_tol = 1e-7;         // gradient-norm convergence threshold
};

struct MinimizeResult {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // accepted objective values, per iteration
};

using Objective = std::function<double(const Eigen::Vector3d&)>;

inline Eigen::Vector3d fd_gradient(const Objective& f, const Eigen::Vector3d& x,
                                   double h) {
  Eigen::Vector3d g;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// BFGS with central finite-difference gradients and Armijo backtracking.
inline MinimizeResult minimize_bfgs(const Objective& f, const Eigen::Vector3d& x0,
                                    const OptimizerOptions& opts) {
  MinimizeResult res;
  Eigen::Vector3d x = x0;
  double fx = f(x);
  Eigen::Vector3d g = fd_gradient(f, x, opts.fd_step);
  Eigen::Matrix3d hinv = Eigen::Matrix3d::Identity();
  res.trace.push_back(fx);

  for (int it = 0; it < opts.max_iters; ++it) {
    res.iterations = it + 1;
    if (g.norm() < opts.g_tol) {
      res.converged = true;
      break;
    }
    Eigen::Vector3d p = -(hinv * g);
    if (p.dot(g) >= 0.0) {  // not a descent direction: reset curvature
      hinv.setIdentity();
      p = -g;
    }
    double alpha = 1.0;
    const double slope = g.dot(p);
    double fnew = fx;
    Eigen::Vector3d xnew = x;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      xnew = x + alpha * p;
      fnew = f(xnew);
      if (fnew <= fx + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.converged = g.norm() < 1e2 * opts.g_tol;  // stuck at line-search floor
      break;
    }
    Eigen::Vector3d gnew = fd_gradient(f, xnew, opts.fd_step);
    const Eigen::Vector3d s = xnew - x;
    const Eigen::Vector3d y = gnew - g;
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      const double rho = 1.0 / sy;
      const Eigen::Matrix3d i3 = Eigen::Matrix3d::Identity();
      hinv = (i3 - rho * s * y.transpose()) * hinv *
                 (i3 - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
    const double df = fx - fnew;
    x = xnew;
    fx = fnew;
    g = gnew;
    res.trace.push_back(fx);
    if (df >= 0.0 && df < opts.f_tol && g.norm() < 1e3 * opts.g_tol) {
      res.converged = true;
      break;
    }
  }
  res.x = x;
  res.f = fx;
  return res;
}

/// Derivative-free Nelder-Mead fallback for starts where BFGS stalls.
inline MinimizeResult minimize_simplex(const Objective& f, const Eigen::Vector3d& x0,
                                       const OptimizerOptions& opts,
                                       double init_step = 0.05) {
  constexpr int n = 3;
  std::vector<Eigen::Vector3d> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1][i] += init_step;
  for (int i = 0; i <= n; ++i) fv[i] = f(pts[i]);

  MinimizeResult res;
  auto order = [&] {
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (fv[j] < fv[i]) {
          std::swap(fv[i], fv[j]);
          std::swap(pts[i], pts[j]);
        }
  };
  for (int it = 0; it < 8 * opts.max_iters; ++it) {
    order();
    res.iterations = it + 1;
    if (std::abs(fv[n] - fv[0]) < opts.f_tol &&
        (pts[n] - pts[0]).norm() < 1e-9) {
      res.converged = true;
      break;
    }
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= n;
    const Eigen::Vector3d xr = centroid + (centroid - pts[n]);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const Eigen::Vector3d xe = centroid + 2.0 * (centroid - pts[n]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        fv[n] = fe;
      } else {
        pts[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      pts[n] = xr;
      fv[n] = fr;
    } else {
      const Eigen::Vector3d xc = centroid + 0.5 * (pts[n] - centroid);
      const double fc = f(xc);
      if (fc < fv[n]) {
        pts[n] = xc;
        fv[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  res.x = pts[0];
  res.f = fv[0];
  res.trace.push_back(fv[0]);
  return res;
}

/// Local minimization with the quasi-Newton method, polished by the simplex
/// fallback when the gradient-based run fails to converge.
inline MinimizeResult minimize_local(const Objective& f, const Eigen::Vector3d& x0,
                                     const OptimizerOptions& opts) {
  MinimizeResult res = minimize_bfgs(f, x0, opts);
  if (!res.converged) {
    MinimizeResult alt = minimize_simplex(f, res.x, opts);
    if (alt.f < res.f) {
      alt.trace.insert(alt.trace.begin(), res.trace.begin(), res.trace.end());
      return alt;
    }
  }
  return res;
}

/// Multi-start driver: the provided starts plus `opts.restarts` random
/// perturbations of the first start; best objective wins. Deterministic for a
/// fixed seed.
inline MinimizeResult minimize_multistart(const Objective& f,
                                          const std::vector<Eigen::Vector3d>& starts,
                                          const OptimizerOptions& opts,
                                          int* winning_start = nullptr) {
  if (starts.empty())
    throw std::invalid_argument("minimize_multistart: no starting points");
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> dist(0.0, opts.restart_scale);
  std::vector<Eigen::Vector3d> all = starts;
  for (int r = 0; r < opts.restarts; ++r) {
    Eigen::Vector3d x = starts[0];
    for (int i = 0; i < 3; ++i) x[i] += dist(rng);
    all.push_back(x);
  }
  MinimizeResult best;
  int best_idx = -1;
  for (std::size_t i = 0; i < all.size(); ++i) {
    MinimizeResult r = minimize_local(f, all[i], opts);
    if (best_idx < 0 || r.f < best.f - 1e-12) {
      best = std::move(r);
      best_idx = static_cast<int>(i);
    }
  }
  if (winning_start) *winning_start = best_idx;
  return best;
}

}  // namespace ocoo
