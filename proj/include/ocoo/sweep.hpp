#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ocoo/cas.hpp"
#include "ocoo/fci.hpp"
#include "ocoo/model.hpp"
#include "ocoo/ocoo.hpp"
#include "ocoo/rotation.hpp"

namespace ocoo {

enum class Method { fci, casscf, sa_casscf, ocoo };

struct SweepConfig {
  TrimerKind kind = TrimerKind::symmetric;
  double u_over_t = 10.0;
  double mu_start = 0.0;
  double mu_stop = 12.0;
  double mu_step = 0.25;
  std::set<Method> methods = {Method::fci, Method::casscf, Method::sa_casscf,
                              Method::ocoo};
  OcooSettings settings;
  std::uint64_t seed = 20240915;
  int jobs = 1;

  void validate() const {
    if (!(mu_step > 0.0)) throw std::invalid_argument("SweepConfig: step must be > 0");
    if (mu_start > mu_stop)
      throw std::invalid_argument("SweepConfig: start must be <= stop");
    if (methods.empty()) throw std::invalid_argument("SweepConfig: empty method set");
    if (jobs < 1) throw std::invalid_argument("SweepConfig: jobs must be >= 1");
    const double n = (mu_stop - mu_start) / mu_step;
    if (std::abs(n - std::round(n)) > 1e-9)
      throw std::invalid_argument("SweepConfig: grid must land on stop exactly");
    settings.validate();
  }

  std::vector<double> grid() const {
    validate();
    const int n = static_cast<int>(std::round((mu_stop - mu_start) / mu_step));
    std::vector<double> g;
    for (int i = 0; i <= n; ++i) g.push_back(mu_start + i * mu_step);
    return g;
  }
};

struct SweepRecord {
  double mu_over_t = 0.0;
  double e0_fci = nan(), e1_fci = nan();
  double e0_casscf = nan();
  double e1_ocoo = nan();
  double e0_sa = nan(), e1_sa = nan();
  double gap_fci = nan(), gap_ocoo = nan(), gap_sa = nan();
  double band_over_u = nan();
  double proj_gs = nan();
  double ocoo_overlap = nan();
  double b0_c0 = nan(), b0_c1 = nan(), b0_c2 = nan(), b0_c3 = nan();
  double b0_weight = nan();
  bool casscf_converged = false, sa_converged = false, ocoo_converged = false;
  bool casscf_from_warm = false, sa_from_warm = false, ocoo_from_warm = false;

  static double nan() { return std::numeric_limits<double>::quiet_NaN(); }
};

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "mu_over_t",   "e0_fci",       "e1_fci",       "e0_casscf",
      "e1_ocoo",     "e0_sa",        "e1_sa",        "gap_fci",
      "gap_ocoo",    "gap_sa",       "band_over_u",  "proj_gs",
      "ocoo_overlap", "b0_c0",       "b0_c1",        "b0_c2",
      "b0_c3",       "b0_weight",    "casscf_converged", "sa_converged",
      "ocoo_converged", "casscf_from_warm", "sa_from_warm", "ocoo_from_warm"};
  return cols;
}

inline std::vector<double> record_values(const SweepRecord& r) {
  return {r.mu_over_t,
          r.e0_fci,
          r.e1_fci,
          r.e0_casscf,
          r.e1_ocoo,
          r.e0_sa,
          r.e1_sa,
          r.gap_fci,
          r.gap_ocoo,
          r.gap_sa,
          r.band_over_u,
          r.proj_gs,
          r.ocoo_overlap,
          r.b0_c0,
          r.b0_c1,
          r.b0_c2,
          r.b0_c3,
          r.b0_weight,
          static_cast<double>(r.casscf_converged),
          static_cast<double>(r.sa_converged),
          static_cast<double>(r.ocoo_converged),
          static_cast<double>(r.casscf_from_warm),
          static_cast<double>(r.sa_from_warm),
          static_cast<double>(r.ocoo_from_warm)};
}

namespace detail {

/// One contiguous block of grid points, chained by warm starts from left to
/// right. Warm starts never cross block boundaries, so a block's records
/// depend only on its own points.
inline void sweep_block(const SweepConfig& config, const std::vector<double>& mus,
                        std::size_t first_index, std::vector<SweepRecord>& out) {
  const Sector sector = enumerate_sector(3, 4, 0);
  bool have_warm_g = false, have_warm_sa = false, have_warm_o = false;
  Kappa warm_g, warm_sa, warm_o;

  for (std::size_t i = 0; i < mus.size(); ++i) {
    const double mu = mus[i];
    SweepRecord rec;
    rec.mu_over_t = mu;
    const HubbardParams params =
        config.kind == TrimerKind::symmetric
            ? HubbardParams::make_symmetric(config.u_over_t, mu)
            : HubbardParams::make_antisymmetric(config.u_over_t, mu);
    rec.band_over_u = config.u_over_t > 0.0
                          ? spectral_band(params, config.kind) / config.u_over_t
                          : std::numeric_limits<double>::infinity();

    const CasContext ctx = make_cas_context(params, sector);
    OptimizerOptions opts = config.settings.optimizer;
    opts.seed = config.seed + 1000003ull * (first_index + i);

    FciResult fci;
    const bool want_fci = config.methods.count(Method::fci) > 0;
    const bool want_cas = config.methods.count(Method::casscf) > 0 ||
                          config.methods.count(Method::ocoo) > 0;
    const bool want_sa = config.methods.count(Method::sa_casscf) > 0;
    const bool want_ocoo = config.methods.count(Method::ocoo) > 0;
    if (want_fci || want_cas || want_ocoo) {
      fci = solve_fci(params, sector);
      if (want_fci && fci.singlet_indices.size() >= 2) {
        rec.e0_fci = fci.energies[fci.singlet_indices[0]];
        rec.e1_fci = fci.energies[fci.singlet_indices[1]];
        rec.gap_fci = rec.e1_fci - rec.e0_fci;
      }
    }

    CasscfResult gs;
    bool have_gs = false;
    if (want_cas) {
      std::vector<Kappa> starts;
      if (have_warm_g) starts.push_back(warm_g);
      try {
        gs = optimize_casscf(ctx, CasObjective::ground, opts, starts);
        have_gs = true;
      } catch (const ConvergenceError&) {
      }
      if (have_gs) {
        rec.casscf_converged = gs.converged;
        rec.casscf_from_warm = have_warm_g && gs.winning_start == 1;
        rec.e0_casscf = gs.e0;
        rec.proj_gs = project(gs.psi0_embedded, fci.states.col(0));
        warm_g = gs.kappa;
        have_warm_g = true;
      }
    }

    if (want_sa) {
      std::vector<Kappa> starts;
      if (have_warm_sa) starts.push_back(warm_sa);
      try {
        CasscfResult sa = optimize_casscf(ctx, CasObjective::state_average, opts, starts);
        rec.sa_converged = sa.converged;
        rec.sa_from_warm = have_warm_sa && sa.winning_start == 1;
        rec.e0_sa = sa.e0;
        rec.e1_sa = sa.e1;
        rec.gap_sa = sa.e1 - sa.e0;
        warm_sa = sa.kappa;
        have_warm_sa = true;
      } catch (const ConvergenceError&) {
      }
    }

    if (want_ocoo && have_gs) {
      std::vector<Kappa> starts;
      if (have_warm_o) starts.push_back(warm_o);
      try {
        OcooResult oc =
            run_ocoo(ctx, gs.psi0_embedded, gs.kappa, config.settings, starts);
        rec.ocoo_converged = oc.converged;
        rec.ocoo_from_warm = have_warm_o && oc.winning_start == 1;
        rec.e1_ocoo = oc.energy_e1;
        rec.gap_ocoo = oc.energy_e1 - gs.e0;
        rec.ocoo_overlap = std::abs(oc.overlap_with_psi0);
        const CasProjection proj =
            cas_projection(oc.psi1_embedded, gs.psi0.basis, sector);
        rec.b0_c0 = proj.coeffs[0];
        rec.b0_c1 = proj.coeffs[1];
        rec.b0_c2 = proj.coeffs[2];
        rec.b0_c3 = proj.coeffs[3];
        rec.b0_weight = proj.weight;
        warm_o = oc.kappa1;
        have_warm_o = true;
      } catch (const ConvergenceError&) {
      }
    }

    out[first_index + i] = rec;
  }
}

}  // namespace detail

inline std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  const std::vector<double> grid = config.grid();
  std::vector<SweepRecord> records(grid.size());
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(grid.size())));
  if (jobs == 1) {
    detail::sweep_block(config, grid, 0, records);
    return records;
  }
  // contiguous blocks so that warm-start chains stay within one thread
  std::vector<std::thread> threads;
  const std::size_t per = (grid.size() + jobs - 1) / jobs;
  for (int j = 0; j < jobs; ++j) {
    const std::size_t lo = j * per;
    if (lo >= grid.size()) break;
    const std::size_t hi = std::min(grid.size(), lo + per);
    std::vector<double> block(grid.begin() + lo, grid.begin() + hi);
    threads.emplace_back([&, lo, block] {
      detail::sweep_block(config, block, lo, records);
    });
  }
  for (auto& t : threads) t.join();
  return records;
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void emit_csv(const std::vector<SweepRecord>& records, std::ostream& os) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  const auto& cols = sweep_columns();
  for (std::size_t c = 0; c < cols.size(); ++c)
    os << (c ? "," : "") << cols[c];
  os << "\n";
  for (const SweepRecord& r : records) {
    const std::vector<double> vals = record_values(r);
    for (std::size_t c = 0; c < vals.size(); ++c) {
      if (c) os << ",";
      if (c >= 18)  // boolean flags
        os << static_cast<int>(vals[c]);
      else
        os << format_g17(vals[c]);
    }
    os << "\n";
  }
}

inline void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit_csv: cannot open " + path);
  emit_csv(records, os);
  if (!os) throw std::runtime_error("emit_csv: write failed for " + path);
}

inline void emit_json(const std::vector<SweepRecord>& records, std::ostream& os) {
  if (records.empty()) throw std::invalid_argument("emit_json: no records");
  const auto& cols = sweep_columns();
  os << "[\n";
  for (std::size_t r = 0; r < records.size(); ++r) {
    const std::vector<double> vals = record_values(records[r]);
    os << "  {";
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) os << ", ";
      os << "\"" << cols[c] << "\": ";
      if (c >= 18)
        os << (vals[c] != 0.0 ? "true" : "false");
      else if (std::isfinite(vals[c]))
        os << format_g17(vals[c]);
      else
        os << "null";
    }
    os << "}" << (r + 1 < records.size() ? "," : "") << "\n";
  }
  os << "]\n";
}

inline void emit_json(const std::vector<SweepRecord>& records, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit_json: cannot open " + path);
  emit_json(records, os);
  if (!os) throw std::runtime_error("emit_json: write failed for " + path);
}

}  // namespace ocoo
