#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ocoo/sweep.hpp"

using namespace ocoo;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

SweepConfig small_config() {
  SweepConfig c;
  c.kind = TrimerKind::symmetric;
  c.u_over_t = 10.0;
  c.mu_start = 0.0;
  c.mu_stop = 4.0;
  c.mu_step = 1.0;
  return c;
}

}  // namespace

TEST_CASE("grid construction includes both endpoints") {
  SweepConfig c = small_config();
  const std::vector<double> g = c.grid();
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == Catch::Approx(4.0).margin(1e-12));
  c.mu_step = 0.25;
  CHECK(c.grid().size() == 17);
}

TEST_CASE("config validation rejects malformed grids") {
  SweepConfig c = small_config();
  c.mu_step = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.mu_stop = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.mu_step = 0.3;  // does not land on 4.0
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.methods.clear();
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.jobs = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("sweep records carry consistent diagnostics") {
  const SweepConfig c = small_config();
  const std::vector<SweepRecord> recs = run_sweep(c);
  REQUIRE(recs.size() == 5);
  for (const SweepRecord& r : recs) {
    CHECK(r.casscf_converged);
    CHECK(r.sa_converged);
    CHECK(r.ocoo_converged);
    CHECK(r.gap_fci >= 0.0);
    CHECK(r.gap_fci == Catch::Approx(r.e1_fci - r.e0_fci).margin(1e-12));
    CHECK(r.gap_ocoo == Catch::Approx(r.e1_ocoo - r.e0_casscf).margin(1e-12));
    CHECK(r.b0_weight >= 0.0);
    CHECK(r.b0_weight <= 1.0 + 1e-12);
    const double b0_sum = r.b0_c0 * r.b0_c0 + r.b0_c1 * r.b0_c1 +
                          r.b0_c2 * r.b0_c2 + r.b0_c3 * r.b0_c3;
    CHECK(b0_sum == Catch::Approx(r.b0_weight).margin(1e-12));
    CHECK(r.band_over_u ==
          Catch::Approx(std::sqrt(r.mu_over_t * r.mu_over_t + 8.0) / 10.0)
              .margin(1e-12));
    CHECK(r.proj_gs > 0.0);
    CHECK(r.ocoo_overlap <= 1e-4);
    CHECK(r.e0_casscf >= r.e0_fci - 1e-10);
  }
}

TEST_CASE("method subsets leave untouched fields unset") {
  SweepConfig c = small_config();
  c.mu_stop = 1.0;
  c.methods = {Method::fci};
  const std::vector<SweepRecord> recs = run_sweep(c);
  for (const SweepRecord& r : recs) {
    CHECK(std::isfinite(r.e0_fci));
    CHECK(std::isnan(r.e0_casscf));
    CHECK(std::isnan(r.gap_sa));
    CHECK_FALSE(r.casscf_converged);
  }
}

TEST_CASE("requesting ocoo implies the casscf ground run") {
  SweepConfig c = small_config();
  c.mu_stop = 0.0;
  c.methods = {Method::ocoo};
  const std::vector<SweepRecord> recs = run_sweep(c);
  CHECK(recs[0].casscf_converged);
  CHECK(recs[0].ocoo_converged);
  CHECK(std::isfinite(recs[0].gap_ocoo));
}

TEST_CASE("identical configs produce byte-identical CSV") {
  const SweepConfig c = small_config();
  std::ostringstream a, b;
  emit_csv(run_sweep(c), a);
  emit_csv(run_sweep(c), b);
  CHECK(a.str() == b.str());
  CHECK(!a.str().empty());
}

TEST_CASE("CSV schema and round trip") {
  const SweepConfig c = small_config();
  const std::vector<SweepRecord> recs = run_sweep(c);
  std::ostringstream os;
  emit_csv(recs, os);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  const std::vector<std::string> header = split(line, ',');
  CHECK(header.size() == sweep_columns().size());
  CHECK(header[0] == "mu_over_t");
  CHECK(header.back() == "ocoo_from_warm");
  std::size_t row = 0;
  while (std::getline(is, line)) {
    const std::vector<std::string> cells = split(line, ',');
    REQUIRE(cells.size() == header.size());
    const std::vector<double> vals = record_values(recs[row]);
    for (std::size_t c2 = 0; c2 < cells.size(); ++c2) {
      const double parsed = std::stod(cells[c2]);
      if (std::isnan(vals[c2]))
        CHECK(std::isnan(parsed));
      else
        CHECK(parsed == vals[c2]);  // 17 significant digits round-trip exactly
    }
    ++row;
  }
  CHECK(row == recs.size());
}

TEST_CASE("emitters reject empty inputs") {
  std::ostringstream os;
  CHECK_THROWS_AS(emit_csv({}, os), std::invalid_argument);
  CHECK_THROWS_AS(emit_json({}, os), std::invalid_argument);
}

TEST_CASE("JSON output mirrors the CSV fields") {
  SweepConfig c = small_config();
  c.mu_stop = 1.0;
  const std::vector<SweepRecord> recs = run_sweep(c);
  std::ostringstream os;
  emit_json(recs, os);
  const std::string s = os.str();
  for (const std::string& col : sweep_columns())
    CHECK(s.find("\"" + col + "\"") != std::string::npos);
}

TEST_CASE("block-parallel execution matches the per-block chaining contract") {
  SweepConfig c = small_config();
  c.jobs = 2;
  const std::vector<SweepRecord> par = run_sweep(c);
  REQUIRE(par.size() == 5);
  for (const SweepRecord& r : par) {
    CHECK(r.casscf_converged);
    CHECK(r.ocoo_converged);
  }
  // records arrive in grid order regardless of thread scheduling
  for (std::size_t i = 1; i < par.size(); ++i)
    CHECK(par[i].mu_over_t > par[i - 1].mu_over_t);
  // parallel runs are reproducible against themselves
  std::ostringstream a, b;
  emit_csv(par, a);
  emit_csv(run_sweep(c), b);
  CHECK(a.str() == b.str());
}
