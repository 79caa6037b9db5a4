#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ocoo/cas.hpp"
#include "ocoo/fci.hpp"
#include "ocoo/model.hpp"
#include "ocoo/ocoo.hpp"
#include "ocoo/rotation.hpp"
#include "ocoo/sweep.hpp"
#include "ocoo/version.hpp"

namespace {

using nlohmann::json;

ocoo::TrimerKind parse_kind(const std::string& s) {
  if (s == "symmetric") return ocoo::TrimerKind::symmetric;
  if (s == "antisymmetric") return ocoo::TrimerKind::antisymmetric;
  throw CLI::ValidationError("--kind", "must be 'symmetric' or 'antisymmetric'");
}

std::set<ocoo::Method> parse_methods(const std::vector<std::string>& names) {
  std::set<ocoo::Method> out;
  for (const auto& n : names) {
    if (n == "fci")
      out.insert(ocoo::Method::fci);
    else if (n == "casscf")
      out.insert(ocoo::Method::casscf);
    else if (n == "sa_casscf")
      out.insert(ocoo::Method::sa_casscf);
    else if (n == "ocoo")
      out.insert(ocoo::Method::ocoo);
    else
      throw CLI::ValidationError("--methods", "unknown method '" + n + "'");
  }
  return out;
}

json settings_to_json(const ocoo::OcooSettings& s) {
  return json{{"shift", s.shift},
              {"lambda_penalty", s.lambda_penalty},
              {"cf_tol", s.cf_tol},
              {"optimizer",
               {{"max_iters", s.optimizer.max_iters},
                {"restarts", s.optimizer.restarts},
                {"restart_scale", s.optimizer.restart_scale},
                {"seed", s.optimizer.seed},
                {"fd_step", s.optimizer.fd_step},
                {"f_tol", s.optimizer.f_tol},
                {"g_tol", s.optimizer.g_tol}}}};
}

void settings_from_json(const json& j, ocoo::OcooSettings& s) {
  s.shift = j.value("shift", s.shift);
  s.lambda_penalty = j.value("lambda_penalty", s.lambda_penalty);
  s.cf_tol = j.value("cf_tol", s.cf_tol);
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    s.optimizer.max_iters = o.value("max_iters", s.optimizer.max_iters);
    s.optimizer.restarts = o.value("restarts", s.optimizer.restarts);
    s.optimizer.restart_scale = o.value("restart_scale", s.optimizer.restart_scale);
    s.optimizer.seed = o.value("seed", s.optimizer.seed);
    s.optimizer.fd_step = o.value("fd_step", s.optimizer.fd_step);
    s.optimizer.f_tol = o.value("f_tol", s.optimizer.f_tol);
    s.optimizer.g_tol = o.value("g_tol", s.optimizer.g_tol);
  }
}

std::string kind_name(ocoo::TrimerKind k) {
  return k == ocoo::TrimerKind::symmetric ? "symmetric" : "antisymmetric";
}

std::vector<std::string> method_names(const std::set<ocoo::Method>& ms) {
  std::vector<std::string> out;
  for (ocoo::Method m : ms) {
    switch (m) {
      case ocoo::Method::fci: out.push_back("fci"); break;
      case ocoo::Method::casscf: out.push_back("casscf"); break;
      case ocoo::Method::sa_casscf: out.push_back("sa_casscf"); break;
      case ocoo::Method::ocoo: out.push_back("ocoo"); break;
    }
  }
  return out;
}

json config_to_json(const ocoo::SweepConfig& c) {
  return json{{"kind", kind_name(c.kind)},
              {"u_over_t", c.u_over_t},
              {"mu_start", c.mu_start},
              {"mu_stop", c.mu_stop},
              {"mu_step", c.mu_step},
              {"methods", method_names(c.methods)},
              {"seed", c.seed},
              {"jobs", c.jobs},
              {"settings", settings_to_json(c.settings)}};
}

struct OutputPaths {
  std::string csv;
  std::string json_path;
  std::string manifest;
};

void load_sweep_config(const std::string& path, ocoo::SweepConfig& c, OutputPaths& out) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  try {
    if (j.contains("kind")) c.kind = parse_kind(j.at("kind").get<std::string>());
    c.u_over_t = j.value("u_over_t", c.u_over_t);
    c.mu_start = j.value("mu_start", c.mu_start);
    c.mu_stop = j.value("mu_stop", c.mu_stop);
    c.mu_step = j.value("mu_step", c.mu_step);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("methods"))
      c.methods = parse_methods(j.at("methods").get<std::vector<std::string>>());
    if (j.contains("settings")) settings_from_json(j.at("settings"), c.settings);
    if (j.contains("output")) {
      const json& o = j.at("output");
      out.csv = o.value("csv", out.csv);
      out.json_path = o.value("json", out.json_path);
      out.manifest = o.value("manifest", out.manifest);
    }
  } catch (const json::exception& e) {
    throw std::runtime_error("config field error in " + path + ": " + e.what());
  }
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

void write_manifest(const std::string& path, const ocoo::SweepConfig& config,
                    const std::vector<ocoo::SweepRecord>& records) {
  int n_cas = 0, n_sa = 0, n_ocoo = 0, n_warm = 0;
  for (const auto& r : records) {
    n_cas += r.casscf_converged;
    n_sa += r.sa_converged;
    n_ocoo += r.ocoo_converged;
    n_warm += r.casscf_from_warm || r.sa_from_warm || r.ocoo_from_warm;
  }
  json m{{"tool_version", ocoo::kVersion},
         {"timestamp", timestamp_utc()},
         {"seed", config.seed},
         {"config", config_to_json(config)},
         {"convergence",
          {{"points", records.size()},
           {"casscf_converged", n_cas},
           {"sa_casscf_converged", n_sa},
           {"ocoo_converged", n_ocoo},
           {"points_using_warm_start", n_warm}}}};
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write manifest: " + path);
  os << m.dump(2) << "\n";
}

int exit_code_for(const std::vector<ocoo::SweepRecord>& records,
                  const std::set<ocoo::Method>& methods) {
  for (const auto& r : records) {
    if (methods.count(ocoo::Method::casscf) && !r.casscf_converged) return 2;
    if (methods.count(ocoo::Method::sa_casscf) && !r.sa_converged) return 2;
    if (methods.count(ocoo::Method::ocoo) && !r.ocoo_converged) return 2;
  }
  return 0;
}

int run_point(ocoo::TrimerKind kind, double u, double mu, double t,
              const std::set<ocoo::Method>& methods, const ocoo::OcooSettings& settings,
              const std::string& json_out) {
  ocoo::SweepConfig config;
  config.kind = kind;
  config.u_over_t = u;
  config.mu_start = config.mu_stop = mu;
  config.mu_step = 1.0;
  config.methods = methods;
  config.settings = settings;
  config.seed = settings.optimizer.seed;
  (void)t;  // energies are reported in units of t

  const std::vector<ocoo::SweepRecord> records = ocoo::run_sweep(config);
  const ocoo::SweepRecord& r = records.front();

  std::printf("%-14s %s trimer, U/t = %g, mu/t = %g\n", "point:",
              kind_name(kind).c_str(), u, mu);
  std::printf("%-14s %12s\n", "quantity", "value (t)");
  auto row = [](const char* name, double v) {
    if (std::isfinite(v)) std::printf("%-14s %12.8f\n", name, v);
  };
  row("E0_FCI", r.e0_fci);
  row("E1_FCI", r.e1_fci);
  row("E0_CASSCF", r.e0_casscf);
  row("E1_OCOO", r.e1_ocoo);
  row("E0_SA", r.e0_sa);
  row("E1_SA", r.e1_sa);
  row("gap_FCI", r.gap_fci);
  row("gap_OCOO", r.gap_ocoo);
  row("gap_SA", r.gap_sa);
  row("band/U", r.band_over_u);
  row("proj_gs", r.proj_gs);
  row("ocoo_overlap", r.ocoo_overlap);
  row("b0_weight", r.b0_weight);
  std::printf("%-14s casscf=%d sa=%d ocoo=%d\n", "converged",
              int(r.casscf_converged), int(r.sa_converged), int(r.ocoo_converged));

  if (!json_out.empty()) ocoo::emit_json(records, json_out);
  return exit_code_for(records, methods);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbital-optimized excited states of Hubbard trimers"};
  app.require_subcommand(1);

  std::string kind_str;
  double u = 10.0, mu = 0.0, t = 1.0;
  std::vector<std::string> methods_str = {"fci", "casscf", "sa_casscf", "ocoo"};
  ocoo::OcooSettings settings;
  std::string json_out;

  CLI::App* point = app.add_subcommand("point", "run all methods at one parameter point");
  point->add_option("--kind", kind_str, "trimer kind: symmetric|antisymmetric")
      ->required();
  point->add_option("--u", u, "on-site repulsion U/t")->required();
  point->add_option("--mu", mu, "potential mu/t")->required();
  point->add_option("--t", t, "hopping t (energies are always in units of t)");
  point->add_option("--methods", methods_str, "subset of fci,casscf,sa_casscf,ocoo");
  point->add_option("--shift", settings.shift, "shift of the effective Hamiltonian (t)");
  point->add_option("--lambda", settings.lambda_penalty, "overlap penalty strength (t)");
  point->add_option("--cf-tol", settings.cf_tol, "cost-function convergence (t)");
  point->add_option("--restarts", settings.optimizer.restarts, "random restarts");
  point->add_option("--seed", settings.optimizer.seed, "optimizer seed");
  point->add_option("--fd-step", settings.optimizer.fd_step, "finite-difference step");
  point->add_option("--json", json_out, "also write the record as JSON to this path");

  std::string config_path, csv_out = "sweep.csv", manifest_out, sweep_json_out;
  std::string sweep_kind;
  double sweep_u = -1.0, mu_start = 0.0, mu_stop = 0.0, mu_step = 0.0;
  std::uint64_t sweep_seed = 0;
  int jobs = 0;

  CLI::App* sweep = app.add_subcommand("sweep", "run a mu grid sweep from a config file");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--csv", csv_out, "CSV output path (overrides config)");
  sweep->add_option("--json", sweep_json_out, "JSON output path");
  sweep->add_option("--manifest", manifest_out, "manifest path (default: <csv>.manifest.json)");
  sweep->add_option("--kind", sweep_kind, "override trimer kind");
  sweep->add_option("--u", sweep_u, "override U/t");
  sweep->add_option("--start", mu_start, "override grid start");
  sweep->add_option("--stop", mu_stop, "override grid stop");
  sweep->add_option("--step", mu_step, "override grid step");
  sweep->add_option("--seed", sweep_seed, "override seed");
  sweep->add_option("--jobs", jobs, "parallel blocks (warm starts chain inside a block)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (point->parsed()) {
      return run_point(parse_kind(kind_str), u, mu, t, parse_methods(methods_str),
                       settings, json_out);
    }
    // sweep
    ocoo::SweepConfig config;
    OutputPaths out;
    out.csv = csv_out;
    load_sweep_config(config_path, config, out);
    if (sweep->count("--csv")) out.csv = csv_out;
    if (sweep->count("--json")) out.json_path = sweep_json_out;
    if (sweep->count("--manifest")) out.manifest = manifest_out;
    if (sweep->count("--kind")) config.kind = parse_kind(sweep_kind);
    if (sweep->count("--u")) config.u_over_t = sweep_u;
    if (sweep->count("--start")) config.mu_start = mu_start;
    if (sweep->count("--stop")) config.mu_stop = mu_stop;
    if (sweep->count("--step")) config.mu_step = mu_step;
    if (sweep->count("--seed")) config.seed = sweep_seed;
    if (sweep->count("--jobs")) config.jobs = jobs;
    config.validate();
    if (out.manifest.empty()) out.manifest = out.csv + ".manifest.json";

    {  // fail on unwritable outputs before computing anything
      std::ofstream probe(out.csv, std::ios::app);
      if (!probe) throw std::runtime_error("cannot open output path: " + out.csv);
    }
    const std::vector<ocoo::SweepRecord> records = ocoo::run_sweep(config);
    ocoo::emit_csv(records, out.csv);
    if (!out.json_path.empty()) ocoo::emit_json(records, out.json_path);
    write_manifest(out.manifest, config, records);
    std::printf("wrote %zu records to %s\n", records.size(), out.csv.c_str());
    return exit_code_for(records, config.methods);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
