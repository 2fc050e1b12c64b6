// Command-line front end: batch sweeps over (method, P_max, seed) grids,
// single-cell diagnostics, and per-iteration trace dumps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"
#include "secbeam/errors.hpp"
#include "secbeam/harness.hpp"
#include "secbeam/metrics.hpp"
#include "secbeam/optimizer.hpp"
#include "secbeam/rng.hpp"

namespace {

using namespace secbeam;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Method> parse_methods(const std::string& s) {
  std::vector<Method> out;
  for (const auto& name : split_csv(s)) out.push_back(parse_method(name));
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_csv(s)) out.push_back(std::stod(item));
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_csv(s)) out.push_back(std::stoull(item));
  return out;
}

int cmd_sweep(const std::string& config_path, const std::string& methods,
              const std::string& pmax, const std::string& seeds,
              const std::string& out_dir, int jobs, const std::string& timing) {
  SweepSpec spec;
  spec.base = load_config_file(config_path);
  spec.methods = parse_methods(methods);
  if (!pmax.empty()) spec.pmax_db = parse_doubles(pmax);
  if (!seeds.empty()) spec.seeds = parse_seeds(seeds);
  spec.jobs = jobs;
  if (timing == "none")
    spec.timing = TimingMode::kNone;
  else if (timing != "wall")
    throw InvalidValue("timing", "expected wall or none");

  const SweepResult res = run_sweep(spec);
  emit_results(res, out_dir);
  write_aggregate_csv(res, std::cout);
  std::cout << "# wrote " << out_dir << "/rows.csv and " << out_dir
            << "/aggregate.csv\n";
  return 0;
}

int cmd_check(const std::string& config_path, const std::string& method_name_s,
              std::uint64_t seed, double pmax_db, bool have_pmax) {
  SystemConfig cfg = load_config_file(config_path);
  if (have_pmax) cfg = cfg.with_pmax_db(pmax_db);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  std::cout << "config ok: D=" << cfg.D << " N=" << cfg.N << " N_r=" << cfg.N_r
            << " N_e=" << cfg.N_e << " d_1=" << cfg.d_1
            << " P_max=" << cfg.P_max << "W P_c=" << cfg.P_c
            << "W hash=" << hash << "\n";
  std::cout << "rng: " << kRngAlgorithm << "\n";

  const Method method = parse_method(method_name_s);
  const ChannelSet ch = generate_channels(cfg, seed);
  std::printf("channel seed=%llu hash=%016llx\n",
              static_cast<unsigned long long>(seed),
              static_cast<unsigned long long>(ch.content_hash()));

  const RunOutcome out = run_method(ch, cfg, method, {});
  std::cout << "method=" << method_name(method)
            << " status=" << to_string(out.reason)
            << " outer_iters=" << out.outer_iters << "\n";
  const MetricsReport rep = evaluate_metrics(ch, out.V, cfg);
  for (int j = 0; j < cfg.D; ++j) {
    std::printf(
        "user %d: f=%.6f f_e=%.6f f_s=%.6f nats (floor %.6f), ||V||^2=%.6f\n",
        j, rep.f[j], rep.f_e[j], rep.f_s[j], cfg.r_nats[j], out.V.power(j));
  }
  std::printf("power=%.6f W  SEE=%.6f bits/J  (objective %.6f)\n", rep.power,
              rep.see_bits(), out.objective_nats);
  double power_slack = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cfg.D; ++j)
    power_slack = std::min(power_slack, cfg.P_max - out.V.power(j));
  const double qos = exact_qos_slack(ch, cfg, out.V, method);
  const bool feasible = std::min(power_slack, qos) >= -1e-6;
  std::cout << "feasible: " << (feasible ? "yes" : "NO") << "\n";
  if (!out.note.empty()) std::cout << "note: " << out.note << "\n";
  return feasible || out.reason == TerminationReason::kInfeasible ? 0 : 1;
}

int cmd_trace(const std::string& config_path, const std::string& method_name_s,
              std::uint64_t seed, double pmax_db, bool have_pmax,
              const std::string& out_path) {
  SystemConfig cfg = load_config_file(config_path);
  if (have_pmax) cfg = cfg.with_pmax_db(pmax_db);
  const Method method = parse_method(method_name_s);
  const ChannelSet ch = generate_channels(cfg, seed);
  const RunOutcome out = run_method(ch, cfg, method, {});

  nlohmann::json j;
  j["method"] = method_name(method);
  j["seed"] = seed;
  j["P_max_dB"] = 10.0 * std::log10(cfg.P_max);
  j["status"] = to_string(out.reason);
  j["objective"] = out.objective_nats;
  j["see_bits_per_joule"] = out.see_bits();
  j["outer_iters"] = out.outer_iters;
  j["note"] = out.note;
  j["rng"] = kRngAlgorithm;
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : out.trace) {
    recs.push_back({{"iter", r.iter},
                    {"objective", r.objective},
                    {"surrogate_objective", r.surrogate_objective},
                    {"min_power_slack", r.min_power_slack},
                    {"min_qos_slack", r.min_qos_slack},
                    {"solver_status", r.solver_status},
                    {"solver_iters", r.solver_iters},
                    {"solver_pres", r.solver_pres},
                    {"solver_dres", r.solver_dres},
                    {"solver_gap", r.solver_gap},
                    {"wall_ms", r.wall_ms}});
  }
  j["trace"] = recs;
  std::ofstream os(out_path);
  if (!os) throw Error("cannot write " + out_path);
  os << j.dump(2) << "\n";
  std::cout << "wrote " << out_path << " (" << out.trace.size()
            << " iterations)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secrecy-energy-efficient beamforming simulator"};
  app.require_subcommand(1);

  std::string config_path, methods = "see,ee,sum_secrecy,zf";
  std::string pmax_list, seed_list, out_dir = "results", timing = "wall";
  int jobs = 1;

  auto* sweep = app.add_subcommand("sweep", "run a (method, P_max, seed) grid");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--methods", methods, "comma-separated method list");
  sweep->add_option("--pmax-db", pmax_list, "override P_max grid, dB");
  sweep->add_option("--seeds", seed_list, "override seed list");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_option("--timing", timing,
                    "wall | none (none gives byte-identical reruns)");

  std::string method_one = "see";
  std::uint64_t seed_one = 0;
  double pmax_one = 0.0;
  std::string trace_out = "trace.json";

  auto* check = app.add_subcommand("check", "validate config, run one cell");
  check->add_option("--config", config_path, "JSON config file")->required();
  check->add_option("--method", method_one, "method to run");
  check->add_option("--seed", seed_one, "channel seed");
  auto* check_pmax = check->add_option("--pmax-db", pmax_one, "P_max in dB");

  auto* trace = app.add_subcommand("trace", "dump a per-iteration JSON trace");
  trace->add_option("--config", config_path, "JSON config file")->required();
  trace->add_option("--method", method_one, "method to run");
  trace->add_option("--seed", seed_one, "channel seed");
  auto* trace_pmax = trace->add_option("--pmax-db", pmax_one, "P_max in dB");
  trace->add_option("--out", trace_out, "trace file path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed())
      return cmd_sweep(config_path, methods, pmax_list, seed_list, out_dir,
                       jobs, timing);
    if (check->parsed())
      return cmd_check(config_path, method_one, seed_one, pmax_one,
                       static_cast<bool>(*check_pmax));
    if (trace->parsed())
      return cmd_trace(config_path, method_one, seed_one, pmax_one,
                       static_cast<bool>(*trace_pmax), trace_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
