#include "secbeam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "secbeam/channel.hpp"
#include "secbeam/errors.hpp"
#include "secbeam/rng.hpp"

namespace secbeam {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  SweepResult res;
  res.spec = spec;
  res.spec.pmax_db =
      spec.pmax_db.empty() ? spec.base.P_max_dB_list : spec.pmax_db;
  res.spec.seeds = spec.seeds.empty() ? spec.base.seeds : spec.seeds;
  if (res.spec.methods.empty())
    throw InvalidValue("methods", "sweep needs at least one method");
  res.config_hash = config_hash(spec.base);
  res.rng_algorithm = kRngAlgorithm;

  // Channels depend only on (dimensions, seed): one realization per seed,
  // shared by every method and power level.
  std::vector<ChannelSet> channels;
  channels.reserve(res.spec.seeds.size());
  for (std::uint64_t s : res.spec.seeds)
    channels.push_back(generate_channels(spec.base, s));

  struct Cell {
    Method method;
    double pmax_db;
    std::size_t seed_idx;
  };
  std::vector<Cell> cells;
  for (Method m : res.spec.methods)
    for (double p : res.spec.pmax_db)
      for (std::size_t si = 0; si < res.spec.seeds.size(); ++si)
        cells.push_back({m, p, si});

  res.rows.resize(cells.size());
  RunOptions ropts;
  ropts.timing = (spec.timing == TimingMode::kWall);

  auto run_cell = [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    const SystemConfig cfg = spec.base.with_pmax_db(cell.pmax_db);
    const ChannelSet& ch = channels[cell.seed_idx];
    const RunOutcome out = run_method(ch, cfg, cell.method, ropts);
    CellResult& row = res.rows[idx];
    row.method = cell.method;
    row.pmax_db = cell.pmax_db;
    row.seed = res.spec.seeds[cell.seed_idx];
    row.objective_bits_per_joule = out.see_bits();
    row.iterations = out.outer_iters;
    row.status = to_string(out.reason);
    row.wall_ms = out.wall_ms;
    row.channel_hash = ch.content_hash();
  };

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          run_cell(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::stable_sort(res.rows.begin(), res.rows.end(),
                   [](const CellResult& a, const CellResult& b) {
                     return std::make_tuple(method_name(a.method), a.pmax_db,
                                            a.seed) <
                            std::make_tuple(method_name(b.method), b.pmax_db,
                                            b.seed);
                   });
  return res;
}

namespace {

void write_header(const SweepResult& res, std::ostream& os) {
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(res.config_hash));
  os << "# config_hash=" << hash << "\n";
  os << "# rng=" << res.rng_algorithm << "\n";
  os << "# timing="
     << (res.spec.timing == TimingMode::kWall ? "wall" : "none") << "\n";
}

}  // namespace

void write_rows_csv(const SweepResult& res, std::ostream& os) {
  write_header(res, os);
  os << "method,P_max_dB,seed,objective_bits_per_joule,iterations,status,"
        "wall_ms\n";
  for (const CellResult& r : res.rows) {
    os << method_name(r.method) << ',' << fmt(r.pmax_db) << ',' << r.seed
       << ',' << fmt(r.objective_bits_per_joule) << ',' << r.iterations << ','
       << r.status << ',' << fmt(r.wall_ms) << "\n";
  }
}

void write_aggregate_csv(const SweepResult& res, std::ostream& os) {
  write_header(res, os);
  os << "method,P_max_dB,n,mean_objective_bits_per_joule,"
        "min_objective_bits_per_joule,max_objective_bits_per_joule,"
        "mean_iterations,n_converged\n";
  std::map<std::pair<std::string, double>, std::vector<const CellResult*>>
      groups;
  for (const CellResult& r : res.rows)
    groups[{method_name(r.method), r.pmax_db}].push_back(&r);
  for (const auto& [key, rows] : groups) {
    double sum = 0.0, mn = rows.front()->objective_bits_per_joule, mx = mn;
    double iters = 0.0;
    int converged = 0;
    for (const CellResult* r : rows) {
      sum += r->objective_bits_per_joule;
      mn = std::min(mn, r->objective_bits_per_joule);
      mx = std::max(mx, r->objective_bits_per_joule);
      iters += r->iterations;
      if (r->status == "Converged") ++converged;
    }
    const double n = static_cast<double>(rows.size());
    os << key.first << ',' << fmt(key.second) << ',' << rows.size() << ','
       << fmt(sum / n) << ',' << fmt(mn) << ',' << fmt(mx) << ','
       << fmt(iters / n) << ',' << converged << "\n";
  }
}

void emit_results(const SweepResult& res, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream os(out_dir + "/rows.csv");
    if (!os) throw Error("cannot write " + out_dir + "/rows.csv");
    write_rows_csv(res, os);
  }
  {
    std::ofstream os(out_dir + "/aggregate.csv");
    if (!os) throw Error("cannot write " + out_dir + "/aggregate.csv");
    write_aggregate_csv(res, os);
  }
}

double aggregate_mean(const SweepResult& res, Method m, double pmax_db) {
  double sum = 0.0;
  int n = 0;
  for (const CellResult& r : res.rows) {
    if (r.method == m && r.pmax_db == pmax_db) {
      sum += r.objective_bits_per_joule;
      ++n;
    }
  }
  if (n == 0) throw Error("aggregate_mean: empty cell group");
  return sum / n;
}

}  // namespace secbeam
