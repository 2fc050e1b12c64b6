#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "secbeam/config.hpp"
#include "secbeam/optimizer.hpp"

namespace secbeam {

// kNone zeroes every wall-clock field so that two runs of the same sweep
// produce byte-identical files.
enum class TimingMode { kWall, kNone };

struct SweepSpec {
  SystemConfig base;
  std::vector<double> pmax_db;        // grid (defaults to the config list)
  std::vector<std::uint64_t> seeds;   // defaults to the config seeds
  std::vector<Method> methods;
  int jobs = 1;
  TimingMode timing = TimingMode::kWall;
};

struct CellResult {
  Method method = Method::kSee;
  double pmax_db = 0.0;
  std::uint64_t seed = 0;
  double objective_bits_per_joule = 0.0;  // achieved SEE for every method
  int iterations = 0;
  std::string status;
  double wall_ms = 0.0;
  // Same seed => same hash across methods and power levels (pairing check).
  std::uint64_t channel_hash = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<CellResult> rows;  // sorted by (method, P_max_dB, seed)
  std::uint64_t config_hash = 0;
  std::string rng_algorithm;
};

// Runs every (method, P_max, seed) cell on paired channel draws: the same
// seed sees the same realization for every method and power level.  Cells
// are independent; `jobs` > 1 distributes them over worker threads without
// changing any result.
SweepResult run_sweep(const SweepSpec& spec);

void write_rows_csv(const SweepResult& res, std::ostream& os);
void write_aggregate_csv(const SweepResult& res, std::ostream& os);

// Writes rows.csv and aggregate.csv under out_dir (created if needed).
void emit_results(const SweepResult& res, const std::string& out_dir);

// Mean achieved objective for one (method, P_max) grid point.
double aggregate_mean(const SweepResult& res, Method m, double pmax_db);

}  // namespace secbeam
