#pragma once

#include <string>
#include <vector>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"
#include "secbeam/conic.hpp"

namespace secbeam {

enum class Method { kSee, kEe, kSumSecrecy, kZf };
std::string method_name(Method m);
Method parse_method(const std::string& name);

enum class TerminationReason {
  kConverged,
  kMaxIters,
  kStalled,          // ascent made progress, then a subproblem stopped improving
  kInitFailed,       // no feasible starting point found
  kInfeasible,       // constraint structure cannot be satisfied (baseline)
  kNumericalFailure,
};
const char* to_string(TerminationReason r);

// One accepted outer iteration.
struct IterateRecord {
  int iter = 0;
  double objective = 0.0;            // exact objective after the step
  double surrogate_objective = 0.0;  // optimum of the convex model
  double min_power_slack = 0.0;
  double min_qos_slack = 0.0;
  std::string solver_status;
  int solver_iters = 0;
  double solver_pres = 0.0;
  double solver_dres = 0.0;
  double solver_gap = 0.0;
  double wall_ms = 0.0;
};

struct RunOutcome {
  Method method = Method::kSee;
  TerminationReason reason = TerminationReason::kNumericalFailure;
  BeamformerSet V;
  double t = 0.0;                // consumed power at the final iterate
  double objective_nats = 0.0;   // method objective (ratios: nats/J)
  double see_nats = 0.0;         // achieved secrecy energy efficiency
  double see_bits() const;
  std::vector<IterateRecord> trace;
  int outer_iters = 0;
  double wall_ms = 0.0;
  std::string note;
};

struct RunOptions {
  int max_init_iters = 50;
  int init_retries = 5;
  double seed_power_fraction = 0.9;
  bool timing = true;  // false zeroes all wall-clock fields (reproducibility)
  SolverOptions solver;
};

struct InitResult {
  bool ok = false;
  BeamformerSet V;
  int iters = 0;
  int retries_used = 0;
  // Ratio form: min_j f_{j,s}/r_j at acceptance.  Margin form: the margin.
  double margin = 0.0;
  std::string message;
};

// Feasible-point search: matched-filter seeds refined by max-min feasibility
// subproblems until the exact constraints hold, with reseeding on stalls.
InitResult initialize_feasible(const ChannelSet& ch, const SystemConfig& cfg,
                               Method method, const RunOptions& opts = {});

// Exact slack of the method's QoS constraint set at V (>= 0: satisfied).
// Secrecy-rate floors for the ratio objectives; throughput floors plus the
// leakage cap for the EE formulation.
double exact_qos_slack(const ChannelSet& ch, const SystemConfig& cfg,
                       const BeamformerSet& V, Method method);

RunOutcome run_see(const ChannelSet& ch, const SystemConfig& cfg,
                   const RunOptions& opts = {});
RunOutcome run_ee(const ChannelSet& ch, const SystemConfig& cfg,
                  const RunOptions& opts = {});
RunOutcome run_sum_secrecy(const ChannelSet& ch, const SystemConfig& cfg,
                           const RunOptions& opts = {});

// Dispatch on method (including the nulling baseline).
RunOutcome run_method(const ChannelSet& ch, const SystemConfig& cfg,
                      Method method, const RunOptions& opts = {});

}  // namespace secbeam
