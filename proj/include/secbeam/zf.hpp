#pragma once

#include <vector>

#include <Eigen/Dense>

#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"
#include "secbeam/optimizer.hpp"

namespace secbeam {

// Dimension counting for the interference/leakage nulling baseline.
struct ZfFeasibility {
  bool eve_room = false;     // N >= N_e + d_1
  bool counting = false;     // D (N + N_r - N_e - 2 d_1) >= (D - 1) d_1
  bool feasible() const { return eve_room && counting; }
};
ZfFeasibility check_zf_feasibility(const SystemConfig& cfg);

// Per-instance nulling subspaces.  T[j] spans the directions transmitter j
// may use: orthogonal to its eavesdropper channel rows and to the dominant
// receive subspaces of every other user.
struct ZfDesign {
  bool ok = false;
  std::vector<Eigen::MatrixXcd> T;     // N x k_j null bases
  std::vector<Eigen::MatrixXcd> modes; // k_j x d_1 eigenmode directions
  std::vector<Eigen::VectorXd> gains;  // per-stream effective SNR gains
  std::vector<int> null_dims;          // achieved k_j
};
ZfDesign design_zf_subspaces(const ChannelSet& ch, const SystemConfig& cfg);

// Water-filling for max sum ln(1 + g_i p_i) - a sum p_i, sum p_i <= cap,
// p >= 0.  Returns the loads and the cap multiplier mu.
struct WaterFillResult {
  Eigen::VectorXd p;
  double mu = 0.0;
};
WaterFillResult water_fill(const Eigen::VectorXd& gains, double a, double cap);

// Nulling baseline: subspace design followed by Dinkelbach power allocation
// on the leakage-free effective channels.  The reported secrecy energy
// efficiency is always evaluated with the exact metrics (residual
// inter-user interference included).  Infeasible instances return
// TerminationReason::kInfeasible with zero beamformers.
RunOutcome run_zf(const ChannelSet& ch, const SystemConfig& cfg,
                  const RunOptions& opts = {});

}  // namespace secbeam
