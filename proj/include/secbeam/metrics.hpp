#pragma once

#include <vector>

#include <Eigen/Dense>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"

namespace secbeam {

// All rates below are in nats/s/Hz; powers in watts.

// Covariance of the interference seen by user j plus receiver noise:
// sum_{l != j} H_{lj} V_l V_l^H H_{lj}^H + sigma_j^2 I.
Eigen::MatrixXcd interference_noise_user(const ChannelSet& ch,
                                         const BeamformerSet& V,
                                         const SystemConfig& cfg, int j);

// Multi-user interference covariance at the eavesdropper while it attacks
// stream j (its own-signal term excluded, no noise): sum_{l != j} of
// H_e,l V_l V_l^H H_e,l^H.
Eigen::MatrixXcd interference_eve(const ChannelSet& ch, const BeamformerSet& V,
                                  const SystemConfig& cfg, int j);

// Achievable throughput of user j: ln det(I + H_jj V_j V_j^H H_jj^H C^-1)
// with C the interference-plus-noise covariance.
double user_throughput(const ChannelSet& ch, const BeamformerSet& V,
                       const SystemConfig& cfg, int j);

// Wiretap throughput for user j's signal at the eavesdropper.
double eve_throughput(const ChannelSet& ch, const BeamformerSet& V,
                      const SystemConfig& cfg, int j);

// Same value computed as a difference of two noise-normalized log-dets; used
// to cross-check the whitened evaluation path.
double eve_throughput_split(const ChannelSet& ch, const BeamformerSet& V,
                            const SystemConfig& cfg, int j);

// zeta * sum_j ||V_j||_F^2 + P_c.
double total_consumed_power(const BeamformerSet& V, const SystemConfig& cfg);

struct MetricsReport {
  std::vector<double> f;    // user throughputs
  std::vector<double> f_e;  // wiretap throughputs
  std::vector<double> f_s;  // secrecy rates f - f_e (unclamped)
  double power = 0.0;       // total consumed power
  double sum_secrecy = 0.0; // sum of clamped secrecy rates, nats
  double see = 0.0;         // sum_secrecy / power, nats/J
  double see_bits() const;  // bits/J
  double sum_throughput = 0.0;  // sum of f, nats
  double ee = 0.0;              // sum_throughput / power, nats/J
};
MetricsReport evaluate_metrics(const ChannelSet& ch, const BeamformerSet& V,
                               const SystemConfig& cfg);

// Secrecy energy efficiency in nats/J (clamped per-user secrecy).
double see_objective(const ChannelSet& ch, const BeamformerSet& V,
                     const SystemConfig& cfg);

struct FeasibilityReport {
  std::vector<double> power_slack;  // P_max - ||V_j||^2
  std::vector<double> qos_slack;    // f_{j,s} - r_j
  bool power_ok = false;
  bool qos_ok = false;
  bool ok() const { return power_ok && qos_ok; }
};

// Checks the power budgets and the secrecy-rate floors with tolerance `tol`
// on each slack.
FeasibilityReport check_feasible(const ChannelSet& ch, const BeamformerSet& V,
                                 const SystemConfig& cfg, double tol = 1e-6);

}  // namespace secbeam
