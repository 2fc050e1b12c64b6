#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace secbeam {

// System description with all quantities already converted to the units used
// internally: rates in nats/s/Hz, powers in watts.  Rates entered in
// bits/s/Hz are multiplied by ln 2, dB powers are mapped through 10^(dB/10).
struct SystemConfig {
  int D = 0;    // number of transmitter/user pairs
  int N = 0;    // transmit antennas per transmitter
  int N_r = 0;  // receive antennas per user
  int N_e = 0;  // eavesdropper antennas
  int d_1 = 0;  // data streams per user

  std::vector<double> sigma_u;  // per-user noise standard deviation
  double sigma_e = 1.0;         // eavesdropper noise standard deviation
  std::vector<double> r_nats;   // per-user throughput floor, nats/s/Hz
  double zeta = 1.0;            // power amplifier inefficiency factor
  double P_c = 0.0;             // static circuit power, watts
  double P_max = 0.0;           // transmit power budget per transmitter, watts

  // Wiretap-rate ceiling used by the leakage-capped energy-efficiency
  // variant; +infinity disables the cap.
  double eps_secrecy_nats = std::numeric_limits<double>::infinity();

  double eps_stop = 1e-3;      // relative objective-improvement stop threshold
  int max_outer_iters = 200;   // cap on convex-surrogate iterations

  // Sweep-level settings carried along from the config file.
  std::vector<double> P_max_dB_list;
  std::vector<std::uint64_t> seeds;

  double sigma2_u(int j) const { return sigma_u[j] * sigma_u[j]; }
  double sigma2_e() const { return sigma_e * sigma_e; }

  // Copy of this config with the power budget replaced (dB scale).
  SystemConfig with_pmax_db(double pmax_db) const;
};

double db_to_watts(double db);
double bits_to_nats(double bits);
double nats_to_bits(double nats);

// Parses and validates a config.  Every key is required, unknown keys are
// rejected, and scalar sigma_u / r_bits entries are broadcast to all users.
// Throws MissingKey / InvalidValue on any problem.
SystemConfig load_config(const nlohmann::json& j);
SystemConfig load_config_file(const std::string& path);

// FNV-1a hash of the canonical serialization; recorded in result files so
// outputs can be tied back to the exact configuration that produced them.
std::uint64_t config_hash(const SystemConfig& cfg);

// Canonical text form used for hashing (stable key order, %.17g doubles).
std::string canonical_config_text(const SystemConfig& cfg);

}  // namespace secbeam
