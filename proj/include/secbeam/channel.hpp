#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "secbeam/config.hpp"

namespace secbeam {

// One flat-fading channel realization.  Entries are i.i.d. CN(0, 1).
struct ChannelSet {
  // user_links[l][j]: channel from transmitter l to user j, N_r x N.
  std::vector<std::vector<Eigen::MatrixXcd>> user_links;
  // eve_links[l]: channel from transmitter l to the eavesdropper, N_e x N.
  std::vector<Eigen::MatrixXcd> eve_links;

  std::uint64_t seed = 0;
  std::string rng_algorithm;

  // Channel from transmitter l into user j's receiver.
  const Eigen::MatrixXcd& user(int l, int j) const { return user_links[l][j]; }
  const Eigen::MatrixXcd& eve(int l) const { return eve_links[l]; }

  int num_transmitters() const { return static_cast<int>(user_links.size()); }

  // FNV-1a over the raw entry bytes; used to verify that paired runs really
  // saw the same realization.
  std::uint64_t content_hash() const;
};

// Draws every link matrix from its own counter stream, so the realization
// depends only on (dimensions, seed) and never on draw interleaving.
ChannelSet generate_channels(const SystemConfig& cfg, std::uint64_t seed);

}  // namespace secbeam
