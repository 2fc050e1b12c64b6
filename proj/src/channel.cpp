#include "secbeam/channel.hpp"

#include "secbeam/rng.hpp"

namespace secbeam {
namespace {

// Stream id layout: [kind (8) | transmitter (24) | receiver (24)].
constexpr std::uint64_t kKindUser = 1;
constexpr std::uint64_t kKindEve = 2;

std::uint64_t stream_id(std::uint64_t kind, int l, int j) {
  return (kind << 48) | (static_cast<std::uint64_t>(l) << 24) |
         static_cast<std::uint64_t>(j);
}

Eigen::MatrixXcd draw_matrix(int rows, int cols, std::uint64_t seed,
                             std::uint64_t stream) {
  NormalStream rng(seed, stream);
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.next_complex();
  return m;
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
}

}  // namespace

std::uint64_t ChannelSet::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto add = [&h](const Eigen::MatrixXcd& m) {
    const std::int64_t dims[2] = {m.rows(), m.cols()};
    hash_bytes(h, dims, sizeof(dims));
    hash_bytes(h, m.data(), sizeof(std::complex<double>) * m.size());
  };
  for (const auto& row : user_links)
    for (const auto& m : row) add(m);
  for (const auto& m : eve_links) add(m);
  return h;
}

ChannelSet generate_channels(const SystemConfig& cfg, std::uint64_t seed) {
  ChannelSet ch;
  ch.seed = seed;
  ch.rng_algorithm = kRngAlgorithm;
  ch.user_links.resize(cfg.D);
  for (int l = 0; l < cfg.D; ++l) {
    ch.user_links[l].reserve(cfg.D);
    for (int j = 0; j < cfg.D; ++j)
      ch.user_links[l].push_back(
          draw_matrix(cfg.N_r, cfg.N, seed, stream_id(kKindUser, l, j)));
  }
  ch.eve_links.reserve(cfg.D);
  for (int l = 0; l < cfg.D; ++l)
    ch.eve_links.push_back(
        draw_matrix(cfg.N_e, cfg.N, seed, stream_id(kKindEve, l, 0)));
  return ch;
}

}  // namespace secbeam
