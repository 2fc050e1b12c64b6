#include "secbeam/rng.hpp"

#include <cmath>

namespace secbeam {
namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> round_once(
    const std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMult0, c[0], hi0, lo0);
  mulhilo(kMult1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::uint32_t key0,
                                               std::uint32_t key1) {
  for (int r = 0; r < 9; ++r) {
    ctr = round_once(ctr, key0, key1);
    key0 += kWeyl0;
    key1 += kWeyl1;
  }
  return round_once(ctr, key0, key1);
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream)
    : key0_(static_cast<std::uint32_t>(seed)),
      key1_(static_cast<std::uint32_t>(seed >> 32)),
      stream_lo_(static_cast<std::uint32_t>(stream)),
      stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

void NormalStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_index_),
      static_cast<std::uint32_t>(block_index_ >> 32), stream_lo_, stream_hi_};
  ++block_index_;
  const auto w = Philox4x32::block(ctr, key0_, key1_);

  // Two 64-bit uniforms per block; u1 is shifted into (0, 1] so log(u1) is
  // always finite.
  const double kInv64 = 0x1.0p-64;
  const std::uint64_t b1 =
      (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
  const std::uint64_t b2 =
      (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
  const double u1 = (static_cast<double>(b1) + 1.0) * kInv64;
  const double u2 = static_cast<double>(b2) * kInv64;

  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  pending_[0] = radius * std::cos(angle);
  pending_[1] = radius * std::sin(angle);
  available_ = 2;
}

double NormalStream::next() {
  if (available_ == 0) refill();
  return pending_[2 - available_--];
}

std::complex<double> NormalStream::next_complex() {
  const double re = next();
  const double im = next();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

}  // namespace secbeam
