#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace secbeam {

// Identifier recorded in result files so a run can be reproduced later.
inline constexpr const char* kRngAlgorithm = "philox4x32-10/box-muller";

// Philox 4x32 with 10 rounds: a counter-based generator.  Each (key, counter)
// pair maps to four independent 32-bit words, so disjoint counter ranges give
// independent streams without any shared state.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::uint32_t key0,
                                            std::uint32_t key1);
};

// Stream of standard normal variates.  The 128-bit counter is split as
// [block index (64) | stream id (64)]; the key carries the global seed.  One
// Philox block yields two uniforms (64 bits each) and Box-Muller turns them
// into two normals, so draw order is completely determined by (seed, stream).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream);

  // Standard normal N(0, 1).
  double next();

  // Circularly-symmetric complex normal CN(0, 1): (x + iy) / sqrt(2) with
  // x, y independent standard normals.
  std::complex<double> next_complex();

 private:
  void refill();

  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t block_index_ = 0;
  double pending_[2] = {0.0, 0.0};
  int available_ = 0;
};

}  // namespace secbeam
