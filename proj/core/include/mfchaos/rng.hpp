#pragma once

#include <array>
#include <cstdint>

namespace mfchaos {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

/// Stream key for (seed, job, particle). Jobs separate independent
/// experiments sharing one seed; particles separate per-particle streams.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t job, std::uint64_t particle);

/// Counter-based random stream: draw k of step s under a key is a pure
/// function of (key, s, k), so streams can be consumed in any order or thread.
class Stream {
 public:
  Stream(std::uint64_t key, std::uint64_t step) : key_(key), step_(step) {}
  Stream(std::uint64_t seed, std::uint64_t job, std::uint64_t particle, std::uint64_t step)
      : Stream(stream_key(seed, job, particle), step) {}

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Poisson variate by inversion.
  std::uint64_t poisson(double mean);
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t key_;
  std::uint64_t step_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mfchaos
