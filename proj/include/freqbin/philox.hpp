// Philox4x32-10 counter-based generator (Salmon et al., SC 2011) and the
// Poisson sampler built on it.  Every (seed, stream) pair is an independent
// substream whose output is a pure function of its counter, so draws are
// reproducible regardless of evaluation order.
#pragma once

#include <array>
#include <cstdint>

namespace freqbin {

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  /// Next uniform double in (0, 1].
  double next_uniform();

  std::uint64_t next_u64();

 private:
  std::array<std::uint32_t, 4> next_block();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int available_ = 0;
};

/// Poisson draw by accumulating unit-exponential inter-arrival times; exact
/// for any mean, cost O(mean) uniforms.
std::uint64_t poisson_draw(double mean, PhiloxStream& stream);

/// SplitMix64 finalizer; used to derive independent seeds from a base seed.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace freqbin
