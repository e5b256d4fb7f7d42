#include "freqbin/philox.hpp"

#include <cmath>
#include <stdexcept>

namespace freqbin {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;
constexpr std::uint32_t kMultA = 0xD2511F53u;
constexpr std::uint32_t kMultB = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                      std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

inline void round_once(std::array<std::uint32_t, 4>& ctr,
                       const std::array<std::uint32_t, 2>& key) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mul_hi_lo(kMultA, ctr[0], lo0, hi0);
  mul_hi_lo(kMultB, ctr[2], lo1, hi1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> PhiloxStream::next_block() {
  std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_),
      static_cast<std::uint32_t>(stream_ >> 32)};
  std::array<std::uint32_t, 2> key = key_;
  for (int round = 0; round < 10; ++round) {
    round_once(ctr, key);
    if (round < 9) {
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
  }
  ++block_;
  return ctr;
}

std::uint64_t PhiloxStream::next_u64() {
  if (available_ < 2) {
    buffer_ = next_block();
    available_ = 4;
  }
  const std::uint32_t lo = buffer_[4 - available_];
  const std::uint32_t hi = buffer_[5 - available_];
  available_ -= 2;
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

double PhiloxStream::next_uniform() {
  // 53-bit mantissa, shifted into (0, 1].
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t poisson_draw(double mean, PhiloxStream& stream) {
  if (!(mean >= 0.0))
    throw std::invalid_argument("poisson mean must be non-negative");
  if (mean == 0.0) return 0;
  double acc = 0.0;
  std::uint64_t count = 0;
  while (true) {
    acc += -std::log(stream.next_uniform());
    if (acc >= mean) break;
    ++count;
  }
  return count;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace freqbin
