#pragma once

#include <cstdint>
#include <random>

namespace endomax {

// Mixer used to derive independent stream seeds from (base seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded uniform generator. mt19937_64 output is fully specified by the
// standard, and the (0,1) mapping below avoids the implementation-defined
// std::uniform_real_distribution, so streams are byte-reproducible across
// platforms. Draws never return 0 or 1 exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on the open interval (0,1): 53-bit mantissa, half-ulp offset.
  double next_open01() {
    const std::uint64_t bits = eng_() >> 11;  // [0, 2^53)
    return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
  }

 private:
  std::mt19937_64 eng_;
};

// Sampling runs are split into fixed-size chunks; chunk c of a run with base
// seed s is generated by Rng(chunk_seed(s, c)). The chunk size is a constant
// (not a function of the thread count), so results are identical no matter
// how many threads execute the chunks.
inline constexpr std::int64_t kSampleChunk = 65536;

inline std::uint64_t chunk_seed(std::uint64_t base, std::uint64_t chunk) {
  return splitmix64(base + 0x9e3779b97f4a7c15ULL * (chunk + 1));
}

}  // namespace endomax
