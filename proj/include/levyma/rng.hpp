#pragma once

#include <cstdint>
#include <random>

namespace levyma {

// Independent streams are keyed by (seed, stream id, domain). The domain tag
// separates the jump simulator from the auxiliary U draws so that adding a
// limit evaluation never perturbs a simulated jump record.
enum class StreamDomain : std::uint64_t {
  jumps = 0x6a756d7073ULL,
  limit_uniforms = 0x756e69666fULL,
  shift_law = 0x7368696674ULL,
  generic = 0x67656e6572ULL,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream,
                                   StreamDomain domain = StreamDomain::generic) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state ^= stream * 0xd1b54a32d192ed03ULL + static_cast<std::uint64_t>(domain);
  std::uint64_t b = splitmix64(state);
  std::uint64_t c = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

// Uniform on the open interval (0, 1), built from the top 53 bits.
inline double uniform_open(std::mt19937_64& rng) {
  double u;
  do {
    u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  } while (u == 0.0);
  return u;
}

}  // namespace levyma
