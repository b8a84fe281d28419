#pragma once

#include <cstdint>
#include <random>

namespace bcb {

// Seed derivation: one master seed, per-run stream = mix of (master, horizon,
// run index), and inside a run separate substreams for context arrivals,
// rewards and policy randomization. Policies that randomize differently never
// perturb the environment sequence, which is what makes common-random-number
// comparisons across policies valid.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2) + splitmix64(b)));
}

// mt19937_64 with a fixed uint64->double mapping; std::*_distribution is
// implementation-defined so it is avoided everywhere output must be
// bit-reproducible across toolchains.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1)
  double next_double() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n), n >= 1
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(eng_()) * n) >> 64);
  }

 private:
  std::mt19937_64 eng_;
};

struct RunStreams {
  RngStream context;
  RngStream reward;
  RngStream policy;
};

inline RunStreams make_run_streams(std::uint64_t master, std::uint64_t horizon,
                                   std::uint64_t run_index) {
  std::uint64_t base = seed_mix(seed_mix(master, horizon), run_index);
  return RunStreams{RngStream(seed_mix(base, 1)), RngStream(seed_mix(base, 2)),
                    RngStream(seed_mix(base, 3))};
}

}  // namespace bcb
