#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bcd {

std::uint64_t splitmix64(std::uint64_t x);

// Seedable random stream (mt19937_64). Repetition r of an experiment with
// master seed s draws from the stream derived from (s, r), so experiments are
// reproducible and repetitions are independent and may run concurrently.
// uniform01/normal avoid std distributions on purpose: their output is pinned
// by this implementation, not left to the standard library.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream for_repetition(std::uint64_t master_seed, std::uint64_t repetition) {
    return RngStream(splitmix64(master_seed + 0x9e3779b97f4a7c15ULL * (repetition + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1) with 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal();

  // uniform integer in [0, n)
  int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

std::vector<int> random_permutation(int n, RngStream& rng);

}  // namespace bcd
