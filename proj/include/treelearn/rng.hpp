#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace treelearn {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed; the constants are the standard ones.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for one Monte Carlo trial, mixed from (master_seed, n, trial index).
// The mix is order-free: a trial's seed does not depend on which thread runs
// it or in which order, so parallel sweeps are reproducible.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t n,
                                std::uint64_t trial) {
  std::uint64_t s = splitmix64(master_seed ^ (0x9e3779b97f4a7c15ULL * n));
  return splitmix64(s ^ (0xbf58476d1ce4e5b9ULL * (trial + 1)));
}

// Secondary stream derived from a trial seed (e.g. channel noise after
// model sampling).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t idx) {
  return splitmix64(seed ^ (0xd1b54a32d192ed03ULL * (idx + 1)));
}

// Deterministic RNG. mt19937_64 output is pinned by the standard; doubles
// and bounded integers are derived here directly instead of through
// std::uniform_*_distribution, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, m), m >= 1, by rejection.
  std::uint64_t below(std::uint64_t m) {
    const std::uint64_t threshold = (0 - m) % m;
    std::uint64_t x = gen_();
    while (x < threshold) x = gen_();
    return x % m;
  }

  // Index drawn from a pmf by inverse CDF scan. Assumes the pmf sums to ~1;
  // residual rounding mass falls into the last cell.
  int categorical(std::span<const double> pmf) {
    const double u = uniform01();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
      acc += pmf[k];
      if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(pmf.size()) - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace treelearn
