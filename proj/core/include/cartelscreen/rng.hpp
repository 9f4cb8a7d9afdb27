#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cartelscreen {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed-splitting rule used everywhere a worker needs its own stream:
// child = splitmix64(parent ^ splitmix64(tag)), applied once per tag.
// Repetitions, CV folds, trees and simulated hours all derive their seeds
// this way from the single master seed, so one seed reproduces a whole run
// regardless of execution order or worker count.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
  return splitmix64(parent ^ splitmix64(tag));
}

template <class... Tags>
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag, Tags... rest) {
  return derive_seed(derive_seed(parent, tag), rest...);
}

// FNV-1a of a label, for readable stream tags: derive_seed(s, seed_tag("cv")).
constexpr std::uint64_t seed_tag(const char* label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (; *label; ++label) {
    h ^= static_cast<unsigned char>(*label);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// mt19937_64 is bit-exact across platforms; the distributions in <random> are
// not, so the few draws we need are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; one draw per call keeps the stream position independent of
  // call parity.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_int(i))]);
    }
  }

  // k distinct values from [0, n), ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_int(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cartelscreen
