#pragma once

#include <cstdint>

namespace cslab {

// Counter-based SplitMix64.
//
// Output i (0-based) of the stream with key k is mix64(k + (i+1)*0x9E3779B97F4A7C15),
// which coincides with the classic sequential SplitMix64 seeded with k.
// mix64 is the Stafford "variant 13" finalizer used by SplitMix64:
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
// Test vectors (key 0): e220a8397b1dcdaf 6e789e6aa1b965f4 06c45d188009454f f88bb8a8724c81ec
// Test vectors (key 42): bdd732262feb6e95 28efe333b266f103 47526757130f9f52 581ce1ff0e4ae394
//
// Doubles: uniform() = (x >> 11) * 2^-53. normal() is Box-Muller on two uniforms,
// using only the cosine branch so every normal consumes exactly two outputs.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit Rng(std::uint64_t key = 0) : key_(key) {}

  static std::uint64_t mix64(std::uint64_t z);

  // Key of an independent stream labelled by `tag` under `seed`.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  // Random access: the i-th output, independent of the current position.
  std::uint64_t at(std::uint64_t i) const { return mix64(key_ + (i + 1) * kGamma); }

  std::uint64_t next_u64() { return at(counter_++); }
  double uniform();                  // [0, 1)
  double uniform_open();             // (0, 1]
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t below(std::uint64_t n);  // uniform integer in [0, n)

  Rng split(std::uint64_t tag) const { return Rng(derive(key_, tag)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cslab
