#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mml {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

// Seed for a sub-stream identified by integer coordinates, e.g. (member, trial).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

// Seeded uniform stream with portable conversions. std::uniform_real_distribution
// and std::normal_distribution are implementation-defined, so they are not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Standard normal via the Box-Muller pair transform; the second variate of
  // each pair is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace mml
