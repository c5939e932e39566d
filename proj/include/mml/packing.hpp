#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mml {

// Entries are -1 or +1.
using SignVector = std::vector<int>;

// Sign vectors of length m with pairwise L1 distance >= m/3, i.e. pairwise
// Hamming distance >= ceil(m/6).
struct SignPacking {
  int m = 0;
  std::vector<SignVector> vectors;

  std::size_t size() const { return vectors.size(); }
  bool operator==(const SignPacking&) const = default;
};

// ceil(m / 6): the Hamming separation equivalent to L1 separation m/3.
int required_hamming(int m);

// ceil(2^(m/5)), the size the greedy construction is guaranteed to reach.
std::size_t guaranteed_packing_size(int m);

int hamming_distance(std::span<const int> a, std::span<const int> b);

// Largest m for which the greedy may walk all 2^m candidates.
inline constexpr int kExhaustiveMaxM = 30;

// Deterministic greedy over candidates in integer order of their binary
// encoding (coordinate j is +1 iff bit j is set). A candidate is accepted
// when its Hamming distance to every accepted vector is >= ceil(m/6).
// Without a target the walk runs to exhaustion and requires m <= 30. With a
// target it stops as soon as the target is reached; the result is then a
// prefix of the exhaustive output. Throws BudgetError when the walk cannot
// proceed within 2^30 candidates.
SignPacking build_packing(int m, std::optional<std::size_t> target = std::nullopt);

// Rejection sampling of uniform sign vectors under the same acceptance rule.
// max_draws == 0 means 1000 * target. Throws BudgetError when the draw budget
// runs out before target vectors are accepted.
SignPacking randomized_packing(int m, std::size_t target, std::uint64_t seed,
                               std::size_t max_draws = 0);

// Post-hoc check of every SignPacking invariant.
bool is_valid_packing(const SignPacking& packing);

}  // namespace mml
