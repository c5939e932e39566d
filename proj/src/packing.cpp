#include "mml/packing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "mml/error.hpp"
#include "mml/rng.hpp"

namespace mml {

namespace {

using Words = std::vector<std::uint64_t>;

std::size_t word_count(int m) { return (static_cast<std::size_t>(m) + 63) / 64; }

int hamming_words(const Words& a, const Words& b) {
  int h = 0;
  for (std::size_t w = 0; w < a.size(); ++w) h += std::popcount(a[w] ^ b[w]);
  return h;
}

bool far_from_all(const Words& c, const std::vector<Words>& accepted, int min_h) {
  for (const auto& q : accepted)
    if (hamming_words(c, q) < min_h) return false;
  return true;
}

SignVector to_signs(const Words& w, int m) {
  SignVector s(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const auto bit = (w[static_cast<std::size_t>(j) / 64] >> (j % 64)) & 1U;
    s[static_cast<std::size_t>(j)] = bit ? 1 : -1;
  }
  return s;
}

// All offsets of Hamming weight < radius over m bits.
std::vector<std::uint64_t> ball_offsets(int m, int radius) {
  std::vector<std::uint64_t> out;
  struct Frame {
    int start;
    int depth;
    std::uint64_t x;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    out.push_back(f.x);
    if (f.depth + 1 >= radius) continue;
    for (int p = f.start; p < m; ++p) stack.push_back({p + 1, f.depth + 1, f.x | (std::uint64_t{1} << p)});
  }
  return out;
}

// Scatters the low bits of i into the set bits of mask, lowest first.
std::uint64_t deposit(std::uint64_t i, std::uint64_t mask) {
  std::uint64_t out = 0;
  while (mask && i) {
    const std::uint64_t low = mask & (~mask + 1);
    if (i & 1U) out |= low;
    i >>= 1;
    mask ^= low;
  }
  return out;
}

// The integer-order greedy code is linear (a lexicode), so its full output is
// the span of a basis in which each new vector is the smallest point outside
// code + ball. With a reduced echelon basis whose pivots are leading bits, the
// smallest point of a coset is its reduction, which makes the search a walk
// over at most |ball| + 1 reduced values per basis vector.
std::vector<std::uint64_t> lexicode(int m, int min_h) {
  const std::vector<std::uint64_t> ball = ball_offsets(m, min_h);
  const std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::vector<std::uint64_t> basis;
  std::uint64_t pivots = 0;
  auto reduce = [&](std::uint64_t x) {
    for (std::uint64_t b : basis)
      if (x & std::bit_floor(b)) x ^= b;
    return x;
  };
  for (;;) {
    std::vector<std::uint64_t> covered;
    covered.reserve(ball.size());
    for (std::uint64_t b : ball) covered.push_back(reduce(b));
    std::sort(covered.begin(), covered.end());
    const std::uint64_t free_bits = full & ~pivots;
    const std::uint64_t cosets = std::uint64_t{1} << std::popcount(free_bits);
    std::optional<std::uint64_t> next;
    for (std::uint64_t i = 0; i < cosets; ++i) {
      const std::uint64_t v = deposit(i, free_bits);
      if (!std::binary_search(covered.begin(), covered.end(), v)) {
        next = v;
        break;
      }
    }
    if (!next) break;
    for (auto& b : basis)
      if (b & std::bit_floor(*next)) b ^= *next;
    basis.push_back(*next);
    pivots |= std::bit_floor(*next);
  }
  const std::size_t k = basis.size();
  std::vector<std::uint64_t> code(std::size_t{1} << k);
  std::uint64_t x = 0;
  code[0] = 0;
  for (std::size_t g = 1; g < code.size(); ++g) {
    x ^= basis[static_cast<std::size_t>(std::countr_zero(g))];
    code[g] = x;
  }
  std::sort(code.begin(), code.end());
  return code;
}

}  // namespace

int required_hamming(int m) { return (m + 5) / 6; }

std::size_t guaranteed_packing_size(int m) {
  return static_cast<std::size_t>(std::ceil(std::pow(2.0, static_cast<double>(m) / 5.0)));
}

int hamming_distance(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ValidationError("hamming_distance: length mismatch");
  int h = 0;
  for (std::size_t i = 0; i < a.size(); ++i) h += (a[i] != b[i]);
  return h;
}

SignPacking build_packing(int m, std::optional<std::size_t> target) {
  if (m < 1) throw ValidationError("packing dimension m must be >= 1, got " + std::to_string(m));
  if (target && *target == 0) throw ValidationError("packing target size must be positive");
  const int min_h = required_hamming(m);
  SignPacking out{m, {}};

  if (!target && m > kExhaustiveMaxM)
    throw BudgetError("exhaustive packing enumerates 2^m candidates; m=" + std::to_string(m) +
                      " exceeds the 2^" + std::to_string(kExhaustiveMaxM) + " limit");
  if (m <= kExhaustiveMaxM) {
    const std::vector<std::uint64_t> code = lexicode(m, min_h);
    const std::size_t keep = target ? *target : code.size();
    if (keep > code.size())
      throw BudgetError("greedy packing reached only " + std::to_string(code.size()) + " of " +
                        std::to_string(keep) + " vectors for m=" + std::to_string(m) +
                        " (candidates exhausted)");
    out.vectors.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.vectors.push_back(to_signs(Words{code[i]}, m));
    return out;
  }

  // Targeted walk for m > 30: only the low 30 bits vary within the budget.
  const std::uint64_t budget = std::uint64_t{1} << kExhaustiveMaxM;
  std::vector<Words> accepted;
  Words cand(word_count(m), 0);
  for (std::uint64_t c = 0; c < budget && accepted.size() < *target; ++c) {
    cand[0] = c;
    if (far_from_all(cand, accepted, min_h)) accepted.push_back(cand);
  }
  if (accepted.size() < *target)
    throw BudgetError("greedy packing reached only " + std::to_string(accepted.size()) + " of " +
                      std::to_string(*target) + " vectors for m=" + std::to_string(m) +
                      " within 2^30 candidates");
  for (const auto& w : accepted) out.vectors.push_back(to_signs(w, m));
  return out;
}

SignPacking randomized_packing(int m, std::size_t target, std::uint64_t seed,
                               std::size_t max_draws) {
  if (m < 1) throw ValidationError("packing dimension m must be >= 1, got " + std::to_string(m));
  if (target == 0) throw ValidationError("packing target size must be positive");
  if (max_draws == 0) max_draws = 1000 * target;
  const int min_h = required_hamming(m);
  const std::size_t words = word_count(m);
  const std::uint64_t tail_mask =
      (m % 64 == 0) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (m % 64)) - 1);

  Rng rng(seed);
  std::vector<Words> accepted;
  Words cand(words);
  for (std::size_t draw = 0; draw < max_draws && accepted.size() < target; ++draw) {
    for (auto& w : cand) w = rng.bits();
    cand.back() &= tail_mask;
    if (far_from_all(cand, accepted, min_h)) accepted.push_back(cand);
  }
  if (accepted.size() < target)
    throw BudgetError("randomized packing accepted only " + std::to_string(accepted.size()) +
                      " of " + std::to_string(target) + " vectors for m=" + std::to_string(m) +
                      " after " + std::to_string(max_draws) + " draws");
  SignPacking out{m, {}};
  for (const auto& w : accepted) out.vectors.push_back(to_signs(w, m));
  return out;
}

bool is_valid_packing(const SignPacking& packing) {
  const int min_h = required_hamming(packing.m);
  for (const auto& v : packing.vectors) {
    if (v.size() != static_cast<std::size_t>(packing.m)) return false;
    for (int x : v)
      if (x != 1 && x != -1) return false;
  }
  for (std::size_t a = 0; a < packing.vectors.size(); ++a)
    for (std::size_t b = a + 1; b < packing.vectors.size(); ++b)
      if (hamming_distance(packing.vectors[a], packing.vectors[b]) < min_h) return false;
  return true;
}

}  // namespace mml
