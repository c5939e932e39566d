#include <doctest.h>

#include <cmath>
#include <string>

#include "mml/error.hpp"
#include "mml/packing.hpp"
#include "mml/reference.hpp"

namespace {

// Independent brute-force check of all pairwise distances.
int min_pairwise_hamming(const mml::SignPacking& p) {
  int best = p.m + 1;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b) {
      int h = 0;
      for (int k = 0; k < p.m; ++k) h += p.vectors[a][k] != p.vectors[b][k];
      best = std::min(best, h);
    }
  return best;
}

}  // namespace

TEST_CASE("packing constants") {
  CHECK(mml::required_hamming(1) == 1);
  CHECK(mml::required_hamming(6) == 1);
  CHECK(mml::required_hamming(7) == 2);
  CHECK(mml::required_hamming(30) == 5);
  CHECK(mml::guaranteed_packing_size(5) == 2);
  CHECK(mml::guaranteed_packing_size(7) == 3);
  CHECK(mml::guaranteed_packing_size(10) == 4);
  CHECK(mml::guaranteed_packing_size(30) == 64);
}

TEST_CASE("exhaustive greedy at m = 10 reaches the guarantee") {
  const auto p = mml::build_packing(10);
  CHECK(p.size() >= 4);
  CHECK(min_pairwise_hamming(p) >= 2);
  CHECK(mml::is_valid_packing(p));
  // The all -1 vector (integer 0) is always accepted first.
  CHECK(p.vectors[0] == mml::SignVector(10, -1));
}

TEST_CASE("exhaustive packing equals the candidate-by-candidate greedy") {
  for (int m = 1; m <= 22; ++m) CHECK(mml::build_packing(m) == mml::reference::greedy_packing(m));
}

TEST_CASE("targeted packing is a prefix of the exhaustive walk") {
  for (int m : {1, 4, 7, 12, 16}) {
    const auto full = mml::build_packing(m);
    for (std::size_t target : {std::size_t{1}, std::size_t{2}, full.size()}) {
      const auto part = mml::build_packing(m, target);
      REQUIRE(part.size() == target);
      for (std::size_t i = 0; i < target; ++i) CHECK(part.vectors[i] == full.vectors[i]);
    }
  }
  CHECK(mml::build_packing(1, 2).size() == 2);
}

TEST_CASE("packing sizes and separation for small m match brute force") {
  for (int m = 1; m <= 16; ++m) {
    const auto p = mml::build_packing(m);
    CHECK(p.size() >= mml::guaranteed_packing_size(m));
    if (p.size() > 1) CHECK(min_pairwise_hamming(p) >= mml::required_hamming(m));
  }
}

TEST_CASE("packing guards") {
  try {
    (void)mml::build_packing(64);
    FAIL("expected BudgetError");
  } catch (const mml::BudgetError& e) {
    CHECK(std::string(e.what()).find("2^") != std::string::npos);
  }
  CHECK_THROWS_AS(mml::build_packing(0), mml::ValidationError);
  CHECK_THROWS_AS(mml::build_packing(3, 9), mml::BudgetError);  // 2^3 candidates cannot give 9
  // Targeted walks work beyond 64 coordinates.
  const auto wide = mml::build_packing(70, 8);
  CHECK(wide.size() == 8);
  CHECK(min_pairwise_hamming(wide) >= mml::required_hamming(70));
}

TEST_CASE("randomized packing is valid and reproducible") {
  const auto a = mml::randomized_packing(20, 16, 99);
  const auto b = mml::randomized_packing(20, 16, 99);
  CHECK(a == b);
  CHECK(a.size() == 16);
  CHECK(min_pairwise_hamming(a) >= mml::required_hamming(20));
  CHECK(mml::randomized_packing(20, 16, 100) != a);
  CHECK_THROWS_AS(mml::randomized_packing(2, 5, 1), mml::BudgetError);
}

TEST_CASE("validity checker rejects broken packings") {
  mml::SignPacking p{4, {{1, 1, 1, 1}, {1, 1, 1, 1}}};
  CHECK_FALSE(mml::is_valid_packing(p));
  p.vectors[1] = {1, 1, 1, 0};
  CHECK_FALSE(mml::is_valid_packing(p));
  p.vectors[1] = {1, 1, 1, -1};
  CHECK(mml::is_valid_packing(p));
}
