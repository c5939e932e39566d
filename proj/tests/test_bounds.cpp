#include <doctest.h>

#include <cmath>

#include "mml/bounds.hpp"
#include "mml/error.hpp"

using mml::ClassFamily;

TEST_CASE("fano bound examples") {
  CHECK(mml::fano_lower_bound({1.0, 0.0, 2.0, 10}) == 0.0);
  // (alpha/4)(1 - (n beta + log 2)/log |F|) with |F| = 16, beta = 0.
  CHECK(mml::fano_lower_bound({2.0, 0.0, 16.0, 5}) == doctest::Approx(0.5 * (1.0 - std::log(2.0) / std::log(16.0))));
  CHECK(mml::fano_lower_bound({1.0, 1.0, 16.0, 100}) == 0.0);  // clamped
  CHECK_THROWS_AS(mml::fano_lower_bound({1.0, 0.0, 1.0, 10}), mml::ValidationError);
  CHECK_THROWS_AS(mml::fano_lower_bound({3.0, 0.0, 4.0, 10}), mml::ValidationError);
  CHECK_THROWS_AS(mml::fano_lower_bound({1.0, -0.1, 4.0, 10}), mml::ValidationError);
}

TEST_CASE("vc dimensions and upper bounds") {
  CHECK(mml::yatracos_vc_dimension(ClassFamily::gaussian, 8, 7) == 24);
  CHECK(mml::yatracos_vc_dimension(ClassFamily::ising, 8, 7) == 16);
  CHECK(mml::yatracos_vc_dimension(ClassFamily::ising_no_field, 8, 7) == 8);
  CHECK(mml::vc_upper_bound({ClassFamily::gaussian, 8, 7, 2400}, 1.0) == doctest::Approx(0.1));
  CHECK(mml::vc_upper_bound({ClassFamily::ising_no_field, 10, 0, 5}, 1.0) == 0.0);
  CHECK(mml::vc_upper_bound({ClassFamily::gaussian, 8, 7, 1}, 1.0) == 1.0);
  CHECK(mml::parse_class_family("ising-no-field") == ClassFamily::ising_no_field);
  CHECK(mml::parse_class_family("ising_no_field") == ClassFamily::ising_no_field);
  CHECK_THROWS_AS(mml::parse_class_family("poisson"), mml::ValidationError);
  // Unknown-graph surrogate grows like (m + d) log d.
  CHECK(mml::yatracos_vc_dimension(ClassFamily::ising_unknown_graph, 8, 7) ==
        static_cast<std::size_t>(std::ceil(15 * std::log(8.0))));
}

TEST_CASE("sample complexity is the exact crossing of the vc bound") {
  for (auto fam : {ClassFamily::gaussian, ClassFamily::ising, ClassFamily::ising_no_field}) {
    for (double eps : {0.5, 0.1, 0.03, 0.0123}) {
      for (double c : {0.5, 1.0, 2.0}) {
        const std::size_t n = mml::sample_complexity(fam, 6, 5, eps, c);
        REQUIRE(n >= 1);
        CHECK(mml::vc_upper_bound({fam, 6, 5, n}, c) <= eps);
        if (n > 1) CHECK(mml::vc_upper_bound({fam, 6, 5, n - 1}, c) > eps);
      }
    }
  }
  CHECK(mml::sample_complexity(ClassFamily::gaussian, 8, 7, 0.1, 1.0) == 2400);
  CHECK(mml::sample_complexity(ClassFamily::ising_no_field, 10, 0, 0.1, 1.0) == 0);
  CHECK_THROWS_AS(mml::sample_complexity(ClassFamily::gaussian, 8, 7, 0.0), mml::ValidationError);
  CHECK_THROWS_AS(mml::sample_complexity(ClassFamily::gaussian, 8, 7, 1.0), mml::ValidationError);
}
