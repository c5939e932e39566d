#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mml/error.hpp"
#include "mml/ising.hpp"
#include "mml/reference.hpp"
#include "mml/rng.hpp"

using mml::Config;
using mml::Graph;
using mml::IsingModel;
using mml::Matrix;
using mml::Vector;

namespace {

// Independent Hamiltonian over +-1 spins straight from x^T W x + h^T x.
double brute_hamiltonian(const Matrix& w, const Vector& h, Config c) {
  const int d = static_cast<int>(h.size());
  Vector x(d);
  for (int i = 0; i < d; ++i) x(i) = ((c >> i) & 1U) ? 1.0 : -1.0;
  return x.dot(w * x) + h.dot(x);
}

IsingModel random_model(mml::Rng& rng, int d, double scale) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b)
      if (rng.uniform() < 0.5) pairs.emplace_back(a, b);
  const Graph g = Graph::make(d, pairs);
  Matrix w = Matrix::Zero(d, d);
  for (const auto& e : g.edges()) w(e.i - 1, e.j - 1) = w(e.j - 1, e.i - 1) = scale * rng.normal();
  Vector h(d);
  for (int i = 0; i < d; ++i) h(i) = scale * rng.normal();
  return IsingModel(g, h, w);
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("configuration encoding round trips") {
  for (Config c = 0; c < 64; ++c) CHECK(mml::spins_to_config(mml::config_to_spins(c, 6)) == c);
  CHECK(mml::config_to_spins(1, 3) == std::vector<int>{1, -1, -1});
}

TEST_CASE("hamiltonian and pmf against brute force") {
  mml::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto m = random_model(rng, 2 + t % 7, 0.3);
    const int d = m.dim();
    const auto p = mml::pmf(m);
    double z = 0.0;
    for (Config c = 0; c < (1U << d); ++c) {
      const double e = brute_hamiltonian(m.interactions(), m.field(), c);
      CHECK(mml::hamiltonian(m, c) == doctest::Approx(e).epsilon(1e-12));
      CHECK(mml::hamiltonian(m, mml::config_to_spins(c, d)) == doctest::Approx(e).epsilon(1e-12));
      z += std::exp(e);
    }
    CHECK(mml::log_partition(m) == doctest::Approx(std::log(z)).epsilon(1e-12));
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
  }
  const auto m = random_model(rng, 3, 0.3);
  CHECK_THROWS_AS(mml::hamiltonian(m, std::vector<int>{1, 0, -1}), mml::ValidationError);
  CHECK_THROWS_AS(mml::hamiltonian(m, std::vector<int>{1, 1}), mml::ValidationError);
}

TEST_CASE("closed forms for product and single-edge models") {
  const auto prod = mml::fields_from_signs(4, std::vector<int>{1, -1, 1, 1}, 0.3);
  CHECK(mml::log_partition(prod) == doctest::Approx(4 * std::log(2 * std::cosh(0.3))).epsilon(1e-13));
  const auto p = mml::pmf(prod);
  for (Config c = 0; c < 16; ++c) {
    double expected = 1.0;
    const int signs[] = {1, -1, 1, 1};
    for (int i = 0; i < 4; ++i) {
      const double x = ((c >> i) & 1U) ? 1.0 : -1.0;
      expected *= std::exp(0.3 * signs[i] * x) / (2 * std::cosh(0.3));
    }
    CHECK(p[c] == doctest::Approx(expected).epsilon(1e-13));
  }
  // One edge with W_12 = w: x^T W x = 2 w x1 x2, TV between +w and -w is tanh(2w).
  const Graph edge = Graph::make(2, {{1, 2}});
  const auto a = mml::interactions_from_signs(edge, std::vector<int>{1}, 0.2);
  const auto b = mml::interactions_from_signs(edge, std::vector<int>{-1}, 0.2);
  CHECK(mml::log_partition(a) == doctest::Approx(std::log(2 * std::exp(0.4) + 2 * std::exp(-0.4))));
  CHECK(mml::tv_exact(a, b) == doctest::Approx(std::tanh(0.4)).epsilon(1e-13));
  CHECK(mml::kl_exact(a, b) == doctest::Approx(0.8 * std::tanh(0.4)).epsilon(1e-12));
}

TEST_CASE("parallel kernels agree with the serial reference") {
  mml::Rng rng(11);
  for (int d : {3, 8, 12, 14}) {
    const auto p = random_model(rng, d, 0.2);
    const auto q = random_model(rng, d, 0.2);
    const auto q2 = IsingModel(p.graph(), q.field(), p.interactions() * 0.5);
    CHECK(rel_diff(mml::log_partition(p), mml::reference::log_partition(p)) < 1e-12);
    const auto a = mml::pmf(p);
    const auto b = mml::reference::pmf(p);
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(std::abs(a[i] - b[i]) < 1e-12);
    CHECK(rel_diff(mml::tv_exact(p, q2), mml::reference::tv_exact(p, q2)) < 1e-12);
    CHECK(rel_diff(mml::kl_exact(p, q2), mml::reference::kl_exact(p, q2)) < 1e-12);
    for (int k : {1, 2, 4, 8})
      CHECK(rel_diff(mml::quadratic_form_moment(p.interactions(), k),
                     mml::reference::quadratic_form_moment(p.interactions(), k)) < 1e-12);
    CHECK(rel_diff(mml::exp_moment(p.interactions(), 0.7), mml::reference::exp_moment(p.interactions(), 0.7)) <
          1e-12);
    CHECK(rel_diff(mml::hamiltonian(p, Config{5}), mml::reference::hamiltonian(p, mml::config_to_spins(5, d))) <
          1e-12);
  }
}

TEST_CASE("vertex relabeling permutes the pmf") {
  mml::Rng rng(5);
  const auto m = random_model(rng, 6, 0.4);
  const int perm[] = {3, 0, 5, 1, 4, 2};  // new vertex perm[i] carries old vertex i
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : m.graph().edges()) pairs.emplace_back(perm[e.i - 1] + 1, perm[e.j - 1] + 1);
  Matrix w = Matrix::Zero(6, 6);
  Vector h(6);
  for (int i = 0; i < 6; ++i) {
    h(perm[i]) = m.field()(i);
    for (int j = 0; j < 6; ++j) w(perm[i], perm[j]) = m.interactions()(i, j);
  }
  const IsingModel r(Graph::make(6, pairs), h, w);
  const auto a = mml::pmf(m);
  const auto b = mml::pmf(r);
  for (Config c = 0; c < 64; ++c) {
    Config moved = 0;
    for (int i = 0; i < 6; ++i)
      if ((c >> i) & 1U) moved |= Config{1} << perm[i];
    CHECK(a[c] == doctest::Approx(b[moved]).epsilon(1e-12));
  }
}

TEST_CASE("model validation and cutoff") {
  const Graph path = mml::standard_graph(mml::GraphKind::path, 3);
  Matrix w = Matrix::Zero(3, 3);
  w(0, 2) = w(2, 0) = 0.1;
  CHECK_THROWS_AS(IsingModel(path, Vector::Zero(3), w), mml::ValidationError);
  w = Matrix::Zero(3, 3);
  w(0, 0) = 0.1;
  CHECK_THROWS_AS(IsingModel(path, Vector::Zero(3), w), mml::ValidationError);
  w = Matrix::Zero(3, 3);
  w(0, 1) = 0.1;
  CHECK_THROWS_AS(IsingModel(path, Vector::Zero(3), w), mml::ValidationError);

  const auto big = mml::interactions_from_signs(mml::standard_graph(mml::GraphKind::path, 24),
                                                std::vector<int>(23, 1), 0.01);
  CHECK_FALSE(big.cached_log_partition().has_value());
  CHECK_THROWS_AS(mml::log_partition(big), mml::CutoffError);
  CHECK(mml::exact_cutoff() == 20);
  CHECK_THROWS_AS(mml::require_exact(21), mml::CutoffError);
}

TEST_CASE("exact sampler frequencies") {
  const auto m = mml::interactions_from_signs(mml::standard_graph(mml::GraphKind::cycle, 4),
                                              std::vector<int>{1, -1, 1, 1}, 0.3);
  const auto p = mml::pmf(m);
  const std::size_t n = 400'000;
  const auto draws = mml::sample_exact(m, n, 17);
  std::vector<double> freq(16, 0.0);
  for (Config c : draws) freq[c] += 1.0 / n;
  for (int c = 0; c < 16; ++c) CHECK(std::abs(freq[c] - p[c]) < 5 * std::sqrt(p[c] / n) + 1e-9);
  CHECK(mml::sample_exact(m, 50, 3) == mml::sample_exact(m, 50, 3));
}

TEST_CASE("gibbs sampler matches exact marginals") {
  const auto m = IsingModel(mml::standard_graph(mml::GraphKind::path, 5), Vector::Constant(5, 0.2),
                            mml::interactions_from_signs(mml::standard_graph(mml::GraphKind::path, 5),
                                                         std::vector<int>{1, 1, -1, 1}, 0.25)
                                .interactions());
  const auto p = mml::pmf(m);
  const std::size_t n = 40'000;
  const auto draws = mml::sample_gibbs(m, n, {.burn_in = 200, .thin = 2}, 9);
  REQUIRE(draws.size() == n);
  std::vector<double> freq(32, 0.0);
  for (const auto& x : draws) freq[mml::spins_to_config(x)] += 1.0 / n;
  double tv = 0.0;
  for (int c = 0; c < 32; ++c) tv += 0.5 * std::abs(freq[c] - p[c]);
  CHECK(tv < 0.03);
}

TEST_CASE("moment identities") {
  mml::Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    const auto m = random_model(rng, 3 + t, 1.0);
    const Matrix& w = m.interactions();
    CHECK(std::abs(mml::quadratic_form_moment(w, 1)) < 1e-10);
    CHECK(mml::quadratic_form_moment(w, 2) == doctest::Approx(2 * w.squaredNorm()).epsilon(1e-10));
    CHECK(mml::exp_moment(w, 0.0) == doctest::Approx(1.0));
    CHECK(mml::exp_moment(w, 0.1) >= 1.0);
  }
  CHECK_THROWS_AS(mml::quadratic_form_moment(Matrix::Zero(3, 3), 3), mml::ValidationError);
}

TEST_CASE("hard ising families") {
  const auto fam = mml::build_hard_ising_family(mml::standard_graph(mml::GraphKind::path, 8), 700, 0.1);
  CHECK(fam.models.size() >= 3);
  CHECK(fam.models[0].interactions()(0, 1) == doctest::Approx(-0.1 / std::sqrt(700.0)));
  const auto single = mml::build_hard_ising_family(mml::standard_graph(mml::GraphKind::empty, 4), 100, 0.1);
  CHECK(single.models.size() == 1);
  CHECK(mml::log_partition(single.models[0]) == doctest::Approx(4 * std::log(2.0)));
  const auto prod = mml::build_product_family(16, 400, 3.0);
  CHECK(prod.models.size() == 10);
  CHECK(prod.delta == doctest::Approx(0.15));
}
