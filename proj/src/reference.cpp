#include "mml/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

#include "mml/error.hpp"

namespace mml::reference {

namespace {

Vector spins(std::size_t x, int d) {
  Vector v(d);
  for (int j = 0; j < d; ++j) v(j) = ((x >> j) & 1U) ? 1.0 : -1.0;
  return v;
}

std::vector<double> all_log_weights(const IsingModel& model) {
  const int d = model.dim();
  require_exact(d);
  std::vector<double> out(std::size_t{1} << d);
  for (std::size_t x = 0; x < out.size(); ++x) {
    const Vector v = spins(x, d);
    out[x] = v.dot(model.interactions() * v) + model.field().dot(v);
  }
  return out;
}

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double e : v) s += std::exp(e - m);
  return m + std::log(s);
}

}  // namespace

double hamiltonian(const IsingModel& model, const std::vector<int>& x) {
  double e = 0.0;
  const int d = model.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j)
      e += model.interactions()(i, j) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    e += model.field()(i) * x[static_cast<std::size_t>(i)];
  }
  return e;
}

double log_partition(const IsingModel& model) { return log_sum_exp(all_log_weights(model)); }

std::vector<double> pmf(const IsingModel& model) {
  auto w = all_log_weights(model);
  const double log_z = log_sum_exp(w);
  for (auto& v : w) v = std::exp(v - log_z);
  return w;
}

double tv_exact(const IsingModel& p, const IsingModel& q) {
  const auto fp = reference::pmf(p);
  const auto fq = reference::pmf(q);
  double s = 0.0;
  for (std::size_t x = 0; x < fp.size(); ++x) s += std::abs(fp[x] - fq[x]);
  return s / 2.0;
}

double kl_exact(const IsingModel& p, const IsingModel& q) {
  const auto fp = reference::pmf(p);
  const auto fq = reference::pmf(q);
  double s = 0.0;
  for (std::size_t x = 0; x < fp.size(); ++x)
    if (fp[x] > 0.0) s += fp[x] * std::log(fp[x] / fq[x]);
  return s;
}

double quadratic_form_moment(const Matrix& w, int k) {
  const int d = static_cast<int>(w.rows());
  require_exact(d);
  const std::size_t n = std::size_t{1} << d;
  double s = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const Vector v = spins(x, d);
    s += std::pow(v.dot(w * v), k);
  }
  return s / static_cast<double>(n);
}

double exp_moment(const Matrix& w, double t) {
  const int d = static_cast<int>(w.rows());
  require_exact(d);
  const std::size_t n = std::size_t{1} << d;
  double s = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const Vector v = spins(x, d);
    s += std::exp(t * v.dot(w * v));
  }
  return s / static_cast<double>(n);
}

SignPacking greedy_packing(int m) {
  if (m < 1 || m > kExhaustiveMaxM) throw ValidationError("greedy_packing needs 1 <= m <= 30");
  const int radius = required_hamming(m);
  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<std::uint64_t> covered((total + 63) / 64, 0);
  auto is_covered = [&](std::uint64_t x) { return (covered[x >> 6] >> (x & 63)) & 1U; };
  // Recursively mark every point at distance < radius from x.
  std::function<void(std::uint64_t, int, int)> mark = [&](std::uint64_t x, int start, int depth) {
    covered[x >> 6] |= std::uint64_t{1} << (x & 63);
    if (depth + 1 >= radius) return;
    for (int p = start; p < m; ++p) mark(x ^ (std::uint64_t{1} << p), p + 1, depth + 1);
  };
  SignPacking out{m, {}};
  for (std::uint64_t c = 0; c < total; ++c) {
    if (is_covered(c)) continue;
    SignVector v(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) v[static_cast<std::size_t>(j)] = ((c >> j) & 1U) ? 1 : -1;
    out.vectors.push_back(std::move(v));
    mark(c, 0, 0);
  }
  return out;
}

}  // namespace mml::reference
