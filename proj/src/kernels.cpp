#include "mml/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

namespace mml::kernels {

void set_num_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

double max_value(std::span<const double> values) {
  const std::size_t blocks = detail::block_count(values.size());
  std::vector<double> partial(blocks, -std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
    const std::size_t hi = std::min(lo + kBlockSize, values.size());
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, values[i]);
    partial[static_cast<std::size_t>(b)] = m;
  }
  double m = -std::numeric_limits<double>::infinity();
  for (double p : partial) m = std::max(m, p);
  return m;
}

double log_sum_exp(std::span<const double> values) {
  const double shift = max_value(values);
  if (!std::isfinite(shift)) return shift;
  const double s = blocked_sum(values.size(), [&](std::size_t i) { return std::exp(values[i] - shift); });
  return shift + std::log(s);
}

EnergyTerms EnergyTerms::from(const Eigen::MatrixXd& interactions, const Eigen::VectorXd& field) {
  EnergyTerms t;
  t.d = static_cast<int>(field.size());
  t.field.assign(field.data(), field.data() + field.size());
  for (int a = 0; a < t.d; ++a)
    for (int b = a + 1; b < t.d; ++b)
      if (interactions(a, b) != 0.0) t.pairs.push_back({a, b, 2.0 * interactions(a, b)});
  return t;
}

std::vector<double> energies(const EnergyTerms& terms) {
  std::vector<double> out(std::size_t{1} << terms.d);
  parallel_fill(out, [&](std::size_t x) { return terms(x); });
  return out;
}

}  // namespace mml::kernels
