#pragma once

// Data-parallel kernels over the 2^d Ising configurations and over Monte
// Carlo draws. Every reduction splits its index range into fixed blocks and
// combines block partials in block order, so results are bit-identical for
// any OpenMP thread count. Serial reference versions of the Ising quantities
// live in reference.hpp and are kept for testing and benchmarking.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mml::kernels {

inline constexpr std::size_t kBlockSize = 4096;

void set_num_threads(int threads);
int max_threads();

namespace detail {
inline std::size_t block_count(std::size_t n) { return (n + kBlockSize - 1) / kBlockSize; }
}  // namespace detail

// Sum of f(i) over [0, n).
template <class F>
double blocked_sum(std::size_t n, F&& f) {
  const std::size_t blocks = detail::block_count(n);
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
    const std::size_t hi = lo + kBlockSize < n ? lo + kBlockSize : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Writes f(i) to out[i] for i in [0, out.size()).
template <class F>
void parallel_fill(std::span<double> out, F&& f) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i)
    out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
}

double max_value(std::span<const double> values);

// log(sum_i exp(values[i])), shifted by the maximum.
double log_sum_exp(std::span<const double> values);

// Hamiltonian x^T W x + h^T x in edge form: the symmetric pair (a, b) with
// a < b contributes 2 W_ab x_a x_b. Configurations are integers with bit j
// set iff x_j = +1.
struct EnergyTerms {
  struct Pair {
    int a;
    int b;
    double weight;  // 2 W_ab
  };
  int d = 0;
  std::vector<double> field;
  std::vector<Pair> pairs;

  static EnergyTerms from(const Eigen::MatrixXd& interactions, const Eigen::VectorXd& field);

  double operator()(std::uint64_t x) const {
    double e = 0.0;
    for (const auto& p : pairs) {
      const bool differ = ((x >> p.a) ^ (x >> p.b)) & 1U;
      e += differ ? -p.weight : p.weight;
    }
    for (int i = 0; i < d; ++i) e += ((x >> i) & 1U) ? field[static_cast<std::size_t>(i)]
                                                       : -field[static_cast<std::size_t>(i)];
    return e;
  }
};

// Energies of all 2^d configurations.
std::vector<double> energies(const EnergyTerms& terms);

}  // namespace mml::kernels
