#pragma once

// Independent numerical oracles used by the tests.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 200'000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double normal_pdf(double x, double mean, double var) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

// KL(N(m1, v1) || N(m2, v2)) by quadrature.
inline double kl_1d(double m1, double v1, double m2, double v2) {
  const double span = 40.0 * std::sqrt(std::max(v1, v2)) + std::abs(m1) + std::abs(m2);
  return simpson(
      [&](double x) {
        const double p = normal_pdf(x, m1, v1);
        if (p == 0.0) return 0.0;
        const double log_ratio =
            -0.5 * (x - m1) * (x - m1) / v1 + 0.5 * (x - m2) * (x - m2) / v2 - 0.5 * std::log(v1 / v2);
        return p * log_ratio;
      },
      -span, span);
}

inline double tv_1d(double m1, double v1, double m2, double v2) {
  const double span = 40.0 * std::sqrt(std::max(v1, v2)) + std::abs(m1) + std::abs(m2);
  return 0.5 * simpson([&](double x) { return std::abs(normal_pdf(x, m1, v1) - normal_pdf(x, m2, v2)); }, -span,
                       span);
}

// P(X > t) for X ~ Binomial(n, p), by direct summation in log space.
inline double binomial_upper_tail(int n, double p, double t) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (!(k > t)) continue;
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                            k * std::log(p) + (n - k) * std::log1p(-p);
    s += std::exp(log_term);
  }
  return s;
}

}  // namespace oracle
