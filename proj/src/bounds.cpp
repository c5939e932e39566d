#include "mml/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mml/error.hpp"

namespace mml {

double fano_lower_bound(const FanoInputs& in) {
  if (!(in.class_size >= 2.0)) throw ValidationError("Fano bound needs a class of size >= 2");
  if (!(in.alpha >= 0.0) || in.alpha > 2.0) throw ValidationError("alpha must lie in [0, 2]");
  if (!(in.beta >= 0.0)) throw ValidationError("beta must be nonnegative");
  if (in.n == 0) throw ValidationError("n must be positive");
  const double bracket =
      1.0 - (static_cast<double>(in.n) * in.beta + std::log(2.0)) / std::log(in.class_size);
  return in.alpha / 4.0 * std::max(0.0, bracket);
}

ClassFamily parse_class_family(std::string_view name) {
  if (name == "gaussian") return ClassFamily::gaussian;
  if (name == "ising") return ClassFamily::ising;
  if (name == "ising-no-field" || name == "ising_no_field") return ClassFamily::ising_no_field;
  if (name == "gaussian-unknown-graph" || name == "gaussian_unknown_graph")
    return ClassFamily::gaussian_unknown_graph;
  if (name == "ising-unknown-graph" || name == "ising_unknown_graph")
    return ClassFamily::ising_unknown_graph;
  throw ValidationError("unknown family '" + std::string(name) +
                        "' (expected gaussian, ising, ising-no-field, gaussian-unknown-graph, "
                        "ising-unknown-graph)");
}

std::string_view to_string(ClassFamily family) {
  switch (family) {
    case ClassFamily::gaussian: return "gaussian";
    case ClassFamily::ising: return "ising";
    case ClassFamily::ising_no_field: return "ising-no-field";
    case ClassFamily::gaussian_unknown_graph: return "gaussian-unknown-graph";
    case ClassFamily::ising_unknown_graph: return "ising-unknown-graph";
  }
  return "unknown";
}

std::size_t yatracos_vc_dimension(ClassFamily family, int d, std::size_t m) {
  if (d < 1) throw ValidationError("d must be positive");
  const auto du = static_cast<std::size_t>(d);
  if (m > du * (du - 1) / 2) throw ValidationError("m exceeds d(d-1)/2");
  switch (family) {
    case ClassFamily::gaussian: return m + 2 * du + 1;
    case ClassFamily::ising: return m + du + 1;
    case ClassFamily::ising_no_field: return m + 1;
    case ClassFamily::gaussian_unknown_graph:
    case ClassFamily::ising_unknown_graph:
      return static_cast<std::size_t>(
          std::ceil(static_cast<double>(m + du) * std::log(static_cast<double>(d))));
  }
  return 0;
}

bool is_trivial_class(ClassFamily family, std::size_t m) {
  return family == ClassFamily::ising_no_field && m == 0;
}

double vc_upper_bound(const VcInputs& in, double c) {
  if (in.n == 0) throw ValidationError("n must be positive");
  if (!(c > 0.0)) throw ValidationError("constant c must be positive");
  const auto vc = yatracos_vc_dimension(in.family, in.d, in.m);
  if (is_trivial_class(in.family, in.m)) return 0.0;
  return std::min(1.0, c * std::sqrt(static_cast<double>(vc) / static_cast<double>(in.n)));
}

std::size_t sample_complexity(ClassFamily family, int d, std::size_t m, double eps, double c) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in the open interval (0, 1)");
  if (!(c > 0.0)) throw ValidationError("constant c must be positive");
  const auto vc = yatracos_vc_dimension(family, d, m);
  if (is_trivial_class(family, m)) return 0;
  auto bound_at = [&](std::size_t n) { return vc_upper_bound({family, d, m, n}, c); };
  auto n = static_cast<std::size_t>(std::ceil(c * c * static_cast<double>(vc) / (eps * eps)));
  n = std::max<std::size_t>(n, 1);
  // Settle floating-point rounding at the crossing.
  while (n > 1 && bound_at(n - 1) <= eps) --n;
  while (bound_at(n) > eps) ++n;
  return n;
}

}  // namespace mml
