#pragma once

#include <cstddef>
#include <string_view>

namespace mml {

// Generalized Fano inputs for a finite class: pairwise L1 separation alpha,
// pairwise KL bound beta.
struct FanoInputs {
  double alpha = 0.0;
  double beta = 0.0;
  double class_size = 2.0;  // |F|; real-valued so 2^(m/5) can be passed directly
  std::size_t n = 1;
};

// (alpha/4) * max{0, 1 - (n beta + log 2) / log |F|}
double fano_lower_bound(const FanoInputs& in);

enum class ClassFamily { gaussian, ising, ising_no_field, gaussian_unknown_graph, ising_unknown_graph };

ClassFamily parse_class_family(std::string_view name);
std::string_view to_string(ClassFamily family);

// VC dimension of the Yatracos class: m+2d+1 (gaussian), m+d+1 (ising),
// m+1 (ising without field); the unknown-graph variants return the
// order-level surrogate ceil((m+d) log d) with its constant set to 1.
std::size_t yatracos_vc_dimension(ClassFamily family, int d, std::size_t m);

// True for the single-distribution class (no field, no edges), whose risk is 0.
bool is_trivial_class(ClassFamily family, std::size_t m);

struct VcInputs {
  ClassFamily family = ClassFamily::gaussian;
  int d = 1;
  std::size_t m = 0;
  std::size_t n = 1;
};

// min{1, c sqrt(VC / n)}, or 0 for the trivial class.
double vc_upper_bound(const VcInputs& in, double c = 1.0);

// Smallest n with vc_upper_bound <= eps, eps in (0, 1).
std::size_t sample_complexity(ClassFamily family, int d, std::size_t m, double eps, double c = 1.0);

}  // namespace mml
