#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mml/graph.hpp"
#include "mml/packing.hpp"

namespace mml {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Multivariate normal whose precision matrix vanishes off the graph's edges.
class GaussianModel {
 public:
  // Throws ValidationError if the precision is asymmetric, has an entry on a
  // non-edge, or is not positive definite.
  GaussianModel(Graph graph, Vector mean, Matrix precision);

  const Graph& graph() const { return graph_; }
  int dim() const { return graph_.dim(); }
  const Vector& mean() const { return mean_; }
  const Matrix& precision() const { return precision_; }
  const Matrix& covariance() const { return covariance_; }
  // Lower-triangular L with precision = L L^T.
  const Matrix& precision_factor() const { return factor_; }
  double log_det_precision() const { return log_det_precision_; }
  // -(d/2) log(2 pi) + (1/2) log det(precision)
  double log_norm_const() const { return log_norm_const_; }
  bool zero_mean() const { return mean_.isZero(0.0); }

 private:
  Graph graph_;
  Vector mean_;
  Matrix precision_;
  Matrix covariance_;
  Matrix factor_;
  double log_det_precision_ = 0.0;
  double log_norm_const_ = 0.0;
};

// Zero-mean model with unit diagonal precision and entry delta * s_k on the
// k-th edge. Requires delta^2 m <= 1/8 unless allow_out_of_hypothesis is set,
// in which case only positive definiteness is required.
GaussianModel precision_from_signs(const Graph& graph, std::span<const int> signs, double delta,
                                   bool allow_out_of_hypothesis = false);

// How the sign packing behind a hard family is produced.
struct FamilyOptions {
  enum class Mode { exhaustive, random };
  Mode mode = Mode::exhaustive;
  // Number of members; defaults to ceil(2^(m/5)). Ignored when full is set.
  std::optional<std::size_t> target;
  // Run the exhaustive greedy to completion instead of stopping at target.
  bool full = false;
  std::uint64_t seed = 0;
};

// Packing behind a family over sign vectors of length m (m >= 1).
SignPacking family_packing(int m, const FamilyOptions& options);

struct HardGaussianFamily {
  Graph graph;
  double delta = 0.0;
  SignPacking packing;
  std::vector<GaussianModel> models;
};

// delta = c2 / sqrt(n); rejects (n, c2) for which delta^2 m > 1/8. An
// edgeless graph yields the single standard normal model.
HardGaussianFamily build_hard_gaussian_family(const Graph& graph, std::size_t n, double c2,
                                              const FamilyOptions& options = {});

// Same construction at a given delta.
HardGaussianFamily make_hard_gaussian_family(const Graph& graph, double delta,
                                             const FamilyOptions& options = {});

double log_density(const GaussianModel& model, const Vector& x);

// count draws as the columns of a d x count matrix:
// x = mean + solve(L^T, z), z standard normal from the seeded stream.
Matrix sample(const GaussianModel& model, std::size_t count, std::uint64_t seed);

double kl_divergence(const GaussianModel& p, const GaussianModel& q);

// tr((Sigma_p - Sigma_q)(Sigma_q^{-1} - Sigma_p^{-1})) / 2, zero means only.
double jeffreys_divergence(const GaussianModel& p, const GaussianModel& q);

// Symmetric positive semidefinite square root by eigendecomposition.
Matrix symmetric_sqrt(const Matrix& a);

// min{1, ||Sigma_p^{1/2} Sigma_q^{-1} Sigma_p^{1/2} - I||_F} / 100, zero means only.
double tv_lower_bound_frobenius(const GaussianModel& p, const GaussianModel& q);

struct McEstimate {
  double estimate = 0.0;
  double half_width = 0.0;  // 1.96 standard errors
};

// Mean over x ~ p of max{0, 1 - q(x)/p(x)}, evaluated in log space; its
// expectation is exactly TV(p, q).
McEstimate tv_monte_carlo(const GaussianModel& p, const GaussianModel& q, std::size_t count,
                          std::uint64_t seed);

}  // namespace mml
