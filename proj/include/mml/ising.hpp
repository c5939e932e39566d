#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mml/gaussian.hpp"
#include "mml/graph.hpp"
#include "mml/packing.hpp"

namespace mml {

// Configuration index: bit j set iff x_{j+1} = +1.
using Config = std::uint32_t;

inline constexpr int kDefaultExactCutoff = 20;

// Largest d for exact hypercube enumeration; MML_EXACT_CUTOFF overrides the
// default of 20 (values above 30 are clamped).
int exact_cutoff();

// Throws CutoffError when d exceeds exact_cutoff().
void require_exact(int d);

std::vector<int> config_to_spins(Config x, int d);
Config spins_to_config(std::span<const int> x);

// Distribution on {-1,1}^d proportional to exp(x^T W x + h^T x), with W
// symmetric, zero-diagonal and supported on the graph's edges.
class IsingModel {
 public:
  IsingModel(Graph graph, Vector field, Matrix interactions);

  const Graph& graph() const { return graph_; }
  int dim() const { return graph_.dim(); }
  const Vector& field() const { return field_; }
  const Matrix& interactions() const { return interactions_; }
  // log Z, cached at construction when d <= exact_cutoff().
  std::optional<double> cached_log_partition() const { return log_partition_; }

 private:
  Graph graph_;
  Vector field_;
  Matrix interactions_;
  std::optional<double> log_partition_;
};

// x^T W x + h^T x. Throws ValidationError for entries other than +-1.
double hamiltonian(const IsingModel& model, std::span<const int> x);
double hamiltonian(const IsingModel& model, Config x);

double log_partition(const IsingModel& model);

// Probabilities indexed by configuration; sums to 1.
std::vector<double> pmf(const IsingModel& model);
std::vector<double> log_pmf(const IsingModel& model);

// Zero field, W_ij = delta * s_k on the k-th edge {i, j}.
IsingModel interactions_from_signs(const Graph& graph, std::span<const int> signs, double delta);

// No interactions, h_i = delta * s_i.
IsingModel fields_from_signs(int d, std::span<const int> signs, double delta);

struct HardIsingFamily {
  Graph graph;
  double delta = 0.0;
  SignPacking packing;
  std::vector<IsingModel> models;
};

struct ProductIsingFamily {
  int d = 0;
  double delta = 0.0;
  SignPacking packing;
  std::vector<IsingModel> models;
};

// delta = c2 / sqrt(n), with the same delta^2 m <= 1/8 guard as the Gaussian
// family. An edgeless graph yields the single uniform model.
HardIsingFamily build_hard_ising_family(const Graph& graph, std::size_t n, double c2,
                                        const FamilyOptions& options = {});
HardIsingFamily make_hard_ising_family(const Graph& graph, double delta,
                                       const FamilyOptions& options = {});

// Fields +-delta with signs from a packing over length-d vectors,
// delta = c2 / sqrt(n).
ProductIsingFamily build_product_family(int d, std::size_t n, double c2,
                                        const FamilyOptions& options = {});
ProductIsingFamily make_product_family(int d, double delta, const FamilyOptions& options = {});

// i.i.d. draws by inverting the cumulative pmf.
std::vector<Config> sample_exact(const IsingModel& model, std::size_t count, std::uint64_t seed);

// Sampler over the cumulative pmf, reusable across many draws.
class ExactSampler {
 public:
  explicit ExactSampler(const IsingModel& model);
  explicit ExactSampler(std::span<const double> probabilities);
  std::vector<Config> draw(std::size_t count, std::uint64_t seed) const;

 private:
  std::vector<double> cdf_;
};

struct GibbsOptions {
  // Sweeps discarded before the first draw; negative means 1000 * d.
  long burn_in = -1;
  // Sweeps between kept draws; 0 means d.
  long thin = 0;
};

// Systematic-scan single-site Gibbs sampler. Site i becomes +1 with
// probability 1 / (1 + exp(-2 (h_i + 2 sum_j W_ij x_j))).
std::vector<std::vector<int>> sample_gibbs(const IsingModel& model, std::size_t count,
                                           const GibbsOptions& options, std::uint64_t seed);

double tv_exact(const IsingModel& p, const IsingModel& q);
double kl_exact(const IsingModel& p, const IsingModel& q);

// E[(X^T W X)^k] for X uniform on {-1,1}^d, k in {1, 2, 4, 8}.
double quadratic_form_moment(const Matrix& w, int k);

// E[exp(t X^T W X)] for X uniform on {-1,1}^d; equals 2^{-d} Z(tW).
double exp_moment(const Matrix& w, double t);

}  // namespace mml
