#include "mml/ising.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "mml/error.hpp"
#include "mml/kernels.hpp"
#include "mml/rng.hpp"

namespace mml {

namespace {

void require_same_dim(const IsingModel& p, const IsingModel& q) {
  if (p.dim() != q.dim())
    throw ValidationError("dimension mismatch: " + std::to_string(p.dim()) + " vs " +
                          std::to_string(q.dim()));
}

void require_zero_diagonal_symmetric(const Matrix& w) {
  if (w.rows() != w.cols()) throw ValidationError("interaction matrix must be square");
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (w(i, i) != 0.0) throw ValidationError("interaction matrix must have a zero diagonal");
    for (Eigen::Index j = i + 1; j < w.cols(); ++j)
      if (w(i, j) != w(j, i)) throw ValidationError("interaction matrix must be symmetric");
  }
}

// Energies x^T W x over every configuration for a bare interaction matrix.
std::vector<double> quadratic_forms(const Matrix& w) {
  require_zero_diagonal_symmetric(w);
  const int d = static_cast<int>(w.rows());
  require_exact(d);
  return kernels::energies(kernels::EnergyTerms::from(w, Vector::Zero(d)));
}

double delta_from_n(std::size_t n, double c2) {
  if (n == 0) throw ValidationError("n must be positive");
  if (!(c2 > 0.0)) throw ValidationError("c2 must be positive");
  return c2 / std::sqrt(static_cast<double>(n));
}

}  // namespace

int exact_cutoff() {
  static const int cutoff = [] {
    if (const char* env = std::getenv("MML_EXACT_CUTOFF")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 30L));
    }
    return kDefaultExactCutoff;
  }();
  return cutoff;
}

void require_exact(int d) {
  if (d > exact_cutoff())
    throw CutoffError("exact enumeration needs d <= " + std::to_string(exact_cutoff()) +
                      ", got d=" + std::to_string(d) +
                      " (raise MML_EXACT_CUTOFF or use the Gibbs sampler)");
}

std::vector<int> config_to_spins(Config x, int d) {
  std::vector<int> s(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] = ((x >> j) & 1U) ? 1 : -1;
  return s;
}

Config spins_to_config(std::span<const int> x) {
  if (x.size() > 32) throw ValidationError("configuration index supports at most 32 sites");
  Config c = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 1 && x[j] != -1) throw ValidationError("spin entries must be +1 or -1");
    if (x[j] == 1) c |= Config{1} << j;
  }
  return c;
}

IsingModel::IsingModel(Graph graph, Vector field, Matrix interactions)
    : graph_(std::move(graph)), field_(std::move(field)), interactions_(std::move(interactions)) {
  const int d = graph_.dim();
  if (field_.size() != d || interactions_.rows() != d || interactions_.cols() != d)
    throw ValidationError("Ising model dimensions do not match the graph (d=" + std::to_string(d) +
                          ")");
  require_zero_diagonal_symmetric(interactions_);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (interactions_(i, j) != 0.0 && !graph_.has_edge(i + 1, j + 1))
        throw ValidationError("interaction (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") is nonzero off the graph");
  if (d <= exact_cutoff()) {
    const auto e = kernels::energies(kernels::EnergyTerms::from(interactions_, field_));
    log_partition_ = kernels::log_sum_exp(e);
  }
}

double hamiltonian(const IsingModel& model, std::span<const int> x) {
  if (x.size() != static_cast<std::size_t>(model.dim()))
    throw ValidationError("configuration has length " + std::to_string(x.size()) +
                          ", model has d=" + std::to_string(model.dim()));
  Vector v(model.dim());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 1 && x[i] != -1) throw ValidationError("spin entries must be +1 or -1");
    v(static_cast<Eigen::Index>(i)) = x[i];
  }
  return v.dot(model.interactions() * v) + model.field().dot(v);
}

double hamiltonian(const IsingModel& model, Config x) {
  return kernels::EnergyTerms::from(model.interactions(), model.field())(x);
}

double log_partition(const IsingModel& model) {
  require_exact(model.dim());
  return *model.cached_log_partition();
}

std::vector<double> log_pmf(const IsingModel& model) {
  require_exact(model.dim());
  auto e = kernels::energies(kernels::EnergyTerms::from(model.interactions(), model.field()));
  const double log_z = *model.cached_log_partition();
  kernels::parallel_fill(e, [&](std::size_t x) { return e[x] - log_z; });
  return e;
}

std::vector<double> pmf(const IsingModel& model) {
  auto p = log_pmf(model);
  kernels::parallel_fill(p, [&](std::size_t x) { return std::exp(p[x]); });
  return p;
}

IsingModel interactions_from_signs(const Graph& graph, std::span<const int> signs, double delta) {
  const std::size_t m = graph.edge_count();
  if (signs.size() != m)
    throw ValidationError("sign vector has length " + std::to_string(signs.size()) +
                          ", graph has " + std::to_string(m) + " edges");
  const int d = graph.dim();
  Matrix w = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < m; ++k) {
    if (signs[k] != 1 && signs[k] != -1) throw ValidationError("sign entries must be +1 or -1");
    const auto& e = graph.edges()[k];
    w(e.i - 1, e.j - 1) = delta * signs[k];
    w(e.j - 1, e.i - 1) = delta * signs[k];
  }
  return IsingModel(graph, Vector::Zero(d), std::move(w));
}

IsingModel fields_from_signs(int d, std::span<const int> signs, double delta) {
  if (signs.size() != static_cast<std::size_t>(d))
    throw ValidationError("sign vector has length " + std::to_string(signs.size()) +
                          ", expected d=" + std::to_string(d));
  Vector h(d);
  for (int i = 0; i < d; ++i) {
    const int s = signs[static_cast<std::size_t>(i)];
    if (s != 1 && s != -1) throw ValidationError("sign entries must be +1 or -1");
    h(i) = delta * s;
  }
  return IsingModel(standard_graph(GraphKind::empty, d), std::move(h), Matrix::Zero(d, d));
}

HardIsingFamily make_hard_ising_family(const Graph& graph, double delta,
                                       const FamilyOptions& options) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  const int m = static_cast<int>(graph.edge_count());
  HardIsingFamily fam{graph, delta, {}, {}};
  fam.packing = m == 0 ? SignPacking{0, {SignVector{}}} : family_packing(m, options);
  for (const auto& s : fam.packing.vectors)
    fam.models.push_back(interactions_from_signs(graph, s, delta));
  return fam;
}

HardIsingFamily build_hard_ising_family(const Graph& graph, std::size_t n, double c2,
                                        const FamilyOptions& options) {
  const double delta = delta_from_n(n, c2);
  if (delta * delta * static_cast<double>(graph.edge_count()) > 0.125 * (1.0 + 1e-12))
    throw ValidationError("n=" + std::to_string(n) + " is too small for m=" +
                          std::to_string(graph.edge_count()) + " at c2=" + std::to_string(c2) +
                          ": need delta*sqrt(2m) <= 1/2, i.e. n >= 8 c2^2 m");
  return make_hard_ising_family(graph, delta, options);
}

ProductIsingFamily make_product_family(int d, double delta, const FamilyOptions& options) {
  if (d < 1) throw ValidationError("d must be positive");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  ProductIsingFamily fam{d, delta, family_packing(d, options), {}};
  for (const auto& s : fam.packing.vectors) fam.models.push_back(fields_from_signs(d, s, delta));
  return fam;
}

ProductIsingFamily build_product_family(int d, std::size_t n, double c2,
                                        const FamilyOptions& options) {
  return make_product_family(d, delta_from_n(n, c2), options);
}

ExactSampler::ExactSampler(const IsingModel& model) : ExactSampler(pmf(model)) {}

ExactSampler::ExactSampler(std::span<const double> probabilities) {
  cdf_.resize(probabilities.size());
  double acc = 0.0;
  for (std::size_t x = 0; x < probabilities.size(); ++x) {
    acc += probabilities[x];
    cdf_[x] = acc;
  }
}

std::vector<Config> ExactSampler::draw(std::size_t count, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<Config> out(count);
  const double total = cdf_.back();
  for (auto& x : out) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    x = static_cast<Config>(it - cdf_.begin());
  }
  return out;
}

std::vector<Config> sample_exact(const IsingModel& model, std::size_t count, std::uint64_t seed) {
  return ExactSampler(model).draw(count, seed);
}

std::vector<std::vector<int>> sample_gibbs(const IsingModel& model, std::size_t count,
                                           const GibbsOptions& options, std::uint64_t seed) {
  const int d = model.dim();
  const long burn_in = options.burn_in < 0 ? 1000L * d : options.burn_in;
  const long thin = options.thin == 0 ? d : options.thin;
  if (thin < 1) throw ValidationError("thin must be >= 1");

  const Matrix& w = model.interactions();
  std::vector<std::vector<std::pair<int, double>>> nbrs(static_cast<std::size_t>(d));
  for (const auto& e : model.graph().edges()) {
    const double wij = w(e.i - 1, e.j - 1);
    nbrs[static_cast<std::size_t>(e.i - 1)].emplace_back(e.j - 1, wij);
    nbrs[static_cast<std::size_t>(e.j - 1)].emplace_back(e.i - 1, wij);
  }

  Rng rng(seed);
  std::vector<int> x(static_cast<std::size_t>(d));
  for (auto& v : x) v = (rng.bits() >> 63) ? 1 : -1;
  auto sweep = [&] {
    for (int i = 0; i < d; ++i) {
      double local = model.field()(i);
      for (auto [j, wij] : nbrs[static_cast<std::size_t>(i)])
        local += 2.0 * wij * x[static_cast<std::size_t>(j)];
      const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * local));
      x[static_cast<std::size_t>(i)] = rng.uniform() < p_plus ? 1 : -1;
    }
  };
  for (long s = 0; s < burn_in; ++s) sweep();
  std::vector<std::vector<int>> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    for (long s = 0; s < thin; ++s) sweep();
    out.push_back(x);
  }
  return out;
}

double tv_exact(const IsingModel& p, const IsingModel& q) {
  require_same_dim(p, q);
  const auto fp = pmf(p);
  const auto fq = pmf(q);
  return 0.5 * kernels::blocked_sum(fp.size(), [&](std::size_t x) { return std::abs(fp[x] - fq[x]); });
}

double kl_exact(const IsingModel& p, const IsingModel& q) {
  require_same_dim(p, q);
  const auto lp = log_pmf(p);
  const auto lq = log_pmf(q);
  const double kl = kernels::blocked_sum(lp.size(), [&](std::size_t x) {
    return std::exp(lp[x]) * (lp[x] - lq[x]);
  });
  return std::max(kl, 0.0);
}

double quadratic_form_moment(const Matrix& w, int k) {
  if (k != 1 && k != 2 && k != 4 && k != 8)
    throw ValidationError("moment order must be 1, 2, 4 or 8, got " + std::to_string(k));
  const auto q = quadratic_forms(w);
  const double s = kernels::blocked_sum(q.size(), [&](std::size_t x) {
    double v = q[x];
    double r = v;
    for (int t = 1; t < k; ++t) r *= v;
    return r;
  });
  return s / static_cast<double>(q.size());
}

double exp_moment(const Matrix& w, double t) {
  auto q = quadratic_forms(w);
  kernels::parallel_fill(q, [&](std::size_t x) { return t * q[x]; });
  return std::exp(kernels::log_sum_exp(q) - static_cast<double>(w.rows()) * std::log(2.0));
}

}  // namespace mml
