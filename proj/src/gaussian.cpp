#include "mml/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mml/error.hpp"
#include "mml/kernels.hpp"
#include "mml/rng.hpp"

namespace mml {

namespace {

void require_same_dim(const GaussianModel& p, const GaussianModel& q) {
  if (p.dim() != q.dim())
    throw ValidationError("dimension mismatch: " + std::to_string(p.dim()) + " vs " +
                          std::to_string(q.dim()));
}

void require_zero_means(const GaussianModel& p, const GaussianModel& q) {
  if (!p.zero_mean() || !q.zero_mean())
    throw ValidationError("formula applies to zero-mean models; use kl_divergence for general means");
}

}  // namespace

GaussianModel::GaussianModel(Graph graph, Vector mean, Matrix precision)
    : graph_(std::move(graph)), mean_(std::move(mean)), precision_(std::move(precision)) {
  const int d = graph_.dim();
  if (mean_.size() != d || precision_.rows() != d || precision_.cols() != d)
    throw ValidationError("Gaussian model dimensions do not match the graph (d=" +
                          std::to_string(d) + ")");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      if (precision_(i, j) != precision_(j, i))
        throw ValidationError("precision is not symmetric at (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")");
      if (precision_(i, j) != 0.0 && !graph_.has_edge(i + 1, j + 1))
        throw ValidationError("precision entry (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") is nonzero off the graph");
    }
  Eigen::LLT<Matrix> llt(precision_);
  if (llt.info() != Eigen::Success)
    throw ValidationError("precision matrix is not positive definite");
  factor_ = llt.matrixL();
  log_det_precision_ = 2.0 * factor_.diagonal().array().log().sum();
  covariance_ = precision_.inverse();
  log_norm_const_ = -0.5 * d * std::log(2.0 * std::numbers::pi) + 0.5 * log_det_precision_;

  const double residual = (covariance_ * precision_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-8))
    throw ValidationError("precision is too ill-conditioned to invert (residual " +
                          std::to_string(residual) + ")");
}

GaussianModel precision_from_signs(const Graph& graph, std::span<const int> signs, double delta,
                                   bool allow_out_of_hypothesis) {
  const std::size_t m = graph.edge_count();
  if (signs.size() != m)
    throw ValidationError("sign vector has length " + std::to_string(signs.size()) +
                          ", graph has " + std::to_string(m) + " edges");
  if (!(delta >= 0.0)) throw ValidationError("delta must be nonnegative");
  if (!allow_out_of_hypothesis && delta * delta * static_cast<double>(m) > 0.125 * (1.0 + 1e-12))
    throw ValidationError("delta^2 m = " + std::to_string(delta * delta * static_cast<double>(m)) +
                          " exceeds 1/8");
  const int d = graph.dim();
  Matrix prec = Matrix::Identity(d, d);
  for (std::size_t k = 0; k < m; ++k) {
    if (signs[k] != 1 && signs[k] != -1) throw ValidationError("sign entries must be +1 or -1");
    const auto& e = graph.edges()[k];
    prec(e.i - 1, e.j - 1) = delta * signs[k];
    prec(e.j - 1, e.i - 1) = delta * signs[k];
  }
  return GaussianModel(graph, Vector::Zero(d), std::move(prec));
}

SignPacking family_packing(int m, const FamilyOptions& options) {
  if (options.mode == FamilyOptions::Mode::random)
    return randomized_packing(m, options.target.value_or(guaranteed_packing_size(m)), options.seed);
  if (options.full) return build_packing(m);
  return build_packing(m, options.target.value_or(guaranteed_packing_size(m)));
}

HardGaussianFamily make_hard_gaussian_family(const Graph& graph, double delta,
                                             const FamilyOptions& options) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  const int m = static_cast<int>(graph.edge_count());
  HardGaussianFamily fam{graph, delta, {}, {}};
  if (m == 0) {
    fam.packing = SignPacking{0, {SignVector{}}};
  } else {
    fam.packing = family_packing(m, options);
  }
  for (const auto& s : fam.packing.vectors) fam.models.push_back(precision_from_signs(graph, s, delta));
  return fam;
}

HardGaussianFamily build_hard_gaussian_family(const Graph& graph, std::size_t n, double c2,
                                              const FamilyOptions& options) {
  if (n == 0) throw ValidationError("n must be positive");
  if (!(c2 > 0.0)) throw ValidationError("c2 must be positive");
  const double delta = c2 / std::sqrt(static_cast<double>(n));
  const double m = static_cast<double>(graph.edge_count());
  if (delta * delta * m > 0.125 * (1.0 + 1e-12))
    throw ValidationError("n=" + std::to_string(n) + " is too small for m=" +
                          std::to_string(graph.edge_count()) + " at c2=" + std::to_string(c2) +
                          ": need delta*sqrt(2m) <= 1/2, i.e. n >= 8 c2^2 m");
  return make_hard_gaussian_family(graph, delta, options);
}

double log_density(const GaussianModel& model, const Vector& x) {
  if (x.size() != model.dim())
    throw ValidationError("point has dimension " + std::to_string(x.size()) + ", model has " +
                          std::to_string(model.dim()));
  const Vector r = x - model.mean();
  return -0.5 * r.dot(model.precision() * r) + model.log_norm_const();
}

Matrix sample(const GaussianModel& model, std::size_t count, std::uint64_t seed) {
  const int d = model.dim();
  Rng rng(seed);
  Matrix z(d, static_cast<Eigen::Index>(count));
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    for (int i = 0; i < d; ++i) z(i, c) = rng.normal();
  Matrix x = model.precision_factor().transpose().triangularView<Eigen::Upper>().solve(z);
  x.colwise() += model.mean();
  return x;
}

double kl_divergence(const GaussianModel& p, const GaussianModel& q) {
  require_same_dim(p, q);
  const Vector dm = q.mean() - p.mean();
  const double trace = (q.precision() * p.covariance()).trace();
  // log det Sigma_q - log det Sigma_p = log det P_p - log det P_q
  const double kl = 0.5 * (trace - p.dim() + dm.dot(q.precision() * dm) + p.log_det_precision() -
                           q.log_det_precision());
  return std::max(kl, 0.0);
}

double jeffreys_divergence(const GaussianModel& p, const GaussianModel& q) {
  require_same_dim(p, q);
  require_zero_means(p, q);
  return 0.5 * ((p.covariance() - q.covariance()) * (q.precision() - p.precision())).trace();
}

Matrix symmetric_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

double tv_lower_bound_frobenius(const GaussianModel& p, const GaussianModel& q) {
  require_same_dim(p, q);
  require_zero_means(p, q);
  const Matrix root = symmetric_sqrt(p.covariance());
  const Matrix m = root * q.precision() * root - Matrix::Identity(p.dim(), p.dim());
  return std::min(1.0, m.norm()) / 100.0;
}

McEstimate tv_monte_carlo(const GaussianModel& p, const GaussianModel& q, std::size_t count,
                          std::uint64_t seed) {
  require_same_dim(p, q);
  if (count == 0) throw ValidationError("Monte Carlo count must be positive");
  const Matrix xs = sample(p, count, seed);
  std::vector<double> vals(count);
  kernels::parallel_fill(vals, [&](std::size_t c) {
    const Vector x = xs.col(static_cast<Eigen::Index>(c));
    const double log_ratio = log_density(q, x) - log_density(p, x);
    return log_ratio >= 0.0 ? 0.0 : -std::expm1(log_ratio);
  });
  const double n = static_cast<double>(count);
  const double mean = kernels::blocked_sum(count, [&](std::size_t i) { return vals[i]; }) / n;
  const double ss = kernels::blocked_sum(count, [&](std::size_t i) {
    const double r = vals[i] - mean;
    return r * r;
  });
  const double sd = count > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, 1.96 * sd / std::sqrt(n)};
}

}  // namespace mml
