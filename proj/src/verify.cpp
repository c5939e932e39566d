#include "mml/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mml/error.hpp"
#include "mml/estimation.hpp"
#include "mml/gaussian.hpp"
#include "mml/ising.hpp"
#include "mml/io.hpp"
#include "mml/rng.hpp"

namespace mml::verify {

namespace {

constexpr double kStabilityFactor = 2.0;

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.bits() % static_cast<std::uint64_t>(hi - lo + 1));
}

Graph random_graph(Rng& rng, int d_min, int d_max) {
  const int d = uniform_int(rng, d_min, d_max);
  const double p = 0.15 + 0.85 * rng.uniform();
  std::vector<std::pair<int, int>> pairs;
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b)
      if (rng.uniform() < p) pairs.emplace_back(a, b);
  if (pairs.empty() && d >= 2) pairs.emplace_back(1, 2);
  return Graph::make(d, std::move(pairs));
}

SignVector random_signs(Rng& rng, std::size_t m) {
  SignVector s(m);
  for (auto& v : s) v = (rng.bits() >> 63) ? 1 : -1;
  return s;
}

// A second sign vector that differs from s in at least one coordinate.
SignVector distinct_signs(Rng& rng, const SignVector& s) {
  SignVector t = random_signs(rng, s.size());
  if (t == s) {
    const auto k = static_cast<std::size_t>(rng.bits() % s.size());
    t[k] = -t[k];
  }
  return t;
}

// Symmetric matrix with zero diagonal and Gaussian off-diagonal entries.
Matrix random_zero_diagonal(Rng& rng, int d) {
  Matrix w = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) w(i, j) = w(j, i) = rng.normal();
  return w;
}

Matrix random_matrix(Rng& rng, int d) {
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  return a;
}

// Dense zero-mean model with ||precision - I||_F = radius.
GaussianModel random_near_identity(Rng& rng, int d, double radius) {
  Matrix delta = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) delta(i, j) = delta(j, i) = rng.normal();
  const double norm = delta.norm();
  if (norm > 0.0) delta *= radius / norm;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b) pairs.emplace_back(a, b);
  return GaussianModel(Graph::make(d, std::move(pairs)), Vector::Zero(d),
                       Matrix::Identity(d, d) + delta);
}

json graph_summary(const Graph& g) { return io::to_json(g); }

// Records two sweep values of a fitted constant and asserts finiteness and
// agreement within kStabilityFactor.
void require_stable(CheckReport& r, const std::string& name, double a, double b) {
  r.fitted_constants[name] = {{"sweep_a", a}, {"sweep_b", b}};
  const bool finite = std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0;
  if (!finite || std::max(a, b) > kStabilityFactor * std::min(a, b))
    r.fail({{"constant", name}, {"sweep_a", a}, {"sweep_b", b},
            {"reason", "fitted constant not finite or not stable within x2"}});
}

struct IsingPair {
  Graph graph;
  double delta;
  SignVector s;
  SignVector t;
  IsingModel p;
  IsingModel q;
};

IsingPair random_ising_pair(Rng& rng, const IsingSweep& sweep) {
  Graph g = random_graph(rng, sweep.d_min, sweep.d_max);
  const double m = static_cast<double>(g.edge_count());
  const double radius = sweep.max_frobenius * (0.05 + 0.95 * rng.uniform());
  const double delta = radius / std::sqrt(2.0 * m);
  SignVector s = random_signs(rng, g.edge_count());
  SignVector t = distinct_signs(rng, s);
  IsingModel p = interactions_from_signs(g, s, delta);
  IsingModel q = interactions_from_signs(g, t, delta);
  return {std::move(g), delta, std::move(s), std::move(t), std::move(p), std::move(q)};
}

}  // namespace

json to_json(const CheckReport& r) {
  return {{"check", r.check},
          {"status", r.passed ? "PASS" : "FAIL"},
          {"fitted_constants", r.fitted_constants},
          {"failures", r.failures},
          {"details", r.details}};
}

CheckReport verify_psd(std::size_t trials, int d_max, std::uint64_t seed) {
  CheckReport r{"psd"};
  Rng rng(seed);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t boundary = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Graph g = random_graph(rng, 2, d_max);
    const double m = static_cast<double>(g.edge_count());
    // Every tenth instance sits on the boundary delta^2 m = 1/8.
    const double u = (t % 10 == 0) ? 1.0 : rng.uniform();
    const double delta = std::sqrt(u / (8.0 * m));
    boundary += (t % 10 == 0);
    const SignVector s = random_signs(rng, g.edge_count());
    const GaussianModel model = precision_from_signs(g, s, delta);
    const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(model.precision()).eigenvalues();
    lo = std::min(lo, eig.minCoeff());
    hi = std::max(hi, eig.maxCoeff());
    const Matrix delta_m = model.precision() - Matrix::Identity(g.dim(), g.dim());
    const double spectral = Eigen::JacobiSVD<Matrix>(delta_m).singularValues()(0);
    const double frob = delta_m.norm();
    const double expected_frob = delta * std::sqrt(2.0 * m);
    const bool ok = eig.minCoeff() >= 0.5 && eig.maxCoeff() <= 1.5 &&
                    spectral <= frob * (1.0 + 1e-12) &&
                    std::abs(frob - expected_frob) <= 1e-12 * std::max(1.0, expected_frob) &&
                    frob <= 0.5 * (1.0 + 1e-12);
    if (!ok)
      r.fail({{"seed", seed}, {"trial", t}, {"graph", graph_summary(g)}, {"signs", s},
              {"delta", delta}, {"min_eigenvalue", eig.minCoeff()}, {"max_eigenvalue", eig.maxCoeff()}});
  }
  r.details["trials"] = trials;
  r.details["boundary_instances"] = boundary;
  r.details["eigenvalue_range"] = {lo, hi};

  // Out-of-hypothesis probe: star graph with delta^2 m = 1/2.
  const Graph star = standard_graph(GraphKind::star, 9);
  const double delta = std::sqrt(0.5 / static_cast<double>(star.edge_count()));
  const SignVector plus(star.edge_count(), 1);
  const auto probe = precision_from_signs(star, plus, delta, true);
  const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(probe.precision()).eigenvalues();
  r.details["out_of_hypothesis_probe"] = {
      {"graph", "star:9"}, {"delta_sq_m", 0.5}, {"min_eigenvalue", eig.minCoeff()},
      {"max_eigenvalue", eig.maxCoeff()},
      {"inside_interval", eig.minCoeff() >= 0.5 && eig.maxCoeff() <= 1.5}};
  return r;
}

CheckReport verify_frobenius_facts(std::size_t trials, std::uint64_t seed) {
  CheckReport r{"frobenius"};
  Rng rng(seed);
  constexpr double tol = 1e-8;
  auto le = [](double a, double b) { return a <= b * (1.0 + tol) + 1e-12; };
  for (std::size_t t = 0; t < trials; ++t) {
    const int d = uniform_int(rng, 1, 8);
    Matrix a = random_matrix(rng, d);
    const Matrix b = random_matrix(rng, d);
    const bool singular = (t % 5 == 4) && d > 1;
    if (singular) a.col(0).setZero();
    const Vector sa = Eigen::JacobiSVD<Matrix>(a).singularValues();
    const Vector sb = Eigen::JacobiSVD<Matrix>(b).singularValues();
    const double ab = (a * b).norm();
    const double lower = std::max(sa(d - 1) * b.norm(), sb(d - 1) * a.norm());
    const double upper = std::min(sa(0) * b.norm(), sb(0) * a.norm());
    bool ok = le(lower, ab) && le(ab, upper) && le(sa(0), a.norm());
    double inverse_gap = 0.0;
    if (!singular && sa(d - 1) > 1e-6 * sa(0)) {
      const Vector si = Eigen::JacobiSVD<Matrix>(a.inverse()).singularValues();
      for (int i = 0; i < d; ++i)
        inverse_gap = std::max(inverse_gap, std::abs(si(i) * sa(d - 1 - i) - 1.0));
      ok = ok && inverse_gap <= tol;
    }
    if (!ok)
      r.fail({{"seed", seed}, {"trial", t}, {"d", d}, {"lower", lower}, {"ab", ab}, {"upper", upper},
              {"inverse_gap", inverse_gap}});
  }
  r.details["trials"] = trials;
  r.details["relative_tolerance"] = tol;
  return r;
}

CheckReport verify_kl_bounds_gaussian(std::size_t pairs, std::uint64_t seed) {
  CheckReport r{"kl-gaussian"};
  Rng rng(seed);
  double worst_ratio = 0.0, worst_jeffreys_gap = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    const int d = uniform_int(rng, 1, 10);
    const GaussianModel p = random_near_identity(rng, d, 0.5 * rng.uniform());
    const GaussianModel q = random_near_identity(rng, d, 0.5 * rng.uniform());
    const double kl_pq = kl_divergence(p, q);
    const double kl_qp = kl_divergence(q, p);
    const double bound = 2.0 * (q.precision() - p.precision()).squaredNorm();
    const double gap = std::abs(jeffreys_divergence(p, q) - (kl_pq + kl_qp));
    worst_jeffreys_gap = std::max(worst_jeffreys_gap, gap);
    if (bound > 0.0) worst_ratio = std::max(worst_ratio, kl_pq / bound);
    if (!(kl_pq <= bound) || gap > 1e-8)
      r.fail({{"seed", seed}, {"pair", t}, {"d", d}, {"kl", kl_pq}, {"bound", bound}, {"jeffreys_gap", gap}});
  }
  r.details["pairs"] = pairs;
  r.details["max_kl_over_bound"] = worst_ratio;
  r.details["max_jeffreys_gap"] = worst_jeffreys_gap;

  // Scalar example: precision 1.4 vs 0.6, both within 0.4 of the identity.
  const Graph one = Graph::make(1, {});
  const GaussianModel a(one, Vector::Zero(1), Matrix::Constant(1, 1, 1.4));
  const GaussianModel b(one, Vector::Zero(1), Matrix::Constant(1, 1, 0.6));
  r.details["scalar_example"] = {{"kl", kl_divergence(a, b)}, {"bound", 2.0 * 0.8 * 0.8}};
  if (!(kl_divergence(a, b) <= 1.28)) r.fail({{"instance", "scalar 1.4 vs 0.6"}});
  return r;
}

CheckReport verify_tv_lower_gaussian(std::size_t pairs, std::size_t count, std::uint64_t seed) {
  CheckReport r{"tv-gaussian"};
  Rng rng(seed);
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < pairs; ++t) {
    std::optional<GaussianModel> p, q;
    if (t % 2 == 0) {
      const Graph g = random_graph(rng, 2, 8);
      const double delta = std::sqrt(rng.uniform() / (8.0 * static_cast<double>(g.edge_count())));
      const SignVector s = random_signs(rng, g.edge_count());
      p.emplace(precision_from_signs(g, s, delta));
      q.emplace(precision_from_signs(g, distinct_signs(rng, s), delta));
    } else {
      const int d = uniform_int(rng, 1, 8);
      p.emplace(random_near_identity(rng, d, 0.5 * rng.uniform()));
      q.emplace(random_near_identity(rng, d, 0.5 * rng.uniform()));
    }
    const double lb = tv_lower_bound_frobenius(*p, *q);
    const auto mc = tv_monte_carlo(*p, *q, count, derive_seed(seed, t));
    const double slack = mc.estimate + 3.0 * mc.half_width - lb;
    min_slack = std::min(min_slack, slack);
    if (!(slack >= 0.0))
      r.fail({{"seed", seed}, {"pair", t}, {"lower_bound", lb}, {"tv_mc", mc.estimate},
              {"half_width", mc.half_width}});
  }
  r.details["pairs"] = pairs;
  r.details["mc_count"] = count;
  r.details["min_slack"] = min_slack;
  return r;
}

CheckReport verify_moment_identities(std::size_t trials, std::uint64_t seed) {
  CheckReport r{"moments"};
  auto growth = [&](std::uint64_t s) {
    Rng rng(s);
    double c3 = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const int d = uniform_int(rng, 2, 12);
      const Matrix w = random_zero_diagonal(rng, d);
      const double f2 = w.squaredNorm();
      const double m1 = quadratic_form_moment(w, 1);
      const double m2 = quadratic_form_moment(w, 2);
      const double scale = std::max(1.0, 2.0 * f2);
      if (std::abs(m1) > 1e-10 * scale || std::abs(m2 - 2.0 * f2) > 1e-10 * scale)
        r.fail({{"seed", s}, {"trial", t}, {"d", d}, {"first", m1}, {"second", m2}, {"two_frob_sq", 2.0 * f2}});
      for (int k : {2, 4, 8}) {
        const double mk = quadratic_form_moment(w, k);
        c3 = std::max(c3, std::pow(mk, 1.0 / k) / (k * std::sqrt(f2)));
      }
    }
    return c3;
  };
  const double a = growth(derive_seed(seed, "sweep-a"));
  const double b = growth(derive_seed(seed, "sweep-b"));
  require_stable(r, "moment_growth_c3", a, b);
  r.details["trials_per_sweep"] = trials;
  r.details["orders"] = {2, 4, 8};
  return r;
}

CheckReport verify_exp_moment(const IsingSweep& sweep, std::uint64_t seed) {
  CheckReport r{"exp-moment"};
  auto fit = [&](std::uint64_t s) {
    Rng rng(s);
    double c = 0.0;
    for (std::size_t t = 0; t < sweep.instances; ++t) {
      const int d = uniform_int(rng, sweep.d_min, sweep.d_max);
      Matrix w = random_zero_diagonal(rng, d);
      w /= w.norm();
      const double tt = sweep.max_frobenius * (0.05 + 0.95 * rng.uniform());
      const double v = exp_moment(w, tt);
      if (!(v >= 1.0)) r.fail({{"seed", s}, {"instance", t}, {"value", v}, {"reason", "below 1"}});
      c = std::max(c, (v - 1.0) / (tt * tt));
    }
    return c;
  };
  require_stable(r, "exp_moment_c2", fit(derive_seed(seed, "sweep-a")), fit(derive_seed(seed, "sweep-b")));
  r.details["sweep"] = {{"instances", sweep.instances}, {"d", {sweep.d_min, sweep.d_max}},
                        {"t_times_frobenius_max", sweep.max_frobenius}};
  return r;
}

CheckReport verify_partition_bounds(const IsingSweep& sweep, std::uint64_t seed) {
  CheckReport r{"partition"};
  auto fit = [&](std::uint64_t s) {
    Rng rng(s);
    double c = 0.0;
    for (std::size_t t = 0; t < sweep.instances; ++t) {
      const auto pr = random_ising_pair(rng, sweep);
      const double f2 = pr.p.interactions().squaredNorm();
      const double scaled = std::exp(log_partition(pr.p) - pr.p.dim() * std::log(2.0));
      if (!(scaled >= 1.0))
        r.fail({{"seed", s}, {"instance", t}, {"graph", graph_summary(pr.graph)}, {"signs", pr.s},
                {"delta", pr.delta}, {"scaled_partition", scaled}});
      c = std::max(c, (scaled - 1.0) / f2);
    }
    return c;
  };
  require_stable(r, "partition_upper_c2", fit(derive_seed(seed, "sweep-a")),
                 fit(derive_seed(seed, "sweep-b")));
  const IsingModel zero = interactions_from_signs(standard_graph(GraphKind::empty, 6), {}, 0.0);
  r.details["zero_interaction_scaled_partition"] = std::exp(log_partition(zero) - 6 * std::log(2.0));
  r.details["sweep"] = {{"instances", sweep.instances}, {"d", {sweep.d_min, sweep.d_max}},
                        {"frobenius_max", sweep.max_frobenius}};
  return r;
}

CheckReport verify_kl_bounds_ising(const IsingSweep& sweep, std::uint64_t seed) {
  CheckReport r{"kl-ising"};
  auto fit = [&](std::uint64_t s) {
    Rng rng(s);
    double c = 0.0;
    for (std::size_t t = 0; t < sweep.instances; ++t) {
      const auto pr = random_ising_pair(rng, sweep);
      const double denom = pr.p.interactions().squaredNorm() + pr.q.interactions().squaredNorm();
      c = std::max(c, kl_exact(pr.p, pr.q) / denom);
    }
    return c;
  };
  require_stable(r, "ising_kl_c2", fit(derive_seed(seed, "sweep-a")), fit(derive_seed(seed, "sweep-b")));

  const auto fam = make_hard_ising_family(standard_graph(GraphKind::path, 8), 0.05);
  const auto& p = fam.models[0];
  const auto& q = fam.models[1];
  r.details["path8_delta0.05_ratio"] =
      kl_exact(p, q) / (p.interactions().squaredNorm() + q.interactions().squaredNorm());
  r.details["sweep"] = {{"instances", sweep.instances}, {"d", {sweep.d_min, sweep.d_max}},
                        {"frobenius_max", sweep.max_frobenius}};
  return r;
}

CheckReport verify_l1_lower_ising(const IsingSweep& sweep, std::uint64_t seed) {
  CheckReport r{"l1-ising"};
  json joint = json::object();
  auto fit = [&](std::uint64_t s, const char* tag) {
    Rng rng(s);
    double c2 = std::numeric_limits<double>::infinity();
    // Normal equations for L1 ~ a F - b S.
    double ff = 0, fs = 0, ss = 0, fl = 0, sl = 0;
    for (std::size_t t = 0; t < sweep.instances; ++t) {
      const auto pr = random_ising_pair(rng, sweep);
      const double l1 = 2.0 * tv_exact(pr.p, pr.q);
      const double f = (pr.p.interactions() - pr.q.interactions()).norm();
      const double sq = pr.p.interactions().squaredNorm() + pr.q.interactions().squaredNorm();
      c2 = std::min(c2, l1 / f);
      ff += f * f;
      fs += f * sq;
      ss += sq * sq;
      fl += f * l1;
      sl += sq * l1;
    }
    const double det = ff * ss - fs * fs;
    const double a = (fl * ss - sl * fs) / det;
    const double b = -(ff * sl - fs * fl) / det;
    joint[tag] = {{"c2", a}, {"c3", b}};
    return c2;
  };
  require_stable(r, "ising_l1_c2", fit(derive_seed(seed, "sweep-a"), "sweep_a"),
                 fit(derive_seed(seed, "sweep-b"), "sweep_b"));
  r.details["least_squares_joint_fit"] = joint;
  r.details["c2_definition"] = "min over the sweep of ||f_W - f_W'||_1 / ||W - W'||_F (c3 = 0 suffices)";

  // L1 distance against delta for fixed signs: log-log slope near 1.
  const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
  json slopes = json::object();
  for (const char* shorthand : {"path:8", "cycle:8", "star:8", "complete:5"}) {
    const Graph g = parse_graph_shorthand(shorthand);
    const auto base = make_hard_ising_family(g, 1.0);
    std::vector<std::pair<double, double>> pts;
    for (double delta : deltas) {
      const auto p = interactions_from_signs(g, base.packing.vectors[0], delta);
      const auto q = interactions_from_signs(g, base.packing.vectors[1], delta);
      pts.emplace_back(delta, 2.0 * tv_exact(p, q));
    }
    const double slope = fit_rate(pts).slope;
    slopes[shorthand] = slope;
    if (std::string(shorthand) == "path:8" && std::abs(slope - 1.0) > 0.05)
      r.fail({{"graph", shorthand}, {"deltas", deltas}, {"slope", slope},
              {"reason", "L1-vs-delta slope outside 1 +- 0.05"}});
  }
  r.details["l1_delta_slopes"] = slopes;
  r.details["asserted_slope_graph"] = "path:8";
  return r;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"psd",     "frobenius",  "kl-gaussian", "tv-gaussian", "moments",
                                              "exp-moment", "partition", "kl-ising",    "l1-ising"};
  return names;
}

CheckReport run_check(std::string_view name, std::uint64_t suite_seed) {
  const std::uint64_t seed = derive_seed(suite_seed, name);
  const IsingSweep sweep{};
  if (name == "psd") return verify_psd(1000, 12, seed);
  if (name == "frobenius") return verify_frobenius_facts(1000, seed);
  if (name == "kl-gaussian") return verify_kl_bounds_gaussian(500, seed);
  if (name == "tv-gaussian") return verify_tv_lower_gaussian(100, 100'000, seed);
  if (name == "moments") return verify_moment_identities(100, seed);
  if (name == "exp-moment") return verify_exp_moment(sweep, seed);
  if (name == "partition") return verify_partition_bounds(sweep, seed);
  if (name == "kl-ising") return verify_kl_bounds_ising(sweep, seed);
  if (name == "l1-ising") return verify_l1_lower_ising(sweep, seed);
  std::string valid;
  for (const auto& n : check_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ValidationError("unknown check '" + std::string(name) + "'; valid checks: all, " + valid);
}

}  // namespace mml::verify
