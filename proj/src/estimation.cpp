#include "mml/estimation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "mml/error.hpp"
#include "mml/kernels.hpp"
#include "mml/rng.hpp"

namespace mml {

namespace {

// Log-density gap below which two members are treated as tied at a point.
constexpr double kTieTolerance = 1e-10;

// Bitset memory ceiling for the Ising Yatracos sets (bits).
constexpr std::size_t kMaxSetBits = std::size_t{1} << 33;

}  // namespace

YatracosTable::YatracosTable(std::size_t members) : members_(members) {
  if (members == 0) throw ValidationError("candidate class is empty");
  for (std::size_t f = 0; f < members; ++f)
    for (std::size_t g = 0; g < members; ++g)
      if (f != g) pairs_.emplace_back(f, g);
  prob_.assign(members * pairs_.size(), 0.0);
}

double YatracosTable::statistic(std::size_t candidate, std::span<const double> empirical) const {
  const double* row = prob_.data() + candidate * pairs_.size();
  double worst = 0.0;
  for (std::size_t p = 0; p < pairs_.size(); ++p) worst = std::max(worst, std::abs(row[p] - empirical[p]));
  return worst;
}

std::size_t YatracosTable::select(std::span<const double> empirical) const {
  std::size_t best = 0;
  double best_stat = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < members_; ++c) {
    const double s = statistic(c, empirical);
    if (s < best_stat) {
      best_stat = s;
      best = c;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

IsingClass::IsingClass(std::vector<IsingModel> members)
    : d_(members.empty() ? 0 : members.front().dim()),
      members_(std::move(members)),
      table_(members_.size()) {
  for (const auto& m : members_)
    if (m.dim() != d_) throw ValidationError("class members must share the same dimension");
  require_exact(d_);
  const std::size_t configs = std::size_t{1} << d_;
  const std::size_t words = (configs + 63) / 64;
  if (table_.pairs().size() * words * 64 > kMaxSetBits)
    throw BudgetError("Yatracos sets for " + std::to_string(size()) + " members at d=" +
                      std::to_string(d_) + " exceed the memory budget");

  std::vector<std::vector<double>> log_p;
  log_p.reserve(size());
  for (const auto& m : members_) log_p.push_back(log_pmf(m));
  std::vector<std::vector<double>> prob(size());
  for (std::size_t i = 0; i < size(); ++i) {
    prob[i].resize(configs);
    for (std::size_t x = 0; x < configs; ++x) prob[i][x] = std::exp(log_p[i][x]);
    samplers_.emplace_back(prob[i]);
  }

  const auto& pairs = table_.pairs();
  sets_.assign(pairs.size(), std::vector<std::uint64_t>(words, 0));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(pairs.size()); ++p) {
    const auto [f, g] = pairs[static_cast<std::size_t>(p)];
    auto& bits = sets_[static_cast<std::size_t>(p)];
    for (std::size_t x = 0; x < configs; ++x)
      if (log_p[f][x] - log_p[g][x] > kTieTolerance) bits[x >> 6] |= std::uint64_t{1} << (x & 63);
    for (std::size_t c = 0; c < size(); ++c) {
      double s = 0.0;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t word = bits[w];
        while (word) {
          const int b = std::countr_zero(word);
          s += prob[c][w * 64 + static_cast<std::size_t>(b)];
          word &= word - 1;
        }
      }
      table_.set_probability(c, static_cast<std::size_t>(p), s);
    }
  }

  tv_.assign(size() * size(), 0.0);
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b) {
      double s = 0.0;
      for (std::size_t x = 0; x < configs; ++x) s += std::abs(prob[a][x] - prob[b][x]);
      tv_[a * size() + b] = tv_[b * size() + a] = s / 2.0;
    }
}

std::vector<double> IsingClass::empirical_measure(std::span<const Config> samples) const {
  if (samples.empty()) throw ValidationError("sample set is empty");
  const std::size_t configs = std::size_t{1} << d_;
  for (Config x : samples)
    if (x >= configs) throw ValidationError("sample configuration out of range for d=" + std::to_string(d_));
  const auto& pairs = table_.pairs();
  std::vector<double> out(pairs.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  if (samples.size() <= configs) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      std::size_t hits = 0;
      for (Config x : samples) hits += in_set(p, x);
      out[p] = static_cast<double>(hits) * inv_n;
    }
  } else {
    std::vector<std::size_t> counts(configs, 0);
    for (Config x : samples) ++counts[x];
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      std::size_t hits = 0;
      const auto& bits = sets_[p];
      for (std::size_t w = 0; w < bits.size(); ++w) {
        std::uint64_t word = bits[w];
        while (word) {
          hits += counts[w * 64 + static_cast<std::size_t>(std::countr_zero(word))];
          word &= word - 1;
        }
      }
      out[p] = static_cast<double>(hits) * inv_n;
    }
  }
  return out;
}

double IsingClass::statistic(std::size_t candidate, std::span<const Config> samples) const {
  if (candidate >= size()) throw ValidationError("candidate index out of range");
  return table_.statistic(candidate, empirical_measure(samples));
}

std::size_t IsingClass::select(std::span<const Config> samples) const {
  if (size() == 1) return 0;
  return table_.select(empirical_measure(samples));
}

std::vector<Config> IsingClass::draw(std::size_t member, std::size_t n, std::uint64_t seed) const {
  return samplers_.at(member).draw(n, seed);
}

std::size_t IsingClass::draw_and_select(std::size_t truth, std::size_t n, std::uint64_t seed) const {
  if (size() == 1) return 0;
  return select(draw(truth, n, seed));
}

// ---------------------------------------------------------------------------

GaussianClass::GaussianClass(std::vector<GaussianModel> members, Options options)
    : d_(members.empty() ? 0 : members.front().dim()),
      members_(std::move(members)),
      table_(members_.size()) {
  for (const auto& m : members_)
    if (m.dim() != d_) throw ValidationError("class members must share the same dimension");
  if (options.eval_count == 0 || options.tv_count == 0)
    throw ValidationError("Monte Carlo counts must be positive");

  const auto& pairs = table_.pairs();
  const double n_eval = static_cast<double>(options.eval_count);
  for (std::size_t c = 0; c < size() && !pairs.empty(); ++c) {
    const Matrix pts = sample(members_[c], options.eval_count, derive_seed(options.eval_seed, c));
    const auto frac = set_fractions(pts);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      table_.set_probability(c, p, frac[p]);
      const double hw = 1.96 * std::sqrt(frac[p] * (1.0 - frac[p]) / n_eval);
      max_half_width_ = std::max(max_half_width_, hw);
    }
  }

  tv_.assign(size() * size(), 0.0);
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b) {
      const auto est = tv_monte_carlo(members_[a], members_[b], options.tv_count,
                                      derive_seed(options.tv_seed, a, b));
      tv_[a * size() + b] = tv_[b * size() + a] = est.estimate;
      max_tv_half_width_ = std::max(max_tv_half_width_, est.half_width);
    }
}

std::vector<double> GaussianClass::set_fractions(const Matrix& points) const {
  const std::size_t n = static_cast<std::size_t>(points.cols());
  const std::size_t k = size();
  std::vector<double> logd(k * n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n); ++c) {
    const Vector x = points.col(c);
    for (std::size_t f = 0; f < k; ++f)
      logd[f * n + static_cast<std::size_t>(c)] = log_density(members_[f], x);
  }
  const auto& pairs = table_.pairs();
  std::vector<double> out(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double* lf = logd.data() + pairs[p].first * n;
    const double* lg = logd.data() + pairs[p].second * n;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += lf[i] > lg[i];
    out[p] = static_cast<double>(hits) / static_cast<double>(n);
  }
  return out;
}

std::vector<double> GaussianClass::empirical_measure(const Matrix& samples) const {
  if (samples.cols() == 0) throw ValidationError("sample set is empty");
  if (samples.rows() != d_)
    throw ValidationError("samples have dimension " + std::to_string(samples.rows()) +
                          ", class has d=" + std::to_string(d_));
  return set_fractions(samples);
}

double GaussianClass::statistic(std::size_t candidate, const Matrix& samples) const {
  if (candidate >= size()) throw ValidationError("candidate index out of range");
  return table_.statistic(candidate, empirical_measure(samples));
}

std::size_t GaussianClass::select(const Matrix& samples) const {
  if (size() == 1) return 0;
  return table_.select(empirical_measure(samples));
}

std::size_t GaussianClass::draw_and_select(std::size_t truth, std::size_t n,
                                           std::uint64_t seed) const {
  if (size() == 1) return 0;
  return select(sample(members_.at(truth), n, seed));
}

// ---------------------------------------------------------------------------

RiskEstimate empirical_risk(const FiniteClass& cls, std::size_t n, std::size_t trials,
                            std::uint64_t master_seed) {
  if (n == 0) throw ValidationError("n must be positive");
  if (trials == 0) throw ValidationError("trials must be positive");
  const std::size_t k = cls.size();
  RiskEstimate est;
  est.n = n;
  est.trials = trials;
  est.records.resize(k * trials);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(k * trials); ++idx) {
    const std::size_t f = static_cast<std::size_t>(idx) / trials;
    const std::size_t t = static_cast<std::size_t>(idx) % trials;
    const std::size_t chosen = cls.draw_and_select(f, n, derive_seed(master_seed, f, t));
    est.records[static_cast<std::size_t>(idx)] = {n, t, f, chosen, cls.tv(chosen, f)};
  }

  est.member_mean.assign(k, 0.0);
  est.member_se.assign(k, 0.0);
  const double tn = static_cast<double>(trials);
  for (std::size_t f = 0; f < k; ++f) {
    double s = 0.0;
    for (std::size_t t = 0; t < trials; ++t) s += est.records[f * trials + t].tv;
    const double mean = s / tn;
    double ss = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double r = est.records[f * trials + t].tv - mean;
      ss += r * r;
    }
    est.member_mean[f] = mean;
    est.member_se[f] = trials > 1 ? std::sqrt(ss / (tn - 1.0) / tn) : 0.0;
  }
  for (std::size_t f = 0; f < k; ++f) {
    if (f == 0 || est.member_mean[f] > est.sup_risk) {
      est.sup_risk = est.member_mean[f];
      est.sup_se = est.member_se[f];
      est.sup_member = f;
    }
    est.mean_risk += est.member_mean[f] / static_cast<double>(k);
  }
  return est;
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw ValidationError("rate fit needs at least 2 points");
  double sx = 0, sy = 0;
  for (auto [n, r] : points) {
    if (!(n > 0.0)) throw ValidationError("rate fit needs positive n");
    if (!(r > 0.0)) throw ValidationError("rate fit needs positive risks, got " + std::to_string(r));
    sx += std::log(n);
    sy += std::log(r);
  }
  const double k = static_cast<double>(points.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [n, r] : points) {
    const double dx = std::log(n) - mx, dy = std::log(r) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ValidationError("rate fit needs at least two distinct n");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

namespace {

void require_grid(std::span<const std::size_t> n_grid) {
  if (n_grid.empty()) throw ValidationError("n grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw ValidationError("n grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw ValidationError("n grid must be strictly increasing");
  }
}

void fit_points(RiskCurve& curve) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve.points) {
    if (!(p.risk > 0.0)) return;
    pts.emplace_back(static_cast<double>(p.n), p.risk);
  }
  if (pts.size() < 2) return;
  curve.fit = fit_rate(pts);
  curve.fit_valid = true;
}

}  // namespace

RiskCurve risk_curve(const ClassBuilder& build, std::span<const std::size_t> n_grid,
                     std::size_t trials, std::uint64_t master_seed, const DeltaOf& delta_of) {
  require_grid(n_grid);
  if (trials == 0) throw ValidationError("trials must be positive");
  RiskCurve curve;
  for (std::size_t n : n_grid) {
    const auto cls = build(n);
    auto est = empirical_risk(*cls, n, trials, derive_seed(master_seed, n));
    curve.points.push_back(
        {n, cls->size(), delta_of ? delta_of(n) : 0.0, est.sup_risk, est.sup_se, est.mean_risk});
    curve.records.insert(curve.records.end(), est.records.begin(), est.records.end());
  }
  fit_points(curve);
  return curve;
}

RiskCurve injected_risk_curve(std::span<const std::size_t> n_grid, double exponent) {
  require_grid(n_grid);
  RiskCurve curve;
  for (std::size_t n : n_grid) {
    const double r = std::pow(static_cast<double>(n), exponent);
    curve.points.push_back({n, 0, 0.0, r, 0.0, r});
  }
  fit_points(curve);
  return curve;
}

}  // namespace mml
