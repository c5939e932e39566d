#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mml/gaussian.hpp"
#include "mml/ising.hpp"

namespace mml {

// Candidate probabilities of the Yatracos sets A_{f,g} = {x : f(x) > g(x)}
// over all ordered pairs f != g, and the minimum-distance rule built on them.
class YatracosTable {
 public:
  explicit YatracosTable(std::size_t members);

  std::size_t members() const { return members_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }

  double probability(std::size_t candidate, std::size_t pair) const {
    return prob_[candidate * pairs_.size() + pair];
  }
  void set_probability(std::size_t candidate, std::size_t pair, double p) {
    prob_[candidate * pairs_.size() + pair] = p;
  }

  // max over pairs of |P_candidate(A) - empirical(A)|; 0 for a one-member class.
  double statistic(std::size_t candidate, std::span<const double> empirical) const;

  // argmin of statistic, ties to the smallest index.
  std::size_t select(std::span<const double> empirical) const;

 private:
  std::size_t members_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<double> prob_;
};

// Finite candidate class with everything the risk experiments need.
class FiniteClass {
 public:
  virtual ~FiniteClass() = default;
  virtual std::string_view kind() const = 0;
  virtual std::size_t size() const = 0;
  virtual int dim() const = 0;
  // TV distance between members a and b.
  virtual double tv(std::size_t a, std::size_t b) const = 0;
  // Draws n samples from member `truth` and returns the selected member.
  virtual std::size_t draw_and_select(std::size_t truth, std::size_t n,
                                      std::uint64_t seed) const = 0;
};

class IsingClass final : public FiniteClass {
 public:
  // Requires d <= exact_cutoff(); set probabilities are exact.
  explicit IsingClass(std::vector<IsingModel> members);

  std::string_view kind() const override { return "ising"; }
  std::size_t size() const override { return members_.size(); }
  int dim() const override { return d_; }
  double tv(std::size_t a, std::size_t b) const override { return tv_[a * size() + b]; }
  std::size_t draw_and_select(std::size_t truth, std::size_t n,
                              std::uint64_t seed) const override;

  const IsingModel& member(std::size_t i) const { return members_[i]; }
  const YatracosTable& table() const { return table_; }
  bool in_set(std::size_t pair, Config x) const {
    return (sets_[pair][x >> 6] >> (x & 63)) & 1U;
  }

  // Empirical measure of every Yatracos set, in table().pairs() order.
  std::vector<double> empirical_measure(std::span<const Config> samples) const;
  double statistic(std::size_t candidate, std::span<const Config> samples) const;
  std::size_t select(std::span<const Config> samples) const;
  std::vector<Config> draw(std::size_t member, std::size_t n, std::uint64_t seed) const;

 private:
  int d_;
  std::vector<IsingModel> members_;
  std::vector<ExactSampler> samplers_;
  std::vector<std::vector<std::uint64_t>> sets_;
  YatracosTable table_;
  std::vector<double> tv_;
};

class GaussianClass final : public FiniteClass {
 public:
  struct Options {
    // Shared evaluation sample per candidate for the Yatracos set probabilities.
    std::size_t eval_count = 100'000;
    std::uint64_t eval_seed = 0x5eed;
    // Monte Carlo count for pairwise TV between members.
    std::size_t tv_count = 100'000;
    std::uint64_t tv_seed = 0x7e57;
  };

  GaussianClass(std::vector<GaussianModel> members, Options options);
  explicit GaussianClass(std::vector<GaussianModel> members)
      : GaussianClass(std::move(members), Options{}) {}

  std::string_view kind() const override { return "gaussian"; }
  std::size_t size() const override { return members_.size(); }
  int dim() const override { return d_; }
  double tv(std::size_t a, std::size_t b) const override { return tv_[a * size() + b]; }
  std::size_t draw_and_select(std::size_t truth, std::size_t n,
                              std::uint64_t seed) const override;

  const GaussianModel& member(std::size_t i) const { return members_[i]; }
  const YatracosTable& table() const { return table_; }
  // Largest 95% half-width over the Monte Carlo set probabilities.
  double max_probability_half_width() const { return max_half_width_; }
  double max_tv_half_width() const { return max_tv_half_width_; }

  // Samples are the columns of a d x n matrix.
  std::vector<double> empirical_measure(const Matrix& samples) const;
  double statistic(std::size_t candidate, const Matrix& samples) const;
  std::size_t select(const Matrix& samples) const;

 private:
  // Membership of each column in every Yatracos set, as fractions.
  std::vector<double> set_fractions(const Matrix& points) const;

  int d_;
  std::vector<GaussianModel> members_;
  YatracosTable table_;
  std::vector<double> tv_;
  double max_half_width_ = 0.0;
  double max_tv_half_width_ = 0.0;
};

struct TrialRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::size_t truth = 0;
  std::size_t chosen = 0;
  double tv = 0.0;
};

struct RiskEstimate {
  std::size_t n = 0;
  std::size_t trials = 0;
  // Per true member: mean TV over trials and its standard error.
  std::vector<double> member_mean;
  std::vector<double> member_se;
  // Supremum over members of the mean TV, i.e. the measured risk.
  double sup_risk = 0.0;
  double sup_se = 0.0;
  std::size_t sup_member = 0;
  // Average of member_mean over members.
  double mean_risk = 0.0;
  std::vector<TrialRecord> records;
};

// For each member f and trial t: draw n samples from f with seed
// derive_seed(master_seed, f, t), select, record TV(selected, f). Trials run
// in parallel; the result does not depend on the thread count.
RiskEstimate empirical_risk(const FiniteClass& cls, std::size_t n, std::size_t trials,
                            std::uint64_t master_seed);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of log(risk) on log(n). Needs >= 2 points with distinct n and
// positive risk.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct RiskPoint {
  std::size_t n = 0;
  std::size_t members = 0;
  double delta = 0.0;
  double risk = 0.0;  // sup over members
  double se = 0.0;
  double mean_risk = 0.0;
};

struct RiskCurve {
  std::vector<TrialRecord> records;
  std::vector<RiskPoint> points;
  // Fit of log risk against log n; fit_valid is false when some risk is 0.
  RateFit fit;
  bool fit_valid = false;
};

// Builds the class for a given n. A fixed-family experiment ignores n; the
// lower-bound construction rebuilds with delta = c2 / sqrt(n).
using ClassBuilder = std::function<std::unique_ptr<FiniteClass>(std::size_t n)>;
using DeltaOf = std::function<double(std::size_t n)>;

// n_grid must be strictly increasing. Trials at grid point n use master seed
// derive_seed(master_seed, n).
RiskCurve risk_curve(const ClassBuilder& build, std::span<const std::size_t> n_grid,
                     std::size_t trials, std::uint64_t master_seed, const DeltaOf& delta_of = {});

// Synthetic curve with risk exactly n^exponent, for checking the regression.
RiskCurve injected_risk_curve(std::span<const std::size_t> n_grid, double exponent);

}  // namespace mml
