#pragma once

// Monte Carlo study harness: replicated samples from a tempered family,
// estimator curves over k and summaries at the adaptive k.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tempered/estimators.hpp"
#include "tempered/model.hpp"

namespace tempered {

enum class Estimator { WLS, MLE, Hill, Weissman, TruncatedPareto };

std::string to_string(Estimator e);

struct StudyConfig {
  std::string name;
  TemperedSampleSpec family;  // n and seed of the template are ignored
  std::size_t n_reps = 100;
  std::size_t n = 500;
  std::vector<std::size_t> k_grid;
  std::vector<double> tau_grid = default_tau_grid();
  std::vector<double> quantile_p_factors{1.0, 2.0};  // p = 1/(c n)
  std::uint64_t seed = 1;
  std::set<Estimator> estimators{Estimator::WLS, Estimator::MLE, Estimator::Hill,
                                 Estimator::Weissman,
                                 Estimator::TruncatedPareto};
  std::size_t k_min = 10;  // lower end of the SS_k search for the adaptive k
  WeightScheme weights = WeightScheme::Hill;
  unsigned threads = 1;
};

void validate(const StudyConfig& cfg);

/// Ranks k_min, k_min + step, ... plus n - 1.
std::vector<std::size_t> stepped_k_grid(std::size_t k_min, std::size_t n,
                                        std::size_t step);

struct CellStats {
  std::size_t count = 0;
  double mean = 0.0;
  double bias = 0.0;
  double variance = 0.0;  // population variance over replications
  double rmse = 0.0;
};

struct BoxStats {
  std::size_t count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  std::vector<double> outliers;
};

/// One estimated quantity of one estimator, e.g. (MLE, "alpha") or
/// (Weissman, "Q_c=1").
struct Series {
  Estimator estimator;
  std::string quantity;
  double truth = 0.0;               // NaN when the truth is undefined
  std::vector<CellStats> by_k;      // parallel to StudyResult::k_grid
  std::vector<double> at_k_hat;     // per replication, NaN on failure
  CellStats at_k_hat_stats;
  BoxStats box;
};

struct StudyResult {
  std::string name;
  std::string family;
  std::size_t n = 0;
  std::size_t n_reps = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> k_grid;
  std::vector<double> p_values;
  std::vector<double> true_quantiles;
  std::vector<std::size_t> k_hat;  // per replication, 0 on failure
  std::size_t failed_reps = 0;
  std::vector<Series> series;
  double runtime_seconds = 0.0;

  const Series& get(Estimator e, const std::string& quantity) const;
};

/// Exact quantile of min(Y, W): the z with P(Y > z) P(W > z) = prob.
double true_quantile(const TemperedSampleSpec& spec, double prob);

/// Summary statistics against `truth`; NaN entries are skipped.
CellStats cell_stats(const std::vector<double>& values, double truth);

/// Quartiles (type-7 interpolation) with 1.5 IQR whiskers.
BoxStats box_stats(std::vector<double> values);

StudyResult run_study(const StudyConfig& cfg);

/// The six simulation settings: Burr-Weibull (2,-1,1.5,0.5) and
/// (2,-1,0.5,0.2), Frechet-Weibull (2,2,0.5) and (2,0.5,0.2), Pareto-Weibull
/// (1,2,0.2), log-normal-Weibull (0,10,1.5,0.5); n = 500 and 500
/// replications, k_grid = stepped_k_grid(10, n, 10).
std::vector<StudyConfig> preset_scenarios();

/// Scenario by name (e.g. "pareto-weibull"); throws DomainError if unknown.
StudyConfig scenario(const std::string& name);

}  // namespace tempered
