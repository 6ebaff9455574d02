#pragma once

// Weibull-tempered Pareto limit model and exact samplers for X = min(Y, W).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tempered/random.hpp"

namespace tempered {

/// Limit model of the relative excesses X/t:
///   P(X/t > x) -> x^-alpha * exp(-lambda * (x^tau - 1)),  x >= 1,
/// with lambda = beta_inf^tau.
class TemperedParams {
 public:
  TemperedParams(double alpha, double lambda, double tau);

  static TemperedParams from_beta(double alpha, double beta_inf, double tau);

  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }

  double beta_inf() const;
  double delta() const { return tau_ * lambda_; }
  double gamma() const { return 1.0 / alpha_; }

  bool operator==(const TemperedParams&) const = default;

 private:
  double alpha_;
  double lambda_;
  double tau_;
};

// Base distributions of Y. Survival functions:
//   Burr      (1 + y^(-xi*alpha))^(1/xi),   y > 0, xi < 0
//   Frechet   1 - exp(-y^-alpha),           y > 0
//   Pareto    y^-alpha,                     y > 1
//   LogNormal 1 - Phi((log y - mu) / sigma)
struct Burr {
  double alpha;
  double xi;
};
struct Frechet {
  double alpha;
};
struct Pareto {
  double alpha;
};
struct LogNormal {
  double mu;
  double sigma;
};

using BaseFamily = std::variant<Burr, Frechet, Pareto, LogNormal>;

/// Second-order slow variation l(ty)/l(t) = 1 + D t^rho h_rho(y).
struct SecondOrder {
  double D;
  double rho;
};

void validate(const BaseFamily& base);
std::string family_name(const BaseFamily& base);

/// Tail index alpha of the base family; empty for the log-normal.
std::optional<double> tail_index(const BaseFamily& base);

/// (D, rho) where the family satisfies the second-order condition. The Pareto
/// has D = 0 (rho reported as -1 for definiteness); the log-normal has none.
std::optional<SecondOrder> second_order(const BaseFamily& base);

double base_survival(const BaseFamily& base, double y);
double base_log_survival(const BaseFamily& base, double y);

/// y with P(Y > y) = u, for u in (0, 1).
double base_inverse_survival(const BaseFamily& base, double u);

/// Immutable ascending sample of strictly positive finite values.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// Zero-based ascending access.
  double operator[](std::size_t i) const { return values_[i]; }

  /// X_{j,n}, one-based: order_stat(1) is the minimum.
  double order_stat(std::size_t j) const { return values_[j - 1]; }

  std::span<const double> values() const { return values_; }

  Sample scaled(double c) const;

 private:
  std::vector<double> values_;
};

struct TemperedSampleSpec {
  BaseFamily base;
  double tau = 1.0;
  double beta = 1.0;  // Weibull scale: P(W > x) = exp(-(beta x)^tau)
  std::size_t n = 500;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

void validate(const TemperedSampleSpec& spec);

/// (x^tau - 1) / tau.
double h_tau(double x, double tau);

double limit_survival(double x, const TemperedParams& p);
double limit_log_survival(double x, const TemperedParams& p);

/// x^(-alpha-1) exp(-lambda (x^tau - 1)) (alpha + lambda tau x^tau).
double limit_density(double x, const TemperedParams& p);

/// x >= 1 with limit_survival(x, p) = q.
double limit_quantile(double q, const TemperedParams& p);

/// One draw from the limit model as min(Pareto(alpha), W) with
/// P(W > x) = exp(-lambda (x^tau - 1)) on x >= 1.
double draw_limit(const TemperedParams& p, Engine& engine);

/// P(min(Y, W) > x) = P(Y > x) exp(-(beta x)^tau).
double tempered_survival(const TemperedSampleSpec& spec, double x);
double tempered_log_survival(const TemperedSampleSpec& spec, double x);

/// n i.i.d. draws of min(Y, W) from stream (seed, stream), sorted.
Sample sample_tempered(const TemperedSampleSpec& spec);

}  // namespace tempered
