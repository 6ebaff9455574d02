#include "tempered/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "tempered/error.hpp"
#include "tempered/roots.hpp"

namespace tempered {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    std::ostringstream msg;
    msg << what << " must be finite";
    throw DomainError(msg.str());
  }
}

void require_excess(double x, const char* fn) {
  if (!(x >= 1.0)) {
    std::ostringstream msg;
    msg << fn << ": x = " << x << " is below 1";
    throw DomainError(msg.str());
  }
}

// log of P(Z > z) for standard normal Z, accurate far into the upper tail.
double log_normal_upper_tail(double z) {
  const double tail = 0.5 * boost::math::erfc(z / std::numbers::sqrt2);
  if (tail > 0.0) return std::log(tail);
  return -0.5 * z * z - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace

TemperedParams::TemperedParams(double alpha, double lambda, double tau)
    : alpha_(alpha), lambda_(lambda), tau_(tau) {
  if (!std::isfinite(alpha) || !std::isfinite(lambda) || !std::isfinite(tau))
    throw DomainError("TemperedParams: parameters must be finite");
  if (!(alpha > 0.0)) throw DomainError("TemperedParams: alpha must be > 0");
  if (!(lambda >= 0.0)) throw DomainError("TemperedParams: lambda must be >= 0");
  if (!(tau > 0.0)) throw DomainError("TemperedParams: tau must be > 0");
}

TemperedParams TemperedParams::from_beta(double alpha, double beta_inf,
                                         double tau) {
  if (!(beta_inf >= 0.0)) throw DomainError("TemperedParams: beta_inf must be >= 0");
  return TemperedParams(alpha, std::pow(beta_inf, tau), tau);
}

double TemperedParams::beta_inf() const {
  if (lambda_ == 0.0) return 0.0;
  return std::pow(lambda_, 1.0 / tau_);
}

// ---------------------------------------------------------------------------
// Base families

void validate(const BaseFamily& base) {
  std::visit(overloaded{
                 [](const Burr& b) {
                   if (!(b.alpha > 0.0) || !std::isfinite(b.alpha))
                     throw DomainError("Burr: alpha must be > 0");
                   if (!(b.xi < 0.0) || !std::isfinite(b.xi))
                     throw DomainError("Burr: xi must be < 0");
                 },
                 [](const Frechet& f) {
                   if (!(f.alpha > 0.0) || !std::isfinite(f.alpha))
                     throw DomainError("Frechet: alpha must be > 0");
                 },
                 [](const Pareto& p) {
                   if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
                     throw DomainError("Pareto: alpha must be > 0");
                 },
                 [](const LogNormal& l) {
                   if (!std::isfinite(l.mu)) throw DomainError("LogNormal: mu must be finite");
                   if (!(l.sigma > 0.0) || !std::isfinite(l.sigma))
                     throw DomainError("LogNormal: sigma must be > 0");
                 },
             },
             base);
}

std::string family_name(const BaseFamily& base) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const Burr& b) { out << "Burr(" << b.alpha << ", " << b.xi << ")"; },
                 [&](const Frechet& f) { out << "Frechet(" << f.alpha << ")"; },
                 [&](const Pareto& p) { out << "Pareto(" << p.alpha << ")"; },
                 [&](const LogNormal& l) {
                   out << "LogNormal(" << l.mu << ", " << l.sigma << ")";
                 },
             },
             base);
  return out.str();
}

std::optional<double> tail_index(const BaseFamily& base) {
  return std::visit(overloaded{
                        [](const Burr& b) -> std::optional<double> { return b.alpha; },
                        [](const Frechet& f) -> std::optional<double> { return f.alpha; },
                        [](const Pareto& p) -> std::optional<double> { return p.alpha; },
                        [](const LogNormal&) -> std::optional<double> { return std::nullopt; },
                    },
                    base);
}

std::optional<SecondOrder> second_order(const BaseFamily& base) {
  return std::visit(
      overloaded{
          // l(y) = (1 + y^rho)^(1/xi), rho = xi alpha  =>  D = rho / xi = alpha
          [](const Burr& b) -> std::optional<SecondOrder> {
            return SecondOrder{b.alpha, b.xi * b.alpha};
          },
          // l(y) = y^alpha (1 - exp(-y^-alpha)) = 1 - y^-alpha / 2 + ...
          [](const Frechet& f) -> std::optional<SecondOrder> {
            return SecondOrder{0.5 * f.alpha, -f.alpha};
          },
          [](const Pareto&) -> std::optional<SecondOrder> { return SecondOrder{0.0, -1.0}; },
          [](const LogNormal&) -> std::optional<SecondOrder> { return std::nullopt; },
      },
      base);
}

double base_log_survival(const BaseFamily& base, double y) {
  if (!(y > 0.0)) return 0.0;
  return std::visit(
      overloaded{
          [&](const Burr& b) { return std::log1p(std::pow(y, -b.xi * b.alpha)) / b.xi; },
          [&](const Frechet& f) { return std::log(-std::expm1(-std::pow(y, -f.alpha))); },
          [&](const Pareto& p) { return y <= 1.0 ? 0.0 : -p.alpha * std::log(y); },
          [&](const LogNormal& l) {
            return log_normal_upper_tail((std::log(y) - l.mu) / l.sigma);
          },
      },
      base);
}

double base_survival(const BaseFamily& base, double y) {
  return std::exp(base_log_survival(base, y));
}

double base_inverse_survival(const BaseFamily& base, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("base_inverse_survival: u must lie in (0, 1)");
  return std::visit(
      overloaded{
          [&](const Burr& b) {
            return std::pow(std::expm1(b.xi * std::log(u)), -1.0 / (b.xi * b.alpha));
          },
          [&](const Frechet& f) { return std::pow(-std::log1p(-u), -1.0 / f.alpha); },
          [&](const Pareto& p) { return std::pow(u, -1.0 / p.alpha); },
          [&](const LogNormal& l) {
            return std::exp(l.mu + l.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u));
          },
      },
      base);
}

// ---------------------------------------------------------------------------
// Sample

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  for (double x : values_) {
    if (!std::isfinite(x) || !(x > 0.0)) {
      std::ostringstream msg;
      msg << "Sample: value " << x << " is not a positive finite number";
      throw DomainError(msg.str());
    }
  }
  std::sort(values_.begin(), values_.end());
}

Sample Sample::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("Sample::scaled: c must be > 0");
  std::vector<double> out(values_);
  for (double& x : out) x *= c;
  return Sample(std::move(out));
}

void validate(const TemperedSampleSpec& spec) {
  validate(spec.base);
  if (!(spec.tau > 0.0) || !std::isfinite(spec.tau))
    throw DomainError("TemperedSampleSpec: tau must be > 0");
  if (!(spec.beta > 0.0) || !std::isfinite(spec.beta))
    throw DomainError("TemperedSampleSpec: beta must be > 0");
  if (spec.n < 1) throw DomainError("TemperedSampleSpec: n must be >= 1");
}

// ---------------------------------------------------------------------------
// Limit model

double h_tau(double x, double tau) {
  require_finite(x, "h_tau: x");
  require_finite(tau, "h_tau: tau");
  if (!(x > 0.0)) throw DomainError("h_tau: x must be > 0");
  if (!(tau > 0.0)) throw DomainError("h_tau: tau must be > 0");
  return std::expm1(tau * std::log(x)) / tau;
}

double limit_log_survival(double x, const TemperedParams& p) {
  require_excess(x, "limit_survival");
  const double log_x = std::log(x);
  return -p.alpha() * log_x - p.lambda() * std::expm1(p.tau() * log_x);
}

double limit_survival(double x, const TemperedParams& p) {
  return std::exp(limit_log_survival(x, p));
}

double limit_density(double x, const TemperedParams& p) {
  require_excess(x, "limit_density");
  const double log_x = std::log(x);
  const double x_tau = std::exp(p.tau() * log_x);
  const double log_weight =
      -(p.alpha() + 1.0) * log_x - p.lambda() * std::expm1(p.tau() * log_x);
  const double weight = std::exp(log_weight);
  return weight == 0.0 ? 0.0 : weight * (p.alpha() + p.lambda() * p.tau() * x_tau);
}

double limit_quantile(double q, const TemperedParams& p) {
  if (!(q > 0.0 && q <= 1.0)) {
    std::ostringstream msg;
    msg << "limit_quantile: q = " << q << " outside (0, 1]";
    throw DomainError(msg.str());
  }
  if (q == 1.0) return 1.0;
  const double log_q = std::log(q);
  if (p.lambda() == 0.0) return std::exp(-log_q / p.alpha());

  // -log survival is increasing and convex in y = log x
  const double a = p.alpha(), lam = p.lambda(), tau = p.tau();
  auto g = [&](double y) { return a * y + lam * std::expm1(tau * y) + log_q; };
  auto dg = [&](double y) { return a + lam * tau * std::exp(tau * y); };
  const double y = solve_increasing(g, dg, 0.0, std::min(1.0, -log_q / a));
  return std::exp(y);
}

double draw_limit(const TemperedParams& p, Engine& engine) {
  const double u_pareto = uniform_open(engine);
  const double u_weibull = uniform_open(engine);
  const double log_y = -std::log(u_pareto) / p.alpha();
  if (p.lambda() == 0.0) return std::exp(log_y);
  const double log_w = std::log1p(-std::log(u_weibull) / p.lambda()) / p.tau();
  return std::exp(std::min(log_y, log_w));
}

double tempered_log_survival(const TemperedSampleSpec& spec, double x) {
  if (!(x > 0.0)) return 0.0;
  return base_log_survival(spec.base, x) - std::pow(spec.beta * x, spec.tau);
}

double tempered_survival(const TemperedSampleSpec& spec, double x) {
  return std::exp(tempered_log_survival(spec, x));
}

Sample sample_tempered(const TemperedSampleSpec& spec) {
  validate(spec);
  Engine engine = make_stream(spec.seed, spec.stream);
  std::vector<double> draws(spec.n);
  for (double& x : draws) {
    const double y = base_inverse_survival(spec.base, uniform_open(engine));
    const double w = std::pow(-std::log(uniform_open(engine)), 1.0 / spec.tau) / spec.beta;
    x = std::min(y, w);
  }
  return Sample(std::move(draws));
}

}  // namespace tempered
