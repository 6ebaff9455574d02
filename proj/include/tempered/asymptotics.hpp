#pragma once

// Asymptotic normality of the ML estimator of (alpha, lambda, tau):
//   sqrt(k) (theta_hat - theta) -> N(D nu I^-1 b, I^-1),
// with I and b evaluated by quadrature.

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "tempered/estimators.hpp"
#include "tempered/model.hpp"

namespace tempered {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

struct SecondOrderSpec {
  double D = 0.0;
  double rho = -1.0;
  double nu = 1.0;
};

/// Single entry I_{i,j} (zero-based, order alpha, lambda, tau). lambda = 0 is
/// accepted only for (0, 0), where the integral reduces to 1/alpha^2.
double fisher_entry(const TemperedParams& p, int i, int j,
                    double abs_tol = 1e-9);

/// Symmetric 3x3 information matrix; requires lambda > 0.
Matrix3 fisher_info(const TemperedParams& p, double abs_tol = 1e-9);

/// The raw integrals b_1..b_3 for second-order index rho < 0.
Vector3 bias_integrals(const TemperedParams& p, double rho,
                       double abs_tol = 1e-9);

/// D nu I^-1 b; the zero vector when D = 0.
Vector3 bias_vector(const TemperedParams& p, const SecondOrderSpec& so);

struct AsymptoticInfo {
  Matrix3 info = Matrix3::Zero();
  Vector3 bias = Vector3::Zero();
  Matrix3 cov = Matrix3::Zero();
  double k_eff = 0.0;
};

/// cov = I^-1 / k_eff. Throws NumericError (with eigenvalues) when I is not
/// positive definite.
AsymptoticInfo asymptotic_cov(const TemperedParams& p, double k_eff,
                              const std::optional<SecondOrderSpec>& so = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ConfidenceIntervals {
  double level = 0.0;
  Interval alpha;
  Interval lambda;
  Interval tau;
};

/// Wald intervals theta_i +- z_{(1+level)/2} sqrt(cov_ii); alpha and tau are
/// truncated below at 0.
ConfidenceIntervals confidence_interval(const FitResult& fit, double k_eff,
                                        double level);
ConfidenceIntervals confidence_interval(const AsymptoticInfo& info,
                                        const TemperedParams& p, double level);

struct ScoreMoments {
  Matrix3 outer = Matrix3::Zero();  // mean of score score^T
  Vector3 mean = Vector3::Zero();
  Vector3 mean_stderr = Vector3::Zero();
  std::size_t draws = 0;
};

/// Per-observation score of the limit density at excess u >= 1.
Vector3 observation_score(const TemperedParams& p, double u);

/// Monte Carlo moments of the score under the limit model.
ScoreMoments mc_score_moments(const TemperedParams& p, std::size_t n_draws,
                              std::uint64_t seed);

/// Monte Carlo estimate of E[score score^T]; an independent check on
/// fisher_info.
Matrix3 mc_fisher_oracle(const TemperedParams& p, std::size_t n_draws,
                         std::uint64_t seed);

}  // namespace tempered
