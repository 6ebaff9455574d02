#pragma once

// Hill, weighted least squares and pseudo-ML estimation of (alpha, lambda, tau)
// on the relative excesses over X_{n-k,n}, adaptive choice of k, tail
// probability / extreme quantile estimation and the Pareto comparators.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempered/model.hpp"

namespace tempered {

enum class WeightScheme { Hill, Uniform };
enum class FitMethod { WLS, MLE };

std::string to_string(WeightScheme w);
std::string to_string(FitMethod m);
WeightScheme parse_weight_scheme(const std::string& name);

/// Relative excesses V_{j,k} = X_{n-j+1,n} / X_{n-k,n}, j = 1..k.
struct POTView {
  std::size_t k = 0;
  std::size_t n = 0;
  double threshold = 0.0;
  std::vector<double> v;  // v[j-1] = V_{j,k}; non-increasing, all >= 1
};

POTView pot_excesses(const Sample& s, std::size_t k);

/// H_{k,n} = (1/k) sum_j log(X_{n-j+1,n} / X_{n-k,n}). Zero when the top k+1
/// values coincide.
double hill(const Sample& s, std::size_t k);

/// 1 / H_{k,n}; throws DegenerateError when H = 0.
double hill_alpha(const Sample& s, std::size_t k);

/// Exponential quantile log((k+1)/j) paired with the j-th largest excess.
double qq_exponential_quantile(std::size_t k, std::size_t j);

/// Weighted squared QQ deviations
///   sum_j w_j ((1/alpha) e_j - log V_{j,k} - delta h_tau(V_{j,k}))^2
/// where e_j = log((k+1)/j) is the exponential quantile matching the j-th
/// largest excess. Hill weights are w_j = 1/e_j.
double wls_objective(const POTView& p, double alpha, double delta, double tau,
                     WeightScheme weights = WeightScheme::Hill);

struct WlsFit {
  double alpha = 0.0;
  double delta = 0.0;
  double objective = 0.0;
};

/// Constrained minimiser of wls_objective over alpha > 0, delta >= 0 at fixed
/// tau. The objective is linear least squares in (1/alpha, delta).
WlsFit fit_wls_fixed_tau(const POTView& p, double tau,
                         WeightScheme weights = WeightScheme::Hill);

/// Minimiser over alpha alone with delta held at 0.
double fit_wls_pareto_alpha(const POTView& p,
                            WeightScheme weights = WeightScheme::Hill);

/// Log-likelihood of the limit model on the excesses.
double log_likelihood(const POTView& p, double alpha, double lambda,
                      double tau);

/// Gradient of log_likelihood in (alpha, lambda, tau); the components are the
/// sums of per-observation scores.
std::array<double, 3> score(const POTView& p, const TemperedParams& params);

struct MleFit {
  double alpha = 0.0;
  double lambda = 0.0;
  double loglik = 0.0;
  bool converged = false;
  bool at_boundary = false;  // lambda = 0 satisfies the KKT conditions
  int iterations = 0;
};

/// Maximises log_likelihood over (alpha, lambda >= 0) with tau fixed.
///
/// At fixed tau the log-likelihood is concave in (alpha, lambda), so the
/// boundary lambda = 0 is first tested with its KKT condition. Otherwise a
/// Nelder-Mead simplex runs on (log alpha, log(lambda + 1e-10)), started from
/// (alpha_init, lambda_init), until the simplex diameter drops below 1e-9 or
/// 500 iterations pass. On non-convergence the best vertex is returned with
/// converged = false.
MleFit fit_mle_fixed_tau(const POTView& p, double tau, double alpha_init,
                         double lambda_init);

struct FitResult {
  TemperedParams params{1.0, 0.0, 1.0};
  FitMethod method = FitMethod::WLS;
  std::size_t k = 0;
  double objective = 0.0;  // WLS value, or log-likelihood for MLE
  std::size_t tau_grid_index = 0;
  bool converged = false;
};

struct KFit {
  FitResult wls;
  FitResult mle;
};

/// `points` geometrically spaced values on [lo, hi].
std::vector<double> default_tau_grid(std::size_t points = 50, double lo = 0.1,
                                     double hi = 5.0);

/// Fits at every tau of the grid and keeps the smallest WLS value and the
/// largest log-likelihood. Ties go to the smallest grid index. Grid points
/// whose fit is degenerate are skipped.
KFit fit_k(const POTView& p, std::span<const double> tau_grid,
           WeightScheme weights = WeightScheme::Hill);

/// WLS-only version of fit_k.
FitResult fit_k_wls(const POTView& p, std::span<const double> tau_grid,
                    WeightScheme weights = WeightScheme::Hill);

/// SS_k: the Hill-weighted WLS value at the fitted WLS parameters.
double ss_k(const POTView& p, const FitResult& wls_fit);

struct TraceRecord {
  std::size_t k = 0;
  double threshold = 0.0;
  FitResult wls;
  std::optional<FitResult> mle;
  double ss_k = 0.0;
  double hill = 0.0;
  std::optional<double> alpha_t;
};

struct TraceOptions {
  std::size_t k_min = 10;
  std::size_t k_max = 0;  // 0 selects n - 1
  std::vector<double> tau_grid = default_tau_grid();
  WeightScheme weights = WeightScheme::Hill;
  unsigned threads = 1;
  // Ranks that also get the ML fit; unset means every rank. The selected k
  // always gets one.
  std::optional<std::vector<std::size_t>> mle_ranks;
};

struct FitTrace {
  std::vector<TraceRecord> records;  // ascending k
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  std::size_t k_hat = 0;
  std::size_t n = 0;
  std::size_t failed_ranks = 0;
  std::vector<double> tau_grid;
  WeightScheme weights = WeightScheme::Hill;

  const TraceRecord& at(std::size_t k) const;
  const TraceRecord& selected() const { return at(k_hat); }
};

/// Fits every k in [k_min, k_max]; k_hat minimises SS_k (smallest k on ties).
FitTrace fit_trace(const Sample& s, const TraceOptions& options = {});

/// ((k+1)/(n+1)) (z/t)^-alpha exp(-lambda tau h_tau(z/t)), t = X_{n-k,n}.
double tail_prob(const FitResult& fit, const Sample& s, std::size_t k,
                 double z);

/// z >= X_{n-k,n} with tail_prob(fit, s, k, z) = prob,
/// for prob in (0, (k+1)/(n+1)].
double extreme_quantile(const FitResult& fit, const Sample& s, std::size_t k,
                        double prob);

/// X_{n-k,n} (k/(n p))^{H_{k,n}} for p in (0, k/n].
double weissman_quantile(const Sample& s, std::size_t k, double prob);

/// Root alpha of H = 1/alpha + R^alpha log R / (1 - R^alpha), 0 < R < 1.
double truncated_alpha_from(double hill_value, double ratio);

/// Truncated-Pareto tail index with R = X_{n-k,n} / X_{n,n}.
double truncated_alpha(const Sample& s, std::size_t k);

}  // namespace tempered
