#include "tempered/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tempered/error.hpp"
#include "tempered/nelder_mead.hpp"
#include "tempered/parallel.hpp"
#include "tempered/roots.hpp"

namespace tempered {

namespace {

constexpr double kGammaFloor = 1e-8;
constexpr double kLambdaShift = 1e-10;

// Quantities of one POT view that do not depend on tau.
struct Design {
  std::size_t k = 0;
  std::vector<double> log_v;  // log V_{j,k}, j = 1..k
  std::vector<double> e;      // exponential quantiles log((k+1)/j)
  std::vector<double> w;      // QQ weights
  double sum_log_v = 0.0;
};

Design make_design(const POTView& p, WeightScheme weights) {
  Design d;
  d.k = p.k;
  d.log_v.resize(p.k);
  d.e.resize(p.k);
  d.w.resize(p.k);
  for (std::size_t j = 1; j <= p.k; ++j) {
    d.log_v[j - 1] = std::log(p.v[j - 1]);
    d.e[j - 1] = qq_exponential_quantile(p.k, j);
    d.w[j - 1] = weights == WeightScheme::Hill ? 1.0 / d.e[j - 1] : 1.0;
    d.sum_log_v += d.log_v[j - 1];
  }
  return d;
}

// tau-dependent columns: V^tau and h_tau(V)
struct TauColumns {
  std::vector<double> v_tau;
  std::vector<double> h;
};

TauColumns make_columns(const Design& d, double tau) {
  TauColumns c;
  c.v_tau.resize(d.k);
  c.h.resize(d.k);
  for (std::size_t j = 0; j < d.k; ++j) {
    const double m1 = std::expm1(tau * d.log_v[j]);
    c.h[j] = m1 / tau;
    c.v_tau[j] = 1.0 + m1;
  }
  return c;
}

double wls_value(const Design& d, const TauColumns& c, double gamma,
                 double delta) {
  double total = 0.0;
  for (std::size_t j = 0; j < d.k; ++j) {
    const double r = gamma * d.e[j] - d.log_v[j] - delta * c.h[j];
    total += d.w[j] * r * r;
  }
  return total;
}

WlsFit wls_fit(const Design& d, const TauColumns& c) {
  double s_ee = 0.0, s_eh = 0.0, s_hh = 0.0, s_el = 0.0, s_hl = 0.0;
  for (std::size_t j = 0; j < d.k; ++j) {
    const double w = d.w[j], e = d.e[j], h = c.h[j], l = d.log_v[j];
    s_ee += w * e * e;
    s_eh += w * e * h;
    s_hh += w * h * h;
    s_el += w * e * l;
    s_hl += w * h * l;
  }
  // normal equations:  gamma s_ee - delta s_eh = s_el
  //                    gamma s_eh - delta s_hh = s_hl
  const double det = s_eh * s_eh - s_ee * s_hh;
  if (!(s_hh > 0.0) || !(std::abs(det) > 1e-13 * s_ee * s_hh)) {
    std::ostringstream msg;
    msg << "fit_wls_fixed_tau: singular normal equations at k = " << d.k;
    throw DegenerateError(msg.str());
  }
  double gamma = (s_eh * s_hl - s_el * s_hh) / det;
  double delta = (s_ee * s_hl - s_eh * s_el) / det;

  if (delta < 0.0) {
    delta = 0.0;
    gamma = s_el / s_ee;
  }
  if (!(gamma > 0.0)) {
    gamma = kGammaFloor;
    delta = std::max(0.0, (gamma * s_eh - s_hl) / s_hh);
  }
  return WlsFit{1.0 / gamma, delta, wls_value(d, c, gamma, delta)};
}

MleFit mle_fit(const Design& d, const TauColumns& c, double tau,
               double alpha_init, double lambda_init) {
  const double k = static_cast<double>(d.k);
  if (!(d.sum_log_v > 0.0)) {
    throw DegenerateError("fit_mle_fixed_tau: all excesses equal the threshold");
  }
  double sum_excess = 0.0;  // sum (V^tau - 1)
  for (double vt : c.v_tau) sum_excess += vt - 1.0;

  auto loglik = [&](double alpha, double lambda) {
    double acc = -(1.0 + alpha) * d.sum_log_v - lambda * sum_excess;
    const double lt = lambda * tau;
    for (double vt : c.v_tau) acc += std::log(alpha + lt * vt);
    return acc;
  };

  MleFit out;
  // Concave in (alpha, lambda): lambda = 0 is optimal iff the lambda-score at
  // the Pareto MLE is non-positive.
  const double alpha0 = k / d.sum_log_v;
  double lambda_score = -sum_excess;
  for (double vt : c.v_tau) lambda_score += tau * vt / alpha0;
  if (lambda_score <= 0.0) {
    out.alpha = alpha0;
    out.lambda = 0.0;
    out.loglik = loglik(alpha0, 0.0);
    out.converged = true;
    out.at_boundary = true;
    return out;
  }

  // On the face alpha = 0 the maximiser is lambda = k / sum (V^tau - 1). If the
  // alpha-score there is non-positive the supremum lies outside alpha > 0; the
  // fit is pinned at a tiny alpha and flagged as not converged.
  const double alpha_floor = 1e-8 * alpha0;
  const double lambda_face = k / sum_excess;
  double alpha_score = -d.sum_log_v;
  for (double vt : c.v_tau) alpha_score += 1.0 / (lambda_face * tau * vt);
  auto pin_to_face = [&](int iterations) {
    out.alpha = alpha_floor;
    out.lambda = lambda_face;
    out.loglik = loglik(alpha_floor, lambda_face);
    out.converged = false;
    out.iterations = iterations;
    return out;
  };
  if (alpha_score <= 0.0) return pin_to_face(0);

  double a_start = alpha_init > 0.0 && std::isfinite(alpha_init) ? alpha_init : alpha0;
  double l_start = lambda_init;
  if (!(l_start > 0.0) || !std::isfinite(l_start)) {
    l_start = sum_excess > 0.0 ? 0.1 * k / sum_excess : 1.0;
  }

  auto objective = [&](const std::array<double, 2>& y) {
    const double alpha = std::exp(y[0]);
    const double lambda = std::max(0.0, std::exp(y[1]) - kLambdaShift);
    return -loglik(alpha, lambda);
  };
  const auto res = nelder_mead<2>(
      objective, {std::log(a_start), std::log(l_start + kLambdaShift)}, {0.1, 0.5});

  double alpha = std::exp(res.x[0]);
  double lambda = std::max(0.0, std::exp(res.x[1]) - kLambdaShift);
  double best = -res.value;

  // Newton polish on the concave problem. Steps stay inside alpha > 0,
  // lambda >= 0; a step that loses likelihood only at rounding level is still
  // taken when it shrinks the gradient.
  struct Derivs {
    double g_a, g_l, h_aa, h_al, h_ll;
  };
  auto derivs = [&](double a, double lam) {
    Derivs r{-d.sum_log_v, -sum_excess, 0.0, 0.0, 0.0};
    for (double vt : c.v_tau) {
      const double inv = 1.0 / (a + lam * tau * vt);
      const double tv = tau * vt * inv;
      r.g_a += inv;
      r.g_l += tv;
      r.h_aa -= inv * inv;
      r.h_al -= tv * inv;
      r.h_ll -= tv * tv;
    }
    return r;
  };
  auto grad_norm = [&](const Derivs& r, double lam) {
    // the lambda component only counts when it pushes into the interior
    const double gl = lam > 0.0 ? r.g_l : std::max(0.0, r.g_l);
    return std::max(std::abs(r.g_a), std::abs(gl)) / k;
  };
  Derivs cur = derivs(alpha, lambda);
  for (int it = 0; it < 30 && std::isfinite(best); ++it) {
    if (grad_norm(cur, lambda) < 1e-12) break;
    const double det = cur.h_aa * cur.h_ll - cur.h_al * cur.h_al;
    if (!(det > 0.0)) break;
    const double d_a = -(cur.h_ll * cur.g_a - cur.h_al * cur.g_l) / det;
    const double d_l = -(cur.h_aa * cur.g_l - cur.h_al * cur.g_a) / det;
    double t = 1.0;
    if (alpha + d_a <= 0.0) t = std::min(t, 0.5 * alpha / -d_a);
    if (lambda + d_l < 0.0) t = std::min(t, lambda / -d_l);
    const double slack = 1e-13 * std::max(1.0, std::abs(best));
    bool moved = false;
    for (int half = 0; half < 40 && t > 0.0; ++half, t *= 0.5) {
      const double a_new = alpha + t * d_a;
      const double l_new = std::max(0.0, lambda + t * d_l);
      const double v = loglik(a_new, l_new);
      if (!std::isfinite(v) || v < best - slack) continue;
      const Derivs next = derivs(a_new, l_new);
      if (v > best || grad_norm(next, l_new) < grad_norm(cur, lambda)) {
        moved = a_new != alpha || l_new != lambda;
        alpha = a_new;
        lambda = l_new;
        best = std::max(best, v);
        cur = next;
        break;
      }
    }
    if (!moved) break;
  }
  if (alpha < alpha_floor) return pin_to_face(res.iterations);

  out.alpha = alpha;
  out.lambda = lambda;
  out.loglik = best;
  out.converged = res.converged && std::isfinite(best);
  out.iterations = res.iterations;
  return out;
}

void require_rank(const Sample& s, std::size_t k, const char* fn) {
  if (k < 1 || k + 1 > s.size()) {
    std::ostringstream msg;
    msg << fn << ": k = " << k << " outside [1, " << (s.size() > 0 ? s.size() - 1 : 0)
        << "]";
    throw DomainError(msg.str());
  }
}

struct GridOutcome {
  std::optional<FitResult> wls;
  std::vector<WlsFit> per_tau;        // parallel to grid; valid where ok[i]
  std::vector<char> ok;
};

GridOutcome wls_over_grid(const Design& d, std::span<const double> grid,
                          std::size_t k) {
  GridOutcome g;
  g.per_tau.resize(grid.size());
  g.ok.assign(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      g.per_tau[i] = wls_fit(d, make_columns(d, grid[i]));
      g.ok[i] = 1;
    } catch (const DegenerateError&) {
      continue;
    }
    const WlsFit& f = g.per_tau[i];
    if (!g.wls || f.objective < g.wls->objective) {
      g.wls = FitResult{TemperedParams(f.alpha, f.delta / grid[i], grid[i]),
                        FitMethod::WLS, k, f.objective, i, true};
    }
  }
  return g;
}

std::optional<FitResult> mle_over_grid(const Design& d,
                                       std::span<const double> grid,
                                       const GridOutcome& g, std::size_t k) {
  std::optional<FitResult> best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!g.ok[i]) continue;
    const double tau = grid[i];
    MleFit m;
    try {
      m = mle_fit(d, make_columns(d, tau), tau, g.per_tau[i].alpha,
                  g.per_tau[i].delta / tau);
    } catch (const DegenerateError&) {
      continue;
    }
    if (!std::isfinite(m.loglik)) continue;
    if (!best || m.loglik > best->objective) {
      best = FitResult{TemperedParams(m.alpha, m.lambda, tau), FitMethod::MLE, k,
                       m.loglik, i, m.converged};
    }
  }
  return best;
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("tau grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      throw DomainError("tau grid values must be positive and finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw DomainError("tau grid must be strictly ascending");
  }
}

}  // namespace

std::string to_string(WeightScheme w) {
  return w == WeightScheme::Hill ? "hill" : "uniform";
}

std::string to_string(FitMethod m) { return m == FitMethod::WLS ? "WLS" : "MLE"; }

WeightScheme parse_weight_scheme(const std::string& name) {
  if (name == "hill") return WeightScheme::Hill;
  if (name == "uniform") return WeightScheme::Uniform;
  throw DomainError("unknown weight scheme '" + name + "' (expected hill or uniform)");
}

POTView pot_excesses(const Sample& s, std::size_t k) {
  require_rank(s, k, "pot_excesses");
  const std::size_t n = s.size();
  POTView p;
  p.k = k;
  p.n = n;
  p.threshold = s.order_stat(n - k);
  p.v.resize(k);
  for (std::size_t j = 1; j <= k; ++j) p.v[j - 1] = s.order_stat(n - j + 1) / p.threshold;
  return p;
}

double hill(const Sample& s, std::size_t k) {
  require_rank(s, k, "hill");
  const std::size_t n = s.size();
  const double log_t = std::log(s.order_stat(n - k));
  double total = 0.0;
  for (std::size_t j = 1; j <= k; ++j) total += std::log(s.order_stat(n - j + 1)) - log_t;
  return total / static_cast<double>(k);
}

double hill_alpha(const Sample& s, std::size_t k) {
  const double h = hill(s, k);
  if (!(h > 0.0)) throw DegenerateError("hill: top k+1 values are equal, H = 0");
  return 1.0 / h;
}

double qq_exponential_quantile(std::size_t k, std::size_t j) {
  return std::log(static_cast<double>(k + 1) / static_cast<double>(j));
}

double wls_objective(const POTView& p, double alpha, double delta, double tau,
                     WeightScheme weights) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("wls_objective: alpha must be > 0");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("wls_objective: delta must be >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("wls_objective: tau must be > 0");
  const Design d = make_design(p, weights);
  return wls_value(d, make_columns(d, tau), 1.0 / alpha, delta);
}

WlsFit fit_wls_fixed_tau(const POTView& p, double tau, WeightScheme weights) {
  if (p.k < 3) throw DomainError("fit_wls_fixed_tau: k must be >= 3");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("fit_wls_fixed_tau: tau must be > 0");
  const Design d = make_design(p, weights);
  return wls_fit(d, make_columns(d, tau));
}

double fit_wls_pareto_alpha(const POTView& p, WeightScheme weights) {
  const Design d = make_design(p, weights);
  double s_ee = 0.0, s_el = 0.0;
  for (std::size_t j = 0; j < d.k; ++j) {
    s_ee += d.w[j] * d.e[j] * d.e[j];
    s_el += d.w[j] * d.e[j] * d.log_v[j];
  }
  if (!(s_el > 0.0)) throw DegenerateError("fit_wls_pareto_alpha: all excesses equal");
  return s_ee / s_el;
}

double log_likelihood(const POTView& p, double alpha, double lambda,
                      double tau) {
  if (!std::isfinite(alpha) || !std::isfinite(lambda) || !std::isfinite(tau))
    throw DomainError("log_likelihood: parameters must be finite");
  if (!(alpha > 0.0) || !(lambda >= 0.0) || !(tau > 0.0))
    throw DomainError("log_likelihood: need alpha > 0, lambda >= 0, tau > 0");
  double acc = 0.0;
  for (double v : p.v) {
    const double l = std::log(v);
    const double m1 = std::expm1(tau * l);
    acc += -(1.0 + alpha) * l - lambda * m1 + std::log(alpha + lambda * tau * (1.0 + m1));
  }
  return acc;
}

std::array<double, 3> score(const POTView& p, const TemperedParams& params) {
  const double a = params.alpha(), lam = params.lambda(), tau = params.tau();
  std::array<double, 3> g{0.0, 0.0, 0.0};
  for (double v : p.v) {
    const double l = std::log(v);
    const double vt = std::exp(tau * l);
    const double denom = a + lam * tau * vt;
    g[0] += 1.0 / denom - l;
    g[1] += tau * vt / denom - std::expm1(tau * l);
    g[2] += lam * (vt * (1.0 + tau * l) / denom - vt * l);
  }
  return g;
}

MleFit fit_mle_fixed_tau(const POTView& p, double tau, double alpha_init,
                         double lambda_init) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("fit_mle_fixed_tau: tau must be > 0");
  if (p.k < 1) throw DomainError("fit_mle_fixed_tau: empty view");
  const Design d = make_design(p, WeightScheme::Hill);
  return mle_fit(d, make_columns(d, tau), tau, alpha_init, lambda_init);
}

std::vector<double> default_tau_grid(std::size_t points, double lo, double hi) {
  if (points == 0 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("default_tau_grid: bad range");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

KFit fit_k(const POTView& p, std::span<const double> tau_grid,
           WeightScheme weights) {
  require_grid(tau_grid);
  if (p.k < 3) throw DomainError("fit_k: k must be >= 3");
  const Design d = make_design(p, weights);
  const GridOutcome g = wls_over_grid(d, tau_grid, p.k);
  if (!g.wls) throw DegenerateError("fit_k: every tau grid point is degenerate");
  auto mle = mle_over_grid(d, tau_grid, g, p.k);
  if (!mle) throw DegenerateError("fit_k: no ML fit on the tau grid");
  return KFit{*g.wls, *mle};
}

FitResult fit_k_wls(const POTView& p, std::span<const double> tau_grid,
                    WeightScheme weights) {
  require_grid(tau_grid);
  if (p.k < 3) throw DomainError("fit_k_wls: k must be >= 3");
  const Design d = make_design(p, weights);
  const GridOutcome g = wls_over_grid(d, tau_grid, p.k);
  if (!g.wls) throw DegenerateError("fit_k_wls: every tau grid point is degenerate");
  return *g.wls;
}

double ss_k(const POTView& p, const FitResult& wls_fit) {
  if (wls_fit.k != p.k) {
    std::ostringstream msg;
    msg << "ss_k: fit is for k = " << wls_fit.k << " but view has k = " << p.k;
    throw DomainError(msg.str());
  }
  const TemperedParams& q = wls_fit.params;
  return wls_objective(p, q.alpha(), q.delta(), q.tau(), WeightScheme::Hill);
}

const TraceRecord& FitTrace::at(std::size_t k) const {
  auto it = std::lower_bound(records.begin(), records.end(), k,
                             [](const TraceRecord& r, std::size_t key) { return r.k < key; });
  if (it == records.end() || it->k != k) {
    std::ostringstream msg;
    msg << "FitTrace: no record for k = " << k;
    throw DomainError(msg.str());
  }
  return *it;
}

FitTrace fit_trace(const Sample& s, const TraceOptions& options) {
  const std::size_t n = s.size();
  if (n < 5) throw DomainError("fit_trace: need at least 5 observations");
  require_grid(options.tau_grid);
  const std::size_t k_max = options.k_max == 0 ? n - 1 : options.k_max;
  const std::size_t k_min = options.k_min;
  if (k_min < 3) throw DomainError("fit_trace: k_min must be >= 3");
  if (k_max > n - 1) throw DomainError("fit_trace: k_max must be <= n - 1");
  if (k_min > k_max) {
    std::ostringstream msg;
    msg << "fit_trace: empty k range [" << k_min << ", " << k_max << "]";
    throw DomainError(msg.str());
  }

  const std::size_t count = k_max - k_min + 1;
  std::vector<char> want_mle(count, options.mle_ranks ? 0 : 1);
  if (options.mle_ranks) {
    for (std::size_t k : *options.mle_ranks)
      if (k >= k_min && k <= k_max) want_mle[k - k_min] = 1;
  }

  const std::span<const double> grid(options.tau_grid);
  std::vector<std::optional<TraceRecord>> slots(count);
  parallel_for(count, options.threads, [&](std::size_t idx) {
    const std::size_t k = k_min + idx;
    const POTView view = pot_excesses(s, k);
    const Design d = make_design(view, options.weights);
    const GridOutcome g = wls_over_grid(d, grid, k);
    if (!g.wls) return;

    TraceRecord rec;
    rec.k = k;
    rec.threshold = view.threshold;
    rec.wls = *g.wls;
    rec.ss_k = ss_k(view, rec.wls);
    rec.hill = hill(s, k);
    try {
      rec.alpha_t = truncated_alpha(s, k);
    } catch (const NumericError&) {
    }
    if (want_mle[idx]) rec.mle = mle_over_grid(d, grid, g, k);
    slots[idx] = std::move(rec);
  });

  FitTrace trace;
  trace.k_min = k_min;
  trace.k_max = k_max;
  trace.n = n;
  trace.tau_grid = options.tau_grid;
  trace.weights = options.weights;
  for (auto& slot : slots) {
    if (slot) trace.records.push_back(std::move(*slot));
    else ++trace.failed_ranks;
  }
  if (trace.records.empty()) throw DegenerateError("fit_trace: no rank could be fitted");

  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.records.size(); ++i)
    if (trace.records[i].ss_k < trace.records[best].ss_k) best = i;
  TraceRecord& sel = trace.records[best];
  trace.k_hat = sel.k;
  if (!sel.mle) {
    const POTView view = pot_excesses(s, sel.k);
    const Design d = make_design(view, options.weights);
    sel.mle = mle_over_grid(d, grid, wls_over_grid(d, grid, sel.k), sel.k);
  }
  return trace;
}

double tail_prob(const FitResult& fit, const Sample& s, std::size_t k,
                 double z) {
  require_rank(s, k, "tail_prob");
  if (fit.k != k) throw DomainError("tail_prob: fit was computed at a different k");
  const std::size_t n = s.size();
  const double t = s.order_stat(n - k);
  if (!(z >= t) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << "tail_prob: z = " << z << " is below the threshold " << t;
    throw DomainError(msg.str());
  }
  const double ratio = std::max(1.0, z / t);
  return static_cast<double>(k + 1) / static_cast<double>(n + 1) *
         limit_survival(ratio, fit.params);
}

double extreme_quantile(const FitResult& fit, const Sample& s, std::size_t k,
                        double prob) {
  require_rank(s, k, "extreme_quantile");
  if (fit.k != k) throw DomainError("extreme_quantile: fit was computed at a different k");
  const std::size_t n = s.size();
  const double exceed = static_cast<double>(k + 1) / static_cast<double>(n + 1);
  if (!(prob > 0.0 && prob <= exceed)) {
    std::ostringstream msg;
    msg << "extreme_quantile: p = " << prob << " outside (0, " << exceed << "]";
    throw DomainError(msg.str());
  }
  const double q = std::min(1.0, prob / exceed);
  return s.order_stat(n - k) * limit_quantile(q, fit.params);
}

double weissman_quantile(const Sample& s, std::size_t k, double prob) {
  require_rank(s, k, "weissman_quantile");
  const std::size_t n = s.size();
  const double ratio = static_cast<double>(k) / (static_cast<double>(n) * prob);
  if (!(prob > 0.0) || !(ratio >= 1.0)) {
    std::ostringstream msg;
    msg << "weissman_quantile: p = " << prob << " outside (0, k/n]";
    throw DomainError(msg.str());
  }
  const double h = hill(s, k);
  if (!(h > 0.0)) throw DegenerateError("weissman_quantile: degenerate Hill estimate");
  return s.order_stat(n - k) * std::pow(ratio, h);
}

double truncated_alpha_from(double hill_value, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw DegenerateError("truncated_alpha: R must lie in (0, 1)");
  if (!(hill_value > 0.0) || !std::isfinite(hill_value))
    throw DomainError("truncated_alpha: H must be > 0");
  // R^a log R / (1 - R^a) = -c / expm1(a c) with c = -log R
  const double c = -std::log(ratio);
  auto g = [&](double a) { return 1.0 / a - c / std::expm1(a * c) - hill_value; };
  if (!(hill_value < 0.5 * c)) {
    std::ostringstream msg;
    msg << "truncated_alpha: no root, H = " << hill_value << " >= -log(R)/2 = " << 0.5 * c;
    throw NumericError(msg.str());
  }
  double hi = 1.0 / hill_value;
  if (g(hi) >= 0.0) return hi;  // correction term below double resolution
  double lo = 0.5 * hi;
  int halvings = 0;
  while (g(lo) <= 0.0) {
    hi = lo;
    lo *= 0.5;
    if (++halvings > 2000) throw NumericError("truncated_alpha: no bracket found");
  }
  return solve_bracketed(g, lo, hi);
}

double truncated_alpha(const Sample& s, std::size_t k) {
  require_rank(s, k, "truncated_alpha");
  if (k < 2) throw DomainError("truncated_alpha: k must be >= 2");
  const std::size_t n = s.size();
  const double r = s.order_stat(n - k) / s.order_stat(n);
  if (!(r < 1.0)) throw DegenerateError("truncated_alpha: tied maximum, R = 1");
  return truncated_alpha_from(hill(s, k), r);
}

}  // namespace tempered
