#include "tempered/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "tempered/error.hpp"
#include "tempered/parallel.hpp"
#include "tempered/roots.hpp"

namespace tempered {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string short_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string quantile_name(double c) { return "Q_c=" + short_number(c); }

// type-7 quantile of sorted data
double sorted_quantile(const std::vector<double>& v, double prob) {
  const double h = (static_cast<double>(v.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct SeriesSpec {
  Estimator estimator;
  std::string quantity;
  double truth;
};

// Estimates of one replication at one rank, in SeriesSpec order.
void fill_rank(const std::vector<SeriesSpec>& specs, const StudyConfig& cfg,
               const std::vector<double>& p_values, const Sample& s,
               std::size_t k, const FitResult* wls, const FitResult* mle,
               std::vector<double>& out) {
  auto guarded = [](auto&& f) {
    try {
      const double v = f();
      return std::isfinite(v) ? v : kNaN;
    } catch (const std::exception&) {
      return kNaN;
    }
  };
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const SeriesSpec& sp = specs[i];
    const FitResult* fit = sp.estimator == Estimator::WLS   ? wls
                           : sp.estimator == Estimator::MLE ? mle
                                                            : nullptr;
    double v = kNaN;
    if (sp.quantity == "alpha") {
      switch (sp.estimator) {
        case Estimator::WLS:
        case Estimator::MLE:
          v = fit ? fit->params.alpha() : kNaN;
          break;
        case Estimator::Hill:
          v = guarded([&] { return hill_alpha(s, k); });
          break;
        case Estimator::TruncatedPareto:
          v = guarded([&] { return truncated_alpha(s, k); });
          break;
        default:
          break;
      }
    } else if (sp.quantity == "tau") {
      v = fit ? fit->params.tau() : kNaN;
    } else {
      std::size_t c_index = 0;
      while (quantile_name(cfg.quantile_p_factors[c_index]) != sp.quantity) ++c_index;
      const double p = p_values[c_index];
      if (sp.estimator == Estimator::Weissman)
        v = guarded([&] { return weissman_quantile(s, k, p); });
      else if (fit)
        v = guarded([&] { return extreme_quantile(*fit, s, k, p); });
    }
    out[i] = v;
  }
}

}  // namespace

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::WLS: return "WLS";
    case Estimator::MLE: return "MLE";
    case Estimator::Hill: return "Hill";
    case Estimator::Weissman: return "Weissman";
    case Estimator::TruncatedPareto: return "TruncatedPareto";
  }
  return "?";
}

void validate(const StudyConfig& cfg) {
  validate(cfg.family);
  if (cfg.n_reps < 1) throw DomainError("study: n_reps must be >= 1");
  if (cfg.n < 5) throw DomainError("study: n must be >= 5");
  if (cfg.k_min < 3 || cfg.k_min > cfg.n - 1) throw DomainError("study: k_min must lie in [3, n-1]");
  for (std::size_t k : cfg.k_grid) {
    if (k < 3 || k > cfg.n - 1) {
      std::ostringstream msg;
      msg << "study: k_grid value " << k << " outside [3, " << cfg.n - 1 << "]";
      throw DomainError(msg.str());
    }
  }
  for (double c : cfg.quantile_p_factors) {
    if (!(c > 0.0) || !(1.0 / (c * static_cast<double>(cfg.n)) < 1.0))
      throw DomainError("study: each c must give p = 1/(c n) < 1");
  }
  if (cfg.tau_grid.empty()) throw DomainError("study: tau grid is empty");
  if (cfg.estimators.empty()) throw DomainError("study: no estimators selected");
}

std::vector<std::size_t> stepped_k_grid(std::size_t k_min, std::size_t n,
                                        std::size_t step) {
  if (step == 0) throw DomainError("stepped_k_grid: step must be >= 1");
  if (n < 2 || k_min > n - 1) throw DomainError("stepped_k_grid: k_min must be <= n - 1");
  std::vector<std::size_t> grid;
  for (std::size_t k = k_min; k <= n - 1; k += step) grid.push_back(k);
  if (grid.back() != n - 1) grid.push_back(n - 1);
  return grid;
}

const Series& StudyResult::get(Estimator e, const std::string& quantity) const {
  for (const Series& s : series)
    if (s.estimator == e && s.quantity == quantity) return s;
  throw DomainError("study result has no series " + to_string(e) + "/" + quantity);
}

double true_quantile(const TemperedSampleSpec& spec, double prob) {
  validate(spec);
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("true_quantile: p must lie in (0, 1)");
  const double log_p = std::log(prob);
  auto f = [&](double y) { return tempered_log_survival(spec, std::exp(y)) - log_p; };
  double lo = -1.0, hi = 1.0;
  for (int i = 0; f(lo) <= 0.0; ++i) {
    lo *= 2.0;
    if (i > 60) throw NumericError("true_quantile: no lower bracket");
  }
  for (int i = 0; f(hi) >= 0.0; ++i) {
    hi *= 2.0;
    if (i > 60) throw NumericError("true_quantile: no upper bracket");
  }
  return std::exp(solve_bracketed(f, lo, hi));
}

CellStats cell_stats(const std::vector<double>& values, double truth) {
  CellStats c;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++c.count;
  }
  if (c.count == 0) {
    c.mean = c.bias = c.variance = c.rmse = kNaN;
    return c;
  }
  const double n = static_cast<double>(c.count);
  c.mean = sum / n;
  double ss = 0.0, se = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    ss += (v - c.mean) * (v - c.mean);
    se += (v - truth) * (v - truth);
  }
  c.variance = ss / n;
  c.bias = c.mean - truth;
  c.rmse = std::sqrt(se / n);
  return c;
}

BoxStats box_stats(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  BoxStats b;
  b.count = values.size();
  if (values.empty()) {
    b.q1 = b.median = b.q3 = b.lower_whisker = b.upper_whisker = kNaN;
    return b;
  }
  std::sort(values.begin(), values.end());
  b.q1 = sorted_quantile(values, 0.25);
  b.median = sorted_quantile(values, 0.5);
  b.q3 = sorted_quantile(values, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr, hi_fence = b.q3 + 1.5 * iqr;
  b.lower_whisker = b.q1;
  b.upper_whisker = b.q3;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
    } else {
      b.lower_whisker = std::min(b.lower_whisker, v);
      b.upper_whisker = std::max(b.upper_whisker, v);
    }
  }
  return b;
}

StudyResult run_study(const StudyConfig& cfg_in) {
  StudyConfig cfg = cfg_in;
  if (cfg.k_grid.empty()) cfg.k_grid = stepped_k_grid(cfg.k_min, cfg.n, 10);
  std::sort(cfg.k_grid.begin(), cfg.k_grid.end());
  cfg.k_grid.erase(std::unique(cfg.k_grid.begin(), cfg.k_grid.end()), cfg.k_grid.end());
  validate(cfg);

  const auto t0 = std::chrono::steady_clock::now();
  TemperedSampleSpec spec = cfg.family;
  spec.n = cfg.n;
  spec.seed = cfg.seed;

  StudyResult res;
  res.name = cfg.name;
  res.family = family_name(spec.base) + " x Weibull(tau=" + short_number(spec.tau) +
               ", beta=" + short_number(spec.beta) + ")";
  res.n = cfg.n;
  res.n_reps = cfg.n_reps;
  res.seed = cfg.seed;
  res.k_grid = cfg.k_grid;
  for (double c : cfg.quantile_p_factors) {
    const double p = 1.0 / (c * static_cast<double>(cfg.n));
    res.p_values.push_back(p);
    res.true_quantiles.push_back(true_quantile(spec, p));
  }

  const double alpha_truth = tail_index(spec.base).value_or(kNaN);
  std::vector<SeriesSpec> specs;
  auto has = [&](Estimator e) { return cfg.estimators.count(e) > 0; };
  for (Estimator e : {Estimator::WLS, Estimator::MLE}) {
    if (!has(e)) continue;
    specs.push_back({e, "alpha", alpha_truth});
    specs.push_back({e, "tau", spec.tau});
    for (std::size_t c = 0; c < res.p_values.size(); ++c)
      specs.push_back({e, quantile_name(cfg.quantile_p_factors[c]), res.true_quantiles[c]});
  }
  if (has(Estimator::Hill)) specs.push_back({Estimator::Hill, "alpha", alpha_truth});
  if (has(Estimator::Weissman)) {
    for (std::size_t c = 0; c < res.p_values.size(); ++c)
      specs.push_back(
          {Estimator::Weissman, quantile_name(cfg.quantile_p_factors[c]), res.true_quantiles[c]});
  }
  if (has(Estimator::TruncatedPareto))
    specs.push_back({Estimator::TruncatedPareto, "alpha", alpha_truth});

  const std::size_t n_k = cfg.k_grid.size();
  const std::size_t n_s = specs.size();
  // values[rep][k_index][series]; at_hat[rep][series]
  std::vector<std::vector<std::vector<double>>> values(
      cfg.n_reps, std::vector<std::vector<double>>(n_k, std::vector<double>(n_s, kNaN)));
  std::vector<std::vector<double>> at_hat(cfg.n_reps, std::vector<double>(n_s, kNaN));
  std::vector<std::size_t> k_hat(cfg.n_reps, 0);

  const bool want_mle = has(Estimator::MLE);
  parallel_for(cfg.n_reps, cfg.threads, [&](std::size_t r) {
    try {
      TemperedSampleSpec rep_spec = spec;
      rep_spec.stream = r;
      const Sample s = sample_tempered(rep_spec);

      TraceOptions opt;
      opt.k_min = cfg.k_min;
      opt.tau_grid = cfg.tau_grid;
      opt.weights = cfg.weights;
      opt.mle_ranks = want_mle ? cfg.k_grid : std::vector<std::size_t>{};
      const FitTrace trace = fit_trace(s, opt);

      for (std::size_t ki = 0; ki < n_k; ++ki) {
        const std::size_t k = cfg.k_grid[ki];
        std::optional<FitResult> wls, mle;
        if (k >= trace.k_min) {
          try {
            const TraceRecord& rec = trace.at(k);
            wls = rec.wls;
            mle = rec.mle;
          } catch (const DomainError&) {
          }
        } else {
          try {
            const KFit kf = fit_k(pot_excesses(s, k), cfg.tau_grid, cfg.weights);
            wls = kf.wls;
            mle = kf.mle;
          } catch (const std::exception&) {
          }
        }
        fill_rank(specs, cfg, res.p_values, s, k, wls ? &*wls : nullptr,
                  mle ? &*mle : nullptr, values[r][ki]);
      }
      const TraceRecord& sel = trace.selected();
      k_hat[r] = sel.k;
      fill_rank(specs, cfg, res.p_values, s, sel.k, &sel.wls,
                sel.mle ? &*sel.mle : nullptr, at_hat[r]);
    } catch (const std::exception&) {
      k_hat[r] = 0;
    }
  });

  res.k_hat = k_hat;
  res.failed_reps = static_cast<std::size_t>(std::count(k_hat.begin(), k_hat.end(), 0));
  for (std::size_t si = 0; si < n_s; ++si) {
    Series series;
    series.estimator = specs[si].estimator;
    series.quantity = specs[si].quantity;
    series.truth = specs[si].truth;
    std::vector<double> column(cfg.n_reps);
    for (std::size_t ki = 0; ki < n_k; ++ki) {
      for (std::size_t r = 0; r < cfg.n_reps; ++r) column[r] = values[r][ki][si];
      series.by_k.push_back(cell_stats(column, series.truth));
    }
    for (std::size_t r = 0; r < cfg.n_reps; ++r) column[r] = at_hat[r][si];
    series.at_k_hat = column;
    series.at_k_hat_stats = cell_stats(column, series.truth);
    series.box = box_stats(column);
    res.series.push_back(std::move(series));
  }
  res.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<StudyConfig> preset_scenarios() {
  auto make = [](std::string name, BaseFamily base, double tau, double beta,
                 std::vector<double> factors = {1.0, 2.0}) {
    StudyConfig cfg;
    cfg.name = std::move(name);
    cfg.family = TemperedSampleSpec{base, tau, beta, 500, 0, 0};
    cfg.n = 500;
    cfg.n_reps = 500;
    cfg.k_grid = stepped_k_grid(10, 500, 10);
    cfg.quantile_p_factors = std::move(factors);
    return cfg;
  };
  return {
      make("burr-weibull-1", Burr{2.0, -1.0}, 1.5, 0.5),
      make("burr-weibull-2", Burr{2.0, -1.0}, 0.5, 0.2),
      make("frechet-weibull-1", Frechet{2.0}, 2.0, 0.5),
      make("frechet-weibull-2", Frechet{2.0}, 0.5, 0.2),
      make("pareto-weibull", Pareto{1.0}, 2.0, 0.2),
      make("lognormal-weibull", LogNormal{0.0, 10.0}, 1.5, 0.5, {0.2, 0.4}),
  };
}

StudyConfig scenario(const std::string& name) {
  for (StudyConfig& cfg : preset_scenarios())
    if (cfg.name == name) return cfg;
  std::ostringstream msg;
  msg << "unknown scenario '" << name << "' (known:";
  for (const StudyConfig& cfg : preset_scenarios()) msg << ' ' << cfg.name;
  msg << ')';
  throw DomainError(msg.str());
}

}  // namespace tempered
