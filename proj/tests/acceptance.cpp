// Acceptance gate: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tempered/asymptotics.hpp"
#include "tempered/estimators.hpp"
#include "tempered/quadrature.hpp"
#include "tempered/simulation.hpp"

using namespace tempered;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

Sample pareto_weibull(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  return sample_tempered(TemperedSampleSpec{Pareto{1.0}, 2.0, 0.2, n, seed, stream});
}

Outcome hill_reduction() {
  double worst = 0.0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const Sample s = pareto_weibull(500, 101, r);
    for (std::size_t i = 0; i < 20; ++i) {
      const std::size_t k = 10 + i * 25;
      const double a = fit_wls_pareto_alpha(pot_excesses(s, k));
      worst = std::max(worst, rel_diff(a, 1.0 / hill(s, k)));
    }
  }
  return {worst <= 1e-12, "max relative |alpha_wls - 1/H| = " + fmt(worst)};
}

Outcome round_trip() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Sample s = pareto_weibull(500, 202, 0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 10 + static_cast<std::size_t>(u01(rng) * 489);
    FitResult f;
    f.k = k;
    const double lambda = i % 5 == 0 ? 0.0 : std::exp(std::log(1e-3) + u01(rng) * std::log(3e3));
    f.params = TemperedParams(0.2 + 5.0 * u01(rng), lambda, 0.1 + 4.9 * u01(rng));
    const double top = (k + 1.0) / 501.0;
    const double p = top * std::exp(std::log(1e-10) * u01(rng));
    const double q = extreme_quantile(f, s, k, p);
    worst = std::max(worst, std::abs(tail_prob(f, s, k, q) - p) / p);
  }
  return {worst <= 1e-8, "max relative round-trip error = " + fmt(worst)};
}

Outcome density_normalisation() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const TemperedParams p(0.2 + 4.8 * u01(rng), 0.01 + 3.0 * u01(rng), 0.2 + 3.8 * u01(rng));
    const double mass =
        integrate_from_one([&](double x) { return limit_density(x, p); }, 1e-9, "density").value;
    worst = std::max(worst, std::abs(mass - 1.0));
  }
  return {worst <= 1e-6, "max |mass - 1| = " + fmt(worst)};
}

Outcome fisher_cross_check() {
  const TemperedParams p(2.0, 0.5, 1.5);
  const Matrix3 m = fisher_info(p);
  const Matrix3 mc = mc_fisher_oracle(p, 1000000, 404);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(m(i, j) - mc(i, j)) / std::abs(mc(i, j)));
  const double i11 = fisher_entry(TemperedParams(2.0, 1e-12, 1.5), 0, 0);
  const double limit = std::abs(i11 - 0.25);
  return {worst <= 0.05 && limit <= 1e-6,
          "max relative entry gap = " + fmt(worst) + ", |I11(lambda->0) - 1/alpha^2| = " + fmt(limit)};
}

Outcome score_residuals() {
  const std::vector<double> grid = default_tau_grid();
  double worst = 0.0;
  int converged = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const POTView p = pot_excesses(pareto_weibull(500, 505, r), 300);
    const FitResult f = fit_k(p, grid).mle;
    if (!f.converged) continue;
    ++converged;
    const auto g = score(p, f.params);
    // at lambda = 0 only a positive lambda-score violates optimality
    const double gl = f.params.lambda() > 0.0 ? std::abs(g[1]) : std::max(0.0, g[1]);
    worst = std::max({worst, std::abs(g[0]) / 300.0, gl / 300.0});
  }
  return {worst < 1e-5 && converged > 0,
          std::to_string(converged) + "/100 converged, max normalized residual = " + fmt(worst)};
}

struct StudySummary {
  double mean_alpha = 0.0;
  double median_tau = 0.0;
  double rmse_mle = 0.0;
  double rmse_weissman = 0.0;
  double undershoot = 0.0;
};

StudySummary adaptive_study(const BaseFamily& base, double tau, double beta) {
  const std::size_t n = 500, reps = 100;
  TraceOptions opt;
  opt.mle_ranks = std::vector<std::size_t>{};
  opt.threads = 0;
  std::vector<double> alphas, taus;
  double se_m = 0.0, se_w = 0.0;
  int under = 0;
  const TemperedSampleSpec spec{base, tau, beta, n, 606, 0};
  const double truth = true_quantile(spec, 1.0 / n);
  const std::vector<double> grid = default_tau_grid();
  for (std::uint64_t r = 0; r < reps; ++r) {
    TemperedSampleSpec rs = spec;
    rs.stream = r;
    const Sample s = sample_tempered(rs);
    const FitTrace t = fit_trace(s, opt);
    alphas.push_back(t.selected().mle->params.alpha());
    taus.push_back(t.selected().mle->params.tau());
    // largest grid rank k = n - 1
    const FitResult m = fit_k(pot_excesses(s, n - 1), grid).mle;
    const double qm = extreme_quantile(m, s, n - 1, 1.0 / n);
    const double qw = weissman_quantile(s, n - 1, 1.0 / n);
    se_m += (qm - truth) * (qm - truth);
    se_w += (qw - truth) * (qw - truth);
    if (qm < qw) ++under;
  }
  StudySummary out;
  for (double a : alphas) out.mean_alpha += a;
  out.mean_alpha /= static_cast<double>(reps);
  std::sort(taus.begin(), taus.end());
  out.median_tau = 0.5 * (taus[reps / 2 - 1] + taus[reps / 2]);
  out.rmse_mle = std::sqrt(se_m / reps);
  out.rmse_weissman = std::sqrt(se_w / reps);
  out.undershoot = static_cast<double>(under) / reps;
  return out;
}

const StudySummary& pareto_study() {
  static const StudySummary s = adaptive_study(Pareto{1.0}, 2.0, 0.2);
  return s;
}

const StudySummary& burr_study() {
  static const StudySummary s = adaptive_study(Burr{2.0, -1.0}, 1.5, 0.5);
  return s;
}

Outcome simulation_recovery() {
  const StudySummary& p = pareto_study();
  const StudySummary& b = burr_study();
  const bool ok = p.mean_alpha >= 0.8 && p.mean_alpha <= 1.2 && p.median_tau >= 1.4 &&
                  p.median_tau <= 2.8 && b.mean_alpha >= 1.6 && b.mean_alpha <= 2.5;
  return {ok, "Pareto-Weibull mean alpha = " + fmt(p.mean_alpha) + ", median tau = " +
                  fmt(p.median_tau) + "; Burr-Weibull mean alpha = " + fmt(b.mean_alpha)};
}

Outcome overestimation() {
  const StudySummary& p = pareto_study();
  const StudySummary& b = burr_study();
  const bool ok = p.rmse_mle < p.rmse_weissman && b.rmse_mle < b.rmse_weissman &&
                  p.undershoot >= 0.9 && b.undershoot >= 0.9;
  return {ok, "RMSE mle/weissman: Pareto-Weibull " + fmt(p.rmse_mle) + "/" + fmt(p.rmse_weissman) +
                  ", Burr-Weibull " + fmt(b.rmse_mle) + "/" + fmt(b.rmse_weissman) +
                  "; undershoot share " + fmt(p.undershoot) + ", " + fmt(b.undershoot)};
}

Outcome invariance() {
  TraceOptions opt;
  opt.mle_ranks = std::vector<std::size_t>{10, 50, 100, 150, 199};
  std::mt19937_64 shuffle_rng(808);
  bool exact = true, indices = true;
  double worst = 0.0, worst_q = 0.0;
  auto compare = [&](const FitTrace& a, const FitTrace& b, double c, bool bitwise) {
    if (a.k_hat != b.k_hat || a.records.size() != b.records.size()) {
      indices = false;
      return;
    }
    auto params = [&](const FitResult& x, const FitResult& y) {
      if (x.tau_grid_index != y.tau_grid_index) indices = false;
      for (double d : {rel_diff(x.params.alpha(), y.params.alpha()), rel_diff(x.params.lambda(), y.params.lambda()),
                       rel_diff(x.params.tau(), y.params.tau()), rel_diff(x.objective, y.objective)}) {
        worst = std::max(worst, d);
        if (bitwise && d != 0.0) exact = false;
      }
    };
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      const TraceRecord& x = a.records[i];
      const TraceRecord& y = b.records[i];
      params(x.wls, y.wls);
      if (x.mle.has_value() != y.mle.has_value()) indices = false;
      else if (x.mle) params(*x.mle, *y.mle);
      for (double d : {rel_diff(x.ss_k, y.ss_k), rel_diff(x.hill, y.hill), rel_diff(x.threshold * c, y.threshold)}) {
        worst = std::max(worst, d);
        if (bitwise && d != 0.0) exact = false;
      }
    }
  };
  for (std::uint64_t r = 0; r < 20; ++r) {
    const Sample s = pareto_weibull(200, 707, r);
    const FitTrace base = fit_trace(s, opt);
    std::vector<double> v(s.values().begin(), s.values().end());
    std::shuffle(v.begin(), v.end(), shuffle_rng);
    compare(base, fit_trace(Sample(v), opt), 1.0, true);
    for (double c : {1e-3, 1.0, 1e6}) {
      const Sample sc = s.scaled(c);
      const FitTrace t = fit_trace(sc, opt);
      compare(base, t, c, c == 1.0);
      const std::size_t k = base.k_hat;
      const double q0 = extreme_quantile(*base.selected().mle, s, k, 1e-4);
      const double q1 = extreme_quantile(*t.selected().mle, sc, k, 1e-4);
      const double d = rel_diff(q0 * c, q1);
      worst_q = std::max(worst_q, d);
      if (c == 1.0 && d != 0.0) exact = false;
    }
  }
  const bool ok = exact && indices && worst <= 1e-9 && worst_q <= 1e-9;
  return {ok, std::string("c = 1 and permutations bit-identical: ") + (exact ? "yes" : "no") +
                  ", k_hat and tau indices identical: " + (indices ? "yes" : "no") +
                  ", max relative column gap = " + fmt(worst) + ", max quantile/c gap = " + fmt(worst_q)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(TEMPERED_TEST_TMP) / "acceptance_9";
  fs::create_directories(dir);
  const Sample s = pareto_weibull(400, 909, 0);
  {
    std::ofstream f(dir / "data.csv");
    f << "value\n";
    f.precision(17);
    for (double x : s.values()) f << x << '\n';
  }
  int failures = 0;
  auto run = [&](const std::string& args, const std::string& out) {
    const std::string cmd = std::string("\"") + TEMPERED_TOOL + "\" " + args + " --output \"" +
                            (dir / out).string() + "\" 2> \"" + (dir / "stderr.txt").string() + "\"";
    if (std::system(cmd.c_str()) != 0) ++failures;
    return slurp((dir / out).string());
  };
  const std::string sim = "simulate --preset burr-weibull-1 --reps 8 --n 200 --k-step 50 --seed 42";
  const std::string fit = "fit --input \"" + (dir / "data.csv").string() + "\" --p 0.001 --seed 42";
  const std::string s1 = run(sim + " --threads 1", "sim1.json");
  const std::string s2 = run(sim + " --threads 1", "sim2.json");
  const std::string s4 = run(sim + " --threads 4", "sim4.json");
  const std::string f1 = run(fit + " --threads 1", "fit1.json");
  const std::string f2 = run(fit + " --threads 1", "fit2.json");
  const std::string f4 = run(fit + " --threads 4", "fit4.json");
  const bool ok = failures == 0 && !s1.empty() && !f1.empty() && s1 == s2 && s1 == s4 && f1 == f2 &&
                  f1 == f4;
  return {ok, "simulate " + std::string(s1 == s2 && s1 == s4 ? "identical" : "differs") + ", fit " +
                  (f1 == f2 && f1 == f4 ? "identical" : "differs") + ", failed runs " +
                  std::to_string(failures)};
}

Outcome truncated_comparator() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double alpha = 0.1 + 9.9 * u01(rng);
    const double r = std::exp(std::log(1e-6) + u01(rng) * (std::log(0.99) - std::log(1e-6)));
    const double ra = std::pow(r, alpha);
    const double h = 1.0 / alpha + ra * std::log(r) / (1.0 - ra);
    const double a = truncated_alpha_from(h, r);
    const double ra2 = std::pow(r, a);
    worst = std::max(worst, std::abs(1.0 / a + ra2 * std::log(r) / (1.0 - ra2) - h));
  }
  double limit = 0.0;
  for (double h : {0.1, 0.25, 0.5, 0.9}) limit = std::max(limit, std::abs(truncated_alpha_from(h, 1e-15) - 1.0 / h));
  return {worst < 1e-10 && limit <= 1e-6,
          "max residual = " + fmt(worst) + ", max |alpha(R->0) - 1/H| = " + fmt(limit)};
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> which;
  app.add_option("--criterion", which, "criterion number(s); default all")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {"Hill reduction", 5, hill_reduction},
      {"round-trip inversion", 5, round_trip},
      {"density normalisation", 10, density_normalisation},
      {"Fisher cross-check", 60, fisher_cross_check},
      {"score residuals", 60, score_residuals},
      {"simulation recovery", 900, simulation_recovery},
      {"tempered vs Weissman quantiles", 900, overestimation},
      {"scale and permutation invariance", 30, invariance},
      {"determinism", 120, determinism},
      {"truncated comparator", 5, truncated_comparator},
  };
  if (which.empty())
    for (int i = 1; i <= 10; ++i) which.push_back(i);

  bool all_pass = true;
  for (int i : which) {
    const Criterion& c = all[i - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    all_pass = all_pass && pass;
    std::cout << "criterion " << i << " (" << c.name << "): " << (pass ? "PASS" : "FAIL") << " - "
              << o.detail << "; " << fmt(secs) << " s" << (in_time ? "" : " over budget") << std::endl;
  }
  return all_pass ? 0 : 1;
}
