#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tempered/asymptotics.hpp"
#include "tempered/error.hpp"
#include "tempered/io.hpp"
#include "tempered/report.hpp"
#include "tempered/simulation.hpp"

namespace tempered {

namespace {

struct DataArgs {
  std::string input;
  std::string column = "1";
  std::string delimiter = ",";
  bool no_header = false;
};

struct TraceArgs {
  std::size_t k_min = 10;
  std::size_t k_max = 0;
  double tau_min = 0.1;
  double tau_max = 5.0;
  std::size_t tau_points = 50;
  std::string weights = "hill";
  unsigned threads = 1;
  std::size_t mle_step = 10;
};

struct OutputArgs {
  std::string format = "json";
  std::string output;
};

struct Args {
  DataArgs data;
  TraceArgs trace;
  OutputArgs out;
  std::uint64_t seed = 1;
  std::optional<std::size_t> k;
  std::vector<double> p;
  std::vector<double> z;
  std::optional<double> level;
  bool no_trace = false;
  bool no_qq = false;
  // asymptotics
  double alpha = 0.0, lambda = 0.0, tau = 0.0;
  double k_eff = 1.0;
  std::optional<double> D, rho;
  double nu = 1.0;
  std::size_t mc_draws = 0;
  // simulate
  std::string preset;
  std::size_t reps = 100;
  std::size_t n = 0;
  std::size_t k_step = 10;
  bool timing = false;
  // rolling
  std::string date_column = "date";
  std::string window = "3y";
  int stride = 1;
  std::size_t min_obs = 300;
  std::vector<double> var_levels;
};

void add_data(CLI::App* app, DataArgs& d) {
  app->add_option("--input", d.input, "CSV file with the observations")->required();
  app->add_option("--column", d.column, "value column: header name or 1-based index")
      ->capture_default_str();
  app->add_option("--delimiter", d.delimiter, "field delimiter")->capture_default_str();
  app->add_flag("--no-header", d.no_header, "the file has no header row");
}

void add_trace(CLI::App* app, TraceArgs& t) {
  app->add_option("--k-min", t.k_min, "smallest rank searched")->capture_default_str();
  app->add_option("--k-max", t.k_max, "largest rank searched (0: n - 1)")->capture_default_str();
  app->add_option("--tau-min", t.tau_min, "lower end of the tau grid")->capture_default_str();
  app->add_option("--tau-max", t.tau_max, "upper end of the tau grid")->capture_default_str();
  app->add_option("--tau-points", t.tau_points, "number of geometric tau grid points")
      ->capture_default_str();
  app->add_option("--weights", t.weights, "QQ weights: hill or uniform")
      ->check(CLI::IsMember({"hill", "uniform"}))
      ->capture_default_str();
  app->add_option("--threads", t.threads, "worker threads (0: all cores)")->capture_default_str();
  app->add_option("--mle-step", t.mle_step,
                  "ML fits at every mle-step-th rank of the trace (0: every rank)")
      ->capture_default_str();
}

void add_output(CLI::App* app, OutputArgs& o) {
  app->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app->add_option("--output", o.output, "write the report here instead of stdout");
}

CsvOptions csv_options(const DataArgs& d) {
  if (d.delimiter.size() != 1) throw InputError("--delimiter must be a single character");
  CsvOptions o;
  o.column = d.column;
  o.delimiter = d.delimiter == "\\t" ? '\t' : d.delimiter[0];
  o.has_header = !d.no_header;
  return o;
}

TraceOptions trace_options(const TraceArgs& t, std::size_t n) {
  TraceOptions o;
  o.k_min = t.k_min;
  o.k_max = t.k_max;
  o.tau_grid = default_tau_grid(t.tau_points, t.tau_min, t.tau_max);
  o.weights = parse_weight_scheme(t.weights);
  o.threads = t.threads;
  if (t.mle_step > 1 && n >= 2) {
    const std::size_t hi = t.k_max == 0 ? n - 1 : t.k_max;
    std::vector<std::size_t> ranks;
    for (std::size_t k = t.k_min; k <= hi; k += t.mle_step) ranks.push_back(k);
    ranks.push_back(hi);
    o.mle_ranks = std::move(ranks);
  }
  return o;
}

void emit(const OutputArgs& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw InputError("cannot write '" + o.output + "'");
  file << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json matrix_json(const Matrix3& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

int run_report(const std::string& command, const Args& a, std::ostream& out, std::ostream& err) {
  const LoadReport load = load_csv(a.data.input, csv_options(a.data));
  for (const std::string& d : load.diagnostics) err << "note: " << d << '\n';
  const std::size_t n = load.sample.size();
  if (n < 5) throw InputError("need at least 5 positive observations, found " + std::to_string(n));

  ReportOptions ro;
  ro.trace = trace_options(a.trace, n);
  ro.k = a.k;
  ro.p_values = a.p;
  ro.z_values = a.z;
  ro.level = a.level;
  ro.include_trace = command == "fit" && !a.no_trace;
  ro.include_qq = (command == "fit" && !a.no_qq) || command == "diagnose";
  if (command == "quantile" && a.p.empty() && a.z.empty())
    throw InputError("quantile needs at least one --p or --z");

  ReportBundle b = build_report(load.sample, digest(load, a.data.input), ro);
  b.command = command;
  b.seed = a.seed;
  for (const std::string& note : b.notices) err << "note: " << note << '\n';

  if (a.out.format == "json") {
    emit(a.out, dump(to_json(b)), out);
  } else if (command == "fit") {
    emit(a.out, trace_csv(b.trace), out);
  } else if (command == "quantile") {
    emit(a.out, quantile_csv(b), out);
  } else {
    emit(a.out, qq_csv(b), out);
  }
  return kExitOk;
}

int run_asymptotics(const Args& a, std::ostream& out) {
  const TemperedParams p(a.alpha, a.lambda, a.tau);
  std::optional<SecondOrderSpec> so;
  if (a.D || a.rho) {
    if (!a.D || !a.rho) throw InputError("--D and --rho must be given together");
    so = SecondOrderSpec{*a.D, *a.rho, a.nu};
  }
  const AsymptoticInfo info = asymptotic_cov(p, a.k_eff, so);
  nlohmann::json j = envelope("asymptotics");
  j["params"] = to_json(p);
  const nlohmann::json body = to_json(info);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  if (so) j["second_order"] = {{"D", so->D}, {"rho", so->rho}, {"nu", so->nu}};
  if (a.level) j["intervals"] = to_json(confidence_interval(info, p, *a.level));
  if (a.mc_draws > 0) {
    const ScoreMoments m = mc_score_moments(p, a.mc_draws, a.seed);
    nlohmann::json rel = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < 3; ++c) row.push_back(m.outer(i, c) / info.info(i, c) - 1.0);
      rel.push_back(row);
    }
    j["monte_carlo"] = {{"draws", m.draws},
                        {"seed", a.seed},
                        {"score_outer", matrix_json(m.outer)},
                        {"score_mean", {m.mean(0), m.mean(1), m.mean(2)}},
                        {"relative_difference", rel}};
  }

  if (a.out.format == "json") {
    emit(a.out, dump(j), out);
  } else {
    std::ostringstream csv;
    csv << "matrix,row,col,value\n";
    auto put = [&](const char* name, const Matrix3& m) {
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 3; ++c)
          csv << name << ',' << i + 1 << ',' << c + 1 << ',' << format_number(m(i, c)) << '\n';
    };
    put("info", info.info);
    put("cov", info.cov);
    for (int i = 0; i < 3; ++i) csv << "bias," << i + 1 << ",1," << format_number(info.bias(i)) << '\n';
    emit(a.out, csv.str(), out);
  }
  return kExitOk;
}

int run_simulate(const Args& a, std::ostream& out) {
  StudyConfig cfg = scenario(a.preset);
  cfg.n_reps = a.reps;
  cfg.seed = a.seed;
  cfg.threads = a.trace.threads;
  cfg.k_min = a.trace.k_min;
  cfg.tau_grid = default_tau_grid(a.trace.tau_points, a.trace.tau_min, a.trace.tau_max);
  cfg.weights = parse_weight_scheme(a.trace.weights);
  if (a.n > 0) cfg.n = a.n;
  cfg.k_grid = stepped_k_grid(cfg.k_min, cfg.n, a.k_step);
  const StudyResult r = run_study(cfg);
  if (a.out.format == "json")
    emit(a.out, dump(to_json(r, a.timing)), out);
  else
    emit(a.out, study_csv(r), out);
  return kExitOk;
}

int run_rolling(const Args& a, std::ostream& out, std::ostream& err) {
  const DatedLoad load = load_dated_csv(a.data.input, csv_options(a.data), a.date_column);
  if (load.excluded > 0) err << "note: " << load.excluded << " rows excluded\n";
  WindowSpec spec;
  spec.unit = parse_window_unit(a.window, spec.width);
  spec.stride = a.stride;
  spec.min_obs = a.min_obs;
  const std::vector<double> levels =
      a.var_levels.empty() ? std::vector<double>{0.995, 0.999} : a.var_levels;
  TraceOptions topt = trace_options(a.trace, 0);
  // window sizes differ, so only the adaptive k of each window gets the ML fit
  if (a.trace.mle_step != 0) topt.mle_ranks = std::vector<std::size_t>{};
  const RollingResult r = rolling_fit(load.rows, spec, levels, topt);
  for (const std::string& note : r.notices) err << "note: " << note << '\n';
  if (a.out.format == "json")
    emit(a.out, dump(to_json(r)), out);
  else
    emit(a.out, rolling_csv(r), out);
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tempered Pareto tail estimation"};
  app.name("tempered");
  app.require_subcommand(1);
  Args a;

  auto* fit = app.add_subcommand("fit", "full estimation over k with the adaptive k");
  add_data(fit, a.data);
  add_trace(fit, a.trace);
  add_output(fit, a.out);
  fit->add_option("--k", a.k, "report tables at this rank instead of the adaptive k");
  fit->add_option("--p", a.p, "exceedance probability for quantiles (repeatable)")->take_all();
  fit->add_option("--z", a.z, "level for tail probabilities (repeatable)")->take_all();
  fit->add_option("--level", a.level, "confidence level for Wald intervals of the ML fit");
  fit->add_option("--seed", a.seed, "recorded in the report")->capture_default_str();
  fit->add_flag("--no-trace", a.no_trace, "omit the per-k trace");
  fit->add_flag("--no-qq", a.no_qq, "omit QQ-plot data");

  auto* quantile = app.add_subcommand("quantile", "extreme quantiles and tail probabilities");
  add_data(quantile, a.data);
  add_trace(quantile, a.trace);
  add_output(quantile, a.out);
  quantile->add_option("--k", a.k, "rank (default: adaptive k)");
  quantile->add_option("--p", a.p, "exceedance probability (repeatable)")->take_all();
  quantile->add_option("--z", a.z, "level for tail probabilities (repeatable)")->take_all();
  quantile->add_option("--seed", a.seed, "recorded in the report")->capture_default_str();

  auto* diagnose = app.add_subcommand("diagnose", "Pareto/Weibull QQ-plots, derivative plot, fitted lines");
  add_data(diagnose, a.data);
  add_trace(diagnose, a.trace);
  add_output(diagnose, a.out);
  diagnose->add_option("--k", a.k, "rank of the fitted QQ lines (default: adaptive k)");
  diagnose->add_option("--seed", a.seed, "recorded in the report")->capture_default_str();

  auto* asym = app.add_subcommand("asymptotics", "Fisher information, bias and covariance");
  add_output(asym, a.out);
  asym->add_option("--alpha", a.alpha, "tail index")->required();
  asym->add_option("--lambda", a.lambda, "tempering rate lambda")->required();
  asym->add_option("--tau", a.tau, "Weibull shape tau")->required();
  asym->add_option("--k-eff", a.k_eff, "effective exceedance count")->capture_default_str();
  asym->add_option("--D", a.D, "second-order constant");
  asym->add_option("--rho", a.rho, "second-order index (< 0)");
  asym->add_option("--nu", a.nu, "limit of sqrt(k) t^rho")->capture_default_str();
  asym->add_option("--level", a.level, "confidence level for Wald intervals");
  asym->add_option("--mc-draws", a.mc_draws, "Monte Carlo check of the information matrix");
  asym->add_option("--seed", a.seed, "seed for --mc-draws")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Monte Carlo study on a preset");
  add_output(sim, a.out);
  sim->add_option("--preset", a.preset, "scenario name")->required();
  sim->add_option("--reps", a.reps, "replications")->capture_default_str();
  sim->add_option("--n", a.n, "sample size (default: preset)");
  sim->add_option("--k-step", a.k_step, "spacing of the k grid")->capture_default_str();
  sim->add_option("--seed", a.seed, "master seed")->capture_default_str();
  sim->add_option("--k-min", a.trace.k_min, "smallest rank")->capture_default_str();
  sim->add_option("--tau-min", a.trace.tau_min)->capture_default_str();
  sim->add_option("--tau-max", a.trace.tau_max)->capture_default_str();
  sim->add_option("--tau-points", a.trace.tau_points)->capture_default_str();
  sim->add_option("--weights", a.trace.weights)
      ->check(CLI::IsMember({"hill", "uniform"}))
      ->capture_default_str();
  sim->add_option("--threads", a.trace.threads, "worker threads (0: all cores)")
      ->capture_default_str();
  sim->add_flag("--timing", a.timing, "include wall-clock runtime in the JSON");

  auto* roll = app.add_subcommand("rolling", "fits over sliding time windows");
  add_data(roll, a.data);
  add_trace(roll, a.trace);
  add_output(roll, a.out);
  roll->add_option("--date-column", a.date_column, "ISO date column")->capture_default_str();
  roll->add_option("--window", a.window, "width: years (3y) or observation count (500)")
      ->capture_default_str();
  roll->add_option("--stride", a.stride, "advance per window, in the window's unit")
      ->capture_default_str();
  roll->add_option("--min-obs", a.min_obs, "skip windows with fewer observations")
      ->capture_default_str();
  roll->add_option("--level", a.var_levels, "VaR level (repeatable, default 0.995 0.999)")
      ->take_all();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*fit) return run_report("fit", a, out, err);
    if (*quantile) return run_report("quantile", a, out, err);
    if (*diagnose) return run_report("diagnose", a, out, err);
    if (*asym) return run_asymptotics(a, out);
    if (*sim) return run_simulate(a, out);
    if (*roll) return run_rolling(a, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitInput;
}

}  // namespace tempered
