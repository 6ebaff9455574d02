#include "tempered/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tempered/error.hpp"

namespace tempered {

using nlohmann::json;

namespace {

// NaN and infinities have no JSON literal; they become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json numbers(const std::vector<double>& xs) {
  json arr = json::array();
  for (double x : xs) arr.push_back(number(x));
  return arr;
}

json optional_number(const std::optional<double>& x) {
  return x ? number(*x) : json(nullptr);
}

json matrix(const Matrix3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({number(m(i, 0)), number(m(i, 1)), number(m(i, 2))});
  return rows;
}

json vector3(const Vector3& v) { return {number(v(0)), number(v(1)), number(v(2))}; }

json interval(const Interval& iv) { return {number(iv.lo), number(iv.hi)}; }

json cell(const CellStats& c) {
  return {{"count", c.count}, {"mean", number(c.mean)}, {"bias", number(c.bias)},
          {"variance", number(c.variance)}, {"rmse", number(c.rmse)}};
}

json box(const BoxStats& b) {
  return {{"count", b.count},
          {"q1", number(b.q1)},
          {"median", number(b.median)},
          {"q3", number(b.q3)},
          {"lower_whisker", number(b.lower_whisker)},
          {"upper_whisker", number(b.upper_whisker)},
          {"outliers", numbers(b.outliers)}};
}

void require_keys(const json& obj, std::initializer_list<const char*> keys,
                  const std::string& where, std::vector<std::string>& problems) {
  if (!obj.is_object()) {
    problems.push_back(where + " is not an object");
    return;
  }
  for (const char* key : keys)
    if (!obj.contains(key)) problems.push_back(where + " lacks '" + key + "'");
}

void check_fit(const json& fit, const std::string& where, std::vector<std::string>& problems) {
  require_keys(fit, {"method", "k", "alpha", "lambda", "tau", "objective", "converged"}, where,
               problems);
}

double or_nan(const std::optional<FitResult>& fit, double (*get)(const FitResult&)) {
  return fit ? get(*fit) : std::numeric_limits<double>::quiet_NaN();
}

std::string csv_cell(double x) { return std::isnan(x) ? std::string() : format_number(x); }

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

InputDigest digest(const Sample& s, const std::string& source) {
  InputDigest d;
  d.source = source;
  d.rows = d.used = s.size();
  if (!s.empty()) {
    d.min = s.order_stat(1);
    d.max = s.order_stat(s.size());
  }
  return d;
}

InputDigest digest(const LoadReport& load, const std::string& source) {
  InputDigest d = digest(load.sample, source);
  d.rows = load.rows;
  d.excluded_nonpositive = load.excluded_nonpositive;
  d.excluded_invalid = load.excluded_invalid;
  return d;
}

ReportBundle build_report(const Sample& s, const InputDigest& input,
                          const ReportOptions& options) {
  TraceOptions topt = options.trace;
  if (options.k && topt.mle_ranks) topt.mle_ranks->push_back(*options.k);

  ReportBundle b;
  b.input = input;
  b.include_trace = options.include_trace;
  b.trace = fit_trace(s, topt);
  b.k = options.k.value_or(b.trace.k_hat);
  const TraceRecord& rec = b.trace.at(b.k);
  if (!rec.mle) {
    std::ostringstream msg;
    msg << "no ML fit could be computed at k = " << b.k;
    throw DegenerateError(msg.str());
  }
  b.wls = rec.wls;
  b.mle = *rec.mle;
  b.hill = rec.hill;
  b.alpha_t = rec.alpha_t;

  const std::size_t n = s.size();
  for (double p : options.p_values) {
    QuantileRow row;
    row.p = p;
    row.wls = extreme_quantile(b.wls, s, b.k, p);
    row.mle = extreme_quantile(b.mle, s, b.k, p);
    row.wls_tail_prob = tail_prob(b.wls, s, b.k, row.wls);
    row.mle_tail_prob = tail_prob(b.mle, s, b.k, row.mle);
    row.weissman = p <= static_cast<double>(b.k) / static_cast<double>(n)
                       ? weissman_quantile(s, b.k, p)
                       : std::numeric_limits<double>::quiet_NaN();
    b.quantiles.push_back(row);
  }
  for (double z : options.z_values)
    b.probabilities.push_back({z, tail_prob(b.wls, s, b.k, z), tail_prob(b.mle, s, b.k, z)});

  if (options.level) {
    try {
      if (!(b.mle.params.lambda() > 0.0))
        throw NumericError("the ML fit has lambda = 0, where the information matrix is singular");
      b.asymptotics = asymptotic_cov(b.mle.params, static_cast<double>(b.k));
      b.intervals = confidence_interval(*b.asymptotics, b.mle.params, *options.level);
    } catch (const NumericError& e) {
      b.notices.push_back(std::string("asymptotics skipped: ") + e.what());
    }
  }

  if (options.include_qq) {
    const QQSeries pqq = pareto_qq(s);
    b.qq.push_back(pqq);
    b.qq.push_back(weibull_qq(s));
    b.qq.push_back(derivative_plot(pqq, b.trace.k_min, b.trace.k_max));
    const POTView view = pot_excesses(s, b.k);
    b.qq.push_back(fitted_qq_line(view, b.wls));
    b.qq.push_back(fitted_qq_line(view, b.mle));
  }
  return b;
}

json envelope(const std::string& command) {
  return {{"format_version", kFormatVersion}, {"command", command}};
}

json to_json(const TemperedParams& p) {
  return {{"alpha", number(p.alpha())},
          {"lambda", number(p.lambda())},
          {"tau", number(p.tau())},
          {"beta_inf", number(p.beta_inf())},
          {"delta", number(p.delta())}};
}

json to_json(const FitResult& fit) {
  json j = to_json(fit.params);
  j["method"] = to_string(fit.method);
  j["k"] = fit.k;
  j["objective"] = number(fit.objective);
  j["tau_grid_index"] = fit.tau_grid_index;
  j["converged"] = fit.converged;
  return j;
}

json to_json(const TraceRecord& r) {
  return {{"k", r.k},
          {"threshold", number(r.threshold)},
          {"ss_k", number(r.ss_k)},
          {"hill", number(r.hill)},
          {"alpha_hill", r.hill > 0.0 ? number(1.0 / r.hill) : json(nullptr)},
          {"alpha_t", optional_number(r.alpha_t)},
          {"wls", to_json(r.wls)},
          {"mle", r.mle ? to_json(*r.mle) : json(nullptr)}};
}

json to_json(const QQSeries& series) {
  json xs = json::array(), ys = json::array();
  for (const auto& [x, y] : series.points) {
    xs.push_back(number(x));
    ys.push_back(number(y));
  }
  json j = {{"kind", to_string(series.kind)}, {"meta", series.meta}, {"x", xs}, {"y", ys}};
  if (series.kind == QQKind::FittedLine) j["reference"] = "identity";
  return j;
}

json to_json(const AsymptoticInfo& info) {
  return {{"k_eff", number(info.k_eff)},
          {"info", matrix(info.info)},
          {"bias", vector3(info.bias)},
          {"cov", matrix(info.cov)},
          {"order", {"alpha", "lambda", "tau"}}};
}

json to_json(const ConfidenceIntervals& ci) {
  return {{"level", number(ci.level)},
          {"alpha", interval(ci.alpha)},
          {"lambda", interval(ci.lambda)},
          {"tau", interval(ci.tau)}};
}

json to_json(const ReportBundle& b) {
  json j = envelope(b.command);
  j["input"] = {{"source", b.input.source},
                {"rows", b.input.rows},
                {"used", b.input.used},
                {"excluded_nonpositive", b.input.excluded_nonpositive},
                {"excluded_invalid", b.input.excluded_invalid},
                {"min", number(b.input.min)},
                {"max", number(b.input.max)}};
  j["settings"] = {{"k_min", b.trace.k_min},
                   {"k_max", b.trace.k_max},
                   {"tau_grid", numbers(b.trace.tau_grid)},
                   {"weights", to_string(b.trace.weights)},
                   {"seed", b.seed}};
  j["k_hat"] = b.trace.k_hat;
  j["k"] = b.k;
  j["failed_ranks"] = b.trace.failed_ranks;
  j["threshold"] = number(b.trace.at(b.k).threshold);
  j["selected"] = {{"wls", to_json(b.wls)},
                   {"mle", to_json(b.mle)},
                   {"hill", number(b.hill)},
                   {"alpha_hill", b.hill > 0.0 ? number(1.0 / b.hill) : json(nullptr)},
                   {"alpha_t", optional_number(b.alpha_t)}};
  json q = json::array();
  for (const QuantileRow& r : b.quantiles)
    q.push_back({{"p", number(r.p)},
                 {"wls", number(r.wls)},
                 {"mle", number(r.mle)},
                 {"weissman", number(r.weissman)},
                 {"wls_tail_prob", number(r.wls_tail_prob)},
                 {"mle_tail_prob", number(r.mle_tail_prob)}});
  j["quantiles"] = q;
  json pr = json::array();
  for (const ProbabilityRow& r : b.probabilities)
    pr.push_back({{"z", number(r.z)}, {"wls", number(r.wls)}, {"mle", number(r.mle)}});
  j["probabilities"] = pr;
  if (b.asymptotics) j["asymptotics"] = to_json(*b.asymptotics);
  if (b.intervals) j["intervals"] = to_json(*b.intervals);
  if (b.include_trace) {
    json t = json::array();
    for (const TraceRecord& r : b.trace.records) t.push_back(to_json(r));
    j["trace"] = t;
  }
  if (!b.qq.empty()) {
    json qq = json::array();
    for (const QQSeries& s : b.qq) qq.push_back(to_json(s));
    j["qq"] = qq;
  }
  j["notices"] = b.notices;
  return j;
}

json to_json(const StudyResult& r, bool with_runtime) {
  json j = envelope("simulate");
  j["name"] = r.name;
  j["family"] = r.family;
  j["n"] = r.n;
  j["n_reps"] = r.n_reps;
  j["seed"] = r.seed;
  j["k_grid"] = r.k_grid;
  j["p_values"] = numbers(r.p_values);
  j["true_quantiles"] = numbers(r.true_quantiles);
  j["k_hat"] = r.k_hat;
  j["failed_reps"] = r.failed_reps;
  json series = json::array();
  for (const Series& s : r.series) {
    json by_k = {{"count", json::array()}, {"mean", json::array()}, {"bias", json::array()},
                 {"variance", json::array()}, {"rmse", json::array()}};
    for (const CellStats& c : s.by_k) {
      by_k["count"].push_back(c.count);
      by_k["mean"].push_back(number(c.mean));
      by_k["bias"].push_back(number(c.bias));
      by_k["variance"].push_back(number(c.variance));
      by_k["rmse"].push_back(number(c.rmse));
    }
    series.push_back({{"estimator", to_string(s.estimator)},
                      {"quantity", s.quantity},
                      {"truth", number(s.truth)},
                      {"by_k", by_k},
                      {"at_k_hat", {{"values", numbers(s.at_k_hat)},
                                    {"stats", cell(s.at_k_hat_stats)},
                                    {"box", box(s.box)}}}});
  }
  j["series"] = series;
  if (with_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

std::vector<std::string> validate_report(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) return {"document is not a JSON object"};
  if (!doc.contains("format_version") || doc["format_version"] != kFormatVersion)
    problems.push_back(std::string("format_version is not '") + kFormatVersion + "'");
  if (!doc.contains("command") || !doc["command"].is_string()) {
    problems.push_back("missing string 'command'");
    return problems;
  }
  const std::string cmd = doc["command"];
  if (cmd == "fit" || cmd == "quantile" || cmd == "diagnose") {
    require_keys(doc, {"input", "settings", "k_hat", "k", "selected", "quantiles", "probabilities"},
                 "report", problems);
    if (doc.contains("selected")) {
      require_keys(doc["selected"], {"wls", "mle", "hill"}, "selected", problems);
      if (doc["selected"].contains("wls")) check_fit(doc["selected"]["wls"], "selected.wls", problems);
      if (doc["selected"].contains("mle")) check_fit(doc["selected"]["mle"], "selected.mle", problems);
    }
    if (doc.contains("trace")) {
      if (!doc["trace"].is_array()) problems.push_back("trace is not an array");
      else
        for (std::size_t i = 0; i < doc["trace"].size(); ++i)
          require_keys(doc["trace"][i], {"k", "ss_k", "hill", "wls"},
                       "trace[" + std::to_string(i) + "]", problems);
    }
    if (doc.contains("qq")) {
      for (std::size_t i = 0; i < doc["qq"].size(); ++i) {
        const json& s = doc["qq"][i];
        require_keys(s, {"kind", "x", "y"}, "qq[" + std::to_string(i) + "]", problems);
        if (s.contains("x") && s.contains("y") && s["x"].size() != s["y"].size())
          problems.push_back("qq[" + std::to_string(i) + "] has x/y of different lengths");
      }
    }
  } else if (cmd == "simulate") {
    require_keys(doc, {"name", "n", "n_reps", "seed", "k_grid", "k_hat", "failed_reps", "series"},
                 "study", problems);
    if (doc.contains("series") && doc.contains("k_grid")) {
      for (std::size_t i = 0; i < doc["series"].size(); ++i) {
        const json& s = doc["series"][i];
        const std::string where = "series[" + std::to_string(i) + "]";
        require_keys(s, {"estimator", "quantity", "truth", "by_k", "at_k_hat"}, where, problems);
        if (s.contains("by_k") && s["by_k"].contains("mean") &&
            s["by_k"]["mean"].size() != doc["k_grid"].size())
          problems.push_back(where + ".by_k does not match k_grid");
      }
    }
  } else if (cmd == "asymptotics") {
    require_keys(doc, {"params", "k_eff", "info", "bias", "cov"}, "asymptotics", problems);
  } else if (cmd == "rolling") {
    require_keys(doc, {"windows", "notices"}, "rolling", problems);
    if (doc.contains("windows"))
      for (std::size_t i = 0; i < doc["windows"].size(); ++i)
        require_keys(doc["windows"][i], {"start", "end", "n", "k_hat", "selected", "var"},
                     "windows[" + std::to_string(i) + "]", problems);
  } else {
    problems.push_back("unknown command '" + cmd + "'");
  }
  return problems;
}

std::string trace_csv(const FitTrace& trace) {
  std::ostringstream out;
  out << "k,threshold,hill,alpha_hill,alpha_t,ss_k,wls_alpha,wls_lambda,wls_tau,wls_beta_inf,"
         "wls_objective,mle_alpha,mle_lambda,mle_tau,mle_beta_inf,mle_loglik,mle_converged\n";
  const std::optional<FitResult> none;
  for (const TraceRecord& r : trace.records) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << r.k << ',' << csv_cell(r.threshold) << ',' << csv_cell(r.hill) << ','
        << csv_cell(r.hill > 0.0 ? 1.0 / r.hill : nan) << ',' << csv_cell(r.alpha_t.value_or(nan))
        << ',' << csv_cell(r.ss_k) << ',' << csv_cell(r.wls.params.alpha()) << ','
        << csv_cell(r.wls.params.lambda()) << ',' << csv_cell(r.wls.params.tau()) << ','
        << csv_cell(r.wls.params.beta_inf()) << ',' << csv_cell(r.wls.objective) << ','
        << csv_cell(or_nan(r.mle, [](const FitResult& f) { return f.params.alpha(); })) << ','
        << csv_cell(or_nan(r.mle, [](const FitResult& f) { return f.params.lambda(); })) << ','
        << csv_cell(or_nan(r.mle, [](const FitResult& f) { return f.params.tau(); })) << ','
        << csv_cell(or_nan(r.mle, [](const FitResult& f) { return f.params.beta_inf(); })) << ','
        << csv_cell(or_nan(r.mle, [](const FitResult& f) { return f.objective; })) << ','
        << (r.mle ? (r.mle->converged ? "true" : "false") : "") << '\n';
  }
  return out.str();
}

std::string quantile_csv(const ReportBundle& b) {
  std::ostringstream out;
  out << "k,p,wls,mle,weissman,wls_tail_prob,mle_tail_prob\n";
  for (const QuantileRow& r : b.quantiles)
    out << b.k << ',' << csv_cell(r.p) << ',' << csv_cell(r.wls) << ',' << csv_cell(r.mle) << ','
        << csv_cell(r.weissman) << ',' << csv_cell(r.wls_tail_prob) << ','
        << csv_cell(r.mle_tail_prob) << '\n';
  return out.str();
}

std::string qq_csv(const ReportBundle& b) {
  std::ostringstream out;
  out << "kind,x,y\n";
  for (const QQSeries& s : b.qq)
    for (const auto& [x, y] : s.points)
      out << to_string(s.kind) << ',' << csv_cell(x) << ',' << csv_cell(y) << '\n';
  return out.str();
}

std::string study_csv(const StudyResult& r) {
  std::ostringstream out;
  out << "estimator,quantity,k,statistic,value\n";
  auto emit = [&](const Series& s, const std::string& k, const CellStats& c) {
    const std::string prefix = to_string(s.estimator) + ',' + s.quantity + ',' + k + ',';
    out << prefix << "count," << c.count << '\n';
    out << prefix << "mean," << csv_cell(c.mean) << '\n';
    out << prefix << "bias," << csv_cell(c.bias) << '\n';
    out << prefix << "variance," << csv_cell(c.variance) << '\n';
    out << prefix << "rmse," << csv_cell(c.rmse) << '\n';
  };
  for (const Series& s : r.series) {
    for (std::size_t i = 0; i < r.k_grid.size(); ++i) emit(s, std::to_string(r.k_grid[i]), s.by_k[i]);
    emit(s, "khat", s.at_k_hat_stats);
    const std::string prefix = to_string(s.estimator) + ',' + s.quantity + ",khat,";
    out << prefix << "q1," << csv_cell(s.box.q1) << '\n';
    out << prefix << "median," << csv_cell(s.box.median) << '\n';
    out << prefix << "q3," << csv_cell(s.box.q3) << '\n';
    out << prefix << "lower_whisker," << csv_cell(s.box.lower_whisker) << '\n';
    out << prefix << "upper_whisker," << csv_cell(s.box.upper_whisker) << '\n';
  }
  return out.str();
}

// Rolling windows -----------------------------------------------------------

WindowSpec::Unit parse_window_unit(const std::string& text, int& amount) {
  std::string digits = text;
  WindowSpec::Unit unit = WindowSpec::Unit::Observations;
  if (!digits.empty() && (digits.back() == 'y' || digits.back() == 'Y')) {
    unit = WindowSpec::Unit::Years;
    digits.pop_back();
  }
  int value = 0;
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || res.ec != std::errc() || res.ptr != digits.data() + digits.size() ||
      value < 1)
    throw InputError("invalid window '" + text + "' (expected e.g. 3y or 500)");
  amount = value;
  return unit;
}

RollingResult rolling_fit(const std::vector<DatedValue>& data,
                          const WindowSpec& spec,
                          const std::vector<double>& levels,
                          const TraceOptions& trace) {
  using namespace std::chrono;
  if (data.empty()) throw InputError("rolling: no data");
  if (spec.width < 1 || spec.stride < 1) throw InputError("rolling: width and stride must be >= 1");
  for (double l : levels)
    if (!(l > 0.0 && l < 1.0)) throw InputError("rolling: VaR levels must lie in (0, 1)");
  if (!std::is_sorted(data.begin(), data.end(),
                      [](const DatedValue& a, const DatedValue& b) { return a.date < b.date; }))
    throw InputError("rolling: data must be in chronological order");

  // [first, last) index ranges with their calendar bounds
  struct Range {
    std::size_t first, last;
    sys_days start, end;
  };
  std::vector<Range> ranges;
  if (spec.unit == WindowSpec::Unit::Years) {
    const int y0 = static_cast<int>(year_month_day{data.front().date}.year());
    const int y1 = static_cast<int>(year_month_day{data.back().date}.year());
    const int last_start = std::max(y0, y1 - spec.width + 1);
    for (int y = y0; y <= last_start; y += spec.stride) {
      const sys_days start{year{y} / January / 1};
      const sys_days end{year{y + spec.width} / January / 1};
      auto lo = std::lower_bound(data.begin(), data.end(), start,
                                 [](const DatedValue& d, sys_days t) { return d.date < t; });
      auto hi = std::lower_bound(data.begin(), data.end(), end,
                                 [](const DatedValue& d, sys_days t) { return d.date < t; });
      ranges.push_back({static_cast<std::size_t>(lo - data.begin()),
                        static_cast<std::size_t>(hi - data.begin()), start, end});
    }
  } else {
    const std::size_t width = static_cast<std::size_t>(spec.width);
    const std::size_t stride = static_cast<std::size_t>(spec.stride);
    if (data.size() <= width) {
      ranges.push_back({0, data.size(), data.front().date, data.back().date + days{1}});
    } else {
      for (std::size_t i = 0; i + width <= data.size(); i += stride)
        ranges.push_back({i, i + width, data[i].date, data[i + width - 1].date + days{1}});
    }
  }

  RollingResult out;
  for (const Range& r : ranges) {
    const std::string label = format_iso_date(r.start) + " .. " + format_iso_date(r.end);
    const std::size_t n = r.last - r.first;
    if (n < spec.min_obs) {
      out.notices.push_back("window " + label + " skipped: " + std::to_string(n) +
                            " observations < " + std::to_string(spec.min_obs));
      continue;
    }
    try {
      std::vector<double> values;
      values.reserve(n);
      for (std::size_t i = r.first; i < r.last; ++i) values.push_back(data[i].value);
      const Sample s(std::move(values));

      ReportOptions ro;
      ro.trace = trace;
      ro.include_trace = false;
      ro.include_qq = false;
      WindowReport w;
      w.start = r.start;
      w.end = r.end;
      w.n = n;
      w.bundle = build_report(s, digest(s, label), ro);
      w.bundle.command = "rolling";
      const std::size_t k = w.bundle.k;
      for (double level : levels) {
        const double p = 1.0 - level;
        auto guarded = [](auto&& f) {
          try {
            return f();
          } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
          }
        };
        VarRow row;
        row.level = level;
        row.wls = guarded([&] { return extreme_quantile(w.bundle.wls, s, k, p); });
        row.mle = guarded([&] { return extreme_quantile(w.bundle.mle, s, k, p); });
        row.weissman = guarded([&] { return weissman_quantile(s, k, p); });
        row.empirical = empirical_quantile(s, level);
        w.var.push_back(row);
      }
      out.windows.push_back(std::move(w));
    } catch (const std::exception& e) {
      out.notices.push_back("window " + label + " skipped: " + e.what());
    }
  }
  if (out.windows.empty()) {
    std::ostringstream msg;
    msg << "rolling: no window has at least " << spec.min_obs << " usable observations";
    if (!out.notices.empty()) msg << " (" << out.notices.front() << ")";
    throw InputError(msg.str());
  }
  return out;
}

json to_json(const RollingResult& result) {
  json j = envelope("rolling");
  json windows = json::array();
  for (const WindowReport& w : result.windows) {
    const ReportBundle& b = w.bundle;
    json var = json::array();
    for (const VarRow& r : w.var)
      var.push_back({{"level", number(r.level)},
                     {"wls", number(r.wls)},
                     {"mle", number(r.mle)},
                     {"weissman", number(r.weissman)},
                     {"empirical", number(r.empirical)}});
    windows.push_back({{"start", format_iso_date(w.start)},
                       {"end", format_iso_date(w.end)},
                       {"n", w.n},
                       {"k_hat", b.k},
                       {"failed_ranks", b.trace.failed_ranks},
                       {"selected", {{"wls", to_json(b.wls)},
                                     {"mle", to_json(b.mle)},
                                     {"hill", number(b.hill)},
                                     {"alpha_t", optional_number(b.alpha_t)}}},
                       {"var", var}});
  }
  j["windows"] = windows;
  j["notices"] = result.notices;
  return j;
}

std::string rolling_csv(const RollingResult& result) {
  std::ostringstream out;
  out << "start,end,n,k_hat,level,wls,mle,weissman,empirical,mle_alpha,mle_tau,alpha_t\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const WindowReport& w : result.windows) {
    for (const VarRow& r : w.var) {
      out << format_iso_date(w.start) << ',' << format_iso_date(w.end) << ',' << w.n << ','
          << w.bundle.k << ',' << csv_cell(r.level) << ',' << csv_cell(r.wls) << ','
          << csv_cell(r.mle) << ',' << csv_cell(r.weissman) << ',' << csv_cell(r.empirical) << ','
          << csv_cell(w.bundle.mle.params.alpha()) << ',' << csv_cell(w.bundle.mle.params.tau())
          << ',' << csv_cell(w.bundle.alpha_t.value_or(nan)) << '\n';
    }
  }
  return out.str();
}

}  // namespace tempered
