#pragma once

// Versioned JSON reports and tidy CSV tables for fits, simulation studies and
// rolling-window analyses.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempered/asymptotics.hpp"
#include "tempered/diagnostics.hpp"
#include "tempered/estimators.hpp"
#include "tempered/io.hpp"
#include "tempered/simulation.hpp"

namespace tempered {

inline constexpr const char* kFormatVersion = "tempered-report/1";

struct InputDigest {
  std::string source;
  std::size_t rows = 0;
  std::size_t used = 0;
  std::size_t excluded_nonpositive = 0;
  std::size_t excluded_invalid = 0;
  double min = 0.0;
  double max = 0.0;
};

InputDigest digest(const Sample& s, const std::string& source = "");
InputDigest digest(const LoadReport& load, const std::string& source);

struct QuantileRow {
  double p = 0.0;
  double wls = 0.0;
  double mle = 0.0;
  double weissman = 0.0;
  // tail_prob evaluated back at the estimated quantiles
  double wls_tail_prob = 0.0;
  double mle_tail_prob = 0.0;
};

struct ProbabilityRow {
  double z = 0.0;
  double wls = 0.0;
  double mle = 0.0;
};

struct ReportOptions {
  TraceOptions trace;
  std::vector<double> p_values;
  std::vector<double> z_values;
  std::optional<std::size_t> k;  // tables at this k instead of k_hat
  std::optional<double> level;   // adds asymptotic intervals for the MLE
  bool include_trace = true;
  bool include_qq = true;
};

struct ReportBundle {
  std::string command = "fit";
  InputDigest input;
  FitTrace trace;
  std::size_t k = 0;
  FitResult wls;
  FitResult mle;
  double hill = 0.0;
  std::optional<double> alpha_t;
  std::vector<QuantileRow> quantiles;
  std::vector<ProbabilityRow> probabilities;
  std::optional<AsymptoticInfo> asymptotics;
  std::optional<ConfidenceIntervals> intervals;
  std::vector<QQSeries> qq;
  bool include_trace = true;
  std::uint64_t seed = 0;
  std::vector<std::string> notices;  // optional parts that could not be computed
};

/// Full fit: trace, adaptive k, tables at k (or k_hat) and fitted QQ lines.
ReportBundle build_report(const Sample& s, const InputDigest& input,
                          const ReportOptions& options);

nlohmann::json to_json(const TemperedParams& p);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const TraceRecord& record);
nlohmann::json to_json(const QQSeries& series);
nlohmann::json to_json(const AsymptoticInfo& info);
nlohmann::json to_json(const ConfidenceIntervals& ci);
nlohmann::json to_json(const ReportBundle& bundle);
nlohmann::json to_json(const StudyResult& result, bool with_runtime = false);

/// Envelope every JSON document carries: {"format_version", "command", ...}.
nlohmann::json envelope(const std::string& command);

/// Structural check of an emitted document; returns the list of problems
/// (empty when the document conforms).
std::vector<std::string> validate_report(const nlohmann::json& doc);

/// Tidy rows k, threshold, hill, alpha_hill, alpha_t, ss_k, wls_*, mle_*.
std::string trace_csv(const FitTrace& trace);

/// Rows k, p, wls, mle, weissman, wls_tail_prob, mle_tail_prob.
std::string quantile_csv(const ReportBundle& bundle);

/// Rows kind, x, y for every QQ series of the bundle.
std::string qq_csv(const ReportBundle& bundle);

/// Tidy rows estimator, quantity, k, statistic, value; the adaptive-k
/// summaries use k = "khat".
std::string study_csv(const StudyResult& result);

/// Shortest round-trip decimal form of a double ("nan"/"inf" for non-finite).
std::string format_number(double x);

// Rolling windows -----------------------------------------------------------

struct WindowSpec {
  enum class Unit { Years, Observations };
  Unit unit = Unit::Years;
  int width = 3;
  int stride = 1;
  std::size_t min_obs = 300;
};

/// "3y" (years) or "500" (observations).
WindowSpec::Unit parse_window_unit(const std::string& text, int& amount);

struct VarRow {
  double level = 0.0;  // VaR level 1 - p
  double wls = 0.0;
  double mle = 0.0;
  double weissman = 0.0;
  double empirical = 0.0;
};

struct WindowReport {
  std::chrono::sys_days start;
  std::chrono::sys_days end;  // exclusive for year windows
  std::size_t n = 0;
  ReportBundle bundle;
  std::vector<VarRow> var;
};

struct RollingResult {
  std::vector<WindowReport> windows;  // chronological
  std::vector<std::string> notices;   // skipped windows and why
};

/// Fits every window with at least spec.min_obs observations. Throws
/// InputError when no window qualifies.
RollingResult rolling_fit(const std::vector<DatedValue>& data,
                          const WindowSpec& spec,
                          const std::vector<double>& levels,
                          const TraceOptions& trace);

nlohmann::json to_json(const RollingResult& result);
std::string rolling_csv(const RollingResult& result);

}  // namespace tempered
