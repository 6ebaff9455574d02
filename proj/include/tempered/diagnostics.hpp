#pragma once

// Plot data: Pareto and Weibull QQ-plots, their derivative plots and the
// fitted tempered QQ line.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tempered/estimators.hpp"
#include "tempered/model.hpp"

namespace tempered {

enum class QQKind { ParetoQQ, WeibullQQ, DerivativePlot, FittedLine };

std::string to_string(QQKind kind);

struct QQSeries {
  QQKind kind = QQKind::ParetoQQ;
  std::vector<std::pair<double, double>> points;
  std::string meta;
};

/// (-log(1 - j/(n+1)), log X_{j,n}), j = 1..n.
QQSeries pareto_qq(const Sample& s);

/// (log(-log(1 - j/(n+1))), log X_{j,n}), j = 1..n.
QQSeries weibull_qq(const Sample& s);

/// Points (k, slope_k) where slope_k is the slope of the top k QQ points
/// anchored at point n-k:
///   sum_j (y_{n-j+1} - y_{n-k}) / sum_j (x_{n-j+1} - x_{n-k}).
/// On a Pareto QQ-plot this equals k H_{k,n} / sum_j log((k+1)/j). Throws
/// DegenerateError on zero x-spread.
QQSeries derivative_plot(const QQSeries& qq, std::size_t k_min,
                         std::size_t k_max);

/// (-log(1 - i/(k+1)), alpha log V + delta h_tau(V)) with V the i-th smallest
/// excess; lies on the identity line under a perfect fit.
QQSeries fitted_qq_line(const POTView& p, const FitResult& fit);

/// Empirical quantile with linear interpolation between order statistics
/// (R's default, type 7).
double empirical_quantile(const Sample& s, double prob);

}  // namespace tempered
