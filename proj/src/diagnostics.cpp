#include "tempered/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "tempered/error.hpp"

namespace tempered {

std::string to_string(QQKind kind) {
  switch (kind) {
    case QQKind::ParetoQQ: return "pareto_qq";
    case QQKind::WeibullQQ: return "weibull_qq";
    case QQKind::DerivativePlot: return "derivative";
    case QQKind::FittedLine: return "fitted_line";
  }
  return "?";
}

QQSeries pareto_qq(const Sample& s) {
  if (s.size() < 2) throw DomainError("pareto_qq: need n >= 2");
  const double n1 = static_cast<double>(s.size() + 1);
  QQSeries out{QQKind::ParetoQQ, {}, "x = -log(1 - j/(n+1)), y = log X_(j)"};
  out.points.reserve(s.size());
  for (std::size_t j = 1; j <= s.size(); ++j)
    out.points.emplace_back(std::log(n1 / (n1 - static_cast<double>(j))),
                            std::log(s.order_stat(j)));
  return out;
}

QQSeries weibull_qq(const Sample& s) {
  if (s.size() < 2) throw DomainError("weibull_qq: need n >= 2");
  const double n1 = static_cast<double>(s.size() + 1);
  QQSeries out{QQKind::WeibullQQ, {}, "x = log(-log(1 - j/(n+1))), y = log X_(j)"};
  out.points.reserve(s.size());
  for (std::size_t j = 1; j <= s.size(); ++j)
    out.points.emplace_back(std::log(std::log(n1 / (n1 - static_cast<double>(j)))),
                            std::log(s.order_stat(j)));
  return out;
}

QQSeries derivative_plot(const QQSeries& qq, std::size_t k_min,
                         std::size_t k_max) {
  const std::size_t n = qq.points.size();
  if (n < 2) throw DomainError("derivative_plot: need at least two points");
  if (k_min < 1 || k_max > n - 1 || k_min > k_max) {
    std::ostringstream msg;
    msg << "derivative_plot: k range [" << k_min << ", " << k_max << "] outside [1, " << n - 1
        << "]";
    throw DomainError(msg.str());
  }
  if (qq.kind != QQKind::ParetoQQ && qq.kind != QQKind::WeibullQQ)
    throw DomainError("derivative_plot: source must be a Pareto or Weibull QQ-plot");
  QQSeries out{QQKind::DerivativePlot, {}, "slope of the top k points of " + to_string(qq.kind)};
  // running sums over the top k points, anchored at point n-k
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    sx += qq.points[n - k].first;
    sy += qq.points[n - k].second;
    if (k < k_min) continue;
    const auto& anchor = qq.points[n - k - 1];
    const double kk = static_cast<double>(k);
    const double dx = sx - kk * anchor.first;
    const double dy = sy - kk * anchor.second;
    if (!(dx != 0.0)) {
      std::ostringstream msg;
      msg << "derivative_plot: zero x-spread at k = " << k;
      throw DegenerateError(msg.str());
    }
    out.points.emplace_back(kk, dy / dx);
  }
  return out;
}

QQSeries fitted_qq_line(const POTView& p, const FitResult& fit) {
  if (fit.k != p.k) throw DomainError("fitted_qq_line: fit was computed at a different k");
  const TemperedParams& q = fit.params;
  QQSeries out{QQKind::FittedLine, {}, to_string(fit.method) + " fit at k = " + std::to_string(p.k)};
  out.points.reserve(p.k);
  const double k1 = static_cast<double>(p.k + 1);
  for (std::size_t i = 1; i <= p.k; ++i) {
    const double v = p.v[p.k - i];  // i-th smallest excess
    out.points.emplace_back(std::log(k1 / (k1 - static_cast<double>(i))),
                            q.alpha() * std::log(v) + q.delta() * h_tau(v, q.tau()));
  }
  return out;
}

double empirical_quantile(const Sample& s, double prob) {
  if (s.size() == 0) throw DomainError("empirical_quantile: empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("empirical_quantile: prob must lie in [0, 1]");
  const double h = (static_cast<double>(s.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace tempered
