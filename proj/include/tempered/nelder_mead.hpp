#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace tempered {

struct SimplexOptions {
  double diameter_tol = 1e-9;
  int max_iterations = 500;
};

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x{};
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Downhill simplex minimisation with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
///
/// Stops once the largest coordinate distance from the best vertex to any
/// other vertex is below options.diameter_tol. Non-finite objective values are
/// treated as +inf.
template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, const std::array<double, N>& start,
                             const std::array<double, N>& step,
                             const SimplexOptions& options = {}) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> x;
  std::array<double, N + 1> fx;

  auto eval = [&](const Point& p) {
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  x[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    x[i + 1] = start;
    x[i + 1][i] += step[i];
  }
  for (std::size_t i = 0; i <= N; ++i) fx[i] = eval(x[i]);

  auto order = [&] {
    std::array<std::size_t, N + 1> idx;
    for (std::size_t i = 0; i <= N; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    auto xs = x;
    auto fs = fx;
    for (std::size_t i = 0; i <= N; ++i) {
      x[i] = xs[idx[i]];
      fx[i] = fs[idx[i]];
    }
  };

  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= N; ++i)
      for (std::size_t c = 0; c < N; ++c)
        d = std::max(d, std::abs(x[i][c] - x[0][c]));
    return d;
  };

  auto along = [&](const Point& from, const Point& to, double t) {
    Point p;
    for (std::size_t c = 0; c < N; ++c) p[c] = from[c] + t * (to[c] - from[c]);
    return p;
  };

  SimplexResult<N> result;
  int iter = 0;
  order();
  while (true) {
    if (diameter() < options.diameter_tol) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iterations) break;
    ++iter;

    Point centroid{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t c = 0; c < N; ++c) centroid[c] += x[i][c] / N;

    const Point xr = along(centroid, x[N], -1.0);
    const double fr = eval(xr);
    if (fr < fx[0]) {
      const Point xe = along(centroid, x[N], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        x[N] = xe;
        fx[N] = fe;
      } else {
        x[N] = xr;
        fx[N] = fr;
      }
    } else if (fr < fx[N - 1]) {
      x[N] = xr;
      fx[N] = fr;
    } else {
      // outside contraction when the reflection beats the worst vertex
      const bool outside = fr < fx[N];
      const Point xc = outside ? along(centroid, xr, 0.5)
                               : along(centroid, x[N], 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fx[N])) {
        x[N] = xc;
        fx[N] = fc;
      } else {
        for (std::size_t i = 1; i <= N; ++i) {
          x[i] = along(x[0], x[i], 0.5);
          fx[i] = eval(x[i]);
        }
      }
    }
    order();
  }

  result.x = x[0];
  result.value = fx[0];
  result.iterations = iter;
  return result;
}

}  // namespace tempered
