#include "tempered/roots.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "tempered/error.hpp"

namespace tempered {

double solve_increasing(const std::function<double(double)>& g,
                        const std::function<double(double)>& dg, double y_lo,
                        double initial_width) {
  double g_lo = g(y_lo);
  if (!std::isfinite(g_lo)) throw NumericError("solve_increasing: g(y_lo) not finite");
  if (g_lo == 0.0) return y_lo;
  if (g_lo > 0.0) {
    std::ostringstream msg;
    msg << "solve_increasing: g(" << y_lo << ") = " << g_lo << " > 0";
    throw NumericError(msg.str());
  }

  double lo = y_lo;
  double width = initial_width > 0.0 ? initial_width : 1.0;
  double hi = y_lo + width;
  double g_hi = g(hi);
  int grow = 0;
  while (!(g_hi >= 0.0)) {
    if (++grow > 200 || !std::isfinite(hi)) {
      std::ostringstream msg;
      msg << "solve_increasing: no sign change on [" << y_lo << ", " << hi << "]";
      throw NumericError(msg.str());
    }
    lo = hi;
    g_lo = g_hi;
    width *= 2.0;
    hi = y_lo + width;
    g_hi = g(hi);
  }
  if (g_hi == 0.0) return hi;

  double y = 0.5 * (lo + hi);
  for (int iter = 0; iter < 300; ++iter) {
    const double gy = g(y);
    if (gy == 0.0) return y;
    if (gy < 0.0) lo = y; else hi = y;

    const double slope = dg(y);
    double next = y - gy / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);

    const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(next));
    if (std::abs(next - y) <= tol || hi - lo <= tol) return next;
    y = next;
  }
  std::ostringstream msg;
  msg << "solve_increasing: no convergence in [" << lo << ", " << hi << "]";
  throw NumericError(msg.str());
}

double solve_bracketed(const std::function<double(double)>& f, double lo,
                       double hi) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0) || !std::isfinite(f_lo) || !std::isfinite(f_hi)) {
    std::ostringstream msg;
    msg << "solve_bracketed: no sign change on [" << lo << ", " << hi << "] (f = "
        << f_lo << ", " << f_hi << ")";
    throw NumericError(msg.str());
  }
  std::uintmax_t max_iter = 400;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  if (max_iter >= 400) {
    std::ostringstream msg;
    msg << "solve_bracketed: no convergence, last bracket [" << a << ", " << b << "]";
    throw NumericError(msg.str());
  }
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

}  // namespace tempered
