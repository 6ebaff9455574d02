#pragma once

#include <functional>

namespace tempered {

/// Solves g(y) = 0 for an increasing g on [y_lo, inf) with g(y_lo) <= 0.
///
/// The upper end of the bracket starts at y_lo + initial_width and doubles its
/// distance until g changes sign; the root is then polished by Newton steps
/// that fall back to bisection whenever they leave the bracket. `dg` must be
/// the derivative of g. Throws NumericError naming the bracket on failure.
double solve_increasing(const std::function<double(double)>& g,
                        const std::function<double(double)>& dg, double y_lo,
                        double initial_width = 1.0);

/// Bracketed root of a continuous f with f(lo) and f(hi) of opposite sign
/// (TOMS 748). Throws NumericError if the signs agree.
double solve_bracketed(const std::function<double(double)>& f, double lo,
                       double hi);

}  // namespace tempered
