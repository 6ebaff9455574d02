#pragma once

#include <functional>

namespace tempered {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Integral of f over [1, inf).
///
/// Substitutes u = e^y, maps y in [0, inf) onto (0, 1) and runs adaptive 31-point
/// Gauss-Kronrod bisection there. Transformed integrand values below 1e-14 in
/// magnitude are treated as zero. Throws NumericError when the error estimate
/// exceeds abs_tol; `what` names the integral in the message.
QuadratureResult integrate_from_one(const std::function<double(double)>& f,
                                    double abs_tol = 1e-9,
                                    const char* what = "integral");

}  // namespace tempered
