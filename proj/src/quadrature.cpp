#include "tempered/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tempered/error.hpp"

namespace tempered {

QuadratureResult integrate_from_one(const std::function<double(double)>& f,
                                    double abs_tol, const char* what) {
  // u = e^y turns the algebraic tail u^-a into e^-a y; Boost maps y in
  // [0, inf) onto the unit interval.
  auto mapped = [&](double y) {
    if (y > 700.0) return 0.0;
    const double u = std::exp(y);
    const double value = f(u) * u;
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << what << ": integrand not finite at u = " << u;
      throw NumericError(msg.str());
    }
    return std::abs(value) < 1e-14 ? 0.0 : value;
  };

  QuadratureResult out;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      mapped, 0.0, std::numeric_limits<double>::infinity(), 30, abs_tol * 1e-3, &out.error,
      &l1);
  if (!(out.error <= abs_tol)) {
    std::ostringstream msg;
    msg << what << ": quadrature error estimate " << out.error
        << " exceeds tolerance " << abs_tol;
    throw NumericError(msg.str());
  }
  return out;
}

}  // namespace tempered
