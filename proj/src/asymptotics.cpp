#include "tempered/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "tempered/error.hpp"
#include "tempered/quadrature.hpp"
#include "tempered/random.hpp"

namespace tempered {

namespace {

// Pieces shared by every integrand at excess u.
struct Point {
  double log_u;
  double u_tau;   // u^tau
  double a;       // alpha + lambda tau u^tau
  double weight;  // u^(-alpha-1) exp(-lambda tau h_tau(u)), 0 when negligible
};

Point at(const TemperedParams& p, double u) {
  Point pt;
  pt.log_u = std::log(u);
  const double m1 = std::expm1(p.tau() * pt.log_u);
  pt.u_tau = 1.0 + m1;
  pt.a = p.alpha() + p.lambda() * p.tau() * pt.u_tau;
  const double temper = p.lambda() == 0.0 ? 0.0 : p.lambda() * m1;
  const double log_w = -(p.alpha() + 1.0) * pt.log_u - temper;
  pt.weight = log_w < -700.0 ? 0.0 : std::exp(log_w);
  return pt;
}

void require_interior(const TemperedParams& p, const char* fn) {
  if (!(p.lambda() > 0.0)) {
    std::ostringstream msg;
    msg << fn << ": lambda must be > 0 (got " << p.lambda() << ")";
    throw DomainError(msg.str());
  }
}

// Zero wherever the density weight underflows; the polynomial factors may
// overflow there.
QuadratureResult weighted_integral(const TemperedParams& p,
                                   const std::function<double(double)>& f,
                                   double abs_tol, const char* what) {
  return integrate_from_one(
      [&](double u) { return at(p, u).weight == 0.0 ? 0.0 : f(u); }, abs_tol, what);
}

const char* kEntryNames[3][3] = {{"I_11", "I_12", "I_13"},
                                 {"I_12", "I_22", "I_23"},
                                 {"I_13", "I_23", "I_33"}};

}  // namespace

double fisher_entry(const TemperedParams& p, int i, int j, double abs_tol) {
  if (i < 0 || i > 2 || j < 0 || j > 2) throw DomainError("fisher_entry: index out of range");
  if (i > j) std::swap(i, j);
  if (!(i == 0 && j == 0)) require_interior(p, "fisher_entry");

  const double alpha = p.alpha(), lambda = p.lambda(), tau = p.tau();
  std::function<double(double)> f;
  double factor = 1.0;
  switch (i * 3 + j) {
    case 0:  // (0,0)
      f = [&](double u) {
        const Point q = at(p, u);
        return q.weight / q.a;
      };
      break;
    case 4:  // (1,1)
      factor = tau * tau;
      f = [&](double u) {
        const Point q = at(p, u);
        return q.u_tau * q.u_tau * q.weight / q.a;
      };
      break;
    case 8:  // (2,2)
      factor = lambda;
      f = [&](double u) {
        const Point q = at(p, u);
        const double l = q.log_u;
        const double brace = l * l - 2.0 * l / q.a +
                             (lambda * q.u_tau * (1.0 + 2.0 * tau * l) - alpha * tau * l * l) /
                                 (q.a * q.a);
        return brace * q.u_tau * q.weight * q.a;
      };
      break;
    case 1:  // (0,1)
      factor = tau;
      f = [&](double u) {
        const Point q = at(p, u);
        return q.u_tau * q.weight / q.a;
      };
      break;
    case 2:  // (0,2)
      factor = lambda;
      f = [&](double u) {
        const Point q = at(p, u);
        return (1.0 + tau * q.log_u) * q.u_tau * q.weight / q.a;
      };
      break;
    case 5:  // (1,2)
      f = [&](double u) {
        const Point q = at(p, u);
        const double brace = q.log_u - alpha * (1.0 + tau * q.log_u) / (q.a * q.a);
        return brace * q.u_tau * q.weight * q.a;
      };
      break;
  }
  return factor * weighted_integral(p, f, abs_tol, kEntryNames[i][j]).value;
}

Matrix3 fisher_info(const TemperedParams& p, double abs_tol) {
  require_interior(p, "fisher_info");
  Matrix3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      m(i, j) = fisher_entry(p, i, j, abs_tol);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

Vector3 bias_integrals(const TemperedParams& p, double rho, double abs_tol) {
  require_interior(p, "bias_integrals");
  if (!(rho < 0.0) || !std::isfinite(rho)) throw DomainError("bias_integrals: rho must be < 0");
  const double lambda = p.lambda(), tau = p.tau();

  // h_rho(u) A - u^rho; equals -1 at u = 1
  auto second = [&](const Point& q) {
    const double m1 = std::expm1(rho * q.log_u);
    return (m1 / rho) * q.a - (1.0 + m1);
  };

  Vector3 b;
  b(0) = weighted_integral(p, 
             [&](double u) {
               const Point q = at(p, u);
               return (1.0 / q.a - q.log_u) * q.weight * second(q);
             },
             abs_tol, "b_1")
             .value;
  b(1) = weighted_integral(p, 
             [&](double u) {
               const Point q = at(p, u);
               const double h = (q.u_tau - 1.0) / tau;
               return (tau * q.u_tau / q.a - tau * h) * q.weight * second(q);
             },
             abs_tol, "b_2")
             .value;
  b(2) = lambda * weighted_integral(p, 
                      [&](double u) {
                        const Point q = at(p, u);
                        return ((1.0 + tau * q.log_u) / q.a - q.log_u) * q.u_tau * q.weight *
                               second(q);
                      },
                      abs_tol, "b_3")
                      .value;
  return b;
}

Vector3 bias_vector(const TemperedParams& p, const SecondOrderSpec& so) {
  require_interior(p, "bias_vector");
  if (!(so.rho < 0.0)) throw DomainError("bias_vector: rho must be < 0");
  if (!(so.nu > 0.0)) throw DomainError("bias_vector: nu must be > 0");
  if (so.D == 0.0) return Vector3::Zero();
  const Matrix3 info = fisher_info(p);
  const Vector3 b = bias_integrals(p, so.rho);
  return so.D * so.nu * info.llt().solve(b);
}

AsymptoticInfo asymptotic_cov(const TemperedParams& p, double k_eff,
                              const std::optional<SecondOrderSpec>& so) {
  if (!(k_eff >= 1.0) || !std::isfinite(k_eff)) throw DomainError("asymptotic_cov: k_eff must be >= 1");
  AsymptoticInfo out;
  out.k_eff = k_eff;
  out.info = fisher_info(p);

  Eigen::SelfAdjointEigenSolver<Matrix3> eig(out.info, Eigen::EigenvaluesOnly);
  const Vector3 ev = eig.eigenvalues();
  Eigen::LLT<Matrix3> llt(out.info);
  if (!(ev.minCoeff() > 0.0) || llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "asymptotic_cov: information matrix is not positive definite, eigenvalues "
        << ev(0) << ", " << ev(1) << ", " << ev(2);
    throw NumericError(msg.str());
  }
  out.cov = llt.solve(Matrix3::Identity()) / k_eff;
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  if (so) {
    if (!(so->rho < 0.0)) throw DomainError("asymptotic_cov: rho must be < 0");
    if (!(so->nu > 0.0)) throw DomainError("asymptotic_cov: nu must be > 0");
    if (so->D != 0.0) out.bias = so->D * so->nu * llt.solve(bias_integrals(p, so->rho));
  }
  return out;
}

ConfidenceIntervals confidence_interval(const AsymptoticInfo& info,
                                        const TemperedParams& p, double level) {
  if (!(level >= 0.0 && level < 1.0)) throw DomainError("confidence_interval: level must lie in [0, 1)");
  const double z =
      level == 0.0 ? 0.0
                   : boost::math::quantile(boost::math::normal_distribution<>(), 0.5 * (1.0 + level));
  auto band = [&](double centre, int i, bool floor_zero) {
    const double var = info.cov(i, i);
    if (!(var >= 0.0) || !std::isfinite(var)) throw NumericError("confidence_interval: invalid covariance");
    const double half = z * std::sqrt(var);
    Interval iv{centre - half, centre + half};
    if (floor_zero) iv.lo = std::max(0.0, iv.lo);
    return iv;
  };
  ConfidenceIntervals ci;
  ci.level = level;
  ci.alpha = band(p.alpha(), 0, true);
  ci.lambda = band(p.lambda(), 1, false);
  ci.tau = band(p.tau(), 2, true);
  return ci;
}

ConfidenceIntervals confidence_interval(const FitResult& fit, double k_eff,
                                        double level) {
  if (!fit.converged) throw NumericError("confidence_interval: fit did not converge");
  if (!(fit.params.lambda() > 0.0))
    throw NumericError("confidence_interval: the fit sits at lambda = 0, information is singular there");
  return confidence_interval(asymptotic_cov(fit.params, k_eff), fit.params, level);
}

Vector3 observation_score(const TemperedParams& p, double u) {
  if (!(u >= 1.0)) throw DomainError("observation_score: u must be >= 1");
  const double l = std::log(u);
  const double m1 = std::expm1(p.tau() * l);
  const double ut = 1.0 + m1;
  const double a = p.alpha() + p.lambda() * p.tau() * ut;
  return Vector3(1.0 / a - l, p.tau() * ut / a - m1,
                 p.lambda() * (ut * (1.0 + p.tau() * l) / a - ut * l));
}

ScoreMoments mc_score_moments(const TemperedParams& p, std::size_t n_draws,
                              std::uint64_t seed) {
  require_interior(p, "mc_score_moments");
  if (n_draws < 10000) throw DomainError("mc_score_moments: need at least 10^4 draws");
  Engine engine = make_stream(seed, 0);
  ScoreMoments m;
  Vector3 sum_sq = Vector3::Zero();
  for (std::size_t i = 0; i < n_draws; ++i) {
    const Vector3 s = observation_score(p, draw_limit(p, engine));
    m.outer += s * s.transpose();
    m.mean += s;
    sum_sq += s.cwiseProduct(s);
  }
  const double n = static_cast<double>(n_draws);
  m.outer /= n;
  m.mean /= n;
  const Vector3 var = (sum_sq / n - m.mean.cwiseProduct(m.mean)) * (n / (n - 1.0));
  m.mean_stderr = (var / n).cwiseSqrt();
  m.draws = n_draws;
  return m;
}

Matrix3 mc_fisher_oracle(const TemperedParams& p, std::size_t n_draws,
                         std::uint64_t seed) {
  return mc_score_moments(p, n_draws, seed).outer;
}

}  // namespace tempered
