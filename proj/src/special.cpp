#include "bbb/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bbb/log_domain.hpp"

namespace bbb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLnSqrt2Pi = 0.9189385332046727418;  // ln sqrt(2*pi)
constexpr double kInvSqrt2 = 0.7071067811865475244;

// Mills-ratio continued fraction, Q(x) = phi(x) * R(x) with
// R(x) = 1/(x + 1/(x + 2/(x + 3/(...)))). Bottom-up evaluation with the
// depth doubled until two evaluations agree.
double mills_ratio_cf(double x) {
  auto eval = [x](int depth) {
    double t = 0.0;
    for (int k = depth; k >= 1; --k) t = k / (x + t);
    return 1.0 / (x + t);
  };
  double prev = eval(32);
  for (int depth = 64; depth <= 8192; depth *= 2) {
    const double cur = eval(depth);
    if (std::fabs(cur - prev) <= 1e-16 * std::fabs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

double q_func(double x) {
  if (std::isnan(x)) throw std::domain_error("q_func: NaN argument");
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: p outside (0,1)");
  return 1.4142135623730950488 * boost::math::erfc_inv(2.0 * p);
}

double log_q(double x) {
  if (std::isnan(x)) throw std::domain_error("log_q: NaN argument");
  if (x < 8.0) return std::log(0.5 * std::erfc(x * kInvSqrt2));
  return -0.5 * x * x - kLnSqrt2Pi + std::log(mills_ratio_cf(x));
}

double regularized_gamma_cdf(double a, double x) {
  if (!(a > 0)) throw std::domain_error("regularized_gamma_cdf: a <= 0");
  if (x <= 0) return 0.0;
  return boost::math::gamma_p(a, x);
}

double regularized_gamma_ccdf(double a, double x) {
  if (!(a > 0)) throw std::domain_error("regularized_gamma_ccdf: a <= 0");
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(a, x);
}

double log_gamma_p(double a, double x) {
  if (!(a > 0)) throw std::domain_error("log_gamma_p: a <= 0");
  if (x <= 0) return -kInf;
  if (x < a + 1.0) {
    // Lower series: P(a,x) = x^a e^-x / Gamma(a+1) * sum_m x^m / prod(a+1..a+m)
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 100000; ++m) {
      term *= x / (a + m);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
  }
  const double q = boost::math::gamma_q(a, x);
  return q < 1.0 ? log1m_exp(std::log(q)) : -kInf;
}

double log_gamma_q(double a, double x) {
  if (!(a > 0)) throw std::domain_error("log_gamma_q: a <= 0");
  if (x <= 0) return 0.0;
  if (x > a + 1.0) {
    // Upper continued fraction (Lentz): Q(a,x) = x^a e^-x / Gamma(a) * CF
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    if (b == 0) {
      d = 1.0 / tiny;
      h = d;
    }
    for (int i = 1; i < 100000; ++i) {
      const double an = -i * (i - a);
      b += 2.0;
      d = an * d + b;
      if (d == 0) d = tiny;
      c = b + an / c;
      if (c == 0) c = tiny;
      d = 1.0 / d;
      const double delta = d * c;
      h *= delta;
      if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return a * std::log(x) - x - std::lgamma(a) + std::log(h);
  }
  const double p = boost::math::gamma_p(a, x);
  return p < 1.0 ? log1m_exp(std::log(p)) : -kInf;
}

double regularized_gamma_quantile(double a, double p) {
  if (!(a > 0)) throw std::domain_error("regularized_gamma_quantile: a <= 0");
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("regularized_gamma_quantile: p outside (0,1)");
  return boost::math::gamma_p_inv(a, p);
}

namespace {

// Debye polynomials u1..u4 evaluated at t = 1/sqrt(1+(z/nu)^2).
double debye_correction(double nu, double t) {
  const double t2 = t * t;
  const double u1 = t * (3.0 - 5.0 * t2) / 24.0;
  const double u2 = t2 * (81.0 + t2 * (-462.0 + 385.0 * t2)) / 1152.0;
  const double u3 =
      t * t2 * (30375.0 + t2 * (-369603.0 + t2 * (765765.0 - 425425.0 * t2))) /
      414720.0;
  const double u4 = t2 * t2 *
                    (4465125.0 +
                     t2 * (-94121676.0 +
                           t2 * (349922430.0 +
                                 t2 * (-446185740.0 + 185910725.0 * t2)))) /
                    39813120.0;
  return 1.0 + u1 / nu + u2 / (nu * nu) + u3 / (nu * nu * nu) +
         u4 / (nu * nu * nu * nu);
}

// Log-domain ascending series, summed from the dominant index outward.
double log_bessel_i_series(double nu, double z) {
  const double lz2 = std::log(0.5 * z);
  auto log_term = [&](double m) {
    return (nu + 2.0 * m) * lz2 - std::lgamma(m + 1.0) -
           std::lgamma(nu + m + 1.0);
  };
  // Dominant m solves m(m+nu) ~ z^2/4.
  const double disc = std::sqrt((nu + 1.0) * (nu + 1.0) + z * z);
  const long m0 = std::lround(std::max(0.0, 0.5 * (disc - nu - 1.0)));
  const double lmax = log_term(static_cast<double>(m0));
  double sum = 1.0;
  for (long m = m0 + 1; m < m0 + 2000000; ++m) {
    const double lt = log_term(static_cast<double>(m)) - lmax;
    sum += std::exp(lt);
    if (lt < -45.0) break;
  }
  for (long m = m0 - 1; m >= 0; --m) {
    const double lt = log_term(static_cast<double>(m)) - lmax;
    sum += std::exp(lt);
    if (lt < -45.0) break;
  }
  return lmax + std::log(sum);
}

}  // namespace

double log_bessel_i(double nu, double z) {
  if (!(z > 0) || nu <= -1.0) throw std::domain_error("log_bessel_i: bad arguments");
  if (nu >= 100.0) {
    const double r = z / nu;
    const double s = std::sqrt(1.0 + r * r);
    const double eta = s + std::log(r / (1.0 + s));
    const double t = 1.0 / s;
    return nu * eta - 0.5 * std::log(6.283185307179586477 * nu) -
           0.25 * std::log1p(r * r) + std::log(debye_correction(nu, t));
  }
  return log_bessel_i_series(nu, z);
}

double log_noncentral_chi2_pdf(double k, double lambda, double x) {
  if (!(k >= 1.0) || lambda < 0.0)
    throw std::domain_error("log_noncentral_chi2_pdf: bad parameters");
  if (!(x > 0.0)) throw std::domain_error("log_noncentral_chi2_pdf: x <= 0");
  const double a = 0.5 * k;
  if (lambda == 0.0)
    return (a - 1.0) * std::log(x) - 0.5 * x - a * kLn2 - std::lgamma(a);
  const double nu = a - 1.0;
  return -kLn2 - 0.5 * (x + lambda) + 0.5 * nu * std::log(x / lambda) +
         log_bessel_i(nu, std::sqrt(lambda * x));
}

namespace {

void check_ncx2_args(double k, double lambda) {
  if (!(k >= 1.0) || lambda < 0.0 || !std::isfinite(k) || !std::isfinite(lambda))
    throw std::domain_error("noncentral_chi2: bad parameters");
}

// Poisson-mixture sum over central chi-squared terms, anchored at the
// Poisson mode (Benton & Krishnamoorthy style). `upper` selects the
// survival side. Linear domain; accurate for values down to ~1e-280.
double ncx2_mixture(double k, double lambda, double x, bool upper) {
  const double a = 0.5 * k, x2 = 0.5 * x, mu = 0.5 * lambda;
  if (mu == 0.0)
    return upper ? boost::math::gamma_q(a, x2) : boost::math::gamma_p(a, x2);

  const long j0 = std::lround(mu);
  const double lp0 = -mu + j0 * std::log(mu) - std::lgamma(j0 + 1.0);
  // d_j = x2^(a+j) e^-x2 / Gamma(a+j+1), the P-recurrence increment.
  const double ld0 = (a + j0) * std::log(x2) - x2 - std::lgamma(a + j0 + 1.0);

  const double g0 =
      upper ? boost::math::gamma_q(a + j0, x2) : boost::math::gamma_p(a + j0, x2);

  double sum = std::exp(lp0) * g0;
  // Upward sweep.
  {
    double lp = lp0, ld = ld0, g = g0;
    for (long j = j0 + 1; j < j0 + 3000000; ++j) {
      // P(a+1,x) = P(a,x) - d_a ; Q(a+1,x) = Q(a,x) + d_a
      const double d = std::exp(ld);
      g = upper ? g + d : g - d;
      g = std::clamp(g, 0.0, 1.0);
      lp += std::log(mu / j);
      ld += std::log(x2) - std::log(a + j);
      const double term = std::exp(lp) * g;
      sum += term;
      if ((term < 1e-18 * sum || term == 0.0) && lp < ld0 - 40.0 && lp < -40.0)
        break;
      if (lp < -745.0) break;
    }
  }
  // Downward sweep.
  if (j0 > 0) {
    double lp = lp0, ld = ld0, g = g0;
    for (long j = j0 - 1; j >= 0; --j) {
      lp += std::log((j + 1.0) / mu);
      ld += std::log(a + j + 1.0) - std::log(x2);
      const double d = std::exp(ld);
      g = upper ? g - d : g + d;
      g = std::clamp(g, 0.0, 1.0);
      const double term = std::exp(lp) * g;
      sum += term;
      if ((term < 1e-18 * sum || term == 0.0) && lp < -40.0) break;
      if (lp < -745.0) break;
    }
  }
  return std::min(sum, 1.0);
}

// Log-domain mixture for deep tails: every term as
// log pois_j + log_gamma_{p|q}(a+j, x2), summed around the dominant j.
double log_ncx2_mixture(double k, double lambda, double x, bool upper) {
  const double a = 0.5 * k, x2 = 0.5 * x, mu = 0.5 * lambda;
  if (mu == 0.0) return upper ? log_gamma_q(a, x2) : log_gamma_p(a, x2);

  auto log_term = [&](long j) {
    const double jd = static_cast<double>(j);
    return -mu + jd * std::log(mu) - std::lgamma(jd + 1.0) +
           (upper ? log_gamma_q(a + jd, x2) : log_gamma_p(a + jd, x2));
  };
  // Hill-climb to the dominant index from a saddle-informed start.
  long j = std::lround(std::max(0.0, std::min(mu, x2 - a)));
  double lj = log_term(j);
  for (long step = std::max<long>(1, std::lround(mu / 4.0)); step >= 1; step /= 2) {
    for (;;) {
      if (log_term(j + step) > lj) {
        j += step;
        lj = log_term(j);
      } else if (j - step >= 0 && log_term(j - step) > lj) {
        j -= step;
        lj = log_term(j);
      } else {
        break;
      }
    }
  }
  double sum = 1.0;
  for (long jj = j + 1; jj < j + 3000000; ++jj) {
    const double lt = log_term(jj) - lj;
    sum += std::exp(lt);
    if (lt < -45.0) break;
  }
  for (long jj = j - 1; jj >= 0; --jj) {
    const double lt = log_term(jj) - lj;
    sum += std::exp(lt);
    if (lt < -45.0) break;
  }
  return std::min(lj + std::log(sum), 0.0);
}

}  // namespace

double noncentral_chi2_cdf(double k, double lambda, double x) {
  check_ncx2_args(k, lambda);
  if (x <= 0) return 0.0;
  return ncx2_mixture(k, lambda, x, /*upper=*/false);
}

double noncentral_chi2_ccdf(double k, double lambda, double x) {
  check_ncx2_args(k, lambda);
  if (x <= 0) return 1.0;
  return ncx2_mixture(k, lambda, x, /*upper=*/true);
}

double log_noncentral_chi2_cdf(double k, double lambda, double x) {
  check_ncx2_args(k, lambda);
  if (x <= 0) return -kInf;
  return log_ncx2_mixture(k, lambda, x, /*upper=*/false);
}

double log_noncentral_chi2_ccdf(double k, double lambda, double x) {
  check_ncx2_args(k, lambda);
  if (x <= 0) return 0.0;
  return log_ncx2_mixture(k, lambda, x, /*upper=*/true);
}

double noncentral_chi2_quantile(double k, double lambda, double p) {
  check_ncx2_args(k, lambda);
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("noncentral_chi2_quantile: p outside (0,1)");

  const bool use_upper = p > 0.5;
  const double target = use_upper ? 1.0 - p : p;
  auto err = [&](double x) {
    // f(x) = (cdf side) - target, increasing in x either way.
    return use_upper ? target - noncentral_chi2_ccdf(k, lambda, x)
                     : noncentral_chi2_cdf(k, lambda, x) - target;
  };

  // Bracket from the normal approximation, expanding as needed.
  const double mean = k + lambda;
  const double sd = std::sqrt(2.0 * (k + 2.0 * lambda));
  const double z = q_inv(std::min(std::max(p > 0.5 ? 1.0 - p : p, 1e-300), 0.5));
  double lo = std::max(1e-300, mean - (std::fabs(z) + 2.0) * sd);
  double hi = mean + (std::fabs(z) + 2.0) * sd;
  for (int i = 0; i < 200 && err(lo) > 0; ++i) lo = std::max(lo / 2.0, lo - 2.0 * sd);
  for (int i = 0; i < 200 && err(hi) < 0; ++i) hi += 2.0 * sd;

  // Bisection with a Newton accelerant, robust against flat pdf regions.
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double e = err(x);
    if (e > 0)
      hi = x;
    else
      lo = x;
    if (std::fabs(e) < 1e-13 * std::max(target, 1e-14) + 1e-16) break;
    double xn = 0.0;
    bool newton_ok = false;
    const double lpdf = log_noncentral_chi2_pdf(k, lambda, std::max(x, 1e-300));
    if (std::isfinite(lpdf)) {
      const double step = -e / std::exp(lpdf);
      xn = x + step;
      newton_ok = std::isfinite(xn) && xn > lo && xn < hi;
    }
    x = newton_ok ? xn : 0.5 * (lo + hi);
    if (hi - lo < 1e-12 * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

}  // namespace bbb
