#include "bbb/approx.hpp"

#include <cmath>

#include "bbb/beta.hpp"
#include "bbb/special.hpp"

namespace bbb {

namespace {

EbN0Point make_point(double k, double eps, double R, double linear) {
  EbN0Point p;
  p.k = k;
  p.eps = eps;
  p.rate = R;
  p.ebn0_linear = linear;
  p.ebn0_db = 10.0 * std::log10(linear);
  return p;
}

void check_args(double k, double eps, double R) {
  if (!(k >= 1)) throw std::domain_error("ebn0 approx: k < 1");
  if (!(eps > 0 && eps < 1)) throw std::domain_error("ebn0 approx: bad eps");
  if (!(R >= 0)) throw std::domain_error("ebn0 approx: R < 0");
}

}  // namespace

EbN0Point awgn_ebn0_approx(double k, double eps, double R) {
  check_args(k, eps, R);
  const double lin =
      kLn2 + std::sqrt(2.0 * kLn2 / k) * q_inv(eps) + 0.5 * kLn2 * kLn2 * R;
  return make_point(k, eps, R, lin);
}

EbN0Point fading_ebn0_approx(double k, double eps, double R) {
  check_args(k, eps, R);
  const double lin =
      kLn2 + std::sqrt(2.0 * kLn2 / k) * q_inv(eps) + kLn2 * kLn2 * R;
  return make_point(k, eps, R, lin);
}

double wideband_line_db(double R, const WidebandParams& params) {
  if (!(R >= 0)) throw std::domain_error("wideband_line_db: R < 0");
  if (!(params.s0 > 0)) throw std::domain_error("wideband_line_db: s0 <= 0");
  return params.ebn0_min_db + R / params.s0 * 10.0 * std::log10(2.0);
}

double exp_channel_normal_approx(int n, double eps, double sigma) {
  if (n < 1) throw std::domain_error("exp_channel_normal_approx: n < 1");
  if (!(eps > 0 && eps < 1) || !(sigma > 0))
    throw std::domain_error("exp_channel_normal_approx: bad parameters");
  const double v = sigma / (1.0 + sigma) * kLog2e;
  return std::log2(1.0 + sigma) - v / std::sqrt(static_cast<double>(n)) * q_inv(eps);
}

double mimo_rate_normal(double capacity_bits, double dispersion_bits2, int n,
                        double eps) {
  if (n < 1) throw std::domain_error("mimo_rate_normal: n < 1");
  if (!(eps > 0 && eps < 0.5))
    throw std::domain_error("mimo_rate_normal: eps outside (0,1/2)");
  if (!(dispersion_bits2 >= 0))
    throw std::domain_error("mimo_rate_normal: negative dispersion");
  return capacity_bits - std::sqrt(dispersion_bits2 / n) * q_inv(eps);
}

EbN0Point ebn0_from_rate_bound(const std::function<double(int, double)>& rate,
                               double k, double eps, double R) {
  check_args(k, eps, R);
  if (!(R > 0)) throw std::domain_error("ebn0_from_rate_bound: R == 0");
  const int n = static_cast<int>(std::ceil(k / R));

  // Warm bracket around the second-order prediction, expanded as needed
  // within [1e-6, 1e3].
  const double p0 = awgn_ebn0_approx(k, eps, R).ebn0_linear * R;
  double lo = std::max(1e-6, 0.5 * p0), hi = std::min(1e3, 2.0 * p0);
  auto f = [&](double P) { return rate(n, P) - R; };
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < 60 && flo > 0 && lo > 1e-6; ++i) {
    lo = std::max(1e-6, lo / 2);
    flo = f(lo);
  }
  for (int i = 0; i < 60 && fhi < 0 && hi < 1e3; ++i) {
    hi = std::min(1e3, 2 * hi);
    fhi = f(hi);
  }
  if (flo > 0 || fhi < 0)
    throw NoBracketError("ebn0_from_rate_bound: no bracket in [1e-6,1e3]");
  if (flo > fhi)
    throw NumericError("ebn0_from_rate_bound: evaluator not monotone in P");

  double mid = 0.5 * (lo + hi), fm = 0.0;
  for (int i = 0; i < 40; ++i) {
    mid = 0.5 * (lo + hi);
    fm = f(mid);
    if (std::fabs(fm) <= 1e-4) break;
    (fm < 0 ? lo : hi) = mid;
  }
  if (std::fabs(fm) > 1e-4)
    throw NumericError("ebn0_from_rate_bound: bisection did not converge");
  return [&] {
    EbN0Point p;
    p.k = k;
    p.eps = eps;
    p.rate = R;
    p.ebn0_linear = mid / R;
    p.ebn0_db = 10.0 * std::log10(p.ebn0_linear);
    return p;
  }();
}

}  // namespace bbb
