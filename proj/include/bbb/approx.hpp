#pragma once

#include <functional>

#include "bbb/mc.hpp"

namespace bbb {

/// Minimum energy per bit at (k, eps, R), linear and in dB.
struct EbN0Point {
  double k = 0;
  double rate = 0;
  double eps = 0;
  double ebn0_linear = 0;
  double ebn0_db = 0;
};

/// Wideband line: ebn0_min_db + (R/S0) * 10 log10 2.
struct WidebandParams {
  double ebn0_min_db = -1.5917218565618583;  // 10 log10(ln 2)
  double s0 = 2.0;                           // bits/ch.use per 3 dB
};

/// Second-order expansion of Eb*/N0 for the AWGN channel:
/// ln2 + sqrt(2 ln2 / k) Q^{-1}(eps) + (ln^2 2 / 2) R.
EbN0Point awgn_ebn0_approx(double k, double eps, double R);

/// Rayleigh-fading (perfect CSIR) version; same first two terms, slope term
/// (ln^2 2) R, i.e. S0 = 1.
EbN0Point fading_ebn0_approx(double k, double eps, double R);

double wideband_line_db(double R, const WidebandParams& params);

/// Normal approximation for the additive exponential-noise channel:
/// log2(1+sigma) - sqrt(V/n) Q^{-1}(eps), V = (sigma/(1+sigma))^2 log2(e)^2.
double exp_channel_normal_approx(int n, double eps, double sigma);

/// C - sqrt(V/n) Q^{-1}(eps) from Monte Carlo capacity and dispersion
/// (bits, bits^2); valid direction for 0 < eps < 1/2.
double mimo_rate_normal(double capacity_bits, double dispersion_bits2, int n,
                        double eps);

/// Converts a rate bound R(n, P) into an energy-per-bit point: fixes
/// n = ceil(k/R), solves rate(n, P) = R for the smallest P by bisection
/// (<= 40 iterations, |rate - R| <= 1e-4 bits), returns Eb = P/R. The
/// evaluator must be monotone nondecreasing in P (checked on the bracket);
/// MC evaluators should bake in a fixed seed so the surface is a function.
EbN0Point ebn0_from_rate_bound(const std::function<double(int, double)>& rate,
                               double k, double eps, double R);

}  // namespace bbb
