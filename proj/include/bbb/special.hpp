#pragma once

#include <cstdint>

namespace bbb {

/// Gaussian tail Q(x) = P[N(0,1) > x].
double q_func(double x);

/// Inverse of q_func on (0,1).
double q_inv(double p);

/// ln Q(x), accurate in relative terms out to x ~ several hundred
/// (erfc branch for moderate x, Mills-ratio continued fraction beyond).
double log_q(double x);

/// Regularized lower incomplete gamma P(a,x) = P[Gamma(a,1) <= x].
/// With integer a this is the Erlang CDF.
double regularized_gamma_cdf(double a, double x);

/// Upper tail Q(a,x) = 1 - P(a,x).
double regularized_gamma_ccdf(double a, double x);

/// ln P(a,x) and ln Q(a,x), usable deep in either tail.
double log_gamma_p(double a, double x);
double log_gamma_q(double a, double x);

/// x with P(a,x) = p.
double regularized_gamma_quantile(double a, double p);

/// ln I_nu(z) for nu >= 0, z > 0. Series / Debye uniform asymptotic /
/// large-argument branches; stable up to nu ~ 1e5, z ~ 1e5.
double log_bessel_i(double nu, double z);

/// Noncentral chi-squared, k degrees of freedom, noncentrality lambda.
double log_noncentral_chi2_pdf(double k, double lambda, double x);
double noncentral_chi2_cdf(double k, double lambda, double x);
double noncentral_chi2_ccdf(double k, double lambda, double x);
/// ln CDF / ln CCDF via a log-domain Poisson mixture; usable when the
/// linear value underflows (tail masses down to e^{-1e6} or so).
double log_noncentral_chi2_cdf(double k, double lambda, double x);
double log_noncentral_chi2_ccdf(double k, double lambda, double x);
double noncentral_chi2_quantile(double k, double lambda, double p);

/// Binary entropy in nats.
double binary_entropy(double p);

}  // namespace bbb
