#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bbb/log_domain.hpp"
#include "bbb/mc.hpp"
#include "bbb/rng.hpp"

namespace bbb {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Monte Carlo estimate too noisy to certify; raise n_samples or switch
/// to an analytic bound.
struct CiTooWideError : NumericError {
  using NumericError::NumericError;
};
struct NoBracketError : NumericError {
  using NumericError::NumericError;
};

enum class BetaKind { exact, lower_bound, upper_bound, mc_estimate };

/// A beta value or bound in log domain, with Monte Carlo error when
/// applicable (std_err_log is the standard error of log beta).
struct BetaEstimate {
  LogProb log_beta;
  BetaKind kind = BetaKind::exact;
  double std_err_log = 0.0;
  std::uint64_t n_samples = 0;

  static BetaEstimate exact(double log_value) {
    return {LogProb::from_log(log_value), BetaKind::exact, 0.0, 0};
  }
  static BetaEstimate lower(double log_value) {
    return {LogProb::from_log(log_value), BetaKind::lower_bound, 0.0, 0};
  }
  static BetaEstimate upper(double log_value) {
    return {LogProb::from_log(std::min(log_value, 0.0)), BetaKind::upper_bound, 0.0, 0};
  }

  double log() const { return log_beta.log(); }
  double log2() const { return log_beta.log2(); }

  /// z-sigma edge of the log-beta confidence interval (no-op for non-MC).
  double log_lo(double z = 3.0) const { return log() - z * std_err_log; }
  double log_hi(double z = 3.0) const {
    return std::min(log() + z * std_err_log, 0.0);
  }
};

/// gamma: LLR threshold (nats); the test accepts L > gamma always and
/// L == gamma with probability `randomization`.
struct NpThreshold {
  double gamma = 0.0;
  double achieved_alpha = 0.0;
  double randomization = 0.0;
  bool degenerate = false;  // all samples tied; threshold is randomization-only
};

/// Exponential-family member R_lambda between two unit-variance Gaussians.
struct ExponentialFamilyPath {
  double lambda = 0.0;
  double shift = 0.0;      // mean of R_lambda when P = N(d,1), Q = N(0,1)
  double log_renyi = 0.0;  // lambda * D_{1-lambda}(P||Q), nats
};

/// Exact beta for a Gaussian mean shift d (equal covariance):
/// log beta = log Q(d + Q^{-1}(alpha)).
BetaEstimate beta_gaussian_shift(double d, double alpha);

/// Empirical Neyman-Pearson threshold at type-I level alpha from samples of
/// L under P. Exact on the empirical measure, randomizing on ties.
NpThreshold np_threshold(std::vector<double> llr_samples, double alpha);
NpThreshold np_threshold(const LlrModel& model, double alpha,
                         std::uint64_t n_samples, const SeedSpec& seed);

/// Change-of-measure Monte Carlo estimate of beta_alpha(P,Q):
/// threshold from one stream, E_P[e^{-L} 1{L >= gamma}] from an independent
/// one. Throws CiTooWideError when the effective sample size drops below 100.
BetaEstimate beta_mc(const LlrModel& model, double alpha,
                     std::uint64_t n_samples, const SeedSpec& seed);

/// Same estimator for conditionally Gaussian pairs, with both tails
/// integrated analytically given the conditional means.
BetaEstimate beta_mc_conditional(const ConditionalGaussianLlr& model,
                                 double alpha, std::uint64_t n_samples,
                                 const SeedSpec& seed);

/// beta <= exp(-gamma) for any gamma with P[L >= gamma] >= alpha.
BetaEstimate beta_upper_from_threshold(double gamma);

/// Threshold-test lower bound beta_alpha(P,Q) >= e^{-g} (alpha - P[L >= g]),
/// with g the empirical (1 - alpha/2)-quantile of L under P and the excess
/// probability estimated on an independent stream. Unlike the weighted-tail
/// estimator this needs no change-of-measure weights, so it stays usable for
/// heavy-tailed LLRs whose tail weights would have vanishing effective
/// sample size.
BetaEstimate beta_lower_threshold_mc(const LlrModel& model, double alpha,
                                     std::uint64_t n_samples,
                                     const SeedSpec& seed);

/// Mean-variance tail bound for a sum of n iid LLR letters:
/// log beta_alpha >= -n*mu - sqrt(2 n v / alpha) + log_const.
/// log_const defaults to ln(alpha/2); a half-log variant also appears in
/// the literature, so it is exposed as a parameter.
BetaEstimate beta_lower_mean_var(double n, double mu, double v, double alpha);
BetaEstimate beta_lower_mean_var(double n, double mu, double v, double alpha,
                                 double log_const);

/// log beta_alpha >= -(D(P||Q) + h_b(alpha)) / alpha.
BetaEstimate beta_lower_haroutunian(double d_kl, double alpha);

/// Variational composition: beta_alpha(P,Q) >= beta_{beta_alpha(P,R)}(R,Q).
/// beta_PR may itself be a lower bound or a conservative MC edge.
BetaEstimate beta_variational_lower(
    const BetaEstimate& beta_PR,
    const std::function<BetaEstimate(double alpha)>& beta_RQ_at);

/// Exponential-family member for the Gaussian-shift pair.
ExponentialFamilyPath geodesic_gaussian(double d, double lambda);

struct MixtureBound {
  double alpha_eff = 0.0;
  BetaEstimate beta;
};

/// beta_{1 - l*d1 - (1-l)*d2}(P,Q) <= beta_{1-d1}(P1,Q) + beta_{1-d2}(P2,Q)
/// for P = l*P1 + (1-l)*P2.
MixtureBound beta_mixture_upper(const BetaEstimate& beta1,
                                const BetaEstimate& beta2, double lambda,
                                double delta1, double delta2);

/// beta_tau(P,Q) >= tau * (sup dP/dQ)^{-1}.
BetaEstimate beta_lower_sup_ratio(double tau, double log_sup_ratio);

}  // namespace bbb
