#pragma once

#include <cstdint>
#include <string>

#include "bbb/beta.hpp"
#include "bbb/channels/awgn.hpp"
#include "bbb/channels/expnoise.hpp"
#include "bbb/channels/mimo.hpp"
#include "bbb/channels/rayleigh.hpp"

namespace bbb {

/// One point of a finite-blocklength bound curve. log2M always corresponds
/// to an integer M (ceiling/floor bookkeeping applied at the end).
struct CodePoint {
  int n = 0;
  double eps = 0;
  double log2M = 0;
  double rate = 0;           // bits per channel use
  double se_log2M = 0;       // MC standard error, 0 for closed forms
  std::string param_trace;   // free-parameter values used, for CSV metadata
};

enum class SearchMode { fixed, grid, golden };

/// Free parameters of the beta-beta bounds: tau in (0,eps) for
/// achievability, delta in [0,1-eps) for the converse. Negative values mean
/// "use the default" (tau = eps/2, delta optimized).
struct FreeParams {
  double tau = -1.0;
  double delta = -1.0;
  SearchMode search = SearchMode::golden;
  int grid_points = 8;
  int golden_probes = 32;
};

/// Monte Carlo configuration shared by the sampled bounds.
struct McParams {
  std::uint64_t samples = 100000;
  SeedSpec seed;
  bool conservative = false;  // use 3-sigma CI edges instead of point estimates
  double z = 3.0;
};

/// ----- AWGN (closed forms; both terms exact) -----
CodePoint awgn_bb_achievability(const AwgnSpec& spec, double eps,
                                const FreeParams& params,
                                AwgnQVariant variant = AwgnQVariant::cap_output);
CodePoint awgn_bb_converse(const AwgnSpec& spec, double eps,
                           const FreeParams& params,
                           AwgnQVariant variant = AwgnQVariant::cap_output);
double awgn_kappa_beta_logM(const AwgnSpec& spec, double eps, double tau,
                            AwgnQVariant variant = AwgnQVariant::cap_output);

/// ----- Additive exponential noise (closed forms) -----
CodePoint exp_bb_achievability(const ExpChannelSpec& spec, double eps,
                               const FreeParams& params);
CodePoint exp_bb_converse(const ExpChannelSpec& spec, double eps);
double exp_kappa_beta_logM(const ExpChannelSpec& spec, double eps, double tau);

/// ----- SISO Rayleigh fading (achievability only, Monte Carlo) -----
CodePoint fading_bb_achievability(const RayleighSpec& spec, double eps,
                                  const FreeParams& params, const McParams& mc);

/// ----- MIMO block fading (achievability only, Monte Carlo) -----
CodePoint mimo_bb_achievability(const MimoSpec& spec, double eps,
                                const FreeParams& params, const McParams& mc);
CodePoint mimo_cost_dt_rate(const MimoSpec& spec, double eps, const McParams& mc);
CodePoint mimo_feinstein_rate(const MimoSpec& spec, double eps,
                              const McParams& mc);

struct EpsBound {
  double eps = 0;
  double std_err = 0;
};

/// Weakened DT bound at the paper's threshold choice alpha = P[L >= ln(M/2)]:
/// eps <= P[L < t] + (M/2) E[e^{-L} 1{L >= t}], t = ln(M/2).
EpsBound dt_eps(const LlrModel& model, double log2M, std::uint64_t n_samples,
                const SeedSpec& seed);

/// M >= tau / beta_{1-eps+tau} * (sup dP_Y/dQ_Y)^{-1}; returns log2 M.
double jazi_logM(const BetaEstimate& beta_denominator, double eps, double tau,
                 double log_sup_ratio);

/// Golden-section maximization of f on [lo, hi] after a coarse grid pass.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  int grid_points, int golden_probes);

/// log2 of ceil(2^x) (achievability) or floor(2^x) (converse); identity once
/// 2^x overflows integer range.
double log2_ceil_pow2(double x);
double log2_floor_pow2(double x);

}  // namespace bbb
