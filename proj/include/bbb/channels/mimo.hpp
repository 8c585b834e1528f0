#pragma once

#include <memory>

#include "bbb/beta.hpp"
#include "bbb/mc.hpp"

namespace bbb {

/// mt x mr Rayleigh MIMO block-fading channel with perfect CSIR:
/// Y_k = X_k H_k + Z_k over ell coherence blocks of length nc,
/// codewords on the Frobenius sphere ||X||_F^2 = n*P, n = nc*ell.
/// Input/output scaling follows the Telatar convention: capacity-achieving
/// input entries are CN(0, P/mt) and the output rows given H are
/// CN(0, I + (P/mt) H^H H).
struct MimoSpec {
  int mt = 1;
  int mr = 1;
  int nc = 1;
  int ell = 1;
  double snr = 1.0;

  int n() const { return nc * ell; }
  void validate() const;
  /// Unique capacity-achieving input requires mr >= 2 or mt == mr == 1.
  void require_unique_caod() const;
};

/// Joint test against Q = (P*_YH)^ell with the sphere input.
std::unique_ptr<LlrModel> mimo_joint_llr_model(const MimoSpec& spec);

/// Scaled-vs-true channel pair (data-processing surrogate for the output
/// test); conditionally N(m,2m) with m = (s-1)^2 ||Xt H||_F^2.
std::unique_ptr<ConditionalGaussianLlr> mimo_scaled_pair_model(
    const MimoSpec& spec);

/// Conditional law for the single-entry codeword x_{1,1} = sqrt(nP) against
/// the capacity-achieving output.
std::unique_ptr<LlrModel> mimo_peaky_llr_model(const MimoSpec& spec);

/// beta_tau(P_YH, Q_YH) >= beta_tau(scaled pair), Monte Carlo on the
/// conditionally Gaussian form.
BetaEstimate mimo_output_beta_lower(const MimoSpec& spec, double tau,
                                    std::uint64_t n_samples,
                                    const SeedSpec& seed);

/// beta_{alpha}(P_YH|X = peaky codeword, Q_YH) by change-of-measure MC.
BetaEstimate mimo_peaky_codeword_beta(const MimoSpec& spec, double alpha,
                                      std::uint64_t n_samples,
                                      const SeedSpec& seed);

/// Ergodic capacity E[log2 det(I + (P/mt) H H^H)] in bits per channel use.
MeanVar mimo_capacity_mc(const MimoSpec& spec, std::uint64_t n_samples,
                         const SeedSpec& seed);

/// Conditional dispersion V(P) = E[Var[i(X;Y,H) | X]] per channel use in
/// bits^2, nested Monte Carlo (outer X, inner (H,Z)).
MeanVar mimo_dispersion_mc(const MimoSpec& spec, std::uint64_t n_outer,
                           std::uint64_t n_inner, const SeedSpec& seed);

/// Sampler for the cost-constrained DT bound: iid CN(0, P'/mt) input
/// through the channel, information density against its own output law,
/// with the Frobenius-ball membership flag.
class MimoCostDtSampler {
 public:
  virtual ~MimoCostDtSampler() = default;
  struct Sample {
    double llr = 0;
    bool in_ball = false;
  };
  virtual Sample sample(Rng& rng) const = 0;
};

std::unique_ptr<MimoCostDtSampler> mimo_cost_dt_sampler(const MimoSpec& spec,
                                                        double p_alt);

/// P' such that Q_X[||X||_F^2 > nP] = target under iid CN(0, P'/mt) entries.
double mimo_cost_dt_power(const MimoSpec& spec, double target);
/// Exact Q_X[||X||_F^2 > nP] for a given P'.
double mimo_cost_dt_overflow(const MimoSpec& spec, double p_alt);

}  // namespace bbb
