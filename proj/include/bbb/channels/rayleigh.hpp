#pragma once

#include <memory>

#include "bbb/beta.hpp"

namespace bbb {

/// SISO Rayleigh-fading channel Y_i = H_i X_i + Z_i with iid CN(0,1) fading
/// known at the receiver, codewords on the power sphere ||x||^2 = n*P.
struct RayleighSpec {
  int n = 1;
  double snr = 1.0;

  void validate() const;
};

/// Joint-vs-product LLR with Q_Y = CN(0,I): per-letter
/// |H_i X_i|^2 + 2 Re(H_i X_i Z_i^*), X uniform on the sphere.
std::unique_ptr<LlrModel> rayleigh_joint_llr_model(const RayleighSpec& spec);

/// Same pair, reduced: given (|H|,|X|) the LLR is N(G, 2G) with
/// G = nP sum(u_i e_i)/sum(e_j). Equivalent in law, integrates the Gaussian
/// direction analytically.
std::unique_ptr<ConditionalGaussianLlr> rayleigh_joint_cond_model(
    const RayleighSpec& spec);

/// Scaled-channel pair for the data-processing step of the output test:
/// sphere input vs iid input through the same fading, conditionally
/// N(m, 2m) with m = (s-1)^2 sum |H_i Xt_i|^2, s = sqrt(nP)/||Xt||.
std::unique_ptr<ConditionalGaussianLlr> rayleigh_scaled_pair_model(
    const RayleighSpec& spec);

/// Per-letter ratio of the capacity-achieving output to CN(0,1)*P_H:
/// B_i = P U_i E_i - ln(1 + P U_i), U = |H|^2, E = |Z|^2.
std::unique_ptr<LlrModel> rayleigh_b_product_model(const RayleighSpec& spec);

struct LetterMoments {
  double mean = 0;  // nats
  double var = 0;   // nats^2
};

/// Exact per-letter moments of B_i by quadrature over U ~ Exp(1).
LetterMoments rayleigh_b_moments(double snr);

enum class RayleighInnerMode { mean_var, mc, threshold_mc };

struct RayleighOutputBound {
  BetaEstimate beta;
  bool tau_below_snr = false;  // paper's chain needs tau >= P; flagged, not fatal
  double tau_hat = 0.0;
};

/// Output-test lower bound via the Haroutunian chain:
/// beta_tau(P_YH, Q_Y P_H) >= beta_{tau_hat}((P*_YH)^n, Q_Y P_H) with
/// tau_hat = e^{-2} tau, inner beta on the B product model.
RayleighOutputBound rayleigh_output_beta_lower(const RayleighSpec& spec,
                                               double tau, RayleighInnerMode mode,
                                               std::uint64_t n_samples,
                                               const SeedSpec& seed);

/// Output-test lower bound via the variational route: tau_hat certified by
/// Monte Carlo on the scaled-channel pair (conservative edge), inner beta by
/// the threshold bound on the B product model. Tighter than the e^{-2} tau
/// chain at figure-scale SNR where tau < P.
RayleighOutputBound rayleigh_output_beta_lower_variational(
    const RayleighSpec& spec, double tau, std::uint64_t n_samples,
    const SeedSpec& seed, double conservative_z);

}  // namespace bbb
