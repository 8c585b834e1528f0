#pragma once

#include <memory>

#include "bbb/beta.hpp"

namespace bbb {

/// Complex AWGN channel, unit noise power, codewords on the power sphere
/// ||x||^2 = n*P.
struct AwgnSpec {
  int n = 1;
  double snr = 1.0;  // P, linear

  void validate() const;
};

/// Auxiliary output law Q_Y: unit noise CN(0, I) or the capacity-achieving
/// output CN(0, (1+P) I). Both are radially symmetric, which is what makes
/// every beta below exact.
enum class AwgnQVariant { unit_noise, cap_output };

double awgn_capacity_bits(double snr);

/// beta_alpha(P_XY, P_X Q_Y) on the sphere. For unit noise this collapses to
/// the scalar Gaussian shift Q(sqrt(2nP) + Q^{-1}(alpha)); for the
/// capacity-achieving Q_Y it is an exact noncentral-chi-squared pair.
BetaEstimate awgn_joint_beta(const AwgnSpec& spec, double alpha);
BetaEstimate awgn_joint_beta(const AwgnSpec& spec, double alpha,
                             AwgnQVariant variant);

/// Exact LLR of the output test P_Y vs Q_Y as a function of ||y||^2
/// (sufficiency: both laws are radial).
double awgn_output_llr(const AwgnSpec& spec, double y_norm_sq,
                       AwgnQVariant variant);

/// Exact beta_alpha(P_Y, Q_Y) through the ||y||^2 threshold test.
BetaEstimate awgn_output_beta_exact(const AwgnSpec& spec, double alpha,
                                    AwgnQVariant variant);

/// Monte Carlo models for cross-validation of the closed forms.
std::unique_ptr<LlrModel> awgn_output_llr_model(const AwgnSpec& spec,
                                                AwgnQVariant variant);
std::unique_ptr<LlrModel> awgn_joint_llr_model(const AwgnSpec& spec,
                                               AwgnQVariant variant);

}  // namespace bbb
