#pragma once

#include <memory>

#include "bbb/beta.hpp"

namespace bbb {

/// Additive exponential-noise channel: Y_i = X_i + Z_i with Z_i ~ Exp(1),
/// inputs x_i >= 0 and sum x_i <= n*sigma.
struct ExpChannelSpec {
  int n = 1;
  double sigma = 1.0;

  void validate() const;
};

/// Input conditioning for the joint LLR model: the plain iid
/// capacity-achieving input, or that input conditioned on the window
/// n*sigma - w <= sum x_i <= n*sigma (rejection sampling).
enum class ExpInputMode { iid, window };

double exp_capacity_bits(double sigma);

/// Exact P[n*sigma - w <= sum X_i <= n*sigma] under the iid
/// capacity-achieving input (atom at zero + Exp(1+sigma) branch).
double exp_input_window_prob(const ExpChannelSpec& spec, double window);

/// Joint-vs-product LLR model: L = n ln(1+sigma) + S_X/(1+sigma)
/// - sigma S_Z/(1+sigma), with Q_Y the capacity-achieving output.
/// Throws if the window acceptance probability is below 1e-4.
std::unique_ptr<LlrModel> exp_joint_llr_model(const ExpChannelSpec& spec,
                                              ExpInputMode mode, double window);

/// Exact beta_{1-eps}(P_{Y|X=xbar}, Q_Y) on the simplex sum x_i = n*sigma:
/// e^{-n sigma/(1+sigma)} * P[sum Z_i <= (n - xi)/(1+sigma)] with
/// P[sum Z_i <= n - xi] = 1 - eps.
BetaEstimate exp_converse_beta_exact(const ExpChannelSpec& spec, double eps);

/// Threshold gamma_n with P_XY[i >= gamma_n] >= 1-eps+tau under the
/// window-conditioned input (nats); feeds beta <= e^{-gamma_n}.
double exp_ach_threshold(const ExpChannelSpec& spec, double eps, double tau,
                         double window);

}  // namespace bbb
