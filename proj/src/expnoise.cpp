#include "bbb/channels/expnoise.hpp"

#include <algorithm>
#include <cmath>

#include "bbb/special.hpp"

namespace bbb {

void ExpChannelSpec::validate() const {
  if (n < 1) throw std::domain_error("ExpChannelSpec: n < 1");
  if (!(sigma > 0) || !std::isfinite(sigma))
    throw std::domain_error("ExpChannelSpec: sigma must be positive");
}

double exp_capacity_bits(double sigma) { return std::log2(1.0 + sigma); }

double exp_input_window_prob(const ExpChannelSpec& spec, double window) {
  spec.validate();
  if (!(window > 0)) throw std::domain_error("exp_input_window_prob: window <= 0");
  const int n = spec.n;
  const double p = spec.sigma / (1.0 + spec.sigma);
  const double hi = n * spec.sigma;
  const double lo = std::max(hi - window, 0.0);
  // S = sum over the K ~ Bin(n,p) positive entries of Exp(1+sigma) values;
  // S | K ~ Gamma(K, scale 1+sigma).
  const double sd = std::sqrt(n * p * (1.0 - p));
  const int k_lo = std::max(1, static_cast<int>(std::floor(n * p - 12.0 * sd)));
  const int k_hi = std::min(n, static_cast<int>(std::ceil(n * p + 12.0 * sd)));
  const double lg_n1 = std::lgamma(n + 1.0);
  double acc = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double lbin = lg_n1 - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                        k * std::log(p) + (n - k) * std::log1p(-p);
    const double mass = regularized_gamma_cdf(k, hi / (1.0 + spec.sigma)) -
                        regularized_gamma_cdf(k, lo / (1.0 + spec.sigma));
    acc += std::exp(lbin) * mass;
  }
  // K = 0 contributes iff the window reaches down to zero.
  if (lo <= 0.0) acc += std::exp(n * std::log1p(-p));
  return acc;
}

namespace {

class ExpJointModel final : public LlrModel {
 public:
  ExpJointModel(const ExpChannelSpec& spec, ExpInputMode mode, double window)
      : spec_(spec), mode_(mode), window_(window) {}

  double sample_llr(Rng& rng) const override {
    const int n = spec_.n;
    const double sigma = spec_.sigma;
    const double p = sigma / (1.0 + sigma);
    const double hi = n * sigma;
    const double lo = hi - window_;

    double sx = 0.0;
    for (int tries = 0;; ++tries) {
      if (tries > 200000)
        throw NumericError("exp_joint_llr_model: window rejection stalled");
      sx = 0.0;
      for (int i = 0; i < n; ++i)
        if (rng.uniform() < p) sx += (1.0 + sigma) * rng.exponential();
      if (mode_ == ExpInputMode::iid || (sx >= lo && sx <= hi)) break;
    }
    double sz = 0.0;
    for (int i = 0; i < n; ++i) sz += rng.exponential();
    return n * std::log1p(sigma) + sx / (1.0 + sigma) - sigma * sz / (1.0 + sigma);
  }
  std::string name() const override { return "exp_joint"; }

 private:
  ExpChannelSpec spec_;
  ExpInputMode mode_;
  double window_;
};

}  // namespace

std::unique_ptr<LlrModel> exp_joint_llr_model(const ExpChannelSpec& spec,
                                              ExpInputMode mode, double window) {
  spec.validate();
  if (mode == ExpInputMode::window) {
    const double acc = exp_input_window_prob(spec, window);
    if (acc < 1e-4)
      throw NumericError("exp_joint_llr_model: window acceptance " +
                         std::to_string(acc) + " < 1e-4");
  }
  return std::make_unique<ExpJointModel>(spec, mode, window);
}

BetaEstimate exp_converse_beta_exact(const ExpChannelSpec& spec, double eps) {
  spec.validate();
  if (!(eps > 0 && eps < 1))
    throw std::domain_error("exp_converse_beta_exact: eps outside (0,1)");
  const double n = spec.n;
  // P[sum Z_i <= n - xi] = 1 - eps, exactly the Erlang quantile.
  const double n_minus_xi = regularized_gamma_quantile(n, 1.0 - eps);
  const double lb = -n * spec.sigma / (1.0 + spec.sigma) +
                    log_gamma_p(n, n_minus_xi / (1.0 + spec.sigma));
  return BetaEstimate::exact(lb);
}

double exp_ach_threshold(const ExpChannelSpec& spec, double eps, double tau,
                         double window) {
  spec.validate();
  if (!(tau > 0 && tau < eps))
    throw std::domain_error("exp_ach_threshold: tau outside (0,eps)");
  const double n = spec.n;
  const double sigma = spec.sigma;
  // Under the window-conditioned input, S_X >= n sigma - window surely, so
  // i >= n ln(1+sigma) + (n sigma - window)/(1+sigma) - sigma S_Z/(1+sigma)
  // and the Erlang quantile of S_Z pins the threshold.
  const double q = regularized_gamma_quantile(n, 1.0 - eps + tau);
  return n * std::log1p(sigma) + (n * sigma - window) / (1.0 + sigma) -
         sigma * q / (1.0 + sigma);
}

}  // namespace bbb
