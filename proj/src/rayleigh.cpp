#include "bbb/channels/rayleigh.hpp"

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "bbb/special.hpp"

namespace bbb {

void RayleighSpec::validate() const {
  if (n < 1) throw std::domain_error("RayleighSpec: n < 1");
  if (!(snr > 0) || !std::isfinite(snr))
    throw std::domain_error("RayleighSpec: snr must be positive");
}

namespace {

class RayleighJointModel final : public LlrModel {
 public:
  explicit RayleighJointModel(const RayleighSpec& spec) : spec_(spec) {}

  double sample_llr(Rng& rng) const override {
    const int n = spec_.n;
    const double nP = n * spec_.snr;
    // x = sqrt(nP) xt/||xt||; per letter |h_i x_i|^2 + 2 Re(h_i x_i z_i^*).
    double xnorm2 = 0.0, g = 0.0, cross = 0.0;
    // First pass draws |xt_i|^2 and accumulates everything that does not
    // need the normalization, which is applied afterwards.
    // |h_i x_i|^2 = u_i * |x_i|^2; Re(h_i x_i z_i^*) | (h,x) ~ N(0, |h x|^2/2).
    for (int i = 0; i < n; ++i) {
      const double e = rng.exponential();  // |xt_i|^2 (unit scale)
      const double u = rng.exponential();  // |h_i|^2
      xnorm2 += e;
      const double hx2_unnorm = u * e;
      g += hx2_unnorm;
      cross += std::sqrt(2.0 * hx2_unnorm) * rng.normal();
    }
    const double scale = nP / xnorm2;
    return scale * g + std::sqrt(scale) * cross;
  }
  std::string name() const override { return "rayleigh_joint"; }

 private:
  RayleighSpec spec_;
};

class RayleighJointCond final : public ConditionalGaussianLlr {
 public:
  explicit RayleighJointCond(const RayleighSpec& spec) : spec_(spec) {}

  double sample_conditional_mean(Rng& rng) const override {
    double se = 0.0, sue = 0.0;
    for (int i = 0; i < spec_.n; ++i) {
      const double e = rng.exponential();
      se += e;
      sue += e * rng.exponential();
    }
    return spec_.n * spec_.snr * sue / se;
  }
  std::string name() const override { return "rayleigh_joint_cond"; }

 private:
  RayleighSpec spec_;
};

class RayleighScaledPair final : public ConditionalGaussianLlr {
 public:
  explicit RayleighScaledPair(const RayleighSpec& spec) : spec_(spec) {}

  double sample_conditional_mean(Rng& rng) const override {
    // m = (s-1)^2 sum u_i |xt_i|^2, s = sqrt(nP)/||xt||, xt iid CN(0,P).
    double se = 0.0, sue = 0.0;
    for (int i = 0; i < spec_.n; ++i) {
      const double e = rng.exponential();
      se += e;
      sue += e * rng.exponential();
    }
    const double s = std::sqrt(static_cast<double>(spec_.n) / se);
    return (s - 1.0) * (s - 1.0) * spec_.snr * sue;
  }
  std::string name() const override { return "rayleigh_scaled_pair"; }

 private:
  RayleighSpec spec_;
};

class RayleighBProduct final : public LlrModel {
 public:
  explicit RayleighBProduct(const RayleighSpec& spec) : spec_(spec) {}

  double sample_llr(Rng& rng) const override {
    const double P = spec_.snr;
    double L = 0.0;
    for (int i = 0; i < spec_.n; ++i) {
      const double u = rng.exponential();
      L += P * u * rng.exponential() - std::log1p(P * u);
    }
    return L;
  }
  std::string name() const override { return "rayleigh_b_product"; }

 private:
  RayleighSpec spec_;
};

}  // namespace

std::unique_ptr<LlrModel> rayleigh_joint_llr_model(const RayleighSpec& spec) {
  spec.validate();
  return std::make_unique<RayleighJointModel>(spec);
}

std::unique_ptr<ConditionalGaussianLlr> rayleigh_joint_cond_model(
    const RayleighSpec& spec) {
  spec.validate();
  return std::make_unique<RayleighJointCond>(spec);
}

std::unique_ptr<ConditionalGaussianLlr> rayleigh_scaled_pair_model(
    const RayleighSpec& spec) {
  spec.validate();
  return std::make_unique<RayleighScaledPair>(spec);
}

std::unique_ptr<LlrModel> rayleigh_b_product_model(const RayleighSpec& spec) {
  spec.validate();
  return std::make_unique<RayleighBProduct>(spec);
}

LetterMoments rayleigh_b_moments(double snr) {
  if (!(snr > 0)) throw std::domain_error("rayleigh_b_moments: snr <= 0");
  boost::math::quadrature::exp_sinh<double> integrator;
  auto expect = [&](auto f) {
    return integrator.integrate([&](double u) { return f(u) * std::exp(-u); },
                                1e-12);
  };
  const double P = snr;
  const double e_ln = expect([&](double u) { return std::log1p(P * u); });
  const double g1 = expect([&](double u) { return P * u - std::log1p(P * u); });
  const double g2 = expect([&](double u) {
    const double g = P * u - std::log1p(P * u);
    return g * g;
  });
  LetterMoments m;
  m.mean = P - e_ln;
  // Var[B] = E[Var[B|U]] + Var[E[B|U]] = P^2 E[U^2] + Var[PU - ln(1+PU)].
  m.var = 2.0 * P * P + (g2 - g1 * g1);
  return m;
}

RayleighOutputBound rayleigh_output_beta_lower(const RayleighSpec& spec,
                                               double tau, RayleighInnerMode mode,
                                               std::uint64_t n_samples,
                                               const SeedSpec& seed) {
  spec.validate();
  if (!(tau > 0 && tau < 1))
    throw std::domain_error("rayleigh_output_beta_lower: tau outside (0,1)");
  RayleighOutputBound out;
  out.tau_below_snr = tau < spec.snr;
  out.tau_hat = std::exp(-2.0) * tau;

  const auto model = rayleigh_b_product_model(spec);
  switch (mode) {
    case RayleighInnerMode::mean_var: {
      const LetterMoments m = rayleigh_b_moments(spec.snr);
      out.beta = beta_lower_mean_var(spec.n, m.mean, m.var, out.tau_hat);
      break;
    }
    case RayleighInnerMode::mc: {
      BetaEstimate b = beta_mc(*model, out.tau_hat, n_samples, seed);
      b.kind = BetaKind::lower_bound;
      out.beta = b;
      break;
    }
    case RayleighInnerMode::threshold_mc: {
      out.beta = beta_lower_threshold_mc(*model, out.tau_hat, n_samples, seed);
      break;
    }
  }
  return out;
}

RayleighOutputBound rayleigh_output_beta_lower_variational(
    const RayleighSpec& spec, double tau, std::uint64_t n_samples,
    const SeedSpec& seed, double conservative_z) {
  spec.validate();
  if (!(tau > 0 && tau < 1))
    throw std::domain_error("rayleigh_output_beta_lower_variational: bad tau");

  const auto pair = rayleigh_scaled_pair_model(spec);
  const BetaEstimate b_pr =
      beta_mc_conditional(*pair, tau, n_samples, seed.stream(11));
  RayleighOutputBound out;
  out.tau_below_snr = tau < spec.snr;
  out.tau_hat = std::exp(b_pr.log_lo(conservative_z));

  const auto inner = rayleigh_b_product_model(spec);
  out.beta = beta_variational_lower(
      BetaEstimate::lower(std::log(out.tau_hat)), [&](double alpha) {
        return beta_lower_threshold_mc(*inner, alpha, n_samples, seed.stream(12));
      });
  return out;
}

}  // namespace bbb
