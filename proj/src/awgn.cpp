#include "bbb/channels/awgn.hpp"

#include <cmath>
#include <limits>

#include "bbb/special.hpp"

namespace bbb {

void AwgnSpec::validate() const {
  if (n < 1) throw std::domain_error("AwgnSpec: n < 1");
  if (!(snr > 0) || !std::isfinite(snr))
    throw std::domain_error("AwgnSpec: snr must be positive");
}

double awgn_capacity_bits(double snr) { return std::log2(1.0 + snr); }

BetaEstimate awgn_joint_beta(const AwgnSpec& spec, double alpha) {
  return awgn_joint_beta(spec, alpha, AwgnQVariant::unit_noise);
}

BetaEstimate awgn_joint_beta(const AwgnSpec& spec, double alpha,
                             AwgnQVariant variant) {
  spec.validate();
  const double nP = spec.n * spec.snr;
  if (variant == AwgnQVariant::unit_noise)
    return beta_gaussian_shift(std::sqrt(2.0 * nP), alpha);

  // Q_Y = CN(0,(1+P)I): the LLR is decreasing in T = 2||y - c xbar||^2 with
  // c = (1+P)/P. Under P: T ~ chi2_{2n}(2n/P); under Q: T/(1+P) ~
  // chi2_{2n}(2n(1+P)/P). NP region is {T <= gamma}.
  const double P = spec.snr;
  const double k = 2.0 * spec.n;
  const double gamma = noncentral_chi2_quantile(k, 2.0 * spec.n / P, alpha);
  const double lb =
      log_noncentral_chi2_cdf(k, 2.0 * spec.n * (1.0 + P) / P, gamma / (1.0 + P));
  return BetaEstimate::exact(lb);
}

double awgn_output_llr(const AwgnSpec& spec, double y_norm_sq,
                       AwgnQVariant variant) {
  spec.validate();
  if (!(y_norm_sq > 0)) throw std::domain_error("awgn_output_llr: ||y||^2 <= 0");
  const double k = 2.0 * spec.n;
  const double s = 2.0 * y_norm_sq;
  const double lp = log_noncentral_chi2_pdf(k, 2.0 * spec.n * spec.snr, s);
  if (variant == AwgnQVariant::unit_noise)
    return lp - log_noncentral_chi2_pdf(k, 0.0, s);
  const double c = 1.0 + spec.snr;
  return lp - (log_noncentral_chi2_pdf(k, 0.0, s / c) - std::log(c));
}

BetaEstimate awgn_output_beta_exact(const AwgnSpec& spec, double alpha,
                                    AwgnQVariant variant) {
  spec.validate();
  if (!(alpha > 0 && alpha < 1))
    throw std::domain_error("awgn_output_beta_exact: alpha outside (0,1)");
  const double k = 2.0 * spec.n;
  const double lam = 2.0 * spec.n * spec.snr;

  if (variant == AwgnQVariant::unit_noise) {
    // LLR strictly increasing in T = 2||y||^2; NP region {T >= gamma}.
    const double gamma = noncentral_chi2_quantile(k, lam, 1.0 - alpha);
    return BetaEstimate::exact(log_gamma_q(spec.n, 0.5 * gamma));
  }

  // Against CN(0,(1+P)I) the LLR in T is unimodal, not monotone: the wider
  // central law eventually outweighs the noncentral one, so the NP region is
  // an interval [t1, t2] (t2 may be effectively infinite).
  const double s = 1.0 + spec.snr;
  auto llr = [&](double t) { return awgn_output_llr(spec, 0.5 * t, variant); };

  // Locate the mode of the LLR by golden section on an expanding bracket.
  double lo = 1e-8, hi = k + lam + 8.0 * std::sqrt(2.0 * (k + 2.0 * lam));
  while (llr(2.0 * hi) > llr(hi) && hi < 1e300) hi *= 2.0;
  hi *= 2.0;
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = llr(x1), f2 = llr(x2);
  for (int i = 0; i < 200 && (b - a) > 1e-10 * b; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = llr(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = llr(x2);
    }
  }
  const double t_star = 0.5 * (a + b);
  const double l_star = llr(t_star);
  const double l_zero = llr(std::max(1e-9, 1e-12 * t_star));

  // Upper crossing of level g beyond the mode; +inf when the level is never
  // re-crossed before the noncentral mass is exhausted.
  auto upper_cross = [&](double g) {
    double chi = 2.0 * t_star;
    int i = 0;
    for (; i < 1200 && llr(chi) > g; ++i) chi *= 1.5;
    if (i >= 1200) return std::numeric_limits<double>::infinity();
    double clo = t_star, cchi = chi;
    for (int j = 0; j < 200; ++j) {
      const double mid = 0.5 * (clo + cchi);
      (llr(mid) > g ? clo : cchi) = mid;
      if (cchi - clo < 1e-11 * cchi) break;
    }
    return 0.5 * (clo + cchi);
  };
  auto lower_cross = [&](double g) {
    if (g <= l_zero) return 0.0;
    double clo = std::max(1e-9, 1e-12 * t_star), chi = t_star;
    for (int j = 0; j < 200; ++j) {
      const double mid = 0.5 * (clo + chi);
      (llr(mid) >= g ? chi : clo) = mid;
      if (chi - clo < 1e-11 * chi) break;
    }
    return 0.5 * (clo + chi);
  };
  auto level_mass = [&](double g, double& t1, double& t2) {
    t1 = lower_cross(g);
    t2 = upper_cross(g);
    const double f_hi = std::isfinite(t2) ? noncentral_chi2_cdf(k, lam, t2) : 1.0;
    const double f_lo = t1 > 0 ? noncentral_chi2_cdf(k, lam, t1) : 0.0;
    return f_hi - f_lo;
  };

  // Bisect the level g so that the P-mass of the interval equals alpha.
  double g_hi = l_star, g_lo = l_star - 4.0;
  double t1 = 0, t2 = 0;
  while (level_mass(g_lo, t1, t2) < alpha && g_hi - g_lo < 1e7) g_lo = g_hi - 2.0 * (g_hi - g_lo);
  for (int j = 0; j < 200; ++j) {
    const double g = 0.5 * (g_lo + g_hi);
    (level_mass(g, t1, t2) >= alpha ? g_lo : g_hi) = g;
    if (g_hi - g_lo < 1e-12 * std::max(1.0, std::fabs(g_lo))) break;
  }
  level_mass(g_lo, t1, t2);

  const double lq1 = t1 > 0 ? log_gamma_q(spec.n, 0.5 * t1 / s) : 0.0;
  const double lq2 =
      std::isfinite(t2) ? log_gamma_q(spec.n, 0.5 * t2 / s)
                        : -std::numeric_limits<double>::infinity();
  return BetaEstimate::exact(lq1 + log1m_exp(lq2 - lq1));
}

namespace {

class AwgnOutputModel final : public LlrModel {
 public:
  AwgnOutputModel(const AwgnSpec& spec, AwgnQVariant variant)
      : spec_(spec), variant_(variant), shift_(std::sqrt(2.0 * spec.n * spec.snr)) {}

  double sample_llr(Rng& rng) const override {
    // 2||Y||^2 under P_Y: one shifted normal plus 2n-1 central ones.
    const double g0 = rng.normal() + shift_;
    double s = g0 * g0;
    for (int i = 1; i < 2 * spec_.n; ++i) {
      const double g = rng.normal();
      s += g * g;
    }
    return awgn_output_llr(spec_, 0.5 * s, variant_);
  }
  std::string name() const override { return "awgn_output"; }

 private:
  AwgnSpec spec_;
  AwgnQVariant variant_;
  double shift_;
};

class AwgnJointModel final : public LlrModel {
 public:
  AwgnJointModel(const AwgnSpec& spec, AwgnQVariant variant)
      : spec_(spec), variant_(variant) {}

  double sample_llr(Rng& rng) const override {
    const double nP = spec_.n * spec_.snr;
    if (variant_ == AwgnQVariant::unit_noise) {
      // L ~ N(nP, 2nP) in nats for every codeword on the sphere.
      return nP + std::sqrt(2.0 * nP) * rng.normal();
    }
    // L = n ln(1+P) - ||z||^2 + ||xbar + z||^2/(1+P), xbar = sqrt(nP) e1.
    const double P = spec_.snr;
    double znorm2 = 0.0;
    double re_z1 = 0.0;
    for (int i = 0; i < 2 * spec_.n; ++i) {
      const double g = rng.normal();
      if (i == 0) re_z1 = g * 0.70710678118654752440;
      znorm2 += 0.5 * g * g;
    }
    const double cross = 2.0 * std::sqrt(nP) * re_z1;
    return spec_.n * std::log1p(P) - znorm2 + (znorm2 + cross + nP) / (1.0 + P);
  }
  std::string name() const override { return "awgn_joint"; }

 private:
  AwgnSpec spec_;
  AwgnQVariant variant_;
};

}  // namespace

std::unique_ptr<LlrModel> awgn_output_llr_model(const AwgnSpec& spec,
                                                AwgnQVariant variant) {
  spec.validate();
  return std::make_unique<AwgnOutputModel>(spec, variant);
}

std::unique_ptr<LlrModel> awgn_joint_llr_model(const AwgnSpec& spec,
                                               AwgnQVariant variant) {
  spec.validate();
  return std::make_unique<AwgnJointModel>(spec, variant);
}

}  // namespace bbb
