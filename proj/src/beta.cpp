#include "bbb/beta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbb/special.hpp"

namespace bbb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error(std::string(who) + ": alpha outside (0,1)");
}

// Conditional type-I tail P[L >= gamma | m] for L ~ N(m, 2m), with the
// m == 0 point mass at L = 0.
double cond_alpha(double gamma, double m) {
  if (m <= 0.0) return gamma <= 0.0 ? 1.0 : 0.0;
  return q_func((gamma - m) / std::sqrt(2.0 * m));
}

// log of the conditional type-II tail Q[L >= gamma | m], L ~ N(-m, 2m).
double cond_log_beta(double gamma, double m) {
  if (m <= 0.0) return gamma <= 0.0 ? 0.0 : -kInf;
  return log_q((gamma + m) / std::sqrt(2.0 * m));
}

struct TailStats {
  double log_mean = -kInf;
  double se_log = 0.0;
  double ess = 0.0;
  std::uint64_t included = 0;
};

// Log-domain mean / standard error / effective sample size of the
// weighted-indicator terms (delta method for the SE of log beta-hat).
TailStats reduce_log_terms(const std::vector<double>& log_terms) {
  LogSumAccumulator s1, s2;
  TailStats st;
  for (double lw : log_terms) {
    if (std::isinf(lw) && lw < 0) continue;
    s1.add(lw);
    s2.add(2.0 * lw);
    ++st.included;
  }
  if (st.included == 0) return st;
  const double n = static_cast<double>(log_terms.size());
  const double m1 = s1.log_sum() - std::log(n);
  const double m2 = s2.log_sum() - std::log(n);
  st.log_mean = m1;
  st.ess = std::exp(2.0 * s1.log_sum() - s2.log_sum());
  const double gap = 2.0 * m1 - m2;  // <= 0 by Cauchy-Schwarz
  if (gap < -1e-14) {
    const double log_var = m2 + log1m_exp(gap);
    st.se_log = std::exp(0.5 * (log_var - std::log(n)) - m1);
  }
  return st;
}

}  // namespace

BetaEstimate beta_gaussian_shift(double d, double alpha) {
  if (!(d >= 0.0)) throw std::domain_error("beta_gaussian_shift: d < 0");
  check_alpha(alpha, "beta_gaussian_shift");
  return BetaEstimate::exact(log_q(d + q_inv(alpha)));
}

NpThreshold np_threshold(std::vector<double> v, double alpha) {
  check_alpha(alpha, "np_threshold");
  if (v.empty()) throw std::domain_error("np_threshold: no samples");
  std::sort(v.begin(), v.end(), std::greater<double>());
  const std::size_t n = v.size();
  const double an = alpha * static_cast<double>(n);
  std::size_t m = static_cast<std::size_t>(std::floor(an)) + 1;
  m = std::min(m, n);
  const double gamma = v[m - 1];

  auto lo = std::lower_bound(v.begin(), v.end(), gamma, std::greater<double>());
  auto hi = std::upper_bound(v.begin(), v.end(), gamma, std::greater<double>());
  const double n_gt = static_cast<double>(lo - v.begin());
  const double n_eq = static_cast<double>(hi - lo);

  NpThreshold t;
  t.gamma = gamma;
  t.randomization = n_eq > 0 ? std::clamp((an - n_gt) / n_eq, 0.0, 1.0) : 0.0;
  t.achieved_alpha = (n_gt + t.randomization * n_eq) / static_cast<double>(n);
  t.degenerate = n_eq == static_cast<double>(n);
  return t;
}

NpThreshold np_threshold(const LlrModel& model, double alpha,
                         std::uint64_t n_samples, const SeedSpec& seed) {
  return np_threshold(draw_llrs(model, n_samples, seed), alpha);
}

namespace {

// Threshold-location noise: sigma of the empirical alpha-quantile via the
// order-statistic spacing around it, mapped through d log(beta)/d gamma ~ 1
// (exact for the weighted-tail estimator up to the local density ratio,
// which the spacing estimate absorbs).
double quantile_se(const std::vector<double>& sorted_desc, double alpha) {
  const double n = static_cast<double>(sorted_desc.size());
  const double delta = 0.5 * std::min(alpha, 1.0 - alpha);
  if (delta <= 0) return 0.0;
  auto at = [&](double a) {
    const std::size_t idx = std::min<std::size_t>(
        sorted_desc.size() - 1, static_cast<std::size_t>(std::floor(a * n)));
    return sorted_desc[idx];
  };
  const double spread = std::fabs(at(alpha - delta) - at(alpha + delta));
  if (spread <= 0) return 0.0;  // tied samples: quantile is pinned
  const double density = 2.0 * delta / spread;
  return std::sqrt(alpha * (1.0 - alpha) / n) / density;
}

}  // namespace

BetaEstimate beta_mc(const LlrModel& model, double alpha,
                     std::uint64_t n_samples, const SeedSpec& seed) {
  check_alpha(alpha, "beta_mc");
  if (n_samples < 10000) throw std::domain_error("beta_mc: n_samples < 1e4");

  std::vector<double> thresh = draw_llrs(model, n_samples, seed.stream(0));
  const NpThreshold t = np_threshold(thresh, alpha);
  std::sort(thresh.begin(), thresh.end(), std::greater<double>());
  const double se_gamma = quantile_se(thresh, alpha);

  const std::vector<double> L = draw_llrs(model, n_samples, seed.stream(1));
  const double log_r =
      t.randomization > 0 ? std::log(t.randomization) : -kInf;
  std::vector<double> log_terms(L.size(), -kInf);
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (L[i] > t.gamma)
      log_terms[i] = -L[i];
    else if (L[i] == t.gamma)
      log_terms[i] = -L[i] + log_r;
  }
  const TailStats st = reduce_log_terms(log_terms);
  if (st.included == 0)
    throw CiTooWideError("beta_mc: no samples beyond threshold");
  if (st.ess < 100.0)
    throw CiTooWideError("beta_mc: effective sample size " +
                         std::to_string(st.ess) + " < 100");
  return BetaEstimate{LogProb::from_log(std::min(st.log_mean, 0.0)),
                      BetaKind::mc_estimate, std::hypot(st.se_log, se_gamma),
                      n_samples};
}

BetaEstimate beta_mc_conditional(const ConditionalGaussianLlr& model,
                                 double alpha, std::uint64_t n_samples,
                                 const SeedSpec& seed) {
  check_alpha(alpha, "beta_mc_conditional");
  if (n_samples < 10000)
    throw std::domain_error("beta_mc_conditional: n_samples < 1e4");

  const std::vector<double> mt = draw_means(model, n_samples, seed.stream(0));
  const std::vector<double> mi = draw_means(model, n_samples, seed.stream(1));
  const double n = static_cast<double>(n_samples);

  auto alpha_hat = [&](double g) {
    double s = 0;
    for (double m : mt) s += cond_alpha(g, m);
    return s / n;
  };
  // alpha_hat is nonincreasing in gamma; bisect.
  double lo = 0.0, hi = 1.0;
  for (double m : mt) {
    const double w = m > 0 ? 12.0 * std::sqrt(2.0 * m) : 1.0;
    lo = std::min(lo, m - w);
    hi = std::max(hi, m + w);
  }
  for (int i = 0; i < 200 && alpha_hat(lo) < alpha; ++i) lo -= std::max(1.0, 0.5 * std::fabs(lo));
  for (int i = 0; i < 200 && alpha_hat(hi) > alpha; ++i) hi += std::max(1.0, 0.5 * hi);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (alpha_hat(mid) >= alpha ? lo : hi) = mid;
    if (hi - lo < 1e-11 * std::max(1.0, std::fabs(lo))) break;
  }
  const double gamma = lo;

  std::vector<double> log_terms(mi.size());
  for (std::size_t j = 0; j < mi.size(); ++j)
    log_terms[j] = cond_log_beta(gamma, mi[j]);
  const TailStats st = reduce_log_terms(log_terms);
  if (st.included == 0)
    throw CiTooWideError("beta_mc_conditional: empty integral");

  // Threshold-location noise folded into the reported SE: sigma_gamma from
  // the empirical density of L at gamma, times d log(beta)/d gamma.
  double dens = 0;
  for (double m : mt)
    if (m > 0) {
      const double s = std::sqrt(2.0 * m);
      const double z = (gamma - m) / s;
      dens += std::exp(-0.5 * z * z - 0.9189385332046727) / s;
    }
  dens /= n;
  double se_gamma = 0.0;
  if (dens > 0) {
    LogSumAccumulator dacc;
    for (double m : mi)
      if (m > 0) {
        const double s = std::sqrt(2.0 * m);
        const double z = (gamma + m) / s;
        dacc.add(-0.5 * z * z - 0.9189385332046727 - std::log(s));
      }
    if (!dacc.empty()) {
      const double log_slope = dacc.log_sum() - std::log(n) - st.log_mean;
      se_gamma = std::exp(log_slope) *
                 std::sqrt(alpha * (1.0 - alpha) / n) / dens;
    }
  } else {
    throw CiTooWideError("beta_mc_conditional: no density at threshold");
  }

  BetaEstimate b;
  b.log_beta = LogProb::from_log(std::min(st.log_mean, 0.0));
  b.kind = BetaKind::mc_estimate;
  b.std_err_log = std::hypot(st.se_log, se_gamma);
  b.n_samples = n_samples;
  return b;
}

BetaEstimate beta_upper_from_threshold(double gamma) {
  return BetaEstimate::upper(-gamma);
}

BetaEstimate beta_lower_threshold_mc(const LlrModel& model, double alpha,
                                     std::uint64_t n_samples,
                                     const SeedSpec& seed) {
  check_alpha(alpha, "beta_lower_threshold_mc");
  if (n_samples < 10000)
    throw std::domain_error("beta_lower_threshold_mc: n_samples < 1e4");
  const double level = alpha / 2.0;
  if (n_samples * level < 25.0)
    throw CiTooWideError("beta_lower_threshold_mc: too few tail samples");

  std::vector<double> vt = draw_llrs(model, n_samples, seed.stream(0));
  const NpThreshold t = np_threshold(std::move(vt), level);
  const double g = t.gamma;

  // Independent estimate of P[L >= g] and of the density near g, for the
  // quantile-noise part of the SE.
  const std::vector<double> vi = draw_llrs(model, n_samples, seed.stream(1));
  std::uint64_t n_ge = 0;
  for (double L : vi) n_ge += L >= g;
  const double n = static_cast<double>(n_samples);
  const double p_hat = static_cast<double>(n_ge) / n;
  const double excess = alpha - p_hat;
  if (excess <= 0)
    throw CiTooWideError("beta_lower_threshold_mc: tail estimate exceeds alpha");

  const double se_p = std::sqrt(p_hat * (1.0 - p_hat) / n);
  // d(log value)/dg = -1 - (dP/dg)/(alpha - p); the second part is O(density)
  // and small against 1, so sigma_g enters with slope ~1.
  double half_width = 0.0;
  {
    std::vector<double> sorted(vi);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t lo_idx =
        sorted.size() - std::min<std::size_t>(
                            sorted.size(),
                            static_cast<std::size_t>(std::ceil(0.25 * level * n)) + 1);
    const std::size_t hi_idx =
        sorted.size() - std::min<std::size_t>(
                            sorted.size(),
                            static_cast<std::size_t>(std::ceil(1.75 * level * n)) + 1);
    half_width = 0.5 * std::fabs(sorted[lo_idx] - sorted[hi_idx]);
  }
  const double dens = half_width > 0 ? 0.75 * level / half_width : 0.0;
  if (dens <= 0)
    throw CiTooWideError("beta_lower_threshold_mc: no density at threshold");
  const double se_g = std::sqrt(level * (1.0 - level) / n) / dens;
  const double se = std::hypot(se_g, se_p / excess);

  BetaEstimate b;
  b.log_beta = LogProb::from_log(std::min(-g + std::log(excess), 0.0));
  b.kind = BetaKind::mc_estimate;
  b.std_err_log = se;
  b.n_samples = n_samples;
  return b;
}

BetaEstimate beta_lower_mean_var(double n, double mu, double v, double alpha) {
  check_alpha(alpha, "beta_lower_mean_var");
  return beta_lower_mean_var(n, mu, v, alpha, std::log(alpha / 2.0));
}

BetaEstimate beta_lower_mean_var(double n, double mu, double v, double alpha,
                                 double log_const) {
  check_alpha(alpha, "beta_lower_mean_var");
  if (!(n >= 0) || !(v >= 0) || !std::isfinite(mu))
    throw std::domain_error("beta_lower_mean_var: bad moments");
  const double val = -n * mu - std::sqrt(2.0 * n * v / alpha) + log_const;
  return BetaEstimate::lower(std::min(val, 0.0));
}

BetaEstimate beta_lower_haroutunian(double d_kl, double alpha) {
  check_alpha(alpha, "beta_lower_haroutunian");
  if (!(d_kl >= 0)) throw std::domain_error("beta_lower_haroutunian: D < 0");
  return BetaEstimate::lower(-(d_kl + binary_entropy(alpha)) / alpha);
}

BetaEstimate beta_variational_lower(
    const BetaEstimate& beta_PR,
    const std::function<BetaEstimate(double alpha)>& beta_RQ_at) {
  const double a = std::exp(beta_PR.log());
  if (!(a > 0.0 && a < 1.0))
    throw std::domain_error("beta_variational_lower: beta_PR outside (0,1)");
  BetaEstimate inner = beta_RQ_at(a);
  inner.kind = BetaKind::lower_bound;
  return inner;
}

ExponentialFamilyPath geodesic_gaussian(double d, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("geodesic_gaussian: lambda outside [0,1]");
  ExponentialFamilyPath p;
  p.lambda = lambda;
  p.shift = (1.0 - lambda) * d;
  p.log_renyi = 0.5 * lambda * (1.0 - lambda) * d * d;
  return p;
}

MixtureBound beta_mixture_upper(const BetaEstimate& beta1,
                                const BetaEstimate& beta2, double lambda,
                                double delta1, double delta2) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("beta_mixture_upper: lambda outside [0,1]");
  check_alpha(delta1, "beta_mixture_upper(delta1)");
  check_alpha(delta2, "beta_mixture_upper(delta2)");
  MixtureBound out;
  out.alpha_eff = 1.0 - lambda * delta1 - (1.0 - lambda) * delta2;
  out.beta = BetaEstimate::upper(log_add_exp(beta1.log(), beta2.log()));
  return out;
}

BetaEstimate beta_lower_sup_ratio(double tau, double log_sup_ratio) {
  check_alpha(tau, "beta_lower_sup_ratio");
  if (!(log_sup_ratio >= 0.0))
    throw std::domain_error("beta_lower_sup_ratio: log sup ratio < 0");
  return BetaEstimate::lower(std::log(tau) - log_sup_ratio);
}

}  // namespace bbb
