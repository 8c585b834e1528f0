#include "bbb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bbb/special.hpp"

namespace bbb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_trace(const char* name, double value) {
  std::ostringstream os;
  os << name << "=" << value;
  return os.str();
}

void check_eps(double eps) {
  if (!(eps > 0 && eps < 1)) throw std::domain_error("eps outside (0,1)");
}

double default_tau(const FreeParams& p, double eps) {
  return p.tau > 0 ? p.tau : 0.5 * eps;
}

}  // namespace

double log2_ceil_pow2(double x) {
  if (x >= 52.0) return x;
  return std::log2(std::max(1.0, std::ceil(std::exp2(x))));
}

double log2_floor_pow2(double x) {
  if (x >= 52.0) return x;
  return std::log2(std::max(1.0, std::floor(std::exp2(x))));
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  int grid_points, int golden_probes) {
  if (!(hi > lo)) throw std::domain_error("golden_max: empty interval");
  double best_x = lo, best_f = -kInf;
  for (int i = 0; i < grid_points; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / grid_points;
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  }
  const double w = (hi - lo) / grid_points;
  double a = std::max(lo, best_x - w), b = std::min(hi, best_x + w);
  const double phi = 0.6180339887498949;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < golden_probes; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

namespace {

// Generic tau search for achievability: maximizes raw log2M(tau) over
// (0, eps) on a log-tau axis.
double search_tau(const FreeParams& p, double eps,
                  const std::function<double(double)>& raw_log2M) {
  if (p.search == SearchMode::fixed || p.tau > 0) {
    const double tau = default_tau(p, eps);
    if (!(tau > 0 && tau < eps))
      throw std::domain_error("achievability: tau outside (0,eps)");
    return tau;
  }
  const double llo = std::log(eps) - 14.0, lhi = std::log(eps) - 1e-4;
  if (p.search == SearchMode::grid) {
    double best_x = llo, best_f = -kInf;
    for (int i = 0; i < std::max(2, p.grid_points); ++i) {
      const double x = llo + (lhi - llo) * (i + 0.5) / std::max(2, p.grid_points);
      const double v = raw_log2M(std::exp(x));
      if (v > best_f) {
        best_f = v;
        best_x = x;
      }
    }
    return std::exp(best_x);
  }
  return std::exp(golden_max([&](double x) { return raw_log2M(std::exp(x)); },
                             llo, lhi, p.grid_points, p.golden_probes));
}

}  // namespace

CodePoint awgn_bb_achievability(const AwgnSpec& spec, double eps,
                                const FreeParams& params, AwgnQVariant variant) {
  spec.validate();
  check_eps(eps);
  auto raw = [&](double tau) {
    const double num = awgn_output_beta_exact(spec, tau, variant).log2();
    const double den = awgn_joint_beta(spec, 1.0 - eps + tau, variant).log2();
    return 1.0 + num - den;
  };
  const double tau = search_tau(params, eps, raw);
  CodePoint cp;
  cp.n = spec.n;
  cp.eps = eps;
  cp.log2M = log2_ceil_pow2(raw(tau));
  cp.rate = cp.log2M / spec.n;
  cp.param_trace = format_trace("tau", tau);
  return cp;
}

CodePoint awgn_bb_converse(const AwgnSpec& spec, double eps,
                           const FreeParams& params, AwgnQVariant variant) {
  spec.validate();
  check_eps(eps);
  auto raw = [&](double delta) {
    const double num =
        delta == 0.0 ? 0.0 : awgn_output_beta_exact(spec, 1.0 - delta, variant).log2();
    const double den = awgn_joint_beta(spec, 1.0 - eps - delta, variant).log2();
    return num - den;
  };
  double delta = 0.0;
  if (params.delta >= 0) {
    delta = params.delta;
    if (!(delta < 1.0 - eps))
      throw std::domain_error("bb_converse: delta outside [0,1-eps)");
  } else if (params.search != SearchMode::fixed) {
    // minimize over delta; log-axis plus the delta=0 endpoint
    const double llo = std::log(eps) - 10.0, lhi = std::log1p(-eps) - 1e-6;
    const double d_star = std::exp(
        golden_max([&](double x) { return -raw(std::exp(x)); }, llo,
                   std::min(lhi, std::log(0.5)), params.grid_points,
                   params.golden_probes));
    if (raw(d_star) < raw(0.0)) delta = d_star;
  }
  CodePoint cp;
  cp.n = spec.n;
  cp.eps = eps;
  cp.log2M = log2_floor_pow2(raw(delta));
  cp.rate = cp.log2M / spec.n;
  cp.param_trace = format_trace("delta", delta);
  return cp;
}

double awgn_kappa_beta_logM(const AwgnSpec& spec, double eps, double tau,
                            AwgnQVariant variant) {
  spec.validate();
  check_eps(eps);
  if (!(tau > 0 && tau < eps))
    throw std::domain_error("kappa_beta: tau outside (0,eps)");
  const double num = awgn_output_beta_exact(spec, tau, variant).log2();
  const double den = awgn_joint_beta(spec, 1.0 - eps + tau, variant).log2();
  return log2_floor_pow2(num - den);
}

CodePoint exp_bb_achievability(const ExpChannelSpec& spec, double eps,
                               const FreeParams& params) {
  spec.validate();
  check_eps(eps);
  const double window = std::log(static_cast<double>(spec.n));
  const double log_qxf = std::log(exp_input_window_prob(spec, window));
  auto raw = [&](double tau) {
    const double gamma = exp_ach_threshold(spec, eps, tau, window);
    return 1.0 + (std::log(tau) + log_qxf + gamma) * kLog2e;
  };
  const double tau = search_tau(params, eps, raw);
  CodePoint cp;
  cp.n = spec.n;
  cp.eps = eps;
  cp.log2M = log2_ceil_pow2(raw(tau));
  cp.rate = cp.log2M / spec.n;
  cp.param_trace = format_trace("tau", tau) + "," + format_trace("window", window);
  return cp;
}

CodePoint exp_bb_converse(const ExpChannelSpec& spec, double eps) {
  spec.validate();
  check_eps(eps);
  // delta = 0 minimax form with the simplex symmetry: M <= 1/beta_{1-eps}.
  CodePoint cp;
  cp.n = spec.n;
  cp.eps = eps;
  cp.log2M = log2_floor_pow2(-exp_converse_beta_exact(spec, eps).log2());
  cp.rate = cp.log2M / spec.n;
  cp.param_trace = "delta=0";
  return cp;
}

double exp_kappa_beta_logM(const ExpChannelSpec& spec, double eps, double tau) {
  spec.validate();
  check_eps(eps);
  if (!(tau > 0 && tau < eps))
    throw std::domain_error("kappa_beta: tau outside (0,eps)");
  const double window = std::log(static_cast<double>(spec.n));
  const double log_qxf = std::log(exp_input_window_prob(spec, window));
  const double gamma = exp_ach_threshold(spec, eps, tau, window);
  return log2_floor_pow2((std::log(tau) + log_qxf + gamma) * kLog2e);
}

CodePoint fading_bb_achievability(const RayleighSpec& spec, double eps,
                                  const FreeParams& params, const McParams& mc) {
  spec.validate();
  check_eps(eps);
  const double tau = default_tau(params, eps);
  if (!(tau > 0 && tau < eps))
    throw std::domain_error("fading_bb_achievability: tau outside (0,eps)");

  const RayleighOutputBound num = rayleigh_output_beta_lower_variational(
      spec, tau, mc.samples, mc.seed.stream(1), mc.z);
  const auto joint = rayleigh_joint_cond_model(spec);
  const BetaEstimate den = beta_mc_conditional(
      *joint, 1.0 - eps + tau, std::max<std::uint64_t>(mc.samples / 4, 10000),
      mc.seed.stream(2));

  const double log2_num = mc.conservative ? num.beta.log_lo(mc.z) * kLog2e
                                          : num.beta.log2();
  const double log2_den =
      mc.conservative ? den.log_hi(mc.z) * kLog2e : den.log2();
  CodePoint cp;
  cp.n = spec.n;
  cp.eps = eps;
  cp.log2M = log2_ceil_pow2(1.0 + log2_num - log2_den);
  cp.rate = cp.log2M / spec.n;
  cp.se_log2M = std::hypot(num.beta.std_err_log, den.std_err_log) * kLog2e;
  cp.param_trace =
      format_trace("tau", tau) + "," + format_trace("tau_hat", num.tau_hat);
  return cp;
}

CodePoint mimo_bb_achievability(const MimoSpec& spec, double eps,
                                const FreeParams& params, const McParams& mc) {
  spec.validate();
  check_eps(eps);
  const double tau = default_tau(params, eps);
  if (!(tau > 0 && tau < eps))
    throw std::domain_error("mimo_bb_achievability: tau outside (0,eps)");

  const BetaEstimate num =
      mimo_output_beta_lower(spec, tau, mc.samples, mc.seed.stream(1));
  const auto joint = mimo_joint_llr_model(spec);
  const BetaEstimate den =
      beta_mc(*joint, 1.0 - eps + tau, mc.samples, mc.seed.stream(2));

  const double log2_num =
      mc.conservative ? num.log_lo(mc.z) * kLog2e : num.log2();
  const double log2_den =
      mc.conservative ? den.log_hi(mc.z) * kLog2e : den.log2();
  CodePoint cp;
  cp.n = spec.n();
  cp.eps = eps;
  cp.log2M = log2_ceil_pow2(1.0 + log2_num - log2_den);
  cp.rate = cp.log2M / spec.n();
  cp.se_log2M = std::hypot(num.std_err_log, den.std_err_log) * kLog2e;
  cp.param_trace = format_trace("tau", tau);
  return cp;
}

EpsBound dt_eps(const LlrModel& model, double log2M, std::uint64_t n_samples,
                const SeedSpec& seed) {
  if (!(log2M >= 0)) throw std::domain_error("dt_eps: log2M < 0");
  const double t = (log2M - 1.0) * kLn2;  // ln(M/2)
  const std::vector<double> L = draw_llrs(model, n_samples, seed);
  double s = 0, s2 = 0;
  for (double l : L) {
    const double g = l < t ? 1.0 : std::exp(t - l);
    s += g;
    s2 += g * g;
  }
  const double n = static_cast<double>(n_samples);
  EpsBound out;
  out.eps = std::min(s / n, 1.0);
  out.std_err = std::sqrt(std::max(0.0, s2 / n - (s / n) * (s / n)) / n);
  return out;
}

double jazi_logM(const BetaEstimate& beta_denominator, double eps, double tau,
                 double log_sup_ratio) {
  check_eps(eps);
  if (!(tau > 0 && tau < eps)) throw std::domain_error("jazi_logM: bad tau");
  if (!(log_sup_ratio >= 0)) throw std::domain_error("jazi_logM: bad sup ratio");
  return log2_floor_pow2((std::log(tau) - log_sup_ratio) * kLog2e -
                         beta_denominator.log2());
}

namespace {

// Shared scaffolding for the two MIMO comparison bounds: sorted information
// densities plus suffix log-sum-exp of e^{-L}.
struct SortedLlrs {
  std::vector<double> v;        // ascending
  std::vector<double> suffix;   // suffix[i] = lse(-v[i..end))

  explicit SortedLlrs(std::vector<double> in) : v(std::move(in)) {
    std::sort(v.begin(), v.end());
    suffix.resize(v.size() + 1);
    suffix[v.size()] = -kInf;
    for (std::size_t i = v.size(); i-- > 0;)
      suffix[i] = log_add_exp(suffix[i + 1], -v[i]);
  }

  double frac_below(double t) const {
    const auto it = std::lower_bound(v.begin(), v.end(), t);
    return static_cast<double>(it - v.begin()) / v.size();
  }
  // log E[e^{-L} 1{L >= t}]
  double log_tail_weight(double t) const {
    const auto it = std::lower_bound(v.begin(), v.end(), t);
    return suffix[it - v.begin()] - std::log(static_cast<double>(v.size()));
  }
};

}  // namespace

CodePoint mimo_cost_dt_rate(const MimoSpec& spec, double eps, const McParams& mc) {
  spec.validate();
  check_eps(eps);
  const double p_alt = mimo_cost_dt_power(spec, 0.5 * eps);
  const auto sampler = mimo_cost_dt_sampler(spec, p_alt);
  std::vector<double> llrs(mc.samples);
  run_sampler(
      mc.samples, mc.seed.stream(3),
      [&](std::uint64_t i, Rng& rng, std::size_t) {
        llrs[i] = sampler->sample(rng).llr;
      },
      0);
  const SortedLlrs S(std::move(llrs));
  const double overflow = 0.5 * eps;  // exact by construction of p_alt

  auto eps_at = [&](double log2M) {
    const double t = (log2M - 1.0) * kLn2;
    return S.frac_below(t) + overflow + std::exp(t + S.log_tail_weight(t));
  };
  // eps_at is nondecreasing in log2M; find the largest feasible log2M.
  double lo = 0.0, hi = 4.0 * spec.n();
  if (eps_at(lo) > eps)
    throw NumericError("mimo_cost_dt_rate: infeasible even at M=1");
  for (int i = 0; i < 200 && eps_at(hi) <= eps; ++i) hi *= 2;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eps_at(mid) <= eps ? lo : hi) = mid;
  }

  CodePoint cp;
  cp.n = spec.n();
  cp.eps = eps;
  cp.log2M = log2_floor_pow2(lo);
  cp.rate = cp.log2M / spec.n();
  // SE of the eps estimate at the solution, pushed through the local slope.
  {
    const double t = (lo - 1.0) * kLn2;
    double s = 0, s2 = 0;
    for (double l : S.v) {
      const double g = l < t ? 1.0 : std::exp(t - l);
      s += g;
      s2 += g * g;
    }
    const double n = static_cast<double>(S.v.size());
    const double se_eps =
        std::sqrt(std::max(0.0, s2 / n - (s / n) * (s / n)) / n);
    const double d = 0.25;
    const double slope =
        std::max((eps_at(lo + d) - eps_at(lo - d)) / (2 * d), 1e-300);
    cp.se_log2M = se_eps / slope;
  }
  cp.param_trace = format_trace("p_alt", p_alt);
  return cp;
}

CodePoint mimo_feinstein_rate(const MimoSpec& spec, double eps,
                              const McParams& mc) {
  spec.validate();
  check_eps(eps);
  const auto joint = mimo_joint_llr_model(spec);
  const SortedLlrs S(draw_llrs(*joint, mc.samples, mc.seed.stream(4)));

  // Output-ratio tail P[L_out >= ln eta] on the data-processed pair,
  // conditionally Gaussian given the means.
  const auto pair = mimo_scaled_pair_model(spec);
  const std::vector<double> means =
      draw_means(*pair, mc.samples, mc.seed.stream(5));
  auto p_out = [&](double ln_eta) {
    double s = 0;
    for (double m : means)
      s += m > 0 ? q_func((ln_eta - m) / std::sqrt(2.0 * m)) : (ln_eta <= 0);
    return s / means.size();
  };
  // eta grid: quantile-ish ladder over the conditional means.
  std::vector<double> ln_etas;
  {
    std::vector<double> ms(means);
    std::sort(ms.begin(), ms.end());
    for (double q : {0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999})
      ln_etas.push_back(ms[static_cast<std::size_t>(q * (ms.size() - 1))] + 3.0);
    ln_etas.push_back(ms.back() + 12.0);
    ln_etas.push_back(ms.back() + 40.0);
  }
  std::vector<double> p_out_cache;
  p_out_cache.reserve(ln_etas.size());
  for (double le : ln_etas) p_out_cache.push_back(p_out(le));

  auto eps_at = [&](double log2M) {
    const double lnM = log2M * kLn2;
    double best = kInf;
    for (std::size_t j = 0; j < ln_etas.size(); ++j) {
      for (double a : {2.0, 4.0, 7.0, 10.0, 14.0, 20.0, 28.0}) {
        // gamma = M e^{a}: second term M/gamma = e^{-a}.
        const double term2 = std::exp(-a);
        const double t = lnM + a + ln_etas[j];
        best = std::min(best, S.frac_below(t) + term2 + p_out_cache[j]);
      }
    }
    return best;
  };
  double lo = 0.0, hi = 4.0 * spec.n();
  if (eps_at(lo) > eps)
    throw NumericError("mimo_feinstein_rate: infeasible even at M=1");
  for (int i = 0; i < 200 && eps_at(hi) <= eps; ++i) hi *= 2;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eps_at(mid) <= eps ? lo : hi) = mid;
  }
  CodePoint cp;
  cp.n = spec.n();
  cp.eps = eps;
  cp.log2M = log2_floor_pow2(lo);
  cp.rate = cp.log2M / spec.n();
  {
    const double se_eps =
        std::sqrt(eps * (1 - eps) / static_cast<double>(mc.samples));
    const double d = 0.25;
    const double slope =
        std::max((eps_at(lo + d) - eps_at(lo - d)) / (2 * d), 1e-300);
    cp.se_log2M = se_eps / slope;
  }
  cp.param_trace = "grid(gamma,eta)";
  return cp;
}

}  // namespace bbb
