#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "bbb/beta.hpp"
#include "bbb/special.hpp"

using namespace bbb;

namespace {

class ConstantModel final : public LlrModel {
 public:
  explicit ConstantModel(double c) : c_(c) {}
  double sample_llr(Rng&) const override { return c_; }

 private:
  double c_;
};

// LLR of N(d,1) vs N(0,1) sampled under the first: N(d^2/2, d^2).
class GaussShiftModel final : public LlrModel {
 public:
  explicit GaussShiftModel(double d) : d_(d) {}
  double sample_llr(Rng& rng) const override {
    return 0.5 * d_ * d_ + d_ * rng.normal();
  }

 private:
  double d_;
};

// Product of n iid letters B = P*E - ln(1+P), E ~ Exp(1): the per-letter
// ratio of CN(0,1+P) to CN(0,1) outputs.
class AwgnOutputProductModel final : public LlrModel {
 public:
  AwgnOutputProductModel(int n, double p) : n_(n), p_(p) {}
  double sample_llr(Rng& rng) const override {
    double L = 0;
    for (int i = 0; i < n_; ++i) L += p_ * rng.exponential() - std::log1p(p_);
    return L;
  }

 private:
  int n_;
  double p_;
};

double erfc_q(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

// Exact NP beta for the 1-D Gaussian mixture P = l N(d1,1) + (1-l) N(d2,1)
// against N(0,1), via the monotone likelihood ratio in x (d1, d2 > 0).
// Built on std::erfc only.
double mixture_beta_oracle(double l, double d1, double d2, double alpha) {
  auto type1 = [&](double x0) {
    return l * erfc_q(x0 - d1) + (1.0 - l) * erfc_q(x0 - d2);
  };
  double lo = -40, hi = 60;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (type1(mid) >= alpha ? lo : hi) = mid;
  }
  return erfc_q(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("beta_gaussian_shift closed form") {
  CHECK(std::exp(beta_gaussian_shift(0.0, 0.3).log()) ==
        doctest::Approx(0.3).epsilon(1e-12));
  const double b = std::exp(beta_gaussian_shift(std::sqrt(2.0), 0.9).log());
  CHECK(b == doctest::Approx(erfc_q(std::sqrt(2.0) + q_inv(0.9))).epsilon(1e-12));
  CHECK(b == doctest::Approx(0.44724).epsilon(1e-4));
  // Deep log-domain path.
  CHECK(beta_gaussian_shift(10.0, 0.999).log() ==
        doctest::Approx(log_q(10.0 + q_inv(0.999))).epsilon(1e-12));
  // Monotone in alpha, antitone in d.
  double prev = -1e300;
  for (double a : {0.01, 0.1, 0.4, 0.8, 0.99}) {
    const double v = beta_gaussian_shift(1.3, a).log();
    CHECK(v >= prev);
    prev = v;
  }
  prev = 1.0;
  for (double d : {0.0, 0.5, 2.0, 6.0, 20.0}) {
    const double v = beta_gaussian_shift(d, 0.3).log();
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(beta_gaussian_shift(1.0, 0.0), std::domain_error);
}

TEST_CASE("np_threshold: ties, extremes, gaussian quantile") {
  // All samples equal: randomization-only threshold.
  const NpThreshold t0 = np_threshold(std::vector<double>(500, 2.5), 0.37);
  CHECK(t0.gamma == 2.5);
  CHECK(t0.randomization == doctest::Approx(0.37));
  CHECK(t0.degenerate);
  CHECK(t0.achieved_alpha == doctest::Approx(0.37));

  // alpha = 1 - 1/N puts the threshold at the minimum sample.
  const std::vector<double> v = {5, 4, 3, 2, 1};
  const NpThreshold t1 = np_threshold(v, 1.0 - 1.0 / 5);
  CHECK(t1.gamma == 1.0);
  CHECK(t1.achieved_alpha == doctest::Approx(0.8));

  // Empirical quantile of the Gaussian-shift model.
  const double d = 1.5, alpha = 0.3;
  GaussShiftModel m(d);
  const NpThreshold t2 = np_threshold(m, alpha, 200000, {77, 0});
  CHECK(t2.gamma ==
        doctest::Approx(0.5 * d * d + d * q_inv(alpha)).epsilon(0.02));
  CHECK(t2.achieved_alpha == doctest::Approx(alpha).epsilon(1e-9));
}

TEST_CASE("beta_mc: identical hypotheses give alpha exactly") {
  ConstantModel m(0.0);
  for (double a : {0.17, 0.5, 0.93}) {
    const BetaEstimate b = beta_mc(m, a, 20000, {5, 1});
    CHECK(std::exp(b.log()) == doctest::Approx(a).epsilon(1e-12));
    CHECK(b.kind == BetaKind::mc_estimate);
  }
}

TEST_CASE("beta_mc matches the Gaussian closed form") {
  struct Case {
    double d, alpha;
    std::uint64_t n;
  };
  for (const Case c : {Case{1.0, 0.5, 1000000}, Case{3.0, 0.99, 1000000}}) {
    GaussShiftModel m(c.d);
    const BetaEstimate est = beta_mc(m, c.alpha, c.n, {101, 3});
    const double exact = beta_gaussian_shift(c.d, c.alpha).log();
    CHECK(std::fabs(est.log() - exact) < 3.0 * std::max(est.std_err_log, 1e-4));
  }
  // Determinism: same seed, same estimate.
  GaussShiftModel m(1.7);
  CHECK(beta_mc(m, 0.4, 20000, {8, 2}).log() ==
        beta_mc(m, 0.4, 20000, {8, 2}).log());
}

TEST_CASE("change-of-measure weights integrate to one") {
  for (double d : {0.3, 1.0, 2.2}) {
    GaussShiftModel m(d);
    const auto L = draw_llrs(m, 1000000, {31, 4});
    double s = 0, s2 = 0;
    for (double l : L) {
      const double w = std::exp(-l);
      s += w;
      s2 += w * w;
    }
    const double n = static_cast<double>(L.size());
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::fabs(mean - 1.0) < 4.0 * se);
  }
}

TEST_CASE("beta_mc flags vanishing effective sample size") {
  // Heavy-tailed LLR: lognormal-type weights at a tiny quantile starve the
  // weighted tail.
  class HeavyModel final : public LlrModel {
   public:
    double sample_llr(Rng& rng) const override {
      const double g = rng.normal();
      return 40.0 * g * g * g;
    }
  };
  HeavyModel m;
  CHECK_THROWS_AS(beta_mc(m, 1e-4, 20000, {3, 3}), CiTooWideError);
}

TEST_CASE("beta_upper_from_threshold") {
  CHECK(beta_upper_from_threshold(0.0).log() == 0.0);
  CHECK(beta_upper_from_threshold(10.0).log() == doctest::Approx(-10.0));
  CHECK(beta_upper_from_threshold(10.0).kind == BetaKind::upper_bound);
}

TEST_CASE("beta_lower_mean_var formula and validity") {
  CHECK(beta_lower_mean_var(0, 0.7, 0.2, 0.3).log() ==
        doctest::Approx(std::log(0.15)).epsilon(1e-12));
  CHECK(beta_lower_mean_var(100, 0.02, 0.0, 0.3).log() ==
        doctest::Approx(-2.0 + std::log(0.15)).epsilon(1e-12));
  // Exposed constant variant.
  CHECK(beta_lower_mean_var(100, 0.02, 0.0, 0.3, 0.5 * std::log(0.15)).log() ==
        doctest::Approx(-2.0 + 0.5 * std::log(0.15)).epsilon(1e-12));

  // Lower-bounds the true beta of the AWGN output product pair.
  const int n = 10000;
  const double P = 0.1, alpha = 0.01;
  const double mu = P - std::log1p(P), v = P * P;
  const BetaEstimate lb = beta_lower_mean_var(n, mu, v, alpha);
  AwgnOutputProductModel model(n, P);
  const BetaEstimate mc = beta_mc(model, alpha, 30000, {55, 6});
  CHECK(lb.log() <= mc.log() + 4.0 * mc.std_err_log);
}

TEST_CASE("beta_lower_haroutunian") {
  CHECK(beta_lower_haroutunian(0.0, 0.5).log() ==
        doctest::Approx(-2.0 * kLn2).epsilon(1e-12));
  // alpha -> 1 recovers -D.
  CHECK(beta_lower_haroutunian(3.0, 1.0 - 1e-12).log() ==
        doctest::Approx(-3.0).epsilon(1e-9));
  // With D = P, alpha = tau >= P the bound is at least e^{-2} tau.
  const double P = 0.01, tau = 0.01;
  CHECK(beta_lower_haroutunian(P, tau).log() >= std::log(tau) - 2.0);
}

TEST_CASE("variational characterization on the Gaussian family") {
  // R = P and R = Q reduce to beta itself.
  const BetaEstimate direct = beta_gaussian_shift(1.0, 0.5);
  auto chain = [&](double r_shift) {
    const BetaEstimate pr = beta_gaussian_shift(std::fabs(1.0 - r_shift), 0.5);
    return beta_variational_lower(pr, [&](double a) {
      return beta_gaussian_shift(std::fabs(r_shift), a);
    });
  };
  CHECK(chain(0.0).log() == doctest::Approx(direct.log()).epsilon(1e-12));

  // Geodesic midpoint: equality, both sides equal Q(1) = 0.158655.
  const ExponentialFamilyPath mid = geodesic_gaussian(1.0, 0.5);
  CHECK(mid.shift == doctest::Approx(0.5));
  CHECK(mid.log_renyi == doctest::Approx(0.125).epsilon(1e-12));
  const BetaEstimate via_mid = chain(mid.shift);
  CHECK(std::exp(via_mid.log()) == doctest::Approx(0.15865525393).epsilon(1e-9));
  CHECK(std::fabs(via_mid.log() - direct.log()) < 1e-9);

  // Random mean-shifted triples: the chain never exceeds the direct value,
  // and is equal whenever R sits between P and Q.
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> shift(0.05, 4.0), au(0.05, 0.95);
  for (int i = 0; i < 1000; ++i) {
    const double dpq = shift(gen), alpha = au(gen);
    const double r = shift(gen);  // mean of R; P at dpq, Q at 0
    const BetaEstimate pr = beta_gaussian_shift(std::fabs(dpq - r), alpha);
    if (!(std::exp(pr.log()) > 0 && std::exp(pr.log()) < 1)) continue;
    const BetaEstimate chained = beta_variational_lower(
        pr, [&](double a) { return beta_gaussian_shift(r, a); });
    const double direct_log = beta_gaussian_shift(dpq, alpha).log();
    CHECK(chained.log() <= direct_log + 1e-10);
    if (r <= dpq) CHECK(chained.log() == doctest::Approx(direct_log).epsilon(1e-9));
  }
}

TEST_CASE("geodesic endpoints") {
  CHECK(geodesic_gaussian(2.0, 0.0).shift == doctest::Approx(2.0));
  CHECK(geodesic_gaussian(2.0, 1.0).shift == doctest::Approx(0.0));
  CHECK(geodesic_gaussian(2.0, 1.0).log_renyi == doctest::Approx(0.0));
}

TEST_CASE("mixture upper bound against the NP oracle") {
  // lambda = 1: alpha_eff = 1 - delta1, bound beta1 + beta2.
  const BetaEstimate b1 = BetaEstimate::exact(std::log(0.2));
  const BetaEstimate b2 = BetaEstimate::exact(std::log(0.05));
  const MixtureBound mb = beta_mixture_upper(b1, b2, 1.0, 0.1, 0.3);
  CHECK(mb.alpha_eff == doctest::Approx(0.9));
  CHECK(std::exp(mb.beta.log()) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(beta_mixture_upper(b1, b2, 0.5, 0.1, 0.1).alpha_eff == doctest::Approx(0.9));

  std::mt19937 gen(5);
  std::uniform_real_distribution<double> ud(0.2, 3.0), ul(0.05, 0.95),
      udel(0.02, 0.6);
  for (int i = 0; i < 60; ++i) {
    const double d1 = ud(gen), d2 = ud(gen), l = ul(gen);
    const double delta1 = udel(gen), delta2 = udel(gen);
    const BetaEstimate p1 = beta_gaussian_shift(d1, 1.0 - delta1);
    const BetaEstimate p2 = beta_gaussian_shift(d2, 1.0 - delta2);
    const MixtureBound bound = beta_mixture_upper(p1, p2, l, delta1, delta2);
    const double exact = mixture_beta_oracle(l, d1, d2, bound.alpha_eff);
    CHECK(std::exp(bound.beta.log()) >= exact - 1e-8);
  }
}

TEST_CASE("sup-ratio lower bound") {
  CHECK(beta_lower_sup_ratio(0.3, 0.0).log() == doctest::Approx(std::log(0.3)));
  CHECK(beta_lower_sup_ratio(0.01, 3.0).log() ==
        doctest::Approx(std::log(0.01) - 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(beta_lower_sup_ratio(0.3, -1.0), std::domain_error);
}

TEST_CASE("threshold-form MC lower bound is a lower bound and not vacuous") {
  const double d = 2.0, alpha = 0.01;
  GaussShiftModel m(d);
  const BetaEstimate lb = beta_lower_threshold_mc(m, alpha, 200000, {9, 7});
  const double exact = beta_gaussian_shift(d, alpha).log();
  CHECK(lb.log() - 3.0 * lb.std_err_log <= exact);
  CHECK(lb.log() >= exact - 3.0);  // within e^3 of exact for this easy case
}

TEST_CASE("bound ordering on one Gaussian instance") {
  const double d = 1.2, alpha = 0.2;
  const double exact = beta_gaussian_shift(d, alpha).log();
  const double mu = 0.5 * d * d, v = d * d;
  CHECK(beta_lower_mean_var(1, mu, v, alpha).log() <= exact);
  CHECK(beta_lower_haroutunian(mu, alpha).log() <= exact);
  // Threshold upper bound with gamma at the exact NP threshold.
  const double gamma = 0.5 * d * d + d * q_inv(alpha);
  CHECK(beta_upper_from_threshold(gamma).log() >= exact);
}
