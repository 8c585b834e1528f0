#include "bbb/channels/mimo.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "bbb/special.hpp"

namespace bbb {

namespace {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

constexpr double kInvSqrt2 = 0.70710678118654752440;

void fill_cn01(Mat& m, Rng& rng) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      m(r, c) = Cx(rng.normal() * kInvSqrt2, rng.normal() * kInvSqrt2);
}

// Output-law factor for one fading realization: Sigma = I + (P/mt) H^H H,
// its Cholesky, and log det.
struct OutputLaw {
  Eigen::LLT<Mat> llt;
  double log_det = 0;

  void set(const Mat& h, double coef, int mr) {
    Mat sigma = Mat::Identity(mr, mr);
    sigma.noalias() += coef * h.adjoint() * h;
    llt.compute(sigma);
    log_det = 0;
    for (int i = 0; i < mr; ++i) log_det += 2.0 * std::log(std::real(llt.matrixL()(i, i)));
  }

  // sum over rows y of Y of y Sigma^{-1} y^H.
  double quad(const Mat& y) const {
    const Mat s = llt.solve(y.adjoint());
    return (y * s).real().trace();
  }
};

// Per-block information density against the capacity-achieving output law:
// i = nc*logdet(Sigma) + sum_rows y Sigma^{-1} y^H - ||Y - X H||_F^2, nats.
class MimoJointModel final : public LlrModel {
 public:
  explicit MimoJointModel(const MimoSpec& spec) : spec_(spec) {}

  double sample_llr(Rng& rng) const override {
    const int l = spec_.ell, nc = spec_.nc, mt = spec_.mt, mr = spec_.mr;
    const double coef = spec_.snr / mt;
    std::vector<Mat> xt(l), h(l);
    double xnorm2 = 0;
    for (int k = 0; k < l; ++k) {
      xt[k].resize(nc, mt);
      fill_cn01(xt[k], rng);
      xt[k] *= std::sqrt(coef);
      xnorm2 += xt[k].squaredNorm();
      h[k].resize(mt, mr);
      fill_cn01(h[k], rng);
    }
    const double s = std::sqrt(spec_.n() * spec_.snr / xnorm2);
    double llr = 0;
    OutputLaw law;
    Mat z(nc, mr), y(nc, mr);
    for (int k = 0; k < l; ++k) {
      fill_cn01(z, rng);
      y.noalias() = s * xt[k] * h[k];
      y += z;
      law.set(h[k], coef, mr);
      llr += nc * law.log_det + law.quad(y) - z.squaredNorm();
    }
    return llr;
  }
  std::string name() const override { return "mimo_joint"; }

 private:
  MimoSpec spec_;
};

class MimoScaledPair final : public ConditionalGaussianLlr {
 public:
  explicit MimoScaledPair(const MimoSpec& spec) : spec_(spec) {}

  double sample_conditional_mean(Rng& rng) const override {
    const int l = spec_.ell, nc = spec_.nc, mt = spec_.mt, mr = spec_.mr;
    const double coef = spec_.snr / mt;
    double xnorm2 = 0, xh_norm2 = 0;
    Mat xt(nc, mt), h(mt, mr);
    for (int k = 0; k < l; ++k) {
      fill_cn01(xt, rng);
      xt *= std::sqrt(coef);
      fill_cn01(h, rng);
      xnorm2 += xt.squaredNorm();
      xh_norm2 += (xt * h).squaredNorm();
    }
    const double s = std::sqrt(spec_.n() * spec_.snr / xnorm2);
    return (s - 1.0) * (s - 1.0) * xh_norm2;
  }
  std::string name() const override { return "mimo_scaled_pair"; }

 private:
  MimoSpec spec_;
};

class MimoPeakyModel final : public LlrModel {
 public:
  explicit MimoPeakyModel(const MimoSpec& spec) : spec_(spec) {}

  double sample_llr(Rng& rng) const override {
    const int l = spec_.ell, nc = spec_.nc, mr = spec_.mr;
    const double coef = spec_.snr / spec_.mt;
    const double amp = std::sqrt(static_cast<double>(spec_.n()) * spec_.snr);
    double llr = 0;
    OutputLaw law;
    Mat h(spec_.mt, mr), z(nc, mr), y(nc, mr);
    for (int k = 0; k < l; ++k) {
      fill_cn01(h, rng);
      fill_cn01(z, rng);
      y = z;
      if (k == 0) y.row(0) += amp * h.row(0);
      law.set(h, coef, mr);
      llr += nc * law.log_det + law.quad(y) - z.squaredNorm();
    }
    return llr;
  }
  std::string name() const override { return "mimo_peaky"; }

 private:
  MimoSpec spec_;
};

class MimoCostDtSamplerImpl final : public MimoCostDtSampler {
 public:
  MimoCostDtSamplerImpl(const MimoSpec& spec, double p_alt)
      : spec_(spec), p_alt_(p_alt) {}

  Sample sample(Rng& rng) const override {
    const int l = spec_.ell, nc = spec_.nc, mt = spec_.mt, mr = spec_.mr;
    const double coef = p_alt_ / mt;
    double llr = 0, xnorm2 = 0;
    OutputLaw law;
    Mat x(nc, mt), h(mt, mr), z(nc, mr), y(nc, mr);
    for (int k = 0; k < l; ++k) {
      fill_cn01(x, rng);
      x *= std::sqrt(coef);
      xnorm2 += x.squaredNorm();
      fill_cn01(h, rng);
      fill_cn01(z, rng);
      y.noalias() = x * h;
      y += z;
      law.set(h, coef, mr);
      llr += nc * law.log_det + law.quad(y) - z.squaredNorm();
    }
    Sample s;
    s.llr = llr;
    s.in_ball = xnorm2 <= spec_.n() * spec_.snr;
    return s;
  }

 private:
  MimoSpec spec_;
  double p_alt_;
};

}  // namespace

void MimoSpec::validate() const {
  if (mt < 1 || mr < 1 || nc < 1 || ell < 1)
    throw std::domain_error("MimoSpec: antenna/coherence geometry must be >= 1");
  if (!(snr > 0) || !std::isfinite(snr))
    throw std::domain_error("MimoSpec: snr must be positive");
}

void MimoSpec::require_unique_caod() const {
  if (!(mr >= 2 || (mt == 1 && mr == 1)))
    throw std::domain_error(
        "MimoSpec: capacity-achieving input is not unique for mt>1, mr=1");
}

std::unique_ptr<LlrModel> mimo_joint_llr_model(const MimoSpec& spec) {
  spec.validate();
  spec.require_unique_caod();
  return std::make_unique<MimoJointModel>(spec);
}

std::unique_ptr<ConditionalGaussianLlr> mimo_scaled_pair_model(
    const MimoSpec& spec) {
  spec.validate();
  spec.require_unique_caod();
  return std::make_unique<MimoScaledPair>(spec);
}

std::unique_ptr<LlrModel> mimo_peaky_llr_model(const MimoSpec& spec) {
  spec.validate();
  spec.require_unique_caod();
  return std::make_unique<MimoPeakyModel>(spec);
}

BetaEstimate mimo_output_beta_lower(const MimoSpec& spec, double tau,
                                    std::uint64_t n_samples,
                                    const SeedSpec& seed) {
  const auto pair = mimo_scaled_pair_model(spec);
  BetaEstimate b = beta_mc_conditional(*pair, tau, n_samples, seed);
  b.kind = BetaKind::mc_estimate;
  return b;
}

BetaEstimate mimo_peaky_codeword_beta(const MimoSpec& spec, double alpha,
                                      std::uint64_t n_samples,
                                      const SeedSpec& seed) {
  const auto model = mimo_peaky_llr_model(spec);
  return beta_mc(*model, alpha, n_samples, seed);
}

MeanVar mimo_capacity_mc(const MimoSpec& spec, std::uint64_t n_samples,
                         const SeedSpec& seed) {
  spec.validate();
  const double coef = spec.snr / spec.mt;
  return mc_mean(
      [&, coef](Rng& rng) {
        Mat h(spec.mt, spec.mr);
        fill_cn01(h, rng);
        Mat sigma = Mat::Identity(spec.mt, spec.mt);
        sigma.noalias() += coef * h * h.adjoint();
        const Eigen::LLT<Mat> llt(sigma);
        double ld = 0;
        for (int i = 0; i < spec.mt; ++i)
          ld += 2.0 * std::log(std::real(llt.matrixL()(i, i)));
        return ld * kLog2e;
      },
      n_samples, seed);
}

MeanVar mimo_dispersion_mc(const MimoSpec& spec, std::uint64_t n_outer,
                           std::uint64_t n_inner, const SeedSpec& seed) {
  spec.validate();
  spec.require_unique_caod();
  const int nc = spec.nc, mt = spec.mt, mr = spec.mr;
  const double coef = spec.snr / mt;
  return mc_mean(
      [&, coef](Rng& rng) {
        Mat x(nc, mt), h(mt, mr), z(nc, mr), y(nc, mr);
        fill_cn01(x, rng);
        x *= std::sqrt(coef);
        double s1 = 0, s2 = 0;
        OutputLaw law;
        for (std::uint64_t j = 0; j < n_inner; ++j) {
          fill_cn01(h, rng);
          fill_cn01(z, rng);
          y.noalias() = x * h;
          y += z;
          law.set(h, coef, mr);
          const double i_blk = nc * law.log_det + law.quad(y) - z.squaredNorm();
          s1 += i_blk;
          s2 += i_blk * i_blk;
        }
        const double m = s1 / n_inner;
        const double var = (s2 - n_inner * m * m) / (n_inner - 1.0);
        return var / nc * kLog2e * kLog2e;
      },
      n_outer, seed);
}

std::unique_ptr<MimoCostDtSampler> mimo_cost_dt_sampler(const MimoSpec& spec,
                                                        double p_alt) {
  spec.validate();
  spec.require_unique_caod();
  if (!(p_alt > 0)) throw std::domain_error("mimo_cost_dt_sampler: p_alt <= 0");
  return std::make_unique<MimoCostDtSamplerImpl>(spec, p_alt);
}

double mimo_cost_dt_overflow(const MimoSpec& spec, double p_alt) {
  spec.validate();
  // ||X||_F^2 ~ (P'/mt) Gamma(n mt, 1), so the overflow mass is
  // Q(n mt, n mt P / P').
  const double a = static_cast<double>(spec.n()) * spec.mt;
  return regularized_gamma_ccdf(a, a * spec.snr / p_alt);
}

double mimo_cost_dt_power(const MimoSpec& spec, double target) {
  spec.validate();
  if (!(target > 0 && target < 1))
    throw std::domain_error("mimo_cost_dt_power: target outside (0,1)");
  const double a = static_cast<double>(spec.n()) * spec.mt;
  return a * spec.snr / regularized_gamma_quantile(a, 1.0 - target);
}

}  // namespace bbb
