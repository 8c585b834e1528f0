#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bbb/log_domain.hpp"
#include "bbb/rng.hpp"

namespace bbb {

/// A channel-specific log-likelihood-ratio law. sample_llr draws one value of
/// L = ln(dP/dQ) under P; the change-of-measure weight e^{-L} is exact by
/// construction, which is what makes E_Q[f] = E_P[f e^{-L}] usable for
/// beta values far below the reach of direct sampling under Q.
class LlrModel {
 public:
  virtual ~LlrModel() = default;
  virtual double sample_llr(Rng& rng) const = 0;
  virtual std::string name() const { return "llr_model"; }
};

/// A pair (P,Q) whose LLR given some latent draw is exactly N(m, 2m) in nats
/// under P and N(-m, 2m) under Q (equal-covariance Gaussian families).
/// sample_conditional_mean draws m; the two tail integrals are then analytic,
/// which removes the Gaussian sampling noise entirely.
class ConditionalGaussianLlr {
 public:
  virtual ~ConditionalGaussianLlr() = default;
  virtual double sample_conditional_mean(Rng& rng) const = 0;
  virtual std::string name() const { return "cond_gauss_llr"; }
};

/// Runs fn(sample_index, rng) for indices [0, n); chunked across a thread
/// pool. Per-chunk partials are merged in chunk order, so the result is
/// identical for every worker count.
void run_sampler(std::uint64_t n_samples, const SeedSpec& seed,
                 const std::function<void(std::uint64_t, Rng&, std::size_t)>& fn,
                 std::size_t n_partials);

/// Draws n_samples values from the model into a vector (parallel, ordered).
std::vector<double> draw_llrs(const LlrModel& model, std::uint64_t n_samples,
                              const SeedSpec& seed);
std::vector<double> draw_means(const ConditionalGaussianLlr& model,
                               std::uint64_t n_samples, const SeedSpec& seed);

struct MeanVar {
  double mean = 0;
  double std_err = 0;
  std::uint64_t n = 0;
};

/// Plain Monte Carlo mean of fn(sample) with standard error.
MeanVar mc_mean(const std::function<double(Rng&)>& fn, std::uint64_t n_samples,
                const SeedSpec& seed);

}  // namespace bbb
