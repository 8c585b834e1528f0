#include "bbb/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace bbb {

namespace {
constexpr std::uint64_t kChunk = 8192;

std::size_t worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}
}  // namespace

void run_sampler(std::uint64_t n_samples, const SeedSpec& seed,
                 const std::function<void(std::uint64_t, Rng&, std::size_t)>& fn,
                 std::size_t /*n_partials*/) {
  const std::uint64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  const std::size_t workers = std::min<std::size_t>(worker_count(), n_chunks);
  std::atomic<std::uint64_t> next_chunk{0};
  auto work = [&]() {
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      const std::uint64_t lo = c * kChunk;
      const std::uint64_t hi = std::min(lo + kChunk, n_samples);
      for (std::uint64_t i = lo; i < hi; ++i) {
        Rng rng(seed, i);
        fn(i, rng, static_cast<std::size_t>(c));
      }
    }
  };
  if (workers <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

std::vector<double> draw_llrs(const LlrModel& model, std::uint64_t n_samples,
                              const SeedSpec& seed) {
  std::vector<double> out(n_samples);
  run_sampler(
      n_samples, seed,
      [&](std::uint64_t i, Rng& rng, std::size_t) { out[i] = model.sample_llr(rng); },
      0);
  return out;
}

std::vector<double> draw_means(const ConditionalGaussianLlr& model,
                               std::uint64_t n_samples, const SeedSpec& seed) {
  std::vector<double> out(n_samples);
  run_sampler(
      n_samples, seed,
      [&](std::uint64_t i, Rng& rng, std::size_t) {
        out[i] = model.sample_conditional_mean(rng);
      },
      0);
  return out;
}

MeanVar mc_mean(const std::function<double(Rng&)>& fn, std::uint64_t n_samples,
                const SeedSpec& seed) {
  std::vector<double> vals(n_samples);
  run_sampler(
      n_samples, seed,
      [&](std::uint64_t i, Rng& rng, std::size_t) { vals[i] = fn(rng); }, 0);
  double s = 0, s2 = 0;
  for (double v : vals) {
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(n_samples);
  MeanVar mv;
  mv.mean = s / n;
  mv.std_err = std::sqrt(std::max(0.0, s2 / n - mv.mean * mv.mean) / n);
  mv.n = n_samples;
  return mv;
}

}  // namespace bbb
