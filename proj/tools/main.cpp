// Command-line front end: finite-blocklength beta-beta bound curves as CSV.

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "CLI11.hpp"
#include "bbb/approx.hpp"
#include "bbb/bounds.hpp"
#include "bbb/csv.hpp"
#include "bbb/special.hpp"

namespace {

using namespace bbb;

constexpr const char* kVersion = "betabounds 1.0.0";
constexpr const char* kConventionNote =
    "mimo scaling: input CN(0, P/mt), output rows CN(0, I + (P/mt) H^H H)";

struct CommonOpts {
  double k = 2000;
  double eps = 1e-3;
  double sigma = 1.0;
  double snr_db = 0.0;
  int mt = 4, mr = 4, nc = 4;
  std::string grid;
  std::uint64_t samples = 0;
  std::uint64_t seed = 20240901;
  std::string bounds;
  std::string out;
  bool conservative = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--k", o.k, "information bits");
  cmd->add_option("--eps", o.eps, "target error probability");
  cmd->add_option("--sigma", o.sigma, "exponential-noise input budget");
  cmd->add_option("--snr-db", o.snr_db, "SNR in dB");
  cmd->add_option("--mt", o.mt, "transmit antennas");
  cmd->add_option("--mr", o.mr, "receive antennas");
  cmd->add_option("--nc", o.nc, "coherence length");
  cmd->add_option("--grid", o.grid, "grid as min:max:steps");
  cmd->add_option("--samples", o.samples, "Monte Carlo samples per stream");
  cmd->add_option("--seed", o.seed, "root seed");
  cmd->add_option("--bounds", o.bounds, "comma-separated bound selection");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_flag("--conservative", o.conservative,
                "emit 3-sigma conservative CI edges for MC bounds");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

bool selected(const std::vector<std::string>& sel, const std::string& name) {
  if (sel.empty()) return true;
  for (const auto& s : sel)
    if (s == name) return true;
  return false;
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + o.out);
  f << text;
}

double fading_capacity_eb(double rate) {
  // Solve E[log2(1 + Eb R |H|^2)] = R for Eb, |H|^2 ~ Exp(1).
  boost::math::quadrature::exp_sinh<double> integ;
  auto se = [&](double eb) {
    return integ.integrate(
        [&](double u) { return std::log2(1.0 + eb * rate * u) * std::exp(-u); },
        1e-10);
  };
  double lo = kLn2 * 0.5, hi = 1e4;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (se(mid) >= rate ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- awgn-ebn0

int run_awgn_ebn0(const CommonOpts& o) {
  const GridSpec grid = GridSpec::parse(o.grid.empty() ? "0.02:0.4:20" : o.grid);
  const auto sel = split_csv(o.bounds);
  const auto rates = grid.values();

  FreeParams fp;
  fp.grid_points = 6;
  fp.golden_probes = 16;

  struct Row {
    double rate, db, se;
    std::string bound, trace;
  };
  std::vector<std::vector<Row>> per_point(rates.size());

  auto work = [&](std::size_t i) {
    const double R = rates[i];
    std::vector<Row>& rows = per_point[i];
    if (selected(sel, "ach")) {
      const EbN0Point p = ebn0_from_rate_bound(
          [&](int n, double P) {
            return awgn_bb_achievability({n, P}, o.eps, fp).rate;
          },
          o.k, o.eps, R);
      const CodePoint at = awgn_bb_achievability(
          {static_cast<int>(std::ceil(o.k / R)), p.ebn0_linear * R}, o.eps, fp);
      rows.push_back({R, p.ebn0_db, 0.0, "ach", at.param_trace});
    }
    if (selected(sel, "conv")) {
      const EbN0Point p = ebn0_from_rate_bound(
          [&](int n, double P) {
            return awgn_bb_converse({n, P}, o.eps, fp).rate;
          },
          o.k, o.eps, R);
      const CodePoint at = awgn_bb_converse(
          {static_cast<int>(std::ceil(o.k / R)), p.ebn0_linear * R}, o.eps, fp);
      rows.push_back({R, p.ebn0_db, 0.0, "conv", at.param_trace});
    }
    if (selected(sel, "approx"))
      rows.push_back(
          {R, awgn_ebn0_approx(o.k, o.eps, R).ebn0_db, 0.0, "approx", ""});
    if (selected(sel, "wideband"))
      rows.push_back({R, wideband_line_db(R, {}), 0.0, "wideband", ""});
    if (selected(sel, "capacity"))
      rows.push_back(
          {R, 10.0 * std::log10((std::exp2(R) - 1.0) / R), 0.0, "capacity", ""});
  };

  std::vector<std::future<void>> jobs;
  jobs.reserve(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i)
    jobs.push_back(std::async(std::launch::async, work, i));
  for (auto& j : jobs) j.get();

  std::ostringstream os;
  CsvWriter w(os);
  w.comment(kVersion);
  w.comment("command: awgn-ebn0");
  w.comment("k: " + format_g9(o.k) + "  eps: " + format_g9(o.eps));
  w.comment("q_variant: capacity output CN(0,(1+P)I)");
  w.comment("seed: " + std::to_string(o.seed) + "  samples: none (closed forms)");
  w.comment(kConventionNote);
  for (std::size_t i = 0; i < rates.size(); ++i)
    for (const auto& r : per_point[i])
      if (!r.trace.empty())
        w.comment("trace: R=" + format_g9(r.rate) + " " + r.bound + " " + r.trace);
  w.header({"rate", "ebn0_db", "bound", "std_err", "seed"});
  for (std::size_t i = 0; i < rates.size(); ++i)
    for (const auto& r : per_point[i])
      w.row({format_g9(r.rate), format_g9(r.db), r.bound, format_g9(r.se),
             std::to_string(o.seed)});
  emit(o, os.str());
  return 0;
}

// -------------------------------------------------------------- fading-ebn0

int run_fading_ebn0(const CommonOpts& o) {
  const GridSpec grid = GridSpec::parse(o.grid.empty() ? "0.1:0.4:7" : o.grid);
  const auto sel = split_csv(o.bounds);
  const std::uint64_t samples = o.samples ? o.samples : 60000;

  std::ostringstream os;
  CsvWriter w(os);
  w.comment(kVersion);
  w.comment("command: fading-ebn0");
  w.comment("k: " + format_g9(o.k) + "  eps: " + format_g9(o.eps));
  w.comment("seed: " + std::to_string(o.seed) +
            "  samples: " + std::to_string(samples));
  w.comment(std::string("mode: ") + (o.conservative ? "conservative" : "point"));
  w.comment("numerator: variational route, tau = eps/2");
  std::vector<std::string> traces;
  std::vector<std::vector<std::string>> body;

  const auto rates = grid.values();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double R = rates[i];
    const SeedSpec point_seed{o.seed, 1000 + i};
    if (selected(sel, "ach")) {
      McParams mc;
      mc.samples = samples;
      mc.seed = point_seed;
      mc.conservative = o.conservative;
      FreeParams fp;
      fp.search = SearchMode::fixed;
      const EbN0Point p = ebn0_from_rate_bound(
          [&](int n, double P) {
            return fading_bb_achievability({n, P}, o.eps, fp, mc).rate;
          },
          o.k, o.eps, R);
      const int n_at = static_cast<int>(std::ceil(o.k / R));
      const CodePoint at =
          fading_bb_achievability({n_at, p.ebn0_linear * R}, o.eps, fp, mc);
      body.push_back({format_g9(R), format_g9(p.ebn0_db), "ach",
                      format_g9(at.se_log2M / n_at), std::to_string(o.seed)});
      traces.push_back("trace: R=" + format_g9(R) + " ach " + at.param_trace);
    }
    if (selected(sel, "approx"))
      body.push_back({format_g9(R),
                      format_g9(fading_ebn0_approx(o.k, o.eps, R).ebn0_db),
                      "approx", "0", std::to_string(o.seed)});
    if (selected(sel, "wideband")) {
      WidebandParams wp;
      wp.s0 = 1.0;
      body.push_back({format_g9(R), format_g9(wideband_line_db(R, wp)),
                      "wideband", "0", std::to_string(o.seed)});
    }
    if (selected(sel, "capacity"))
      body.push_back({format_g9(R),
                      format_g9(10.0 * std::log10(fading_capacity_eb(R))),
                      "capacity", "0", std::to_string(o.seed)});
  }
  for (const auto& t : traces) w.comment(t);
  w.header({"rate", "ebn0_db", "bound", "std_err", "seed"});
  for (const auto& r : body) w.row(r);
  emit(o, os.str());
  return 0;
}

// -------------------------------------------------------------- exp-channel

int run_exp_channel(const CommonOpts& o) {
  const GridSpec grid = GridSpec::parse(o.grid.empty() ? "100:2000:20" : o.grid);
  std::ostringstream os;
  CsvWriter w(os);
  w.comment(kVersion);
  w.comment("command: exp-channel");
  w.comment("sigma: " + format_g9(o.sigma) + "  eps: " + format_g9(o.eps));
  w.comment("seed: " + std::to_string(o.seed) + "  samples: none (closed forms)");
  std::vector<std::vector<std::string>> body;
  std::vector<std::string> traces;
  FreeParams fp;
  for (double nd : grid.values()) {
    const int n = std::max(1, static_cast<int>(std::lround(nd)));
    const ExpChannelSpec spec{n, o.sigma};
    const CodePoint a = exp_bb_achievability(spec, o.eps, fp);
    const CodePoint c = exp_bb_converse(spec, o.eps);
    const double ap = exp_channel_normal_approx(n, o.eps, o.sigma);
    body.push_back(
        {std::to_string(n), format_g9(a.rate), format_g9(c.rate), format_g9(ap)});
    traces.push_back("trace: n=" + std::to_string(n) + " ach " + a.param_trace);
  }
  for (const auto& t : traces) w.comment(t);
  w.header({"n", "rate_ach", "rate_conv", "rate_approx"});
  for (const auto& r : body) w.row(r);
  emit(o, os.str());
  return 0;
}

// --------------------------------------------------------------------- mimo

int run_mimo(const CommonOpts& o) {
  const GridSpec grid = GridSpec::parse(o.grid.empty() ? "40:800:5" : o.grid);
  const auto sel = split_csv(o.bounds);
  const std::uint64_t samples = o.samples ? o.samples : 100000;
  const double snr = std::pow(10.0, o.snr_db / 10.0);

  std::ostringstream os;
  CsvWriter w(os);
  w.comment(kVersion);
  w.comment("command: mimo");
  w.comment("mt: " + std::to_string(o.mt) + "  mr: " + std::to_string(o.mr) +
            "  nc: " + std::to_string(o.nc) + "  snr_db: " + format_g9(o.snr_db) +
            "  eps: " + format_g9(o.eps));
  w.comment("seed: " + std::to_string(o.seed) +
            "  samples: " + std::to_string(samples));
  w.comment(std::string("mode: ") + (o.conservative ? "conservative" : "point"));
  w.comment(kConventionNote);
  w.comment("free parameter: tau = eps/2 (fixed)");

  const MimoSpec base{o.mt, o.mr, o.nc, 1, snr};
  MeanVar cap, disp;
  const bool need_na = selected(sel, "approx") || selected(sel, "capacity");
  if (need_na) {
    cap = mimo_capacity_mc(base, std::max<std::uint64_t>(samples, 200000),
                           SeedSpec{o.seed, 1});
    disp = mimo_dispersion_mc(base, std::max<std::uint64_t>(samples / 25, 2000),
                              400, SeedSpec{o.seed, 2});
    w.comment("capacity_bits: " + format_g9(cap.mean) + " +- " +
              format_g9(cap.std_err));
    w.comment("dispersion_bits2: " + format_g9(disp.mean) + " +- " +
              format_g9(disp.std_err));
  }

  std::vector<std::vector<std::string>> body;
  const auto ns = grid.values();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    int n = static_cast<int>(std::lround(ns[i] / o.nc)) * o.nc;
    n = std::max(n, o.nc);
    MimoSpec spec = base;
    spec.ell = n / o.nc;
    McParams mc;
    mc.samples = samples;
    mc.seed = SeedSpec{o.seed, 5000 + i};
    mc.conservative = o.conservative;
    FreeParams fp;
    fp.search = SearchMode::fixed;
    if (selected(sel, "bb")) {
      const CodePoint p = mimo_bb_achievability(spec, o.eps, fp, mc);
      body.push_back({std::to_string(n), format_g9(p.rate), "bb",
                      format_g9(p.se_log2M / n), std::to_string(o.seed)});
    }
    if (selected(sel, "feinstein")) {
      const CodePoint p = mimo_feinstein_rate(spec, o.eps, mc);
      body.push_back({std::to_string(n), format_g9(p.rate), "feinstein",
                      format_g9(p.se_log2M / n), std::to_string(o.seed)});
    }
    if (selected(sel, "cost_dt")) {
      const CodePoint p = mimo_cost_dt_rate(spec, o.eps, mc);
      body.push_back({std::to_string(n), format_g9(p.rate), "cost_dt",
                      format_g9(p.se_log2M / n), std::to_string(o.seed)});
    }
    if (selected(sel, "approx"))
      body.push_back({std::to_string(n),
                      format_g9(mimo_rate_normal(cap.mean, disp.mean, n, o.eps)),
                      "approx", format_g9(cap.std_err), std::to_string(o.seed)});
    if (selected(sel, "capacity"))
      body.push_back({std::to_string(n), format_g9(cap.mean), "capacity",
                      format_g9(cap.std_err), std::to_string(o.seed)});
  }
  w.header({"n", "rate", "bound", "std_err", "seed"});
  for (const auto& r : body) w.row(r);
  emit(o, os.str());
  return 0;
}

// ---------------------------------------------------------------- mimo-735

int run_mimo_735(const CommonOpts& o) {
  const GridSpec grid = GridSpec::parse(o.grid.empty() ? "400:400:1" : o.grid);
  const std::uint64_t samples = o.samples ? o.samples : 1000000;
  const double snr = std::pow(10.0, o.snr_db / 10.0);
  const double tau = 0.5 * o.eps;
  const double alpha = 1.0 - o.eps + tau;

  std::ostringstream os;
  os << "# " << kVersion << "\n";
  os << "# command: mimo-735\n";
  os << "# mt: " << o.mt << "  mr: " << o.mr << "  nc: " << o.nc
     << "  snr_db: " << format_g9(o.snr_db) << "\n";
  os << "# eps: " << format_g9(o.eps) << "  tau: " << format_g9(tau)
     << "  alpha: " << format_g9(alpha) << "\n";
  os << "# seed: " << o.seed << "  samples: " << samples << "\n";
  os << "# " << kConventionNote << "\n";
  for (double nd : grid.values()) {
    int n = static_cast<int>(std::lround(nd / o.nc)) * o.nc;
    n = std::max(n, o.nc);
    const MimoSpec spec{o.mt, o.mr, o.nc, n / o.nc, snr};
    const BetaEstimate peaky =
        mimo_peaky_codeword_beta(spec, alpha, samples, SeedSpec{o.seed, 61});
    const auto joint_model = mimo_joint_llr_model(spec);
    const BetaEstimate joint =
        beta_mc(*joint_model, alpha, samples, SeedSpec{o.seed, 62});
    const double lp = -peaky.log2(), lj = -joint.log2();
    const double se = std::hypot(peaky.std_err_log, joint.std_err_log) * kLog2e;
    os << "n: " << n << "\n";
    os << "-log2 beta(peaky codeword): " << format_g9(lp) << " +- "
       << format_g9(peaky.std_err_log * kLog2e) << " bits\n";
    os << "-log2 beta(joint test):     " << format_g9(lj) << " +- "
       << format_g9(joint.std_err_log * kLog2e) << " bits\n";
    os << "(-log2 beta_joint) - (-log2 beta_peaky): " << format_g9(lj - lp)
       << " +- " << format_g9(se) << " bits\n";
  }
  emit(o, os.str());
  return 0;
}

// ------------------------------------------------------------------- npbeta

class ShiftModel final : public LlrModel {
 public:
  explicit ShiftModel(double d) : d_(d) {}
  double sample_llr(Rng& rng) const override {
    return 0.5 * d_ * d_ + d_ * rng.normal();
  }

 private:
  double d_;
};

int run_npbeta(const CommonOpts& o, double d, double alpha) {
  std::ostringstream os;
  os << "# " << kVersion << "\n";
  const BetaEstimate exact = beta_gaussian_shift(d, alpha);
  os << "log2 beta exact: " << format_g9(exact.log2()) << "\n";
  if (o.samples > 0) {
    ShiftModel model(d);
    const BetaEstimate mc = beta_mc(model, alpha, o.samples, SeedSpec{o.seed, 0});
    os << "log2 beta mc: " << format_g9(mc.log2()) << " +- "
       << format_g9(mc.std_err_log * kLog2e) << " (n=" << o.samples << ")\n";
  }
  emit(o, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-blocklength beta-beta channel-coding bounds"};
  app.require_subcommand(1);

  CommonOpts o;
  double np_d = 1.0, np_alpha = 0.5;

  CLI::App* awgn = app.add_subcommand("awgn-ebn0", "AWGN energy-per-bit curves");
  add_common(awgn, o);
  CLI::App* fading =
      app.add_subcommand("fading-ebn0", "Rayleigh-fading energy-per-bit curves");
  add_common(fading, o);
  CLI::App* expch =
      app.add_subcommand("exp-channel", "additive exponential-noise rate curves");
  add_common(expch, o);
  CLI::App* mimo = app.add_subcommand("mimo", "MIMO block-fading rate curves");
  add_common(mimo, o);
  CLI::App* m735 =
      app.add_subcommand("mimo-735", "single-codeword vs joint-test comparison");
  add_common(m735, o);
  CLI::App* npb = app.add_subcommand("npbeta", "direct beta queries");
  add_common(npb, o);
  npb->add_option("--d", np_d, "Gaussian mean shift");
  npb->add_option("--alpha", np_alpha, "type-I requirement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (awgn->parsed()) return run_awgn_ebn0(o);
    if (fading->parsed()) return run_fading_ebn0(o);
    if (expch->parsed()) return run_exp_channel(o);
    if (mimo->parsed()) return run_mimo(o);
    if (m735->parsed()) return run_mimo_735(o);
    if (npb->parsed()) return run_npbeta(o, np_d, np_alpha);
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
