#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace bbb {

constexpr double kLog2e = 1.4426950408889634074;  // log2(e)
constexpr double kLn2 = 0.6931471805599453094;    // ln(2)

inline double nats_to_bits(double x) { return x * kLog2e; }
inline double bits_to_nats(double x) { return x * kLn2; }

/// A probability stored as its natural logarithm. Values like
/// beta ~ exp(-n*P) underflow double long before they stop mattering,
/// so everything downstream of the beta engine carries LogProb.
class LogProb {
 public:
  LogProb() : log_(-std::numeric_limits<double>::infinity()) {}

  static LogProb from_log(double log_value) {
    if (std::isnan(log_value)) throw std::domain_error("LogProb: NaN log value");
    // Tolerate small positive round-off, reject real violations.
    if (log_value > 0) {
      if (log_value > 1e-9) throw std::domain_error("LogProb: log value > 0");
      log_value = 0.0;
    }
    LogProb p;
    p.log_ = log_value;
    return p;
  }

  static LogProb from_linear(double value) {
    if (!(value >= 0.0) || value > 1.0 + 1e-12)
      throw std::domain_error("LogProb: linear value outside [0,1]");
    return from_log(value > 0 ? std::log(std::min(value, 1.0))
                              : -std::numeric_limits<double>::infinity());
  }

  double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  double log2() const { return log_ * kLog2e; }
  bool is_zero() const { return std::isinf(log_); }

 private:
  double log_;
};

/// ln(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

/// ln(1 - e^x) for x < 0.
inline double log1m_exp(double x) {
  if (x >= 0) return -std::numeric_limits<double>::infinity();
  return x > -kLn2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw std::domain_error("log_sum_exp: empty input");
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

/// Streaming log-sum-exp accumulator. Merging is done in a fixed order by
/// the Monte Carlo driver so results do not depend on the worker count.
class LogSumAccumulator {
 public:
  void add(double log_term) {
    if (std::isinf(log_term) && log_term < 0) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  void merge(const LogSumAccumulator& other) {
    if (other.empty()) return;
    if (other.max_ <= max_) {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    }
  }

  bool empty() const { return std::isinf(max_); }

  double log_sum() const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

}  // namespace bbb
