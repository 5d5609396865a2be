#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace rmf {

// Neumaier's variant of Kahan summation. Order of add() calls is significant
// for the exact bits of the result, so callers fix the order.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double value) noexcept {
    add(value);
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

// A nonnegative real stored as its natural logarithm. zero() holds ln = -inf;
// infinite() (ln = +inf) is the "infeasible" sentinel used by the optimizer.
class LogReal {
 public:
  constexpr LogReal() = default;

  static constexpr LogReal from_log(double ln_value) noexcept { return LogReal(ln_value); }
  // Throws DomainError for negative or NaN input.
  static LogReal from_linear(double value);
  static constexpr LogReal zero() noexcept {
    return LogReal(-std::numeric_limits<double>::infinity());
  }
  static constexpr LogReal one() noexcept { return LogReal(0.0); }
  static constexpr LogReal infinite() noexcept {
    return LogReal(std::numeric_limits<double>::infinity());
  }

  constexpr double ln() const noexcept { return ln_; }
  double log10() const noexcept { return ln_ / std::numbers::ln10; }
  double linear() const noexcept { return std::exp(ln_); }
  constexpr bool is_zero() const noexcept {
    return ln_ == -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_infinite() const noexcept {
    return ln_ == std::numeric_limits<double>::infinity();
  }

  friend constexpr LogReal operator*(LogReal a, LogReal b) noexcept {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogReal(a.ln_ + b.ln_);
  }
  friend constexpr LogReal operator/(LogReal a, LogReal b) noexcept {
    if (a.is_zero()) return zero();
    return LogReal(a.ln_ - b.ln_);
  }
  LogReal pow(double exponent) const noexcept {
    if (is_zero()) return exponent > 0 ? zero() : one();
    return LogReal(ln_ * exponent);
  }

  friend constexpr auto operator<=>(LogReal a, LogReal b) noexcept { return a.ln_ <=> b.ln_; }
  friend constexpr bool operator==(LogReal a, LogReal b) noexcept { return a.ln_ == b.ln_; }

 private:
  constexpr explicit LogReal(double ln_value) noexcept : ln_(ln_value) {}

  double ln_ = -std::numeric_limits<double>::infinity();
};

// exp(a) + exp(b), factored around the larger argument.
LogReal log_add(LogReal a, LogReal b) noexcept;

// Sum of many LogReals. Uses a single max shift and compensated summation.
LogReal log_sum(std::span<const LogReal> terms) noexcept;

// A certified interval [lower, upper]; both ends finite.
struct Enclosure {
  double lower = 0.0;
  double upper = 0.0;

  // Throws DomainError unless lower <= upper and both are finite.
  static Enclosure make(double lower, double upper);

  double width() const noexcept { return upper - lower; }
  bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

// Enclosure of zeta(sigma): the partial sum over n <= cutoff plus the
// integral-test bounds (cutoff+1)^{1-s}/(s-1) <= tail <= cutoff^{1-s}/(s-1).
// Throws DivergenceError for sigma <= 1 and DomainError for cutoff < 2.
Enclosure zeta(double sigma, std::uint64_t cutoff);

// log of ((1+1/p)^lambda + (1-1/p)^lambda) / 2.
LogReal avg_power_factor(std::uint64_t p, double lambda);

}  // namespace rmf
