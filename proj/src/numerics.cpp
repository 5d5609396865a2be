#include "rmf/numerics.hpp"

#include <algorithm>
#include <string>

#include "rmf/errors.hpp"

namespace rmf {

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

LogReal LogReal::from_linear(double value) {
  if (!(value >= 0.0)) throw DomainError("LogReal requires a nonnegative value");
  if (value == 0.0) return zero();
  return LogReal(std::log(value));
}

LogReal log_add(LogReal a, LogReal b) noexcept {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_infinite() || b.is_infinite()) return LogReal::infinite();
  const double hi = std::max(a.ln(), b.ln());
  const double lo = std::min(a.ln(), b.ln());
  return LogReal::from_log(hi + std::log1p(std::exp(lo - hi)));
}

LogReal log_sum(std::span<const LogReal> terms) noexcept {
  double hi = -std::numeric_limits<double>::infinity();
  for (const LogReal& t : terms) hi = std::max(hi, t.ln());
  if (hi == -std::numeric_limits<double>::infinity()) return LogReal::zero();
  if (hi == std::numeric_limits<double>::infinity()) return LogReal::infinite();
  CompensatedSum acc;
  for (const LogReal& t : terms) {
    if (!t.is_zero()) acc.add(std::exp(t.ln() - hi));
  }
  return LogReal::from_log(hi + std::log(acc.value()));
}

Enclosure Enclosure::make(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || lower > upper) {
    throw DomainError("invalid enclosure [" + std::to_string(lower) + ", " +
                      std::to_string(upper) + "]");
  }
  return Enclosure{lower, upper};
}

Enclosure zeta(double sigma, std::uint64_t cutoff) {
  if (!(sigma > 1.0)) throw DivergenceError("zeta(sigma) diverges for sigma <= 1");
  if (cutoff < 2) throw DomainError("zeta cutoff must be at least 2");

  // Smallest terms first.
  CompensatedSum partial;
  for (std::uint64_t n = cutoff; n >= 1; --n) {
    partial.add(std::pow(static_cast<double>(n), -sigma));
  }
  const double head = partial.value();
  const double t = static_cast<double>(cutoff);
  const double tail_hi = std::pow(t, 1.0 - sigma) / (sigma - 1.0);
  const double tail_lo = std::pow(t + 1.0, 1.0 - sigma) / (sigma - 1.0);
  return Enclosure::make(head + tail_lo, head + tail_hi);
}

LogReal avg_power_factor(std::uint64_t p, double lambda) {
  if (p < 2) throw DomainError("avg_power_factor requires p >= 2");
  const double inv = 1.0 / static_cast<double>(p);
  const LogReal up = LogReal::from_log(lambda * std::log1p(inv));
  const LogReal down = LogReal::from_log(lambda * std::log1p(-inv));
  return LogReal::from_log(log_add(up, down).ln() - std::numbers::ln2);
}

}  // namespace rmf
