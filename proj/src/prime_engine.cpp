#include "rmf/prime_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmf/errors.hpp"

namespace rmf {

std::uint32_t PrimeTable::spf(std::uint64_t n) const {
  if (n < 1 || n > limit_) {
    throw BoundsError("spf(" + std::to_string(n) + ") outside table limit " +
                      std::to_string(limit_));
  }
  return spf_[n];
}

bool PrimeTable::is_prime(std::uint64_t n) const { return n >= 2 && spf(n) == n; }

std::size_t PrimeTable::count_upto(std::uint64_t n) const {
  if (n > limit_) {
    throw BoundsError("prime count requested up to " + std::to_string(n) +
                      " beyond table limit " + std::to_string(limit_));
  }
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), n) -
                                  primes_.begin());
}

std::span<const std::uint32_t> PrimeTable::primes_upto(std::uint64_t n) const {
  return std::span<const std::uint32_t>(primes_).first(count_upto(n));
}

PrimeTable sieve(std::uint64_t limit) {
  if (limit < 2 || limit > kMaxSieveLimit) {
    throw BoundsError("sieve limit " + std::to_string(limit) + " outside [2, " +
                      std::to_string(kMaxSieveLimit) + "]");
  }
  PrimeTable table;
  table.limit_ = limit;
  table.spf_.assign(limit + 1, 0);
  table.spf_[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (table.spf_[i] == 0) {
      table.spf_[i] = static_cast<std::uint32_t>(i);
      table.primes_.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t si = table.spf_[i];
    for (std::uint32_t p : table.primes_) {
      if (p > si || static_cast<std::uint64_t>(p) * i > limit) break;
      table.spf_[p * i] = p;
    }
  }
  return table;
}

std::uint64_t largest_prime_factor(std::uint64_t n, const PrimeTable& table) {
  if (n < 2) throw DomainError("largest_prime_factor requires n >= 2");
  std::uint64_t largest = 1;
  while (n > 1) {
    largest = table.spf(n);
    n /= largest;
  }
  return largest;
}

namespace {

void smooth_dfs(std::span<const std::uint32_t> primes, std::size_t first, std::uint64_t n,
                std::uint64_t lower, std::uint64_t upper, std::size_t cap,
                std::vector<std::uint64_t>& out) {
  for (std::size_t i = first; i < primes.size(); ++i) {
    const std::uint64_t p = primes[i];
    if (p > upper / n) break;
    const std::uint64_t m = n * p;
    if (m > lower) {
      if (out.size() >= cap) throw CapacityError(out.size() + 1, cap);
      out.push_back(m);
    }
    smooth_dfs(primes, i, m, lower, upper, cap, out);
  }
}

std::uint64_t floor_to_u64(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 18446744073709551615.0) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::floor(v));
}

}  // namespace

std::vector<std::uint64_t> smooth_numbers(std::uint64_t smoothness, double lower, double upper,
                                          const PrimeTable& table, std::size_t cap) {
  if (smoothness < 2) throw DomainError("smoothness must be at least 2");
  const auto primes = table.primes_upto(smoothness);
  // n > lower  <=>  n > floor(lower) for integer n.
  const std::uint64_t lo = lower < 0.0 ? 0 : floor_to_u64(lower);
  const std::uint64_t hi = floor_to_u64(upper);
  std::vector<std::uint64_t> out;
  if (hi <= lo || hi == 0) return out;
  if (lower < 1.0) out.push_back(1);
  smooth_dfs(primes, 0, 1, lo, hi, cap, out);
  std::sort(out.begin(), out.end());
  return out;
}

double prime_sum_upto(double s, std::uint64_t limit, const PrimeTable& table) {
  CompensatedSum acc;
  for (std::uint32_t p : table.primes_upto(limit)) acc.add(std::pow(static_cast<double>(p), -s));
  return acc.value();
}

Enclosure prime_power_sum(double s, std::uint64_t limit, const PrimeTable& table) {
  if (!(s > 1.0)) throw DivergenceError("prime zeta sum diverges for s <= 1");
  if (limit < 1) throw DomainError("prime_power_sum requires limit >= 1");
  const double lower = prime_sum_upto(s, limit, table);
  const double tail = std::pow(static_cast<double>(limit), 1.0 - s) / (s - 1.0);
  return Enclosure::make(lower, lower + tail);
}

}  // namespace rmf
