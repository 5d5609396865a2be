#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rmf/numerics.hpp"

namespace rmf {

inline constexpr std::uint64_t kMaxSieveLimit = 100'000'000;
inline constexpr std::size_t kDefaultSmoothCap = 10'000'000;

// Primes up to `limit` together with a smallest-prime-factor table.
// Immutable once built; safe to share between threads.
class PrimeTable {
 public:
  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }

  // spf(1) == 1 by convention.
  std::uint32_t spf(std::uint64_t n) const;
  bool is_prime(std::uint64_t n) const;

  // Number of primes <= n (n <= limit).
  std::size_t count_upto(std::uint64_t n) const;
  // The primes <= n, as a prefix view of primes().
  std::span<const std::uint32_t> primes_upto(std::uint64_t n) const;

 private:
  friend PrimeTable sieve(std::uint64_t limit);

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint32_t> spf_;
};

// Linear sieve; 2 <= limit <= kMaxSieveLimit or BoundsError.
PrimeTable sieve(std::uint64_t limit);

// Largest prime dividing n. DomainError for n < 2, BoundsError beyond the table.
std::uint64_t largest_prime_factor(std::uint64_t n, const PrimeTable& table);

// Ascending list of the integers n with lower < n <= upper whose prime factors
// are all <= smoothness, built by depth-first products of primes.
// CapacityError once more than `cap` values would be produced.
std::vector<std::uint64_t> smooth_numbers(std::uint64_t smoothness, double lower, double upper,
                                          const PrimeTable& table,
                                          std::size_t cap = kDefaultSmoothCap);

// sum_{p <= limit} p^{-s}, compensated, in increasing p. Any real s.
double prime_sum_upto(double s, std::uint64_t limit, const PrimeTable& table);

// Enclosure of the full prime zeta value sum_p p^{-s}: the partial sum over
// p <= limit and that plus limit^{1-s}/(s-1). DivergenceError for s <= 1.
Enclosure prime_power_sum(double s, std::uint64_t limit, const PrimeTable& table);

}  // namespace rmf
