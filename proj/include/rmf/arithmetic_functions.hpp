#pragma once

#include <cstdint>
#include <vector>

#include "rmf/prime_engine.hpp"

namespace rmf {

// An integer-valued arithmetic function tabulated on 1..limit.
class ArithmeticSequence {
 public:
  ArithmeticSequence() = default;
  // values[0] is ignored; values.size() == limit + 1.
  explicit ArithmeticSequence(std::vector<std::int64_t> values);
  static ArithmeticSequence zeros(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
  std::int64_t operator[](std::uint64_t n) const { return values_[n]; }
  std::int64_t& operator[](std::uint64_t n) { return values_[n]; }
  std::int64_t at(std::uint64_t n) const;

  friend bool operator==(const ArithmeticSequence&, const ArithmeticSequence&) = default;

 private:
  std::vector<std::int64_t> values_;
};

// lambda(n) = (-1)^Omega(n).
ArithmeticSequence liouville(std::uint64_t limit, const PrimeTable& table);

// Squarefree indicator |mu|.
ArithmeticSequence moebius_abs(std::uint64_t limit, const PrimeTable& table);

// (a*b)(n) = sum_{d|n} a(d) b(n/d) for n <= limit.
ArithmeticSequence dirichlet_convolve(const ArithmeticSequence& a, const ArithmeticSequence& b,
                                      std::uint64_t limit);

// Throws ContractError unless f is +-1 valued with f(1) = 1 and passes a
// seeded sample of 1000 pairs f(ab) = f(a) f(b) with ab <= limit.
void check_completely_multiplicative(const ArithmeticSequence& f, std::uint64_t limit);

// g = f * |mu| for a +-1 valued completely multiplicative f.
ArithmeticSequence convolution_g(const ArithmeticSequence& f, std::uint64_t limit,
                                 const PrimeTable& table);

// C(n, k); DomainError if the result overflows 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// d_j(p^m) = C(m + j - 1, j - 1).
std::uint64_t divisor_count_prime_power(std::uint64_t j, std::uint64_t m);

// Generalized divisor function d_j(n).
std::uint64_t divisor_count(std::uint64_t j, std::uint64_t n, const PrimeTable& table);

// sum_{n <= x} f(n)/n, compensated, increasing n.
double harmonic_partial_sum(const ArithmeticSequence& f, std::uint64_t x);

// |LHS - RHS| for
//   sum_{n<=x} f(n)/n = sum_{m<=x} (g(m)/m) sum_{l<=x/m} lambda(l)/l,  g = f * |mu|.
double turan_identity_check(const ArithmeticSequence& f, std::uint64_t x,
                            const PrimeTable& table);

}  // namespace rmf
