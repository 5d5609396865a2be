#include "rmf/arithmetic_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "rmf/errors.hpp"
#include "rmf/numerics.hpp"

namespace rmf {

ArithmeticSequence::ArithmeticSequence(std::vector<std::int64_t> values)
    : values_(std::move(values)) {
  if (values_.empty()) values_.push_back(0);
}

ArithmeticSequence ArithmeticSequence::zeros(std::uint64_t limit) {
  return ArithmeticSequence(std::vector<std::int64_t>(limit + 1, 0));
}

std::int64_t ArithmeticSequence::at(std::uint64_t n) const {
  if (n < 1 || n > limit()) {
    throw BoundsError("sequence index " + std::to_string(n) + " outside 1.." +
                      std::to_string(limit()));
  }
  return values_[n];
}

namespace {

void require_table(std::uint64_t limit, const PrimeTable& table) {
  if (limit > table.limit()) {
    throw BoundsError("limit " + std::to_string(limit) + " exceeds prime table limit " +
                      std::to_string(table.limit()));
  }
}

}  // namespace

ArithmeticSequence liouville(std::uint64_t limit, const PrimeTable& table) {
  require_table(limit, table);
  auto out = ArithmeticSequence::zeros(limit);
  if (limit >= 1) out[1] = 1;
  for (std::uint64_t n = 2; n <= limit; ++n) out[n] = -out[n / table.spf(n)];
  return out;
}

ArithmeticSequence moebius_abs(std::uint64_t limit, const PrimeTable& table) {
  require_table(limit, table);
  auto out = ArithmeticSequence::zeros(limit);
  if (limit >= 1) out[1] = 1;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    const std::uint64_t p = table.spf(n);
    const std::uint64_t rest = n / p;
    out[n] = (rest % p == 0) ? 0 : out[rest];
  }
  return out;
}

ArithmeticSequence dirichlet_convolve(const ArithmeticSequence& a, const ArithmeticSequence& b,
                                      std::uint64_t limit) {
  if (a.limit() < limit || b.limit() < limit) {
    throw BoundsError("convolution limit exceeds an operand's tabulation");
  }
  auto out = ArithmeticSequence::zeros(limit);
  for (std::uint64_t d = 1; d <= limit; ++d) {
    const std::int64_t ad = a[d];
    if (ad == 0) continue;
    for (std::uint64_t m = 1, n = d; n <= limit; ++m, n += d) out[n] += ad * b[m];
  }
  return out;
}

void check_completely_multiplicative(const ArithmeticSequence& f, std::uint64_t limit) {
  if (f.limit() < limit) throw BoundsError("f is not tabulated up to the requested limit");
  if (limit >= 1 && f[1] != 1) throw ContractError("f(1) != 1");
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (f[n] != 1 && f[n] != -1) {
      throw ContractError("f(" + std::to_string(n) + ") is not +-1");
    }
  }
  if (limit < 4) return;
  std::mt19937_64 rng(0x5eed'c0ffeeULL);
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
  std::uniform_int_distribution<std::uint64_t> first(2, std::max<std::uint64_t>(2, root));
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t a = first(rng);
    const std::uint64_t b_max = limit / a;
    if (b_max < 2) continue;
    std::uniform_int_distribution<std::uint64_t> second(2, b_max);
    const std::uint64_t b = second(rng);
    if (f[a * b] != f[a] * f[b]) {
      throw ContractError("f is not completely multiplicative: f(" + std::to_string(a * b) +
                          ") != f(" + std::to_string(a) + ") f(" + std::to_string(b) + ")");
    }
  }
}

ArithmeticSequence convolution_g(const ArithmeticSequence& f, std::uint64_t limit,
                                 const PrimeTable& table) {
  check_completely_multiplicative(f, limit);
  return dirichlet_convolve(f, moebius_abs(limit, table), limit);
}

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw DomainError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                        ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t divisor_count_prime_power(std::uint64_t j, std::uint64_t m) {
  if (j == 0) return m == 0 ? 1 : 0;
  return binomial(m + j - 1, j - 1);
}

std::uint64_t divisor_count(std::uint64_t j, std::uint64_t n, const PrimeTable& table) {
  if (n < 1) throw DomainError("divisor_count requires n >= 1");
  u128 result = 1;
  while (n > 1) {
    const std::uint64_t p = table.spf(n);
    std::uint64_t m = 0;
    while (n % p == 0) {
      n /= p;
      ++m;
    }
    result *= divisor_count_prime_power(j, m);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw DomainError("divisor count overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

double harmonic_partial_sum(const ArithmeticSequence& f, std::uint64_t x) {
  if (x > f.limit()) throw BoundsError("partial sum beyond tabulation");
  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= x; ++n) acc.add(static_cast<double>(f[n]) / static_cast<double>(n));
  return acc.value();
}

double turan_identity_check(const ArithmeticSequence& f, std::uint64_t x,
                            const PrimeTable& table) {
  if (x > f.limit()) throw BoundsError("identity check beyond tabulation");
  if (x == 0) return 0.0;
  const double lhs = harmonic_partial_sum(f, x);

  const auto g = convolution_g(f, x, table);
  const auto lam = liouville(x, table);
  std::vector<double> lambda_prefix(x + 1, 0.0);
  CompensatedSum running;
  for (std::uint64_t l = 1; l <= x; ++l) {
    running.add(static_cast<double>(lam[l]) / static_cast<double>(l));
    lambda_prefix[l] = running.value();
  }
  CompensatedSum rhs;
  for (std::uint64_t m = 1; m <= x; ++m) {
    if (g[m] == 0) continue;
    rhs.add(static_cast<double>(g[m]) / static_cast<double>(m) * lambda_prefix[x / m]);
  }
  return std::abs(lhs - rhs.value());
}

}  // namespace rmf
