#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rmf/errors.hpp"
#include "rmf/numerics.hpp"
#include "rmf/prime_engine.hpp"

using namespace rmf;

namespace {

// zeta(s) by direct summation in long double with an Euler-Maclaurin tail.
long double zeta_oracle(long double s) {
  const int n = 100'000;
  long double sum = 0.0L;
  for (int i = n - 1; i >= 1; --i) sum += std::pow(static_cast<long double>(i), -s);
  const long double N = n;
  sum += std::pow(N, 1 - s) / (s - 1) + std::pow(N, -s) / 2 + s * std::pow(N, -s - 1) / 12;
  return sum;
}

}  // namespace

TEST_CASE("log_add examples") {
  CHECK(log_add(LogReal::one(), LogReal::zero()).ln() == 0.0);
  CHECK(log_add(LogReal::zero(), LogReal::one()).ln() == 0.0);
  CHECK(log_add(LogReal::from_linear(2), LogReal::from_linear(3)).ln() ==
        doctest::Approx(std::log(5.0)).epsilon(1e-15));

  LogReal acc = LogReal::zero();
  const auto tiny = LogReal::from_log(-46 * std::numbers::ln10);
  for (int i = 0; i < 10; ++i) acc = log_add(acc, tiny);
  CHECK(acc.log10() == doctest::Approx(-45.0).epsilon(1e-13));

  std::vector<LogReal> ten(10, tiny);
  CHECK(log_sum(ten).log10() == doctest::Approx(-45.0).epsilon(1e-13));
  CHECK(log_sum({}).is_zero());
}

TEST_CASE("log_add properties") {
  const std::vector<double> lns = {-700.0, -105.9, -1.0, 0.0, 0.3, 42.0, 690.7};
  for (double a : lns) {
    for (double b : lns) {
      const auto x = LogReal::from_log(a);
      const auto y = LogReal::from_log(b);
      CHECK(log_add(x, y) == log_add(y, x));
      CHECK(log_add(x, y) >= std::max(x, y));
      CHECK(log_add(x, LogReal::zero()) == x);
      for (double c : lns) {
        const auto z = LogReal::from_log(c);
        const double l = log_add(log_add(x, y), z).ln();
        const double r = log_add(x, log_add(y, z)).ln();
        CHECK(std::abs(l - r) <= 1e-12 * std::max(1.0, std::abs(l)));
      }
    }
  }
}

TEST_CASE("LogReal multiplication round-trips") {
  for (double a : {1e-300, 1e-150, 3.7e-20, 1.0, 5e40, 1e150, 1e300}) {
    for (double b : {1e-300, 2e-7, 1.0, 9e99, 1e300}) {
      const double want = a * b;
      if (want == 0.0 || !std::isfinite(want) || want < 1e-300) continue;
      const auto p = LogReal::from_linear(a) * LogReal::from_linear(b);
      CHECK(std::exp(p.ln()) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  CHECK((LogReal::zero() * LogReal::from_log(5)).is_zero());
  CHECK_THROWS_AS(LogReal::from_linear(-1.0), DomainError);
  CHECK(LogReal::from_linear(0.0).is_zero());
}

TEST_CASE("enclosure validation") {
  CHECK_THROWS_AS(Enclosure::make(2.0, 1.0), DomainError);
  CHECK_THROWS_AS(Enclosure::make(0.0, INFINITY), DomainError);
  const auto e = Enclosure::make(1.0, 2.0);
  CHECK(e.contains(1.5));
  CHECK(e.width() == 1.0);
}

TEST_CASE("zeta enclosures contain the true value") {
  const auto z2 = zeta(2.0, 1'000'000);
  CHECK(z2.contains(std::numbers::pi * std::numbers::pi / 6));

  const auto z3 = zeta(3.0, 10);
  CHECK(z3.contains(static_cast<double>(zeta_oracle(3.0L))));
  CHECK(z3.contains(1.2020569031595942));

  const auto z = zeta(1.42, 10'000'000);
  const double T = 1e7;
  const double analytic = (std::pow(T, 1 - 1.42) - std::pow(T + 1, 1 - 1.42)) / 0.42;
  CHECK(z.width() <= analytic * (1 + 1e-6));
  CHECK(z.width() < 1e-8);
  const double oracle = static_cast<double>(zeta_oracle(1.42L));
  CHECK(z.lower <= oracle + 1e-11);
  CHECK(z.upper >= oracle - 1e-11);
}

TEST_CASE("zeta enclosure width decreases with the cutoff") {
  for (double s : {1.1, 1.42, 2.0}) {
    const double w2 = zeta(s, 100).width();
    const double w4 = zeta(s, 10'000).width();
    const double w6 = zeta(s, 1'000'000).width();
    CHECK(w2 > w4);
    CHECK(w4 > w6);
  }
}

TEST_CASE("zeta errors") {
  CHECK_THROWS_AS(zeta(1.0, 100), DivergenceError);
  CHECK_THROWS_AS(zeta(0.5, 100), DivergenceError);
  CHECK_THROWS_AS(zeta(2.0, 1), DomainError);
}

TEST_CASE("avg_power_factor examples") {
  CHECK(avg_power_factor(2, 1).ln() == doctest::Approx(0.0));
  CHECK(std::abs(avg_power_factor(2, 1).ln()) < 1e-15);
  CHECK(avg_power_factor(2, 2).ln() == doctest::Approx(std::log(1.25)).epsilon(1e-14));
  const long double oracle = std::log(
      (std::pow(4.0L / 3, 700.0L) + std::pow(2.0L / 3, 700.0L)) / 2.0L);
  CHECK(avg_power_factor(3, 700).ln() ==
        doctest::Approx(static_cast<double>(oracle)).epsilon(1e-13));
  CHECK(avg_power_factor(3, 700).ln() ==
        doctest::Approx(700 * std::log(4.0 / 3) - std::log(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(avg_power_factor(1, 1), DomainError);
}

TEST_CASE("avg_power_factor is at least one and bounded by exp(l^2/2p^2) beyond 10 l") {
  const auto t = sieve(1'000'000);
  for (double lam : {1.0, 2.0, 10.0, 700.0}) {
    for (auto p : t.primes_upto(100)) CHECK(avg_power_factor(p, lam).ln() >= -1e-15);
  }
  for (double lam : {1.0, 2.0, 10.0, 700.0}) {
    const auto lo = static_cast<std::uint64_t>(10 * lam);
    for (auto p : t.primes_upto(std::min<std::uint64_t>(lo + 5000, 1'000'000))) {
      if (p <= lo) continue;
      CHECK(avg_power_factor(p, lam).ln() <= lam * lam / (2.0 * p * p) * (1 + 1e-12));
    }
  }
}

TEST_CASE("compensated summation") {
  std::vector<double> xs = {1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(xs) == 2.0);
  CompensatedSum s;
  for (int i = 0; i < 1'000'000; ++i) s.add(0.1);
  CHECK(s.value() == doctest::Approx(100'000.0).epsilon(1e-15));
}
