#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "rmf/arithmetic_functions.hpp"
#include "rmf/bound_calculus.hpp"
#include "rmf/errors.hpp"
#include "rmf/simulation.hpp"

using namespace rmf;

namespace {

const PrimeTable& primes_1e6() {
  static const PrimeTable t = sieve(1'000'000);
  return t;
}

// f(p) = +1 except at the primes listed as negative.
RandomCMF fixed_signs(std::vector<std::uint64_t> negative, std::uint64_t limit,
                      const PrimeTable& t) {
  return cmf_from_signs(
      [negative](std::uint64_t p) {
        for (auto q : negative) {
          if (q == p) return -1;
        }
        return 1;
      },
      limit, limit, t);
}

// E S^2 for S = sum_{j>=2} f(2)^j 2^{-j}: the double series over (j, l) with j + l even.
double second_moment_at_2() {
  double total = 0.0;
  for (int j = 2; j < 200; ++j) {
    for (int l = 2; l < 200; ++l) {
      if ((j + l) % 2 == 0) total += std::ldexp(1.0, -j - l);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("sampled functions are completely multiplicative") {
  const auto t = sieve(10'000);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = sample_cmf(seed, 10'000, 10'000, t);
    CHECK(f.value(1) == 1);
    CHECK(f.value(4) == 1);
    CHECK(f.value(6) == f.value(2) * f.value(3));
    for (std::uint64_t m = 1; m <= 10'000; ++m) {
      for (std::uint64_t n = 1; m * n <= 10'000; ++n) {
        if (f.value(m * n) != f.value(m) * f.value(n)) {
          FAIL("f(mn) != f(m) f(n) at m=" << m << " n=" << n);
        }
      }
    }
  }
}

TEST_CASE("sampling is deterministic and seed sensitive") {
  const auto& t = primes_1e6();
  const auto a = sample_cmf(42, 1000, 1000, t);
  const auto b = sample_cmf(42, 1000, 1000, t);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end()));

  const auto first25 = t.primes_upto(100);
  REQUIRE(first25.size() == 25);
  int agreeing_pairs = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::uint64_t seed = derive_seed(2024, s);
    const std::uint64_t flipped = seed ^ (std::uint64_t{1} << (s % 64));
    bool differs = false;
    for (auto p : first25) differs = differs || prime_sign(seed, p) != prime_sign(flipped, p);
    agreeing_pairs += !differs;
  }
  CHECK(agreeing_pairs == 0);

  // Lazy signs beyond the prime limit agree with a larger sample.
  const auto small = sample_cmf(7, 100, 100, t);
  const auto large = sample_cmf(7, 10'000, 10'000, t);
  for (auto p : t.primes_upto(10'000)) CHECK(small.sign(p) == large.sign(p));
  CHECK_THROWS_AS(sample_cmf(1, 2'000'000, 10, t), BoundsError);
  CHECK_THROWS_AS((void)small.value(101), BoundsError);
  CHECK_THROWS_AS((void)liouville_cmf(10, t).sign(11), BoundsError);
}

TEST_CASE("partial sums") {
  const auto& t = primes_1e6();
  CHECK(partial_sum(sample_cmf(3, 10, 10, t), 1) == 1.0);
  CHECK(partial_sum(fixed_signs({}, 10, t), 4) == doctest::Approx(25.0 / 12));
  CHECK(partial_sum(fixed_signs({2, 3}, 10, t), 4) == doctest::Approx(5.0 / 12));
  double lowest = INFINITY;
  for (auto neg : std::vector<std::vector<std::uint64_t>>{{}, {2}, {3}, {2, 3}}) {
    lowest = std::min(lowest, partial_sum(fixed_signs(neg, 10, t), 4));
  }
  CHECK(lowest == doctest::Approx(5.0 / 12));
  CHECK_THROWS_AS(partial_sum(fixed_signs({}, 10, t), 11), BoundsError);
}

TEST_CASE("euler products") {
  const auto& t = primes_1e6();
  CHECK(euler_product(fixed_signs({}, 10, t), 1) == 1.0);
  CHECK(euler_product(fixed_signs({}, 10, t), 3) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(euler_product(fixed_signs({2}, 10, t), 3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("smooth tails") {
  const auto& t = primes_1e6();
  const double cap40 = std::ldexp(1.0, 40);
  const auto plus = smooth_tail(fixed_signs({}, 10, t), 2, cap40, t);
  CHECK(std::abs(plus.value - 0.5) <= std::ldexp(1.0, -40) + 1e-16);

  const auto minus = smooth_tail(fixed_signs({2}, 10, t), 2, cap40, t);
  CHECK(minus.value == doctest::Approx(1.0 / 6).epsilon(1e-10));

  // 3-smooth n in (3, 1e12], summed directly over 2^a 3^b.
  double direct = 0.0;
  for (double a = 1; a <= 1e12; a *= 2) {
    for (double n = a; n <= 1e12; n *= 3) {
      if (n > 3) direct += 1.0 / n;
    }
  }
  const auto three = smooth_tail(fixed_signs({}, 10, t), 3, 1e12, t);
  CHECK(three.value == doctest::Approx(direct).epsilon(1e-13));
  CHECK(std::abs(three.value - 7.0 / 6) <= three.truncation_bound);

  CHECK(rankin_tail(10, 1e12, t) <= 1e-6);
  CHECK_THROWS_AS(SmoothTail(80, 1e6, t), DomainError);
}

TEST_CASE("smooth tail parity buckets agree with direct summation") {
  const auto& t = primes_1e6();
  const SmoothTail tail(13, 1e8, t);
  const auto numbers = smooth_numbers(13, 13, 1e8, t);
  CHECK(tail.size() == numbers.size());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = sample_cmf(seed, 13, 13, t);
    double direct = 0.0;
    for (auto n : numbers) {
      int sign = 1;
      std::uint64_t m = n;
      for (auto p : t.primes_upto(13)) {
        while (m % p == 0) {
          m /= p;
          sign *= f.sign(p);
        }
      }
      direct += sign / static_cast<double>(n);
    }
    CHECK(tail.evaluate(f) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(tail.negative_mask(f) == tail.negative_mask(seed));
  }
}

TEST_CASE("rankin certificate") {
  const auto& t = primes_1e6();
  const double cap = std::ldexp(1.0, 40);
  const double r = rankin_tail(2, cap, t);
  const double at_09 = std::pow(cap, -0.9) / (1 - std::pow(2.0, -0.1));
  CHECK(r <= at_09 * (1 + 1e-12));
  CHECK(r == doctest::Approx(2.2e-10).epsilon(0.05));
  CHECK(r >= std::ldexp(1.0, -40));  // exact tail sum_{2^j > 2^40} 2^{-j}
  double prev = INFINITY;
  for (double c : {1e3, 1e6, 1e9, 1e12}) {
    const double b = rankin_tail(7, c, t);
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS(rankin_tail(1, 10, t), DomainError);
  CHECK_THROWS_AS(rankin_tail(10, 10, t), DomainError);
}

TEST_CASE("decomposition identity") {
  const auto& t = primes_1e6();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = decomposition_residual(sample_cmf(seed, 10, 10, t), 10, 1e12, t);
    CHECK(r.pass);
    CHECK(r.stat("residual") <= r.tolerance);
  }
  const auto two = decomposition_residual(sample_cmf(5, 10, 10, t), 2, 1e12, t);
  CHECK(two.pass);
  CHECK(two.stat("residual") <= 2.3e-10);

  const auto f = fixed_signs({}, 10, t);
  const auto five = decomposition_residual(f, 5, 1e12, t);
  CHECK(five.pass);
  double smooth_sum = 0.0;
  for (auto n : smooth_numbers(5, 0, 1e12, t)) smooth_sum += 1.0 / static_cast<double>(n);
  CHECK(std::abs(five.stat("euler_product") - smooth_sum) <= rankin_tail(5, 1e12, t) + 1e-12);

  const SmoothTail tail(10, 1e12, t);
  const auto g = sample_cmf(3, 10, 10, t);
  const auto a = decomposition_residual(g, tail);
  const auto b = decomposition_residual(g, 10, 1e12, t);
  CHECK(a.statistics == b.statistics);
}

TEST_CASE("positivity scans") {
  const auto& t = primes_1e6();
  const auto one = positivity_scan(sample_cmf(1, 1, 1, t), 1);
  CHECK_FALSE(one.first_violation.has_value());
  CHECK(one.min_value == 1.0);

  const auto lam = positivity_scan(liouville_cmf(100'000, t), 100'000);
  CHECK_FALSE(lam.first_violation.has_value());
  CHECK(lam.min_value > 0.0);

  // A function with f(2) = f(3) = f(5) = -1 has sum 1 - 1/2 - 1/3 + ... ; check the
  // scan against a direct running sum.
  const auto f = fixed_signs({2, 3, 5, 7}, 1000, t);
  double s = 0.0;
  double lowest = INFINITY;
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    s += f.value(n) / static_cast<double>(n);
    lowest = std::min(lowest, s);
  }
  CHECK(positivity_scan(f, 1000).min_value == doctest::Approx(lowest).epsilon(1e-12));
}

TEST_CASE("positivity trials are independent of the worker count") {
  const auto& t = primes_1e6();
  const auto a = positivity_trials(40, 20'000, 7, t, 1);
  const auto b = positivity_trials(40, 20'000, 7, t, 4);
  CHECK(a.pass);
  CHECK(a.stat("violations") == 0.0);
  CHECK(a.statistics == b.statistics);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].seed == b.rows[i].seed);
    CHECK(a.rows[i].statistic == b.rows[i].statistic);
  }
  CHECK_THROWS_AS(positivity_trials(0, 10, 1, t), DomainError);
}

TEST_CASE("run_trials forwards worker exceptions") {
  CHECK_THROWS_AS(detail::run_trials<int>(8, 3,
                                          [](std::uint64_t i) -> int {
                                            if (i == 5) throw DomainError("boom");
                                            return static_cast<int>(i);
                                          }),
                  DomainError);
  const auto v = detail::run_trials<int>(9, 4, [](std::uint64_t i) { return static_cast<int>(i * i); });
  for (int i = 0; i < 9; ++i) CHECK(v[i] == i * i);
}

TEST_CASE("empirical moments") {
  const auto& t = primes_1e6();
  const double oracle = second_moment_at_2();
  CHECK(oracle == doctest::Approx(5.0 / 36).epsilon(1e-14));
  const auto at2 = empirical_moment(2, 1, 20'000, 11, 1e12, t);
  CHECK(std::abs(at2.stat("mean") - oracle) <= 3 * at2.stat("stderr"));
  CHECK(at2.pass);

  const auto at10 = empirical_moment(10, 1, 5000, 7, 1e12, t);
  CHECK(at10.pass);
  CHECK(at10.stat("mean") - 3 * at10.stat("stderr") <= at10.stat("bound"));
  CHECK(at10.stat("bound") == doctest::Approx(smooth_moment_bound(10, 1, 1.5, t).linear()));

  const auto k2 = empirical_moment(10, 2, 5000, 7, 1e12, t);
  CHECK(k2.pass);

  const auto lone = empirical_moment(10, 1, 1, 7, 1e12, t);
  CHECK(lone.has_flag("insufficient_sample"));
  CHECK_FALSE(lone.pass);
  CHECK(std::isnan(lone.stat("stderr")));

  CHECK_THROWS_AS(empirical_moment(31, 1, 10, 1, 1e12, t), DomainError);
  CHECK_THROWS_AS(empirical_moment(10, 3, 10, 1, 1e12, t), DomainError);

  const auto again = empirical_moment(10, 1, 5000, 7, 1e12, t);
  CHECK(again.statistics == at10.statistics);
}

TEST_CASE("smooth moment bound matches the moment bound at R = x") {
  const auto& t = primes_1e6();
  // x^{-k(2-sigma)} prod_{p<=x} factor, evaluated directly.
  for (int k : {1, 2}) {
    double ln = -k * 0.5 * std::log(10.0);
    for (double p : {2.0, 3.0, 5.0, 7.0}) {
      const double h = std::pow(p, -0.75);
      ln += std::log((std::pow(1 - h, -2.0 * k) + std::pow(1 + h, -2.0 * k)) / 2);
    }
    CHECK(smooth_moment_bound(10, k, 1.5, t).ln() == doctest::Approx(ln).epsilon(1e-12));
  }
}

TEST_CASE("etemadi exact mode") {
  const auto three = etemadi_empirical(unit_steps(3), 1.0, EtemadiMode::exact, 0, 0);
  CHECK(three.stat("lhs") == 0.25);
  CHECK(three.stat("rhs") == 3.0);
  CHECK(three.pass);

  const auto one = etemadi_empirical(unit_steps(1), 1.0 / 3, EtemadiMode::exact, 0, 0);
  CHECK(one.stat("lhs") == 1.0);
  CHECK(one.pass);

  // Independent enumeration for n = 10, alpha = 2.
  const int n = 10;
  int max_hits = 0;
  std::vector<int> step(n, 0);
  for (int mask = 0; mask < (1 << n); ++mask) {
    int s = 0;
    int peak = 0;
    for (int i = 0; i < n; ++i) {
      s += (mask >> i) & 1 ? -1 : 1;
      peak = std::max(peak, std::abs(s));
      step[i] += std::abs(s) >= 2;
    }
    max_hits += peak >= 6;
  }
  const auto ten = etemadi_empirical(unit_steps(n), 2.0, EtemadiMode::exact, 0, 0);
  CHECK(ten.stat("lhs") == doctest::Approx(max_hits / 1024.0));
  CHECK(ten.stat("rhs") == doctest::Approx(3.0 * *std::max_element(step.begin(), step.end()) / 1024.0));

  CHECK_THROWS_AS(etemadi_empirical(unit_steps(31), 1.0, EtemadiMode::exact, 0, 0), DomainError);
  CHECK_THROWS_AS(etemadi_empirical(unit_steps(0), 1.0, EtemadiMode::exact, 0, 0), DomainError);
}

TEST_CASE("etemadi Monte Carlo mode") {
  const auto& t = primes_1e6();
  const auto w = prime_window_steps(100, 200, t);
  CHECK(w.size() == 21);
  const auto r = etemadi_empirical(w, 0.01, EtemadiMode::monte_carlo, 20'000, 7);
  CHECK(r.pass);
  const auto again = etemadi_empirical(w, 0.01, EtemadiMode::monte_carlo, 20'000, 7);
  CHECK(again.statistics == r.statistics);

  // Monte Carlo agrees with exact enumeration for unit steps.
  const auto exact = etemadi_empirical(unit_steps(12), 2.0, EtemadiMode::exact, 0, 0);
  const auto mc = etemadi_empirical(unit_steps(12), 2.0, EtemadiMode::monte_carlo, 50'000, 3);
  CHECK(std::abs(mc.stat("lhs") - exact.stat("lhs")) <= 4 * mc.stat("stderr"));
}

TEST_CASE("drift frequencies") {
  const auto& t = primes_1e6();
  const auto r = drift_empirical(1000, 10'000, 0.9, 500, 3, t);
  CHECK(r.pass);
  CHECK(r.stat("frequency") <= r.stat("bound") + 3 * r.stat("stderr"));
  // A looser ell is crossed more often than a tighter one.
  const auto near = drift_empirical(100, 10'000, 0.999, 500, 3, t);
  const auto far = drift_empirical(100, 10'000, 0.9, 500, 3, t);
  CHECK(near.stat("frequency") >= far.stat("frequency"));
  CHECK_THROWS_AS(drift_empirical(1000, 2'000'000, 0.9, 1, 1, t), BoundsError);
}
