#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rmf/arithmetic_functions.hpp"
#include "rmf/numerics.hpp"
#include "rmf/prime_engine.hpp"

namespace rmf {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for trial `index` of an experiment seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// f(p) for the sample keyed by `seed`; a pure function of (seed, p).
constexpr int prime_sign(std::uint64_t seed, std::uint64_t p) noexcept {
  const std::uint64_t h = mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) + p);
  return (h >> 63) != 0 ? -1 : 1;
}

// A completely multiplicative +-1 function: signs on primes <= prime_limit
// and tabulated values f(n) for n <= value_limit.
class RandomCMF {
 public:
  using SignSource = std::function<int(std::uint64_t)>;

  // Seeded sample (nullopt for deterministic functions such as Liouville).
  const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }
  std::uint64_t prime_limit() const noexcept { return prime_limit_; }
  std::uint64_t value_limit() const noexcept { return values_.size() - 1; }

  // f(p). Beyond prime_limit a seeded sample answers lazily; otherwise BoundsError.
  int sign(std::uint64_t p) const;
  // f(n) for 1 <= n <= value_limit.
  int value(std::uint64_t n) const;
  std::span<const std::int8_t> values() const noexcept { return values_; }
  // Indexed by n <= prime_limit; 0 at non-primes.
  std::span<const std::int8_t> prime_signs() const noexcept { return prime_signs_; }
  ArithmeticSequence as_sequence() const;

 private:
  friend RandomCMF build_cmf(const SignSource&, std::optional<std::uint64_t>, std::uint64_t,
                             std::uint64_t, const PrimeTable&);

  std::optional<std::uint64_t> seed_;
  std::uint64_t prime_limit_ = 0;
  std::vector<std::int8_t> prime_signs_;  // indexed by n; 0 for non-primes
  std::vector<std::int8_t> values_;       // values_[0] unused
};

RandomCMF build_cmf(const RandomCMF::SignSource& signs, std::optional<std::uint64_t> seed,
                    std::uint64_t prime_limit, std::uint64_t value_limit,
                    const PrimeTable& table);

// BoundsError if either limit exceeds the table.
RandomCMF sample_cmf(std::uint64_t seed, std::uint64_t prime_limit, std::uint64_t value_limit,
                     const PrimeTable& table);
RandomCMF cmf_from_signs(const RandomCMF::SignSource& signs, std::uint64_t prime_limit,
                         std::uint64_t value_limit, const PrimeTable& table);
// f(p) = -1 for every p.
RandomCMF liouville_cmf(std::uint64_t limit, const PrimeTable& table);

// sum_{n<=x} f(n)/n, compensated in increasing n.
double partial_sum(const RandomCMF& f, std::uint64_t x);

// prod_{p<=x} (1 - f(p)/p)^{-1}.
double euler_product(const RandomCMF& f, std::uint64_t x);

// Rankin certificate for sum_{n>cap, P(n)<=x} 1/n:
// min over eps in {0.1,...,0.9} of cap^{-eps} prod_{p<=x} (1 - p^{eps-1})^{-1}.
double rankin_tail(std::uint64_t x, double cap, const PrimeTable& table);

// The x-smooth numbers in (x, cap], bucketed by the parity pattern of their
// exponents so the tail sum for any sign assignment costs 2^{pi(x)} steps.
class SmoothTail {
 public:
  static constexpr std::size_t kMaxPrimes = 20;

  // DomainError when pi(x) > kMaxPrimes; CapacityError from the enumeration.
  SmoothTail(std::uint64_t x, double cap, const PrimeTable& table,
             std::size_t element_cap = kDefaultSmoothCap);

  std::uint64_t x() const noexcept { return x_; }
  double cap() const noexcept { return cap_; }
  std::size_t size() const noexcept { return count_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  double truncation_bound() const noexcept { return truncation_bound_; }

  // Bit i of `negative_mask` set means f(primes()[i]) = -1.
  double evaluate_mask(std::uint64_t negative_mask) const;
  double evaluate(const RandomCMF& f) const;
  std::uint64_t negative_mask(const RandomCMF& f) const;
  std::uint64_t negative_mask(std::uint64_t seed) const;

 private:
  std::uint64_t x_;
  double cap_;
  std::size_t count_ = 0;
  double truncation_bound_ = 0.0;
  std::vector<std::uint32_t> primes_;
  std::vector<double> buckets_;  // sum of 1/n per exponent parity mask
};

struct SmoothTailValue {
  double value = 0.0;
  double truncation_bound = 0.0;
};

SmoothTailValue smooth_tail(const RandomCMF& f, std::uint64_t x, double cap,
                            const PrimeTable& table);

struct TrialRow {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  double statistic = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::uint64_t> seeds;
  std::uint64_t trials = 0;
  std::vector<std::pair<std::string, double>> statistics;
  std::vector<std::string> flags;
  bool pass = false;
  double tolerance = 0.0;
  std::vector<TrialRow> rows;

  // DomainError if the statistic is absent.
  double stat(const std::string& name) const;
  bool has_flag(const std::string& flag) const;
};

// |partial_sum - (euler_product - smooth_tail)|; passes iff it is at most the
// truncation certificate plus 1e-9.
ExperimentReport decomposition_residual(const RandomCMF& f, std::uint64_t x, double cap,
                                        const PrimeTable& table);
// Same against a prebuilt tail, for sweeps over many samples at one (x, cap).
ExperimentReport decomposition_residual(const RandomCMF& f, const SmoothTail& tail);
inline constexpr double kDecompositionSlack = 1e-9;

struct PositivityResult {
  std::optional<std::uint64_t> first_violation;
  double min_value = 0.0;
  std::uint64_t argmin = 0;
};

// Streams sum_{n<=x} f(n)/n for x = 1..x_max.
PositivityResult positivity_scan(const RandomCMF& f, std::uint64_t x_max);

// Runs positivity_scan on `trials` samples with seeds derive_seed(seed, t).
ExperimentReport positivity_trials(std::uint64_t trials, std::uint64_t x_max, std::uint64_t seed,
                                   const PrimeTable& table, unsigned threads = 0);

// Moment bound at R = x:
//   x^{-k(2-sigma)} prod_{p<=x} ((1-p^{-sigma/2})^{-2k} + (1+p^{-sigma/2})^{-2k})/2.
LogReal smooth_moment_bound(std::uint64_t x, int k, double sigma, const PrimeTable& table);

inline constexpr double kMomentSigma = 1.5;

// Monte Carlo E[S^{2k}] for the smooth tail S at x; passes iff
// mean - 3 stderr <= smooth_moment_bound(x, k, 1.5).
ExperimentReport empirical_moment(std::uint64_t x, int k, std::uint64_t trials,
                                  std::uint64_t seed, double cap, const PrimeTable& table);

enum class EtemadiMode { exact, monte_carlo };

std::vector<double> unit_steps(std::size_t n);
// Step weights 1/p for lo < p <= hi.
std::vector<double> prime_window_steps(std::uint64_t lo, std::uint64_t hi,
                                       const PrimeTable& table);

inline constexpr std::size_t kEtemadiExactMaxSteps = 30;

// Both sides of P(max_k |S_k| >= 3 alpha) <= 3 max_k P(|S_k| >= alpha) for
// S_k = sum_{i<=k} eps_i w_i with fair signs eps_i.
ExperimentReport etemadi_empirical(std::span<const double> weights, double alpha,
                                   EtemadiMode mode, std::uint64_t trials, std::uint64_t seed);

// Frequency of inf_{y<=Y} prod_{x<p<=x+y} (1 - f(p)/p)^{-1} <= ell against
// drift_bound(x, ell) + 3 stderr.
ExperimentReport drift_empirical(std::uint64_t x, std::uint64_t Y, double ell,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const PrimeTable& table);

namespace detail {

// Evaluates fn(t) for t < count on up to `threads` workers; the result vector
// is indexed by t, so reductions over it are independent of the worker count.
template <class Result, class Fn>
std::vector<Result> run_trials(std::uint64_t count, unsigned threads, Fn fn) {
  std::vector<Result> results(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  if (workers <= 1) {
    for (std::uint64_t t = 0; t < count; ++t) results[t] = fn(t);
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t t = w; t < count; t += workers) results[t] = fn(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace detail

}  // namespace rmf
