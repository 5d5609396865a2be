#include "rmf/simulation.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "rmf/bound_calculus.hpp"
#include "rmf/errors.hpp"

namespace rmf {

// ---------------------------------------------------------------------------
// RandomCMF

int RandomCMF::sign(std::uint64_t p) const {
  if (p <= prime_limit_) {
    const int s = prime_signs_[p];
    if (s == 0) throw DomainError(std::to_string(p) + " is not prime");
    return s;
  }
  if (seed_) return prime_sign(*seed_, p);
  throw BoundsError("f(" + std::to_string(p) + ") requested beyond prime limit " +
                    std::to_string(prime_limit_));
}

int RandomCMF::value(std::uint64_t n) const {
  if (n < 1 || n > value_limit()) {
    throw BoundsError("f(" + std::to_string(n) + ") outside tabulation 1.." +
                      std::to_string(value_limit()));
  }
  return values_[n];
}

ArithmeticSequence RandomCMF::as_sequence() const {
  std::vector<std::int64_t> v(values_.begin(), values_.end());
  return ArithmeticSequence(std::move(v));
}

RandomCMF build_cmf(const RandomCMF::SignSource& signs, std::optional<std::uint64_t> seed,
                    std::uint64_t prime_limit, std::uint64_t value_limit,
                    const PrimeTable& table) {
  if (prime_limit > table.limit() || value_limit > table.limit()) {
    throw BoundsError("random function limits exceed prime table limit " +
                      std::to_string(table.limit()));
  }
  // Tabulating f(n) needs f at every prime <= value_limit.
  const std::uint64_t sign_limit = std::max(prime_limit, value_limit);
  RandomCMF f;
  f.seed_ = seed;
  f.prime_limit_ = sign_limit;
  f.prime_signs_.assign(sign_limit + 1, 0);
  if (sign_limit >= 2) {
    for (std::uint32_t p : table.primes_upto(sign_limit)) {
      const int s = signs(p);
      if (s != 1 && s != -1) throw ContractError("prime signs must be +-1");
      f.prime_signs_[p] = static_cast<std::int8_t>(s);
    }
  }
  f.values_.assign(value_limit + 1, 0);
  if (value_limit >= 1) f.values_[1] = 1;
  for (std::uint64_t n = 2; n <= value_limit; ++n) {
    const std::uint32_t p = table.spf(n);
    f.values_[n] = static_cast<std::int8_t>(f.prime_signs_[p] * f.values_[n / p]);
  }
  return f;
}

RandomCMF sample_cmf(std::uint64_t seed, std::uint64_t prime_limit, std::uint64_t value_limit,
                     const PrimeTable& table) {
  return build_cmf([seed](std::uint64_t p) { return prime_sign(seed, p); }, seed, prime_limit,
                   value_limit, table);
}

RandomCMF cmf_from_signs(const RandomCMF::SignSource& signs, std::uint64_t prime_limit,
                         std::uint64_t value_limit, const PrimeTable& table) {
  return build_cmf(signs, std::nullopt, prime_limit, value_limit, table);
}

RandomCMF liouville_cmf(std::uint64_t limit, const PrimeTable& table) {
  return cmf_from_signs([](std::uint64_t) { return -1; }, limit, limit, table);
}

// ---------------------------------------------------------------------------
// Partial sums, Euler products, smooth tails

double partial_sum(const RandomCMF& f, std::uint64_t x) {
  if (x > f.value_limit()) throw BoundsError("partial_sum beyond tabulated values");
  const auto values = f.values();
  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= x; ++n) acc.add(values[n] / static_cast<double>(n));
  return acc.value();
}

double euler_product(const RandomCMF& f, std::uint64_t x) {
  if (x > f.prime_limit()) throw BoundsError("euler_product beyond the function's prime limit");
  const auto signs = f.prime_signs();
  CompensatedSum log_product;
  for (std::uint64_t n = 2; n <= x; ++n) {
    if (signs[n] != 0) log_product.add(-std::log1p(-signs[n] / static_cast<double>(n)));
  }
  return std::exp(log_product.value());
}

double rankin_tail(std::uint64_t x, double cap, const PrimeTable& table) {
  if (x < 2) throw DomainError("rankin_tail requires x >= 2");
  if (!(cap > static_cast<double>(x))) throw DomainError("rankin_tail requires cap > x");
  const auto primes = table.primes_upto(x);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 9; ++i) {
    const double eps = i / 10.0;
    CompensatedSum ln;
    ln.add(-eps * std::log(cap));
    for (std::uint32_t p : primes) ln.add(-std::log1p(-std::pow(static_cast<double>(p), eps - 1.0)));
    best = std::min(best, ln.value());
  }
  return std::exp(best);
}

SmoothTail::SmoothTail(std::uint64_t x, double cap, const PrimeTable& table,
                       std::size_t element_cap)
    : x_(x), cap_(cap) {
  const auto primes = table.primes_upto(x);
  if (primes.size() > kMaxPrimes) {
    throw DomainError("smooth tail supports at most " + std::to_string(kMaxPrimes) +
                      " primes, got pi(x) = " + std::to_string(primes.size()));
  }
  primes_.assign(primes.begin(), primes.end());
  const auto numbers = smooth_numbers(x, static_cast<double>(x), cap, table, element_cap);
  count_ = numbers.size();

  std::vector<CompensatedSum> sums(std::size_t{1} << primes_.size());
  for (std::uint64_t n : numbers) {
    std::uint64_t mask = 0;
    std::uint64_t rest = n;
    for (std::size_t i = 0; i < primes_.size() && rest > 1; ++i) {
      bool odd = false;
      while (rest % primes_[i] == 0) {
        rest /= primes_[i];
        odd = !odd;
      }
      if (odd) mask |= std::uint64_t{1} << i;
    }
    sums[mask].add(1.0 / static_cast<double>(n));
  }
  buckets_.reserve(sums.size());
  for (const auto& s : sums) buckets_.push_back(s.value());
  truncation_bound_ = rankin_tail(x, cap, table);
}

double SmoothTail::evaluate_mask(std::uint64_t negative_mask) const {
  CompensatedSum acc;
  for (std::uint64_t m = 0; m < buckets_.size(); ++m) {
    const bool negative = (std::popcount(m & negative_mask) & 1) != 0;
    acc.add(negative ? -buckets_[m] : buckets_[m]);
  }
  return acc.value();
}

std::uint64_t SmoothTail::negative_mask(const RandomCMF& f) const {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (f.sign(primes_[i]) < 0) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

std::uint64_t SmoothTail::negative_mask(std::uint64_t seed) const {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (prime_sign(seed, primes_[i]) < 0) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

double SmoothTail::evaluate(const RandomCMF& f) const { return evaluate_mask(negative_mask(f)); }

SmoothTailValue smooth_tail(const RandomCMF& f, std::uint64_t x, double cap,
                            const PrimeTable& table) {
  const SmoothTail tail(x, cap, table);
  return {tail.evaluate(f), tail.truncation_bound()};
}

// ---------------------------------------------------------------------------
// Reports

double ExperimentReport::stat(const std::string& name) const {
  for (const auto& [key, value] : statistics) {
    if (key == name) return value;
  }
  throw DomainError("report has no statistic '" + name + "'");
}

bool ExperimentReport::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

namespace {

struct MeanAndError {
  double mean = 0.0;
  double stderr_ = std::numeric_limits<double>::quiet_NaN();
};

// Sample mean and its standard error, reduced in index order.
MeanAndError mean_and_error(std::span<const double> xs) {
  MeanAndError out;
  if (xs.empty()) return out;
  CompensatedSum sum;
  for (double v : xs) sum.add(v);
  out.mean = sum.value() / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  CompensatedSum sq;
  for (double v : xs) sq.add((v - out.mean) * (v - out.mean));
  const double var = sq.value() / static_cast<double>(xs.size() - 1);
  out.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

double bernoulli_stderr(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

ExperimentReport decomposition_residual(const RandomCMF& f, const SmoothTail& tail) {
  const std::uint64_t x = tail.x();
  const double lhs = partial_sum(f, x);
  const double product = euler_product(f, x);
  const double tail_value = tail.evaluate(f);
  const double residual = std::abs(lhs - (product - tail_value));

  ExperimentReport r;
  r.experiment = "decomposition";
  if (f.seed()) r.seeds.push_back(*f.seed());
  r.trials = 1;
  r.tolerance = tail.truncation_bound() + kDecompositionSlack;
  r.statistics = {{"x", static_cast<double>(x)},
                  {"cap", tail.cap()},
                  {"partial_sum", lhs},
                  {"euler_product", product},
                  {"smooth_tail", tail_value},
                  {"truncation_bound", tail.truncation_bound()},
                  {"residual", residual}};
  r.pass = residual <= r.tolerance;
  r.rows.push_back({0, f.seed().value_or(0), residual});
  return r;
}

ExperimentReport decomposition_residual(const RandomCMF& f, std::uint64_t x, double cap,
                                        const PrimeTable& table) {
  return decomposition_residual(f, SmoothTail(x, cap, table));
}

PositivityResult positivity_scan(const RandomCMF& f, std::uint64_t x_max) {
  if (x_max > f.value_limit()) throw BoundsError("positivity_scan beyond tabulated values");
  PositivityResult out;
  out.min_value = std::numeric_limits<double>::infinity();
  const auto values = f.values();
  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= x_max; ++n) {
    acc.add(values[n] / static_cast<double>(n));
    const double s = acc.value();
    if (s < out.min_value) {
      out.min_value = s;
      out.argmin = n;
    }
    if (s <= 0.0 && !out.first_violation) out.first_violation = n;
  }
  return out;
}

ExperimentReport positivity_trials(std::uint64_t trials, std::uint64_t x_max, std::uint64_t seed,
                                   const PrimeTable& table, unsigned threads) {
  if (trials < 1) throw DomainError("positivity_trials needs at least one trial");
  if (x_max < 1) throw DomainError("positivity_trials needs x_max >= 1");
  const auto results = detail::run_trials<PositivityResult>(trials, threads, [&](std::uint64_t t) {
    const auto f = sample_cmf(derive_seed(seed, t), x_max, x_max, table);
    return positivity_scan(f, x_max);
  });

  ExperimentReport r;
  r.experiment = "positivity";
  r.seeds = {seed};
  r.trials = trials;
  std::uint64_t violations = 0;
  std::uint64_t worst_trial = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (results[t].first_violation && violations++ == 0) {
      r.flags.push_back("first_violation trial=" + std::to_string(t) +
                        " x=" + std::to_string(*results[t].first_violation));
    }
    if (results[t].min_value < results[worst_trial].min_value) worst_trial = t;
    r.rows.push_back({t, derive_seed(seed, t), results[t].min_value});
  }
  r.statistics = {{"x_max", static_cast<double>(x_max)},
                  {"violations", static_cast<double>(violations)},
                  {"min_value", results[worst_trial].min_value},
                  {"argmin", static_cast<double>(results[worst_trial].argmin)},
                  {"trial_of_min", static_cast<double>(worst_trial)}};
  r.pass = violations == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Moments

LogReal smooth_moment_bound(std::uint64_t x, int k, double sigma, const PrimeTable& table) {
  if (x < 2) throw DomainError("smooth_moment_bound requires x >= 2");
  CompensatedSum ln;
  ln.add(-k * (2.0 - sigma) * std::log(static_cast<double>(x)));
  for (std::uint32_t p : table.primes_upto(x)) ln.add(moment_factor_sides(p, k, sigma).first);
  return LogReal::from_log(ln.value());
}

ExperimentReport empirical_moment(std::uint64_t x, int k, std::uint64_t trials,
                                  std::uint64_t seed, double cap, const PrimeTable& table) {
  if (x < 2 || x > 30) throw DomainError("empirical_moment requires 2 <= x <= 30");
  if (k != 1 && k != 2) throw DomainError("empirical_moment requires k in {1, 2}");
  if (trials < 1) throw DomainError("empirical_moment needs at least one trial");

  const SmoothTail tail(x, cap, table);
  std::vector<double> powers(trials);
  ExperimentReport r;
  r.experiment = "moment";
  r.seeds = {seed};
  r.trials = trials;
  r.rows.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, t);
    const double value = tail.evaluate_mask(tail.negative_mask(s));
    powers[t] = std::pow(value, 2 * k);
    r.rows.push_back({t, s, value});
  }
  const auto est = mean_and_error(powers);
  const LogReal bound = smooth_moment_bound(x, k, kMomentSigma, table);
  r.tolerance = 3.0;
  r.statistics = {{"x", static_cast<double>(x)},
                  {"k", static_cast<double>(k)},
                  {"sigma", kMomentSigma},
                  {"cap", cap},
                  {"mean", est.mean},
                  {"stderr", est.stderr_},
                  {"bound", bound.linear()},
                  {"log10_bound", bound.log10()},
                  {"truncation_bound", tail.truncation_bound()}};
  if (trials < 2) {
    r.flags.push_back("insufficient_sample");
    r.pass = false;
  } else {
    r.pass = est.mean - 3.0 * est.stderr_ <= bound.linear();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Maximal inequality

std::vector<double> unit_steps(std::size_t n) { return std::vector<double>(n, 1.0); }

std::vector<double> prime_window_steps(std::uint64_t lo, std::uint64_t hi,
                                       const PrimeTable& table) {
  std::vector<double> out;
  for (std::uint32_t p : table.primes_upto(hi)) {
    if (p > lo) out.push_back(1.0 / p);
  }
  return out;
}

ExperimentReport etemadi_empirical(std::span<const double> weights, double alpha,
                                   EtemadiMode mode, std::uint64_t trials, std::uint64_t seed) {
  const std::size_t n = weights.size();
  if (n == 0) throw DomainError("etemadi_empirical needs at least one step");
  if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");

  std::vector<std::uint64_t> step_hits(n, 0);
  std::uint64_t max_hits = 0;
  std::uint64_t samples = 0;
  ExperimentReport r;
  r.experiment = "etemadi";

  // Accumulates one sign pattern; bit i set means step i is negative.
  auto walk = [&](auto bit) {
    double s = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += bit(i) ? -weights[i] : weights[i];
      const double a = std::abs(s);
      if (a >= alpha) ++step_hits[i];
      peak = std::max(peak, a);
    }
    if (peak >= 3.0 * alpha) ++max_hits;
    return peak;
  };

  if (mode == EtemadiMode::exact) {
    if (n > kEtemadiExactMaxSteps) {
      throw DomainError("exact mode supports at most " + std::to_string(kEtemadiExactMaxSteps) +
                        " steps");
    }
    samples = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < samples; ++mask) {
      walk([mask](std::size_t i) { return ((mask >> i) & 1) != 0; });
    }
    r.trials = samples;
  } else {
    if (trials < 1) throw DomainError("Monte Carlo mode needs at least one trial");
    samples = trials;
    r.trials = trials;
    r.seeds = {seed};
    for (std::uint64_t t = 0; t < trials; ++t) {
      const std::uint64_t ts = derive_seed(seed, t);
      const double peak = walk([ts](std::size_t i) {
        return ((mix64(ts + i / 64) >> (i % 64)) & 1) != 0;
      });
      r.rows.push_back({t, ts, peak});
    }
  }

  const auto total = static_cast<double>(samples);
  const std::uint64_t worst = *std::max_element(step_hits.begin(), step_hits.end());
  const double lhs = static_cast<double>(max_hits) / total;
  const double q = static_cast<double>(worst) / total;
  const double rhs = 3.0 * q;
  r.statistics = {{"n", static_cast<double>(n)}, {"alpha", alpha}, {"lhs", lhs}, {"rhs", rhs}};
  if (mode == EtemadiMode::exact) {
    r.tolerance = 0.0;
    // Integer form of lhs <= rhs.
    r.pass = max_hits <= 3 * worst;
  } else {
    const double se = std::sqrt(std::pow(bernoulli_stderr(lhs, samples), 2) +
                                9.0 * std::pow(bernoulli_stderr(q, samples), 2));
    r.statistics.emplace_back("stderr", se);
    r.tolerance = 3.0 * se;
    r.pass = lhs <= rhs + 3.0 * se;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Drift of the Euler product past x

ExperimentReport drift_empirical(std::uint64_t x, std::uint64_t Y, double ell,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const PrimeTable& table) {
  if (trials < 1) throw DomainError("drift_empirical needs at least one trial");
  if (x + Y > table.limit()) throw BoundsError("drift window exceeds prime table");
  const LogReal bound = drift_bound(static_cast<double>(x), ell);

  std::vector<std::uint32_t> primes;
  std::vector<double> log_plus;   // log (1 - 1/p)^{-1}
  std::vector<double> log_minus;  // log (1 + 1/p)^{-1}
  for (std::uint32_t p : table.primes_upto(x + Y)) {
    if (p <= x) continue;
    primes.push_back(p);
    log_plus.push_back(-std::log1p(-1.0 / p));
    log_minus.push_back(-std::log1p(1.0 / p));
  }
  const double threshold = std::log(ell);

  ExperimentReport r;
  r.experiment = "drift";
  r.seeds = {seed};
  r.trials = trials;
  std::uint64_t events = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(seed, t);
    double running = 0.0;
    double low = 0.0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      running += prime_sign(ts, primes[i]) > 0 ? log_plus[i] : log_minus[i];
      low = std::min(low, running);
      if (running <= threshold) break;
    }
    if (low <= threshold) ++events;
    r.rows.push_back({t, ts, std::exp(low)});
  }
  const double freq = static_cast<double>(events) / static_cast<double>(trials);
  const double se = bernoulli_stderr(freq, trials);
  r.tolerance = 3.0 * se;
  r.statistics = {{"x", static_cast<double>(x)},  {"Y", static_cast<double>(Y)},
                  {"ell", ell},                   {"frequency", freq},
                  {"stderr", se},                 {"bound", bound.linear()}};
  r.pass = freq <= bound.linear() + 3.0 * se;
  return r;
}

}  // namespace rmf
