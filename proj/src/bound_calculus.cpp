#include "rmf/bound_calculus.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "rmf/errors.hpp"

namespace rmf {

namespace {

double moment_exponent(int k) {
  const double kk = static_cast<double>(k);
  return 2.0 * kk * kk + 2.0 * kk;
}

void require(bool ok, const char* name) {
  if (!ok) throw ConstraintError(name);
}

void require_moment_params(std::int64_t R, int k, double sigma, const PrimeTable& table) {
  require(k >= 1, "k>=1");
  require(sigma > 1.0, "sigma>1");
  require(R >= 2, "R>=2");
  require(2.0 * std::pow(static_cast<double>(R), sigma) >
              static_cast<double>(k) * static_cast<double>(k),
          "2R^sigma>k^2");
  if (static_cast<std::uint64_t>(R) > table.limit()) {
    throw BoundsError("R = " + std::to_string(R) + " exceeds prime table limit " +
                      std::to_string(table.limit()));
  }
}

}  // namespace

std::vector<ConstraintCheck> check_constraints(const BoundParams& p) {
  const double kk = static_cast<double>(p.k);
  return {
      {"lambda>0", p.lambda > 0.0},
      {"lambda<=N0/10", p.lambda <= static_cast<double>(p.N0) / 10.0},
      {"0<delta<1", p.delta > 0.0 && p.delta < 1.0},
      {"k>=1", p.k >= 1},
      {"1<sigma<2", p.sigma > 1.0 && p.sigma < 2.0},
      {"R>=2", p.R >= 2},
      {"2R^sigma>k^2", 2.0 * std::pow(static_cast<double>(p.R), p.sigma) > kk * kk},
      {"k(2-sigma)>1", kk * (2.0 - p.sigma) > 1.0},
      {"1/2<ell<1", p.ell > 0.5 && p.ell < 1.0},
  };
}

bool all_constraints_hold(const BoundParams& params) {
  const auto checks = check_constraints(params);
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });
}

void require_constraints(const BoundParams& params) {
  for (const auto& c : check_constraints(params)) {
    if (!c.ok) throw ConstraintError(c.name);
  }
}

LogReal log_P_lambda(double lambda, const PrimeTable& table) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  const double cutoff = std::floor(10.0 * lambda);
  if (cutoff > static_cast<double>(table.limit())) {
    throw BoundsError("P_lambda needs primes up to " + std::to_string(cutoff) +
                      " but the table stops at " + std::to_string(table.limit()));
  }
  CompensatedSum acc;
  if (cutoff >= 2.0) {
    for (std::uint32_t p : table.primes_upto(static_cast<std::uint64_t>(cutoff))) {
      acc.add(avg_power_factor(p, lambda).ln());
    }
  }
  return LogReal::from_log(acc.value());
}

LogReal euler_lower_tail_bound(double lambda, double delta, double x, const PrimeTable& table) {
  require(lambda > 0.0, "lambda>0");
  require(lambda <= x / 10.0, "lambda<=x/10");
  require(delta > 0.0, "delta>0");
  const double ln = log_P_lambda(lambda, table).ln() - lambda * std::log(1.0 / delta) +
                    0.05 * lambda;
  return LogReal::from_log(ln);
}

LogReal drift_bound(double x, double ell) {
  require(ell > 0.5 && ell < 1.0, "1/2<ell<1");
  require(x > 0.0, "x>0");
  const double gap = std::log(1.0 / ell);
  return LogReal::from_log(std::log(3.0) - x * gap * gap / 20.0);
}

ProductBoundTerms product_bound_terms(const BoundParams& params, const PrimeTable& table) {
  require(params.lambda <= static_cast<double>(params.N0) / 10.0, "lambda<=N0/10");
  require(params.ell > 0.5 && params.ell < 1.0, "1/2<ell<1");
  const double n0 = static_cast<double>(params.N0);
  return {euler_lower_tail_bound(params.lambda, params.delta / params.ell, n0, table),
          drift_bound(n0, params.ell)};
}

LogReal product_always_large_bound(const BoundParams& params, const PrimeTable& table) {
  const auto terms = product_bound_terms(params, table);
  return log_add(terms.euler, terms.drift);
}

LogReal log_S(std::int64_t R, int k, double sigma, const PrimeTable& table,
              std::uint64_t zeta_cutoff) {
  require_moment_params(R, k, sigma, table);
  return log_S(R, k, sigma, table, zeta(sigma, zeta_cutoff));
}

LogReal log_S(std::int64_t R, int k, double sigma, const PrimeTable& table,
              const Enclosure& zeta_sigma) {
  require_moment_params(R, k, sigma, table);
  const double two_k = 2.0 * k;
  CompensatedSum small_primes;
  CompensatedSum euler_factors;  // sum_{p<=R} log(1 - p^{-sigma})
  for (std::uint32_t p : table.primes_upto(static_cast<std::uint64_t>(R))) {
    const double q = std::pow(static_cast<double>(p), -sigma / 2.0);
    const LogReal minus = LogReal::from_log(-two_k * std::log1p(-q));
    const LogReal plus = LogReal::from_log(-two_k * std::log1p(q));
    small_primes.add(log_add(minus, plus).ln() - std::numbers::ln2);
    euler_factors.add(std::log1p(-q * q));
  }
  // log of zeta(sigma) / prod_{p<=R} (1 - p^{-sigma})^{-1}
  const double large_primes = std::log(zeta_sigma.upper) + euler_factors.value();
  return LogReal::from_log(small_primes.value() + moment_exponent(k) * large_primes);
}

LogReal tail_single_bound(double x, double delta, int k, double sigma, std::int64_t R,
                          const PrimeTable& table, std::uint64_t zeta_cutoff) {
  require(x > 0.0, "x>0");
  require(delta > 0.0, "delta>0");
  const double s = log_S(R, k, sigma, table, zeta_cutoff).ln();
  return LogReal::from_log(s - 2.0 * k * std::log(delta) - k * (2.0 - sigma) * std::log(x));
}

namespace {

void require_union_params(const BoundParams& params) {
  require(params.delta > 0.0, "delta>0");
  require(params.k * (2.0 - params.sigma) > 1.0, "k(2-sigma)>1");
}

}  // namespace

LogReal tail_union_bound(const BoundParams& params, const PrimeTable& table,
                         std::uint64_t zeta_cutoff) {
  require_union_params(params);
  require_moment_params(params.R, params.k, params.sigma, table);
  return tail_union_bound(params, table, zeta(params.sigma, zeta_cutoff));
}

LogReal tail_union_bound(const BoundParams& params, const PrimeTable& table,
                         const Enclosure& zeta_sigma) {
  require_union_params(params);
  const double a = params.k * (2.0 - params.sigma);
  const double s = log_S(params.R, params.k, params.sigma, table, zeta_sigma).ln();
  const double ln = s - 2.0 * params.k * std::log(params.delta) - std::log(a - 1.0) -
                    (a - 1.0) * std::log(static_cast<double>(params.N0));
  return LogReal::from_log(ln);
}

LogReal tail_union_bound_rigorous(const BoundParams& params, const PrimeTable& table,
                                  std::uint64_t zeta_cutoff) {
  require_union_params(params);
  const double a = params.k * (2.0 - params.sigma);
  const double n0 = static_cast<double>(params.N0);
  const double s = log_S(params.R, params.k, params.sigma, table, zeta_cutoff).ln();
  const LogReal integral =
      LogReal::from_log((1.0 - a) * std::log(n0 - 1.0) - std::log(a - 1.0));
  const LogReal first_term = LogReal::from_log(-a * std::log(n0));
  const double series = log_add(integral, first_term).ln();
  return LogReal::from_log(s - 2.0 * params.k * std::log(params.delta) + series);
}

LogReal bernstein_bound(double variance_sum, double M, double t) {
  if (!(t > 0.0)) throw DomainError("bernstein_bound requires t > 0");
  if (!(M > 0.0)) throw DomainError("bernstein_bound requires M > 0");
  if (!(variance_sum >= 0.0)) throw DomainError("bernstein_bound requires variance_sum >= 0");
  return LogReal::from_log(-(t * t / 2.0) / (variance_sum + M * t / 3.0));
}

std::pair<double, double> moment_factor_sides(std::uint64_t p, int k, double sigma) {
  const double q = std::pow(static_cast<double>(p), -sigma / 2.0);
  const double two_k = 2.0 * k;
  const LogReal minus = LogReal::from_log(-two_k * std::log1p(-q));
  const LogReal plus = LogReal::from_log(-two_k * std::log1p(q));
  const double lhs = log_add(minus, plus).ln() - std::numbers::ln2;
  const double rhs = -moment_exponent(k) * std::log1p(-q * q);
  return {lhs, rhs};
}

BoundReport verify_theorem_1(const BoundParams& params, const PrimeTable& table,
                             std::uint64_t zeta_cutoff) {
  BoundReport report;
  report.params = params;
  report.constraints = check_constraints(params);
  report.valid = std::all_of(report.constraints.begin(), report.constraints.end(),
                             [](const auto& c) { return c.ok; });
  if (!report.valid) return report;

  const auto product = product_bound_terms(params, table);
  const LogReal tail = tail_union_bound(params, table, zeta_cutoff);
  const LogReal product_total = log_add(product.euler, product.drift);
  const std::array<LogReal, 3> parts{product.euler, product.drift, tail};
  const LogReal total = log_sum(parts);

  report.log10_product_bound = product.euler.log10();
  report.log10_drift_bound = product.drift.log10();
  report.log10_tail_bound = tail.log10();
  report.log10_total = total.log10();
  report.pass_product = product_total.log10() <= kLog10ComponentTarget;
  report.pass_tail = tail.log10() <= kLog10ComponentTarget;
  report.pass_total = total.log10() <= kLog10TotalTarget;
  return report;
}

std::uint64_t required_table_limit(const BoundParams& params) {
  const double lam = std::max(0.0, std::floor(10.0 * params.lambda));
  const double r = static_cast<double>(std::max<std::int64_t>(params.R, 2));
  const double need = std::max({2.0, lam, r});
  return static_cast<std::uint64_t>(std::min(need, static_cast<double>(kMaxSieveLimit)));
}

}  // namespace rmf
