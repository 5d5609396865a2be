#include "rmf/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rmf/errors.hpp"

namespace rmf {

AsymptoticConstants AsymptoticConstants::from(double C0, double C1) {
  if (!(C0 > 0.0) || !(C1 > 0.0) || !std::isfinite(C0) || !std::isfinite(C1)) {
    throw DomainError("asymptotic constants must be positive and finite");
  }
  return {C0, C1, 1.0 / (4.0 * C0)};
}

double estimate_C0(const PrimeTable& table, std::span<const double> lambda_grid) {
  if (lambda_grid.empty()) throw DomainError("estimate_C0 needs a nonempty grid");
  double worst = 0.0;
  for (double lambda : lambda_grid) {
    if (!(lambda > 1.0)) throw DomainError("estimate_C0 needs lambda > 1");
    const double cutoff = std::floor(10.0 * lambda);
    if (cutoff > static_cast<double>(table.limit())) {
      throw BoundsError("estimate_C0 needs primes up to " + std::to_string(cutoff));
    }
    CompensatedSum log_product;
    for (std::uint32_t p : table.primes_upto(static_cast<std::uint64_t>(cutoff))) {
      log_product.add(std::log1p(1.0 / p));
    }
    worst = std::max(worst, std::exp(log_product.value()) / std::log(lambda));
  }
  return worst;
}

AsymProductBound asym_product_bound(double delta, double x, const AsymptoticConstants& constants) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConstraintError("0<delta<1");
  if (!(x > 1.0)) throw ConstraintError("x>1");
  const double log_x = std::log(x);
  if (delta * log_x < kAsymDeltaFloor) throw ConstraintError("delta*log(x)>=1");

  AsymProductBound out;
  const double log_lambda = 1.0 / (2.0 * constants.C0 * delta);
  if (log_lambda > log_x - std::log(10.0)) throw ConstraintError("lambda<=x/10");
  out.lambda = std::exp(log_lambda);
  out.c = 1.0 / (4.0 * constants.C0);
  out.simplified_ln = -out.lambda / 2.0;
  if (out.lambda < 2.0) {
    out.vacuous = true;
    out.bound = LogReal::one();
    return out;
  }
  const double lam = out.lambda;
  out.bound = LogReal::from_log(lam * std::log(constants.C0 * log_lambda) -
                                lam * std::log(1.0 / delta) + 0.05 * lam);
  return out;
}

LogReal asym_tail_bound(double x, double delta, std::int64_t k, double sigma,
                        const PrimeTable& table, const AsymTailOptions& options) {
  if (!(sigma > 1.5 && sigma < 2.0)) throw ConstraintError("3/2<sigma<2");
  if (k < 1) throw ConstraintError("k>=1");
  if (!(delta > 0.0)) throw ConstraintError("delta>0");
  if (!(x > 0.0)) throw ConstraintError("x>0");
  const double kk = static_cast<double>(k);

  double large_primes = 0.0;
  std::int64_t R = 0;
  if (options.R) {
    R = *options.R;
    if (R < 1) throw ConstraintError("R>=1");
    if (!(2.0 * std::pow(static_cast<double>(R), sigma) > kk * kk)) {
      throw ConstraintError("2R^sigma>k^2");
    }
    large_primes = 16.0 * kk * kk * std::pow(static_cast<double>(R), 1.0 - sigma);
  } else {
    const double r = std::pow(kk, 2.0 / sigma);
    R = static_cast<std::int64_t>(std::ceil(r));
    large_primes = 16.0 * r;
  }
  if (static_cast<std::uint64_t>(R) > table.limit()) {
    throw BoundsError("asym_tail_bound needs primes up to " + std::to_string(R));
  }
  const double small_primes = R >= 2 ? prime_sum_upto(sigma / 2.0, R, table) : 0.0;
  const double decay = options.statement_exponent ? kk * (1.0 - sigma / 2.0) : kk * (2.0 - sigma);
  const double ln = -2.0 * kk * std::log(delta) - decay * std::log(x) + large_primes +
                    4.0 * kk * small_primes;
  return LogReal::from_log(ln);
}

Schedule theorem2_schedule(double x, double C1) {
  if (!(x >= kScheduleMinX)) throw DomainError("theorem2_schedule requires x >= 1e6");
  if (!(C1 > 0.0)) throw DomainError("C1 must be positive");
  const double log_x = std::log(x);
  const double loglog_x = std::log(log_x);
  Schedule s;
  s.k = std::max(1.0, std::round(std::exp(log_x / loglog_x)));
  s.delta = loglog_x / log_x;
  s.sigma = 2.0 - C1 * loglog_x / log_x;
  return s;
}

double c1_threshold(double x) {
  const double loglog_x = std::log(std::log(x));
  return 12.0 + 600.0 / loglog_x;
}

double default_C1() { return std::ceil(c1_threshold(1e20)); }

Theorem2Bound theorem2_bound(double x, const AsymptoticConstants& constants) {
  Theorem2Bound out;
  out.schedule = theorem2_schedule(x, constants.C1);
  out.product = asym_product_bound(out.schedule.delta, x, constants);
  const double loglog_x = std::log(std::log(x));
  out.tail = LogReal::from_log(-constants.C1 * out.schedule.k * loglog_x / 3.0);
  out.total = log_add(out.product.bound, out.tail);
  const double decay = -out.total.ln();
  if (decay > 1.0) out.implied_C = std::log(x) / (loglog_x * std::log(decay));
  return out;
}

std::pair<double, double> small_prime_sum_vs_loglog(std::int64_t R, double sigma,
                                                    const PrimeTable& table) {
  if (R < 3) throw DomainError("loglog R needs R >= 3");
  return {4.0 * prime_sum_upto(sigma / 2.0, R, table),
          5.0 * std::log(std::log(static_cast<double>(R)))};
}

}  // namespace rmf
