#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "rmf/numerics.hpp"
#include "rmf/prime_engine.hpp"

namespace rmf {

struct AsymptoticConstants {
  double C0 = 0.0;  // prod_{p<=10 lambda} (1+1/p) <= C0 log lambda
  double C1 = 0.0;  // sigma = 2 - C1 loglog x / log x
  double c = 0.0;   // exp(-lambda/2) = exp(-exp(c/delta)) with c = 1/(4 C0)

  static AsymptoticConstants from(double C0, double C1);
};

// Smallest C0 with prod_{p<=10 lambda} (1+1/p) <= C0 log lambda on every grid
// point. An empirical witness only. DomainError on an empty grid or lambda <= 1.
double estimate_C0(const PrimeTable& table, std::span<const double> lambda_grid);

// delta * log x must be at least this for the asymptotic product bound.
inline constexpr double kAsymDeltaFloor = 1.0;

struct AsymProductBound {
  LogReal bound;          // lambda log(C0 log lambda) - lambda log(1/delta) + 0.05 lambda
  double lambda = 0.0;    // exp(1/(2 C0 delta))
  double simplified_ln = 0.0;  // -lambda/2
  double c = 0.0;         // 1/(4 C0)
  bool vacuous = false;   // lambda < 2: the closed form for P_lambda does not apply
};

// ConstraintError "delta*log(x)>=1" or "lambda<=x/10".
AsymProductBound asym_product_bound(double delta, double x, const AsymptoticConstants& constants);

struct AsymTailOptions {
  // Explicit cutoff; by default R = ceil(k^{2/sigma}).
  std::optional<std::int64_t> R;
  // Use the x^{k(1-sigma/2)} decay instead of x^{k(2-sigma)}.
  bool statement_exponent = false;
};

// -2k log delta - k(2-sigma) log x + 16 k^{2/sigma} + 4k sum_{p<=R} p^{-sigma/2}.
// With an explicit R the large-prime term is 16 k^2 R^{1-sigma}, which equals
// 16 k^{2/sigma} at R = k^{2/sigma}. ConstraintError "3/2<sigma<2".
LogReal asym_tail_bound(double x, double delta, std::int64_t k, double sigma,
                        const PrimeTable& table, const AsymTailOptions& options = {});

struct Schedule {
  double k = 0.0;  // integral valued; may exceed 64-bit range for huge x
  double delta = 0.0;
  double sigma = 0.0;
};

inline constexpr double kScheduleMinX = 1e6;

// k = round(x^{1/loglog x}), delta = loglog x / log x,
// sigma = 2 - C1 loglog x / log x. DomainError for x < 1e6.
Schedule theorem2_schedule(double x, double C1);

// Smallest C1 for which 2L - C1 L/2 + 100 <= -C1 L/3 with L = loglog x,
// i.e. C1 >= 12 + 600/L.
double c1_threshold(double x);
// ceil(c1_threshold(1e20)).
double default_C1();

struct Theorem2Bound {
  Schedule schedule;
  AsymProductBound product;
  LogReal tail;   // exp(-C1 k loglog x / 3)
  LogReal total;
  // C with total = exp(-exp(log x / (C loglog x))); absent when total >= 1/e.
  std::optional<double> implied_C;
};

Theorem2Bound theorem2_bound(double x, const AsymptoticConstants& constants);

// (4 sum_{p<=R} p^{-sigma/2}, 5 loglog R) for the diagnostic comparison.
std::pair<double, double> small_prime_sum_vs_loglog(std::int64_t R, double sigma,
                                                    const PrimeTable& table);

}  // namespace rmf
