#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmf/numerics.hpp"
#include "rmf/prime_engine.hpp"

namespace rmf {

// Smallest x with sum_{n<=x} lambda(n)/n < 0 (Borwein, Ferguson, Mossinghoff).
inline constexpr std::int64_t kN0 = 72'185'376'951'205;

inline constexpr std::uint64_t kDefaultZetaCutoff = 10'000'000;

// Parameters of the positivity certificate. Defaults are the published set.
struct BoundParams {
  double lambda = 700.0;  // Chernoff exponent for the Euler product
  double delta = 0.12;    // threshold shared by the product and the smooth tail
  int k = 48;             // half the moment order
  double sigma = 1.42;    // Dirichlet weight in the moment bound
  std::int64_t R = 10'000;  // small/large prime cutoff
  double ell = 0.9999;    // drift threshold
  std::int64_t N0 = kN0;

  friend bool operator==(const BoundParams&, const BoundParams&) = default;
};

struct ConstraintCheck {
  std::string name;
  bool ok = false;
};

// Named validity predicates, in a fixed order:
//   lambda>0, lambda<=N0/10, 0<delta<1, k>=1, 1<sigma<2, R>=2,
//   2R^sigma>k^2, k(2-sigma)>1, 1/2<ell<1
std::vector<ConstraintCheck> check_constraints(const BoundParams& params);
bool all_constraints_hold(const BoundParams& params);
// Throws ConstraintError naming the first violated predicate.
void require_constraints(const BoundParams& params);

// log P_lambda = sum_{p <= 10 lambda} log(((1+1/p)^lambda + (1-1/p)^lambda)/2).
LogReal log_P_lambda(double lambda, const PrimeTable& table);

// exp(log P_lambda - lambda log(1/delta) + 0.05 lambda); bounds
// P(prod_{p<=x} (1 - f(p)/p)^{-1} <= delta). Requires lambda <= x/10.
LogReal euler_lower_tail_bound(double lambda, double delta, double x, const PrimeTable& table);

// 3 exp(-x (log 1/ell)^2 / 20); requires 1/2 < ell < 1.
LogReal drift_bound(double x, double ell);

// The two summands of the "product stays large for every x >= N0" bound.
struct ProductBoundTerms {
  LogReal euler;  // euler_lower_tail_bound(lambda, delta/ell, N0)
  LogReal drift;  // drift_bound(N0, ell)
};

ProductBoundTerms product_bound_terms(const BoundParams& params, const PrimeTable& table);
LogReal product_always_large_bound(const BoundParams& params, const PrimeTable& table);

// log S(R, k, sigma): the p <= R factors exactly and the p > R factors through
// (zeta(sigma) prod_{p<=R} (1 - p^{-sigma}))^{2k^2+2k}, using the upper end of
// the zeta enclosure.
LogReal log_S(std::int64_t R, int k, double sigma, const PrimeTable& table,
              std::uint64_t zeta_cutoff);
LogReal log_S(std::int64_t R, int k, double sigma, const PrimeTable& table,
              const Enclosure& zeta_sigma);

// S(R, k, sigma) / (delta^{2k} x^{k(2-sigma)}).
LogReal tail_single_bound(double x, double delta, int k, double sigma, std::int64_t R,
                          const PrimeTable& table, std::uint64_t zeta_cutoff);

// S(R,k,sigma) / (delta^{2k} (a-1) N0^{a-1}) with a = k(2-sigma).
LogReal tail_union_bound(const BoundParams& params, const PrimeTable& table,
                         std::uint64_t zeta_cutoff);
LogReal tail_union_bound(const BoundParams& params, const PrimeTable& table,
                         const Enclosure& zeta_sigma);
// Same with sum_{x>=N0} x^{-a} <= (N0-1)^{1-a}/(a-1) + N0^{-a}.
LogReal tail_union_bound_rigorous(const BoundParams& params, const PrimeTable& table,
                                  std::uint64_t zeta_cutoff);

// exp(-(t^2/2) / (variance_sum + M t / 3)).
LogReal bernstein_bound(double variance_sum, double M, double t);

// Per-prime inequality of the moment bound for p > R:
//   ((1-p^{-s/2})^{-2k} + (1+p^{-s/2})^{-2k})/2 <= (1-p^{-s})^{-(2k^2+2k)}.
// Returns (log lhs, log rhs).
std::pair<double, double> moment_factor_sides(std::uint64_t p, int k, double sigma);

struct BoundReport {
  BoundParams params;
  std::vector<ConstraintCheck> constraints;
  bool valid = false;
  // Absent when the parameters are invalid.
  std::optional<double> log10_product_bound;
  std::optional<double> log10_drift_bound;
  std::optional<double> log10_tail_bound;
  std::optional<double> log10_total;
  bool pass_product = false;  // euler + drift <= 5e-46
  bool pass_tail = false;     // tail <= 5e-46
  bool pass_total = false;    // total <= 1e-45
};

// log10(5e-46)
inline const double kLog10ComponentTarget = std::log10(5.0) - 46.0;
inline constexpr double kLog10TotalTarget = -45.0;

BoundReport verify_theorem_1(const BoundParams& params, const PrimeTable& table,
                             std::uint64_t zeta_cutoff = kDefaultZetaCutoff);

// Prime table large enough for every bound at these parameters.
std::uint64_t required_table_limit(const BoundParams& params);

}  // namespace rmf
