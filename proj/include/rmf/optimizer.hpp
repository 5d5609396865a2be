#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rmf/bound_calculus.hpp"

namespace rmf {

// Relative (lambda, k, R, sigma-1) or absolute (delta, ell) proposal widths.
struct StepScales {
  double lambda = 0.3;
  double delta = 0.03;
  double k = 0.2;
  double sigma = 0.1;
  double R = 0.3;
  double ell = 1e-4;
};

struct SearchSpec {
  BoundParams initial;
  StepScales step_scales;
  int iterations = 2000;
  std::uint64_t seed = 1;
  double shrink_factor = 0.5;
  int shrink_after = 50;  // consecutive rejections before shrinking the steps
  bool optimize_ell = false;
  double lambda_max = 1e4;
  std::int64_t R_max = 100'000;
};

// The three-term certificate objective with a per-sigma zeta cache.
// Infeasible parameters evaluate to LogReal::infinite().
class Objective {
 public:
  Objective(const PrimeTable& table, std::uint64_t zeta_cutoff)
      : table_(table), zeta_cutoff_(zeta_cutoff) {}

  LogReal operator()(const BoundParams& params);

 private:
  const PrimeTable& table_;
  std::uint64_t zeta_cutoff_;
  std::map<double, Enclosure> zeta_cache_;
};

LogReal objective(const BoundParams& params, const PrimeTable& table,
                  std::uint64_t zeta_cutoff);

struct DescentResult {
  BoundParams best;
  double log10_objective = 0.0;
  int accepted_steps = 0;
  // (iteration, log10 objective); entry 0 is the initial point.
  std::vector<std::pair<int, double>> trace;
};

// Seeded random descent: odd iterations perturb one coordinate, even
// iterations all of them; a proposal is kept only on strict improvement.
// DomainError if spec.initial is infeasible or the spec is malformed.
DescentResult random_descent(const SearchSpec& spec, const PrimeTable& table,
                             std::uint64_t zeta_cutoff);

}  // namespace rmf
