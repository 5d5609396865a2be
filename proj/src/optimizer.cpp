#include "rmf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rmf/errors.hpp"

namespace rmf {

LogReal Objective::operator()(const BoundParams& params) {
  if (!all_constraints_hold(params)) return LogReal::infinite();
  if (required_table_limit(params) > table_.limit()) return LogReal::infinite();
  try {
    auto it = zeta_cache_.find(params.sigma);
    if (it == zeta_cache_.end()) {
      it = zeta_cache_.emplace(params.sigma, zeta(params.sigma, zeta_cutoff_)).first;
    }
    const LogReal product = product_always_large_bound(params, table_);
    const LogReal tail = tail_union_bound(params, table_, it->second);
    return log_add(product, tail);
  } catch (const Error&) {
    return LogReal::infinite();
  }
}

LogReal objective(const BoundParams& params, const PrimeTable& table,
                  std::uint64_t zeta_cutoff) {
  Objective eval(table, zeta_cutoff);
  return eval(params);
}

namespace {

enum Coordinate { kLambda, kDelta, kK, kSigma, kR, kEll };

constexpr double kEdge = 1e-9;

BoundParams perturb(const BoundParams& from, Coordinate c, const StepScales& s,
                    const SearchSpec& spec, double z) {
  BoundParams to = from;
  switch (c) {
    case kLambda:
      to.lambda = std::min(spec.lambda_max, from.lambda * std::exp(s.lambda * z));
      break;
    case kDelta:
      to.delta = std::clamp(from.delta + s.delta * z, kEdge, 1.0 - kEdge);
      break;
    case kK: {
      int k = static_cast<int>(std::lround(from.k * std::exp(s.k * z)));
      if (k == from.k) k += z > 0 ? 1 : -1;
      to.k = std::max(1, k);
      break;
    }
    case kSigma: {
      const double gap = std::clamp((from.sigma - 1.0) * std::exp(s.sigma * z), kEdge,
                                    1.0 - kEdge);
      to.sigma = 1.0 + gap;
      break;
    }
    case kR: {
      const double r = std::round(static_cast<double>(from.R) * std::exp(s.R * z));
      to.R = std::clamp<std::int64_t>(static_cast<std::int64_t>(r), 2, spec.R_max);
      break;
    }
    case kEll:
      to.ell = std::clamp(from.ell + s.ell * z, 0.5 + kEdge, 1.0 - kEdge);
      break;
  }
  return to;
}

void validate(const SearchSpec& spec) {
  if (spec.iterations < 1) throw DomainError("iterations must be at least 1");
  const auto& s = spec.step_scales;
  if (!(s.lambda > 0 && s.delta > 0 && s.k > 0 && s.sigma > 0 && s.R > 0)) {
    throw DomainError("step scales must be positive");
  }
  if (spec.optimize_ell && !(s.ell > 0)) throw DomainError("ell step scale must be positive");
  if (!(spec.shrink_factor > 0.0 && spec.shrink_factor < 1.0)) {
    throw DomainError("shrink_factor must lie in (0, 1)");
  }
  if (spec.shrink_after < 1) throw DomainError("shrink_after must be at least 1");
}

}  // namespace

DescentResult random_descent(const SearchSpec& spec, const PrimeTable& table,
                             std::uint64_t zeta_cutoff) {
  validate(spec);
  Objective eval(table, zeta_cutoff);
  LogReal best_value = eval(spec.initial);
  if (best_value.is_infinite()) throw DomainError("initial parameters are infeasible");

  std::vector<Coordinate> active{kLambda, kDelta, kK, kSigma, kR};
  if (spec.optimize_ell) active.push_back(kEll);

  DescentResult result;
  result.best = spec.initial;
  result.trace.emplace_back(0, best_value.log10());

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
  StepScales scales = spec.step_scales;
  int rejections = 0;

  for (int iter = 1; iter <= spec.iterations; ++iter) {
    BoundParams proposal = result.best;
    if (iter % 2 == 1) {
      proposal = perturb(proposal, active[pick(rng)], scales, spec, normal(rng));
    } else {
      for (Coordinate c : active) proposal = perturb(proposal, c, scales, spec, normal(rng));
    }
    const LogReal value = eval(proposal);
    // Compared on the reported scale so the trace is strictly decreasing.
    if (value.log10() < best_value.log10()) {
      best_value = value;
      result.best = proposal;
      ++result.accepted_steps;
      result.trace.emplace_back(iter, value.log10());
      rejections = 0;
    } else if (++rejections >= spec.shrink_after) {
      scales.lambda *= spec.shrink_factor;
      scales.delta *= spec.shrink_factor;
      scales.k *= spec.shrink_factor;
      scales.sigma *= spec.shrink_factor;
      scales.R *= spec.shrink_factor;
      scales.ell *= spec.shrink_factor;
      rejections = 0;
    }
  }
  result.log10_objective = best_value.log10();
  return result;
}

}  // namespace rmf
