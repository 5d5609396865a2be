#include "rmf/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rmf/asymptotics.hpp"
#include "rmf/bound_calculus.hpp"
#include "rmf/errors.hpp"
#include "rmf/optimizer.hpp"
#include "rmf/prime_engine.hpp"
#include "rmf/simulation.hpp"

namespace rmf::cli {

using nlohmann::json;

std::string format_log10(double log10_value) {
  if (std::isinf(log10_value)) return log10_value < 0 ? "0" : "inf";
  if (std::isnan(log10_value)) return "nan";
  double exponent = std::floor(log10_value);
  double mantissa = std::pow(10.0, log10_value - exponent);
  if (mantissa >= 9.95) {
    mantissa /= 10.0;
    exponent += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1fe%+.0f", mantissa, exponent);
  return buf;
}

namespace {

constexpr std::uint64_t kOptimizeZetaCutoff = 100'000;

struct Globals {
  bool json = false;
  bool csv = false;
  unsigned threads = 0;
  std::string out_path;
  std::optional<std::uint64_t> sieve_limit;
  std::optional<std::uint64_t> zeta_cutoff;
};

PrimeTable table_for(const Globals& g, std::uint64_t needed) {
  std::uint64_t limit = std::max<std::uint64_t>(needed, 2);
  if (g.sieve_limit) {
    if (*g.sieve_limit < needed) {
      throw BoundsError("--sieve-limit " + std::to_string(*g.sieve_limit) +
                        " is below the required " + std::to_string(needed));
    }
    limit = *g.sieve_limit;
  }
  return sieve(limit);
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string bound_text(const std::optional<double>& v) {
  return v ? "<= " + format_log10(*v) : "n/a";
}

json params_json(const BoundParams& p) {
  return {{"lambda", p.lambda}, {"delta", p.delta}, {"k", p.k},
          {"sigma", p.sigma},   {"R", p.R},         {"ell", p.ell}};
}

json report_json(const ExperimentReport& r, json params) {
  json stats = json::object();
  for (const auto& [name, value] : r.statistics) stats[name] = value;
  return {{"version", kVersion},     {"experiment", r.experiment}, {"params", std::move(params)},
          {"seeds", r.seeds},        {"trials", r.trials},         {"statistics", stats},
          {"flags", r.flags},        {"pass", r.pass},             {"tolerance", r.tolerance}};
}

void emit_report(const ExperimentReport& r, json params, const Globals& g, std::ostream& out) {
  if (g.csv) {
    out << "trial,seed,statistic\n";
    char buf[64];
    for (const auto& row : r.rows) {
      std::snprintf(buf, sizeof buf, "%.17g", row.statistic);
      out << row.trial << ',' << row.seed << ',' << buf << '\n';
    }
    return;
  }
  if (g.json) {
    out << report_json(r, std::move(params)).dump(2) << '\n';
    return;
  }
  out << r.experiment << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.trials << " trials)\n";
  for (const auto& [name, value] : r.statistics) out << "  " << name << " = " << value << '\n';
  if (r.tolerance != 0.0) out << "  tolerance = " << r.tolerance << '\n';
  for (const auto& f : r.flags) out << "  flag: " << f << '\n';
}

int cmd_verify(const BoundParams& p, const Globals& g, std::ostream& out, std::ostream& err) {
  const auto checks = check_constraints(p);
  std::vector<std::string> violated;
  for (const auto& c : checks) {
    if (!c.ok) violated.push_back(c.name);
  }
  if (!violated.empty()) {
    err << "constraint violated:";
    for (const auto& v : violated) err << ' ' << v;
    err << '\n';
    return kConstraint;
  }
  const std::uint64_t cutoff = g.zeta_cutoff.value_or(kDefaultZetaCutoff);
  const auto table = table_for(g, required_table_limit(p));
  const auto r = verify_theorem_1(p, table, cutoff);

  if (g.json) {
    json j = params_json(p);
    j["version"] = kVersion;
    j["zeta_cutoff"] = cutoff;
    j["log10_product_bound"] = opt_json(r.log10_product_bound);
    j["log10_drift_bound"] = opt_json(r.log10_drift_bound);
    j["log10_tail_bound"] = opt_json(r.log10_tail_bound);
    j["log10_total"] = opt_json(r.log10_total);
    json cs = json::array();
    for (const auto& c : r.constraints) cs.push_back({{"name", c.name}, {"ok", c.ok}});
    j["constraints"] = cs;
    j["pass_product"] = r.pass_product;
    j["pass_tail"] = r.pass_tail;
    j["pass_total"] = r.pass_total;
    out << j.dump(2) << '\n';
  } else {
    out << "lambda=" << p.lambda << " delta=" << p.delta << " k=" << p.k << " sigma=" << p.sigma
        << " R=" << p.R << " ell=" << p.ell << '\n';
    out << "  product never small   " << bound_text(r.log10_product_bound)
        << (r.pass_product ? "  ok" : "  too large") << '\n';
    out << "    drift term          " << bound_text(r.log10_drift_bound) << '\n';
    out << "  smooth tail large     " << bound_text(r.log10_tail_bound)
        << (r.pass_tail ? "  ok" : "  too large") << '\n';
    out << "  total                 " << bound_text(r.log10_total)
        << (r.pass_total ? "  PASS" : "  FAIL") << '\n';
  }
  return r.pass_total ? kPass : kFail;
}

int cmd_optimize(const SearchSpec& spec, const Globals& g, std::ostream& out,
                 std::ostream& err) {
  for (const auto& c : check_constraints(spec.initial)) {
    if (!c.ok) {
      err << "initial point violates constraint: " << c.name << '\n';
      return kConstraint;
    }
  }
  const std::uint64_t cutoff = g.zeta_cutoff.value_or(kOptimizeZetaCutoff);
  const auto needed = std::max<std::uint64_t>(
      {static_cast<std::uint64_t>(std::floor(10.0 * spec.lambda_max)),
       static_cast<std::uint64_t>(spec.R_max), required_table_limit(spec.initial)});
  const auto table = table_for(g, std::min<std::uint64_t>(needed, kMaxSieveLimit));
  const auto r = random_descent(spec, table, cutoff);

  if (g.json) {
    json trace = json::array();
    for (const auto& [it, v] : r.trace) trace.push_back({it, v});
    json params = {{"seed", spec.seed},
                   {"iters", spec.iterations},
                   {"initial", params_json(spec.initial)},
                   {"optimize_ell", spec.optimize_ell},
                   {"lambda_max", spec.lambda_max},
                   {"R_max", spec.R_max},
                   {"zeta_cutoff", cutoff}};
    json j = {{"version", kVersion},
              {"params", params},
              {"best", params_json(r.best)},
              {"log10_objective", r.log10_objective},
              {"accepted_steps", r.accepted_steps},
              {"trace", trace}};
    out << j.dump(2) << '\n';
  } else {
    const auto& b = r.best;
    out << "best: lambda=" << b.lambda << " delta=" << b.delta << " k=" << b.k
        << " sigma=" << b.sigma << " R=" << b.R << " ell=" << b.ell << '\n';
    out << "  objective <= " << format_log10(r.log10_objective) << " after "
        << r.accepted_steps << " accepted steps of " << spec.iterations << '\n';
  }
  return kPass;
}

int cmd_asym(double x, double C1, std::optional<double> C0, const Globals& g,
             std::ostream& out) {
  double c0 = 0.0;
  if (C0) {
    c0 = *C0;
  } else {
    const std::vector<double> grid = {10.0, 100.0, 1000.0, 10000.0};
    c0 = estimate_C0(table_for(g, 100'000), grid);
  }
  const auto consts = AsymptoticConstants::from(c0, C1);
  const auto b = theorem2_bound(x, consts);
  if (g.json) {
    json j = {{"version", kVersion},
              {"x", x},
              {"C0", c0},
              {"C1", C1},
              {"c", consts.c},
              {"k", b.schedule.k},
              {"delta", b.schedule.delta},
              {"sigma", b.schedule.sigma},
              {"lambda", b.product.lambda},
              {"log10_product_bound", b.product.bound.log10()},
              {"log10_tail_bound", b.tail.log10()},
              {"log10_total", b.total.log10()},
              {"implied_C", opt_json(b.implied_C)}};
    out << j.dump(2) << '\n';
  } else {
    out << "x=" << x << " C0=" << c0 << " C1=" << C1 << '\n';
    out << "  k=" << b.schedule.k << " delta=" << b.schedule.delta
        << " sigma=" << b.schedule.sigma << " lambda=" << b.product.lambda << '\n';
    out << "  product " << bound_text(b.product.bound.log10()) << '\n';
    out << "  tail    " << bound_text(b.tail.log10()) << '\n';
    out << "  total   " << bound_text(b.total.log10()) << '\n';
    if (b.implied_C) out << "  implied C = " << *b.implied_C << '\n';
  }
  return kPass;
}

int cmd_primes_count(std::uint64_t limit, const Globals& g, std::ostream& out) {
  const auto table = sieve(limit);
  const auto pi = table.count_upto(limit);
  if (g.json) {
    out << json{{"version", kVersion}, {"limit", limit}, {"pi", pi}}.dump(2) << '\n';
  } else {
    out << "pi(" << limit << ") = " << pi << '\n';
  }
  return kPass;
}

int cmd_convolution(std::uint64_t seed, std::uint64_t limit, const Globals& g,
                    std::ostream& out) {
  const auto table = table_for(g, limit);
  const auto f = sample_cmf(seed, limit, limit, table).as_sequence();
  const auto gseq = convolution_g(f, limit, table);
  bool nonneg = true;
  for (std::uint64_t n = 1; n <= limit; ++n) nonneg = nonneg && gseq[n] >= 0;
  const auto back = dirichlet_convolve(gseq, liouville(limit, table), limit);
  const bool equals = back == f;
  const double residual = turan_identity_check(f, limit, table);
  const bool pass = nonneg && equals && residual <= 1e-10 * static_cast<double>(limit);
  if (g.json) {
    out << json{{"version", kVersion},
                {"seed", seed},
                {"limit", limit},
                {"g_nonnegative", nonneg},
                {"g_star_lambda_equals_f", equals},
                {"identity_residual", residual},
                {"pass", pass}}
               .dump(2)
        << '\n';
  } else {
    out << "g >= 0: " << (nonneg ? "yes" : "no") << '\n'
        << "g * liouville == f: " << (equals ? "yes" : "no") << '\n'
        << "identity residual at x=" << limit << ": " << residual << '\n'
        << (pass ? "PASS" : "FAIL") << '\n';
  }
  return pass ? kPass : kFail;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified bounds for random multiplicative functions", "rmf"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  std::uint64_t sieve_limit = 0;
  std::uint64_t zeta_cutoff = 0;
  app.add_flag("--json", g.json, "Emit a JSON report");
  app.add_flag("--csv", g.csv, "Emit per-trial rows trial,seed,statistic");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware)")
      ->check(CLI::Range(0u, 1024u));
  app.add_option("--out", g.out_path, "Write the report to PATH");
  auto* sieve_opt = app.add_option("--sieve-limit", sieve_limit, "Prime table limit")
                        ->check(CLI::Range(std::uint64_t{2}, kMaxSieveLimit));
  auto* zeta_opt = app.add_option("--zeta-cutoff", zeta_cutoff, "Explicit terms in zeta(sigma)")
                       ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000'000}));

  BoundParams vp;
  auto* verify = app.add_subcommand("verify", "Evaluate the certificate at one parameter set");
  verify->add_option("--lambda", vp.lambda);
  verify->add_option("--delta", vp.delta);
  verify->add_option("--k", vp.k);
  verify->add_option("--sigma", vp.sigma);
  verify->add_option("--R", vp.R);
  verify->add_option("--ell", vp.ell);

  SearchSpec spec;
  spec.initial = {100.0, 0.2, 10, 1.5, 1000, 0.9999};
  auto* optimize = app.add_subcommand("optimize", "Random descent over the parameters");
  optimize->add_option("--seed", spec.seed);
  optimize->add_option("--iters", spec.iterations)->check(CLI::Range(0, 10'000'000));
  optimize->add_option("--init-lambda", spec.initial.lambda);
  optimize->add_option("--init-delta", spec.initial.delta);
  optimize->add_option("--init-k", spec.initial.k);
  optimize->add_option("--init-sigma", spec.initial.sigma);
  optimize->add_option("--init-R", spec.initial.R);
  optimize->add_option("--init-ell", spec.initial.ell);
  optimize->add_flag("--optimize-ell", spec.optimize_ell);
  optimize->add_option("--lambda-max", spec.lambda_max)->check(CLI::Range(1.0, 1e7));
  optimize->add_option("--R-max", spec.R_max)->check(CLI::Range(std::int64_t{2}, std::int64_t{kMaxSieveLimit}));

  double asym_x = 1e20;
  double asym_C1 = default_C1();
  std::optional<double> asym_C0;
  auto* asym = app.add_subcommand("asym", "Asymptotic schedule and bounds at x");
  asym->add_option("--x", asym_x)->check(CLI::Range(kScheduleMinX, 1e300));
  asym->add_option("--C1", asym_C1)->check(CLI::PositiveNumber);
  asym->add_option("--C0", asym_C0)->check(CLI::PositiveNumber);

  auto* primes = app.add_subcommand("primes", "Prime table queries");
  primes->require_subcommand(1);
  std::uint64_t count_limit = 100;
  auto* primes_count = primes->add_subcommand("count", "pi(limit)");
  primes_count->add_option("--limit", count_limit)
      ->check(CLI::Range(std::uint64_t{2}, kMaxSieveLimit));

  std::uint64_t conv_seed = 1;
  std::uint64_t conv_limit = 10'000;
  auto* conv = app.add_subcommand("convolution-check", "Check f = (f * |mu|) * liouville");
  conv->add_option("--seed", conv_seed);
  conv->add_option("--limit", conv_limit)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000}));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo and exact experiments");
  simulate->require_subcommand(1);

  std::uint64_t pos_trials = 100, pos_xmax = 10'000, pos_seed = 1;
  auto* positivity = simulate->add_subcommand("positivity", "Sign of partial sums of f(n)/n");
  positivity->add_option("--trials", pos_trials)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100'000'000}));
  positivity->add_option("--xmax", pos_xmax)->check(CLI::Range(std::uint64_t{1}, kMaxSieveLimit));
  positivity->add_option("--seed", pos_seed);

  std::uint64_t dec_x = 30, dec_seed = 1;
  double dec_cap = 1e12;
  auto* decomp = simulate->add_subcommand("decomp", "Partial sum = Euler product - smooth tail");
  decomp->add_option("--x", dec_x)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{71}));
  decomp->add_option("--cap", dec_cap)->check(CLI::Range(2.0, 1e18));
  decomp->add_option("--seed", dec_seed);

  std::uint64_t mom_x = 10, mom_trials = 1000, mom_seed = 1;
  int mom_k = 1;
  double mom_cap = 1e12;
  auto* moment = simulate->add_subcommand("moment", "Smooth tail moments against the bound");
  moment->add_option("--x", mom_x)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{30}));
  moment->add_option("--k", mom_k)->check(CLI::IsMember({1, 2}));
  moment->add_option("--trials", mom_trials)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100'000'000}));
  moment->add_option("--seed", mom_seed);
  moment->add_option("--cap", mom_cap)->check(CLI::Range(2.0, 1e18));

  std::uint64_t et_n = 20, et_trials = 100'000, et_seed = 1;
  double et_alpha = 2.0;
  std::string et_mode = "exact";
  std::vector<std::uint64_t> et_window;
  auto* etemadi = simulate->add_subcommand("etemadi", "Maximal inequality for signed sums");
  etemadi->add_option("--n", et_n)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{10'000'000}));
  etemadi->add_option("--alpha", et_alpha)->check(CLI::NonNegativeNumber);
  etemadi->add_option("--mode", et_mode)->check(CLI::IsMember({"exact", "mc"}));
  etemadi->add_option("--trials", et_trials)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100'000'000}));
  etemadi->add_option("--seed", et_seed);
  etemadi->add_option("--prime-window", et_window, "Steps 1/p for LO < p <= HI")
      ->expected(2);

  std::uint64_t dr_x = 1000, dr_Y = 1000, dr_trials = 1000, dr_seed = 1;
  double dr_ell = 0.9;
  auto* drift = simulate->add_subcommand("drift", "Euler product drift below ell");
  drift->add_option("--x", dr_x)->check(CLI::Range(std::uint64_t{2}, kMaxSieveLimit / 2));
  drift->add_option("--Y", dr_Y)->check(CLI::Range(std::uint64_t{1}, kMaxSieveLimit / 2));
  drift->add_option("--ell", dr_ell);
  drift->add_option("--trials", dr_trials)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100'000'000}));
  drift->add_option("--seed", dr_seed);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("rmf");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  if (sieve_opt->count() > 0) g.sieve_limit = sieve_limit;
  if (zeta_opt->count() > 0) g.zeta_cutoff = zeta_cutoff;
  if (g.json && g.csv) {
    err << "usage error: --json and --csv are exclusive\n";
    return kUsage;
  }

  std::ofstream file;
  if (!g.out_path.empty()) {
    file.open(g.out_path);
    if (!file) {
      err << "cannot open " << g.out_path << '\n';
      return kUsage;
    }
  }
  std::ostream& sink = g.out_path.empty() ? out : file;

  try {
    if (verify->parsed()) return cmd_verify(vp, g, sink, err);
    if (optimize->parsed()) return cmd_optimize(spec, g, sink, err);
    if (asym->parsed()) return cmd_asym(asym_x, asym_C1, asym_C0, g, sink);
    if (primes_count->parsed()) return cmd_primes_count(count_limit, g, sink);
    if (conv->parsed()) return cmd_convolution(conv_seed, conv_limit, g, sink);

    ExperimentReport report;
    json params;
    if (positivity->parsed()) {
      const auto table = table_for(g, pos_xmax);
      report = positivity_trials(pos_trials, pos_xmax, pos_seed, table, g.threads);
      params = {{"trials", pos_trials}, {"xmax", pos_xmax}, {"seed", pos_seed}};
    } else if (decomp->parsed()) {
      const auto table = table_for(g, dec_x);
      const auto f = sample_cmf(dec_seed, dec_x, dec_x, table);
      report = decomposition_residual(f, dec_x, dec_cap, table);
      params = {{"x", dec_x}, {"cap", dec_cap}, {"seed", dec_seed}};
    } else if (moment->parsed()) {
      const auto table = table_for(g, mom_x);
      report = empirical_moment(mom_x, mom_k, mom_trials, mom_seed, mom_cap, table);
      params = {{"x", mom_x}, {"k", mom_k}, {"trials", mom_trials}, {"seed", mom_seed},
                {"cap", mom_cap}};
    } else if (etemadi->parsed()) {
      std::vector<double> weights;
      params = {{"alpha", et_alpha}, {"mode", et_mode}, {"trials", et_trials}, {"seed", et_seed}};
      if (!et_window.empty()) {
        if (et_window[0] >= et_window[1]) {
          err << "usage error: --prime-window needs LO < HI\n";
          return kUsage;
        }
        weights = prime_window_steps(et_window[0], et_window[1], table_for(g, et_window[1]));
        params["prime_window"] = et_window;
      } else {
        weights = unit_steps(et_n);
        params["n"] = et_n;
      }
      const auto mode = et_mode == "exact" ? EtemadiMode::exact : EtemadiMode::monte_carlo;
      report = etemadi_empirical(weights, et_alpha, mode, et_trials, et_seed);
    } else if (drift->parsed()) {
      const auto table = table_for(g, dr_x + dr_Y);
      report = drift_empirical(dr_x, dr_Y, dr_ell, dr_trials, dr_seed, table);
      params = {{"x", dr_x}, {"Y", dr_Y}, {"ell", dr_ell}, {"trials", dr_trials},
                {"seed", dr_seed}};
    } else {
      err << "usage error: no command\n";
      return kUsage;
    }
    emit_report(report, std::move(params), g, sink);
    return report.pass ? kPass : kFail;
  } catch (const ConstraintError& e) {
    err << "constraint violated: " << e.constraint() << '\n';
    return kConstraint;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace rmf::cli
