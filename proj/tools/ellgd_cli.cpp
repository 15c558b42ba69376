// Command line harness: run the solvers, reproduce the step-size-rule
// comparisons, print rate tables, and drive the verification suite.

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellgd/gd_solver.hpp"
#include "ellgd/qcalc.hpp"
#include "ellgd/rates.hpp"
#include "ellgd/sgd_solver.hpp"
#include "ellgd/trace_io.hpp"
#include "ellgd/verify.hpp"

using namespace ellgd;

namespace {

Problem load_problem(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') {
    return problem_from_json_string(spec);
  }
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open problem file: " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    return problem_from_json_string(ss.str());
  }
  return builtin(spec);
}

// "certified" keeps the problem's own model; a JSON object replaces it.
void apply_ell(Problem& problem, const std::string& ell_spec) {
  if (ell_spec == "certified") {
    if (!problem.certified_ell) {
      throw std::invalid_argument("problem " + problem.name +
                                  " has no certified ell model; pass --ell");
    }
    return;
  }
  problem.certified_ell = EllModel::from_json_string(ell_spec);
}

Vec parse_x0(const std::string& text, int dim) {
  Vec x;
  std::istringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    x.push_back(std::stod(field));
  }
  if (static_cast<int>(x.size()) != dim) {
    throw std::invalid_argument("--x0 must have " + std::to_string(dim) +
                                " comma-separated coordinates");
  }
  return x;
}

// paper | lower | fixed:<gamma>
StepRule parse_rule(const std::string& text) {
  if (text == "paper") return StepRule::paper_integral();
  if (text == "lower") return StepRule::lower_bound();
  if (text.rfind("fixed:", 0) == 0) {
    return StepRule::fixed(std::stod(text.substr(6)));
  }
  throw std::invalid_argument("unknown rule '" + text +
                              "' (expected paper, lower, or fixed:<gamma>)");
}

void print_summary(const Trace& t) {
  const TraceRecord& last = t.final_record();
  std::printf("%s %ld %.17g %.17g\n", to_string(t.status).c_str(),
              t.iterations(), last.f_val, last.grad_norm);
}

nlohmann::json summary_json(const Trace& t) {
  const TraceRecord& last = t.final_record();
  return {{"status", to_string(t.status)},
          {"iterations", t.iterations()},
          {"f_final", last.f_val},
          {"grad_final", last.grad_norm}};
}

struct SolveFlags {
  std::string problem;
  std::string ell = "certified";
  std::string x0 = "0";
  std::string rule = "paper";
  std::optional<double> gap_tol;
  std::optional<double> grad_tol;
  long max_iters = 200000;
  bool safeguard = false;
  std::string out;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--problem", f.problem,
                  "builtin name, inline JSON descriptor, or .json file")
      ->required();
  cmd->add_option("--ell", f.ell, "'certified' or an ell JSON descriptor");
  cmd->add_option("--x0", f.x0, "starting point, comma-separated");
  cmd->add_option("--gap-tol", f.gap_tol, "stop when f - f* <= tol");
  cmd->add_option("--grad-tol", f.grad_tol, "stop when ||grad f||^2 <= tol");
  cmd->add_option("--max-iters", f.max_iters, "iteration cap");
  cmd->add_flag("--safeguard", f.safeguard, "halve steps that leave the domain");
}

int cmd_solve(const SolveFlags& f) {
  Problem problem = load_problem(f.problem);
  apply_ell(problem, f.ell);
  SolverConfig cfg;
  cfg.f_gap_tol = f.gap_tol;
  cfg.grad_tol = f.grad_tol;
  cfg.max_iters = f.max_iters;
  cfg.rule = parse_rule(f.rule);
  cfg.safeguard = f.safeguard;
  const Trace t = solve(problem, parse_x0(f.x0, problem.dim), cfg);
  if (!f.out.empty()) write_trace_csv(t, f.out);
  print_summary(t);
  return 0;
}

int cmd_compare(const SolveFlags& f, const std::vector<std::string>& runs,
                const std::string& json_out) {
  Problem base = load_problem(f.problem);
  nlohmann::json rows = nlohmann::json::array();
  std::printf("%-40s %-13s %10s %22s\n", "run", "status", "iters", "f_final");
  for (const std::string& spec : runs) {
    // RULE[@ELL] with ELL defaulting to "certified".
    const auto at = spec.find('@');
    const std::string rule_text = spec.substr(0, at);
    const std::string ell_text =
        at == std::string::npos ? std::string("certified") : spec.substr(at + 1);
    Problem problem = base;
    apply_ell(problem, ell_text);
    SolverConfig cfg;
    cfg.f_gap_tol = f.gap_tol;
    cfg.grad_tol = f.grad_tol;
    cfg.max_iters = f.max_iters;
    cfg.rule = parse_rule(rule_text);
    cfg.safeguard = f.safeguard;
    const Trace t = solve(problem, parse_x0(f.x0, problem.dim), cfg);
    std::printf("%-40s %-13s %10ld %22.15g\n", spec.c_str(),
                to_string(t.status).c_str(), t.iterations(),
                t.final_record().f_val);
    nlohmann::json row = summary_json(t);
    row["run"] = spec;
    rows.push_back(row);
  }
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    out << rows.dump(2) << '\n';
  }
  return 0;
}

struct RateFlags {
  std::string setting = "nonconvex";
  std::string ell;
  std::optional<double> delta_f, radius, grad_bound, grad0, sigma, delta;
  double epsilon = 1e-2;
  std::string json_out;
};

int cmd_rates(const RateFlags& f) {
  RateQuery q;
  q.model = EllModel::from_json_string(f.ell);
  q.Delta = f.delta_f;
  q.R = f.radius;
  q.M = f.grad_bound;
  q.M0 = f.grad0;
  q.epsilon = f.epsilon;
  q.sigma = f.sigma;
  q.delta = f.delta;

  RateReport report;
  if (f.setting == "nonconvex") {
    q.setting = Setting::Nonconvex;
    report = nonconvex_rate(q);
  } else if (f.setting == "convex") {
    q.setting = Setting::Convex;
    report = convex_rate(q);
  } else if (f.setting == "sgd") {
    q.setting = Setting::SgdNonconvex;
    report = sgd_rate(q);
  } else {
    throw std::invalid_argument("--setting must be nonconvex, convex, or sgd");
  }

  std::printf("formula: %s\n", report.formula_id.c_str());
  for (const RateTerm& t : report.terms) {
    std::printf("  %-90s %.6g%s\n", t.name.c_str(), t.value,
                t.explicit_constants ? "" : "  (up to constants)");
  }
  std::printf("iterations: %.6g\n", report.iterations);
  if (report.batch) std::printf("batch: %.6g\n", *report.batch);
  if (report.total) std::printf("total gradients: %.6g\n", *report.total);
  for (const std::string& note : report.applicability_notes) {
    std::printf("note: %s\n", note.c_str());
  }
  if (!f.json_out.empty()) {
    std::ofstream out(f.json_out);
    out << report.to_json_string() << '\n';
  }
  return 0;
}

struct SgdFlags {
  std::string problem;
  std::string ell = "certified";
  std::string x0 = "0";
  double sigma = 0.0;
  double epsilon = 1e-2;
  double delta = 0.1;
  long big_t = 1000;
  std::uint64_t seed = 0;
  long seeds = 1;
  std::optional<long> batch;
  bool no_surrogate_stop = false;
  std::string out;
};

int cmd_sgd(const SgdFlags& f) {
  Problem problem = load_problem(f.problem);
  apply_ell(problem, f.ell);
  const Vec x0 = parse_x0(f.x0, problem.dim);
  const StochasticOracle oracle(problem, f.sigma, 0);
  SgdConfig cfg;
  cfg.epsilon = f.epsilon;
  cfg.delta = f.delta;
  cfg.T = f.big_t;
  cfg.sigma = f.sigma;
  cfg.batch_override = f.batch;
  cfg.surrogate_stop = !f.no_surrogate_stop;

  if (f.seeds <= 1) {
    cfg.seed = f.seed;
    const Trace t = sgd_solve(oracle, x0, cfg);
    if (!f.out.empty()) write_trace_csv(t, f.out);
    print_summary(t);
    return 0;
  }

  long successes = 0;
  for (long s = 0; s < f.seeds; ++s) {
    cfg.seed = f.seed + static_cast<std::uint64_t>(s);
    const Trace t = sgd_solve(oracle, x0, cfg);
    bool ok = false;
    for (const TraceRecord& r : t.records) {
      if (r.true_grad_norm * r.true_grad_norm <= f.epsilon) ok = true;
    }
    if (ok) ++successes;
  }
  const double rate = static_cast<double>(successes) / static_cast<double>(f.seeds);
  std::printf("seeds %ld successes %ld success_rate %.17g\n", f.seeds,
              successes, rate);
  if (!f.out.empty()) {
    std::ofstream out(f.out);
    out << nlohmann::json{{"seeds", f.seeds},
                          {"successes", successes},
                          {"success_rate", rate}}
               .dump(2)
        << '\n';
  }
  return 0;
}

struct VerifyFlags {
  std::string problem = "all";
  long samples = 1000;
  std::uint64_t seed = 1;
};

struct VerifyCase {
  Problem problem;
  Vec x_opt;
  Vec x0;
  SolverConfig traj_cfg;
};

std::vector<VerifyCase> verify_cases(const std::string& which) {
  std::vector<VerifyCase> cases;
  auto gap = [](double tol) {
    SolverConfig c;
    c.f_gap_tol = tol;
    return c;
  };
  auto grad = [](double tol) {
    SolverConfig c;
    c.grad_tol = tol;
    return c;
  };
  if (which == "all" || which == "log_barrier") {
    cases.push_back({builtin("log_barrier"), {0.03}, {1e-7}, gap(1e-5)});
  }
  if (which == "all" || which == "exp_sum") {
    cases.push_back({builtin("exp_sum"), {-1.0}, {-3.0}, gap(1e-10)});
  }
  if (which == "all" || which == "exp_drift") {
    cases.push_back({builtin("exp_drift", {{"mu", 1.0}, {"L1", 1.0}}),
                     {2.0},
                     {3.0},
                     gap(1e-9)});
  }
  if (which == "all" || which == "quadratic") {
    cases.push_back({builtin("quadratic", {{"L", 2.0}}), {1.5}, {3.0}, grad(1e-20)});
  }
  if (which == "all" || which == "neg_log") {
    cases.push_back({builtin("neg_log"), {0.5}, {0.5}, grad(1e-2)});
  }
  if (cases.empty()) {
    throw std::invalid_argument("--problem must be 'all' or a certified builtin");
  }
  return cases;
}

void print_report(const CheckReport& r, bool expected_fail = false) {
  std::printf("%-40s samples %6ld violations %5ld errors %3ld worst_margin % .3e tol %.0e%s\n",
              r.check_id.c_str(), r.samples, r.violations, r.errors,
              r.worst_margin, r.tolerance, expected_fail ? "  [expected-fail]" : "");
}

int cmd_verify(const VerifyFlags& f) {
  bool any_violation = false;
  for (const VerifyCase& vc : verify_cases(f.problem)) {
    const CheckReport l1 = check_gradient_deviation(vc.problem, f.samples, f.seed);
    const CheckReport l2 = check_upper_bound(vc.problem, f.samples, f.seed + 1);
    const CheckReport opt =
        check_optimality(vc.problem, vc.x_opt, f.samples, f.seed + 2);
    print_report(l1);
    print_report(l2);
    print_report(opt);
    any_violation |= l1.violations || l2.violations || opt.violations;

    const Trace t = solve(vc.problem, vc.x0, vc.traj_cfg);
    for (const CheckReport& r : check_trajectory(t, vc.problem)) {
      print_report(r);
      any_violation |= r.violations > 0;
    }
  }

  if (f.problem == "all" || f.problem == "log_barrier") {
    // Negative control: an undersized certificate must be caught. Excluded
    // from the exit status.
    Problem control = builtin("log_barrier");
    control.certified_ell = EllModel::constant(800.0);
    control.name = "log_barrier_undersized_control";
    const CheckReport neg = check_gradient_deviation(control, f.samples, f.seed + 3);
    print_report(neg, /*expected_fail=*/true);
    if (neg.violations == 0) {
      std::fprintf(stderr, "negative control failed to produce violations\n");
      any_violation = true;
    }
  }
  return any_violation ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient descent with the integral step size rule for "
               "generalized smoothness"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run one configuration, write a CSV trace");
  add_solve_flags(solve_cmd, solve_flags);
  solve_cmd->add_option("--rule", solve_flags.rule, "paper | lower | fixed:<gamma>");
  solve_cmd->add_option("--out", solve_flags.out, "trace CSV path");

  SolveFlags compare_flags;
  std::vector<std::string> compare_runs;
  std::string compare_json;
  CLI::App* compare_cmd = app.add_subcommand("compare", "run several step rules on one problem");
  add_solve_flags(compare_cmd, compare_flags);
  compare_cmd->add_option("--run", compare_runs,
                          "RULE[@ELL], e.g. paper, paper@{\"family\":...}, fixed:1e-9")
      ->required()
      ->expected(-2);
  compare_cmd->add_option("--out", compare_json, "JSON summary path");

  RateFlags rate_flags;
  CLI::App* rates_cmd = app.add_subcommand("rates", "theoretical iteration counts");
  rates_cmd->add_option("--setting", rate_flags.setting, "nonconvex | convex | sgd");
  rates_cmd->add_option("--ell", rate_flags.ell, "ell JSON descriptor")->required();
  rates_cmd->add_option("--delta-f", rate_flags.delta_f, "f(x0) - f*");
  rates_cmd->add_option("--radius", rate_flags.radius, "||x0 - x*||");
  rates_cmd->add_option("--grad-bound", rate_flags.grad_bound, "uniform gradient bound M");
  rates_cmd->add_option("--grad0", rate_flags.grad0, "||grad f(x0)||");
  rates_cmd->add_option("--epsilon", rate_flags.epsilon, "target accuracy");
  rates_cmd->add_option("--sigma", rate_flags.sigma, "noise level (sgd)");
  rates_cmd->add_option("--delta", rate_flags.delta, "failure probability (sgd)");
  rates_cmd->add_option("--json", rate_flags.json_out, "machine-readable output path");

  SgdFlags sgd_flags;
  CLI::App* sgd_cmd = app.add_subcommand("sgd", "stochastic solver with the ratio-scaled step");
  sgd_cmd->add_option("--problem", sgd_flags.problem)->required();
  sgd_cmd->add_option("--ell", sgd_flags.ell);
  sgd_cmd->add_option("--x0", sgd_flags.x0);
  sgd_cmd->add_option("--sigma", sgd_flags.sigma);
  sgd_cmd->add_option("--epsilon", sgd_flags.epsilon);
  sgd_cmd->add_option("--delta", sgd_flags.delta);
  sgd_cmd->add_option("--big-t", sgd_flags.big_t, "iteration budget T");
  sgd_cmd->add_option("--seed", sgd_flags.seed);
  sgd_cmd->add_option("--seeds", sgd_flags.seeds, "run this many seeds, report success rate");
  sgd_cmd->add_option("--batch", sgd_flags.batch, "override the computed batch size");
  sgd_cmd->add_flag("--no-surrogate-stop", sgd_flags.no_surrogate_stop);
  sgd_cmd->add_option("--out", sgd_flags.out, "trace CSV (single seed) or JSON summary");

  VerifyFlags verify_flags;
  CLI::App* verify_cmd = app.add_subcommand("verify", "sampled inequality checks");
  verify_cmd->add_option("--problem", verify_flags.problem, "'all' or a builtin name");
  verify_cmd->add_option("--samples", verify_flags.samples);
  verify_cmd->add_option("--seed", verify_flags.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // flag errors exit 2; --help exits 0
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_flags);
    if (compare_cmd->parsed()) return cmd_compare(compare_flags, compare_runs, compare_json);
    if (rates_cmd->parsed()) return cmd_rates(rate_flags);
    if (sgd_cmd->parsed()) return cmd_sgd(sgd_flags);
    if (verify_cmd->parsed()) return cmd_verify(verify_flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
