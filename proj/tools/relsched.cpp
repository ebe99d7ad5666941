#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "relsched/dp.hpp"
#include "relsched/errors.hpp"
#include "relsched/gen.hpp"
#include "relsched/io.hpp"
#include "relsched/mechanism.hpp"
#include "relsched/oracle.hpp"

using namespace relsched;

namespace {

int run_solve(const std::string& file, bool verify, bool timing) {
  ParsedInstance parsed = load_instance_file(file);
  auto started = std::chrono::steady_clock::now();
  LayeredGraph graph(parsed.instance);
  PathResult path = best_path(graph, parsed.objective);
  long elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  std::vector<std::string> violations;
  if (verify) violations = verify_path(graph, path);
  std::cout << solve_report(parsed.instance, parsed.objective_spec, path,
                            verify ? &violations : nullptr, timing ? elapsed : -1);
  return violations.empty() ? 0 : 1;
}

int run_oracle(const std::string& file, unsigned long long budget) {
  ParsedInstance parsed = load_instance_file(file);
  OracleResult result = brute_force_opt(parsed.instance, parsed.objective, budget);
  std::cout << oracle_report(parsed.instance, parsed.objective_spec, result);
  return 0;
}

int run_compare(const std::string& file, unsigned long long budget) {
  ParsedInstance parsed = load_instance_file(file);
  OracleResult oracle = brute_force_opt(parsed.instance, parsed.objective, budget);
  LayeredGraph graph(parsed.instance);
  PathResult path = best_path(graph, parsed.objective);
  bool pass = ratio_within_bound(parsed.instance, parsed.objective_spec,
                                 oracle.value, path.value);
  std::cout << compare_report(parsed.instance, parsed.objective_spec, oracle.value,
                              path.value, pass);
  return pass ? 0 : 1;
}

int run_payments(const std::string& file, int agent, const std::string& h) {
  ParsedInstance parsed = load_instance_file(file);
  HConvention convention;
  if (h == "zero")
    convention = HConvention::Zero;
  else if (h == "normalize")
    convention = HConvention::NormalizeAtInfinity;
  else
    fail(ErrorCode::ParseError, "--h must be zero or normalize");
  LayeredGraph graph(parsed.instance);
  std::vector<Rat> bids(parsed.instance.m());
  for (std::size_t i = 0; i < parsed.instance.m(); ++i)
    bids[i] = 1 / parsed.instance.machines[i].speed;
  PaymentReport report =
      payment(graph, parsed.objective, agent, bids, convention);
  std::cout << payment_report_text(parsed.objective_spec, report);
  return 0;
}

int run_sweep(const std::string& file, int agent, const std::string& grid_text) {
  ParsedInstance parsed = load_instance_file(file);
  std::vector<Rat> grid;
  std::string token;
  for (char c : grid_text + ",") {
    if (c == ',') {
      if (!token.empty()) grid.push_back(parse_rat(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (grid.empty()) fail(ErrorCode::ParseError, "--grid needs at least one speed");
  LayeredGraph graph(parsed.instance);
  SweepReport report = monotonicity_sweep(graph, parsed.objective, agent, grid);
  std::cout << sweep_report_text(parsed.objective_spec, report);
  return report.violations.empty() ? 0 : 1;
}

int run_gen(unsigned long long seed, int jobs, int machines,
            const std::string& objective, const std::string& out_path) {
  GenOptions options;
  options.seed = seed;
  if (jobs > 0) options.min_jobs = options.max_jobs = jobs;
  if (machines > 0) options.min_machines = options.max_machines = machines;
  GeneratedInstance gen = gen_random_instance(options);
  Instance instance = validate_instance(gen.jobs, gen.machines, gen.r);
  ObjectiveSpec spec;
  if (objective == "makespan" || objective == "cover") {
    spec.kind = objective;
  } else if (objective == "sumf") {
    spec.kind = "sumf";
    spec.p = 2;
    spec.representation = "exact";
  } else {
    fail(ErrorCode::ParseError, "--objective must be makespan, cover or sumf");
  }
  std::string text = serialize_instance(instance, spec);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) fail(ErrorCode::ParseError, "cannot write '" + out_path + "'");
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and truthful-payment toolkit for scheduling on related machines"};
  app.require_subcommand(1);

  std::string file, h_convention = "zero", grid, objective = "makespan", out_path;
  bool verify = false, timing = false;
  int agent = 0, jobs = 0, machines = 0;
  unsigned long long budget = default_oracle_budget();
  unsigned long long seed = 1;

  CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("file", file)->required();
  solve->add_flag("--verify", verify, "re-check the returned schedule");
  solve->add_flag("--timing", timing, "append the elapsed time");

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive exact optimum");
  oracle->add_option("file", file)->required();
  oracle->add_option("--budget", budget, "assignment enumeration budget");

  CLI::App* compare = app.add_subcommand("compare", "solver against the exact optimum");
  compare->add_option("file", file)->required();
  compare->add_option("--budget", budget, "assignment enumeration budget");

  CLI::App* payments = app.add_subcommand("payments", "work curve and payment of one agent");
  payments->set_help_flag("--help", "print help");  // frees -h for the convention flag
  payments->add_option("file", file)->required();
  payments->add_option("--agent", agent, "machine id")->required();
  payments->add_option("--h", h_convention, "zero | normalize");

  CLI::App* sweep = app.add_subcommand("sweep", "agent work across a speed grid");
  sweep->add_option("file", file)->required();
  sweep->add_option("--agent", agent, "machine id")->required();
  sweep->add_option("--grid", grid, "comma-separated speeds")->required();

  CLI::App* gen = app.add_subcommand("gen", "seeded random instance");
  gen->add_option("--seed", seed);
  gen->add_option("--jobs", jobs, "fixed job count");
  gen->add_option("--machines", machines, "fixed machine count");
  gen->add_option("--objective", objective, "makespan | cover | sumf");
  gen->add_option("--out", out_path, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(file, verify, timing);
    if (oracle->parsed()) return run_oracle(file, budget);
    if (compare->parsed()) return run_compare(file, budget);
    if (payments->parsed()) return run_payments(file, agent, h_convention);
    if (sweep->parsed()) return run_sweep(file, agent, grid);
    if (gen->parsed()) return run_gen(seed, jobs, machines, objective, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
