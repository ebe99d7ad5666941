#pragma once

#include <string>

#include "relsched/mechanism.hpp"
#include "relsched/model.hpp"
#include "relsched/oracle.hpp"

namespace relsched {

// The textual instance description as stored in a file: jobs, machines,
// precision r and the objective (for sumf: exponent and representation).
struct ObjectiveSpec {
  std::string kind = "makespan";        // makespan | cover | sumf
  Rat p = 2;                            // sumf only
  std::string representation = "exact"; // exact | piecewise
};

struct ParsedInstance {
  Instance instance;
  ObjectiveSpec objective_spec;
  Objective objective;
};

ParsedInstance parse_instance_text(const std::string& text);
ParsedInstance load_instance_file(const std::string& path);
std::string serialize_instance(const Instance& instance, const ObjectiveSpec& spec);

// Builds the Objective from its spec; piecewise sumf derives the load range
// from the instance (smallest job on the fastest machine up to everything on
// the slowest).
Objective build_objective(const Instance& instance, const ObjectiveSpec& spec);

// Line-oriented reports with a stable field order; rationals always as
// canonical num/den strings.
std::string solve_report(const Instance& instance, const ObjectiveSpec& spec,
                         const PathResult& path,
                         const std::vector<std::string>* verify_violations,
                         long elapsed_us);
std::string oracle_report(const Instance& instance, const ObjectiveSpec& spec,
                          const OracleResult& result);
std::string compare_report(const Instance& instance, const ObjectiveSpec& spec,
                           const Rat& oracle_value, const Rat& solver_value,
                           bool pass);
std::string payment_report_text(const ObjectiveSpec& spec, const PaymentReport& report);
std::string sweep_report_text(const ObjectiveSpec& spec, const SweepReport& report);

// Approximation bound of the solver value against the exact optimum for the
// given objective at the instance's precision (e.g. 23/16 for makespan at
// r=5); for sumf the exponent is rounded up to keep the bound exact.
Rat approximation_bound(const Instance& instance, const ObjectiveSpec& spec);
bool ratio_within_bound(const Instance& instance, const ObjectiveSpec& spec,
                        const Rat& oracle_value, const Rat& solver_value);

}  // namespace relsched
