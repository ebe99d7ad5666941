#pragma once

#include <optional>
#include <vector>

#include "relsched/rational.hpp"

namespace relsched {

struct Machine {
  int id = 0;
  Rat speed;
};

// Jobs are kept sorted by non-decreasing size, stable on their original
// input position; job indices used everywhere else refer to this sorted
// order (0-based internally, 1-based in reports).
struct Instance {
  std::vector<Rat> jobs;
  std::vector<int> input_pos;  // original position of each sorted job
  std::vector<Machine> machines;
  int r = 5;
  Rat eps;  // 2^-r
  bool low_precision_warning = false;

  std::size_t n() const { return jobs.size(); }
  std::size_t m() const { return machines.size(); }
  Rat total_size() const;
  int machine_index(int id) const;  // index into machines, -1 if absent
};

// Enforces the model conventions: positive sizes/speeds, ascending jobs,
// eps = 2^-r, warning flag when the precision guarantee does not apply.
Instance validate_instance(const std::vector<Rat>& jobs,
                           const std::vector<Machine>& machines, int r);

// Machine ids sorted by (speed ascending, id ascending). Layer i of the
// solver corresponds to position i of this permutation.
struct MachineOrder {
  std::vector<int> ids;
  std::vector<Rat> speeds;  // aligned with ids
};

MachineOrder machine_order(const std::vector<Machine>& machines);
MachineOrder machine_order(const Instance& instance);

struct Schedule {
  std::vector<int> assignment;  // job index -> machine id
  std::vector<Rat> works;       // aligned with instance.machines
  std::vector<Rat> loads;       // aligned with instance.machines

  Rat work_of(const Instance& instance, int machine_id) const;
  Rat load_of(const Instance& instance, int machine_id) const;
};

// Builds the derived works/loads and checks conservation of total size. The
// three-argument form takes speeds from `machines` (same id set as the
// instance), for solves under modified speeds.
Schedule make_schedule(const Instance& instance, std::vector<int> assignment);
Schedule make_schedule(const Instance& instance, const std::vector<Machine>& machines,
                       std::vector<int> assignment);

// Convex strictly increasing cost of a single machine load. Either an exact
// integer power x^p (p >= 2) or a piecewise-linear function given by
// breakpoints (ascending, starting at 0) and values.
class WellBehavedFn {
 public:
  static WellBehavedFn exact_power(unsigned long p);
  static WellBehavedFn piecewise(std::vector<Rat> breakpoints,
                                 std::vector<Rat> values);

  bool is_exact_power() const { return exact_power_.has_value(); }
  unsigned long power() const { return *exact_power_; }
  const std::vector<Rat>& breakpoints() const { return breakpoints_; }
  const std::vector<Rat>& values() const { return values_; }
  // Slope of segment k (from breakpoint k to k+1); the last entry extends
  // beyond the final breakpoint.
  const std::vector<Rat>& slopes() const { return slopes_; }
  // Slope of the piece immediately right of x (piecewise form only).
  const Rat& slope_right_of(const Rat& x) const;

  // Exact evaluation. Piecewise: interpolation on the stored segments;
  // loads above the last breakpoint extend the last slope, loads between 0
  // and the first positive breakpoint use the first segment.
  Rat operator()(const Rat& x) const;

 private:
  std::optional<unsigned long> exact_power_;
  std::vector<Rat> breakpoints_;
  std::vector<Rat> values_;
  std::vector<Rat> slopes_;
};

// Piecewise-linear upper approximation of x^p with breakpoints at 0 and at
// the powers of (1+eps) meeting [lo/(1+eps), hi*(1+eps)]. Stored values are
// upper roundings with relative error at most 2^-64 and non-decreasing
// segment slopes.
WellBehavedFn build_pl_power(const Rat& p, const Rat& eps, const Rat& lo,
                             const Rat& hi);

struct Objective {
  enum class Kind { Makespan, Cover, SumF };
  Kind kind = Kind::Makespan;
  std::optional<WellBehavedFn> f;  // present iff kind == SumF

  static Objective makespan() { return {Kind::Makespan, std::nullopt}; }
  static Objective cover() { return {Kind::Cover, std::nullopt}; }
  static Objective sum_f(WellBehavedFn fn) {
    return {Kind::SumF, std::move(fn)};
  }

  bool maximizing() const { return kind == Kind::Cover; }
};

Rat objective_value(const Instance& instance, const Schedule& schedule,
                    const Objective& objective);

}  // namespace relsched
