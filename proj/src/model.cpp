#include "relsched/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "relsched/errors.hpp"

namespace relsched {

Rat Instance::total_size() const {
  Rat total = 0;
  for (const Rat& p : jobs) total += p;
  return total;
}

int Instance::machine_index(int id) const {
  for (std::size_t i = 0; i < machines.size(); ++i)
    if (machines[i].id == id) return static_cast<int>(i);
  return -1;
}

Instance validate_instance(const std::vector<Rat>& jobs,
                           const std::vector<Machine>& machines, int r) {
  if (jobs.empty()) fail(ErrorCode::EmptyJobs, "instance has no jobs");
  if (machines.empty()) fail(ErrorCode::EmptyMachines, "instance has no machines");
  if (r < 1) fail(ErrorCode::InvalidPrecision, "r must be at least 1");
  for (const Rat& p : jobs)
    if (p <= 0) fail(ErrorCode::NonPositiveSize, "job size " + rat_str(p));
  std::set<int> seen;
  for (const Machine& mc : machines) {
    if (mc.speed <= 0)
      fail(ErrorCode::NonPositiveSpeed,
           "machine " + std::to_string(mc.id) + " speed " + rat_str(mc.speed));
    if (!seen.insert(mc.id).second)
      fail(ErrorCode::DuplicateMachineId, "machine id " + std::to_string(mc.id));
  }

  Instance instance;
  std::vector<int> order(jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return jobs[a] < jobs[b]; });
  instance.jobs.reserve(jobs.size());
  instance.input_pos.reserve(jobs.size());
  for (int pos : order) {
    instance.jobs.push_back(jobs[pos]);
    instance.input_pos.push_back(pos);
  }
  instance.machines = machines;
  instance.r = r;
  instance.eps = pow2(-r);
  instance.low_precision_warning = r < 5;
  return instance;
}

MachineOrder machine_order(const std::vector<Machine>& machines) {
  std::vector<const Machine*> sorted;
  sorted.reserve(machines.size());
  for (const Machine& mc : machines) sorted.push_back(&mc);
  std::sort(sorted.begin(), sorted.end(), [](const Machine* a, const Machine* b) {
    if (a->speed != b->speed) return a->speed < b->speed;
    return a->id < b->id;
  });
  MachineOrder order;
  for (const Machine* mc : sorted) {
    order.ids.push_back(mc->id);
    order.speeds.push_back(mc->speed);
  }
  return order;
}

MachineOrder machine_order(const Instance& instance) {
  return machine_order(instance.machines);
}

Rat Schedule::work_of(const Instance& instance, int machine_id) const {
  int idx = instance.machine_index(machine_id);
  if (idx < 0) fail(ErrorCode::UnknownAgent, "machine id " + std::to_string(machine_id));
  return works[idx];
}

Rat Schedule::load_of(const Instance& instance, int machine_id) const {
  int idx = instance.machine_index(machine_id);
  if (idx < 0) fail(ErrorCode::UnknownAgent, "machine id " + std::to_string(machine_id));
  return loads[idx];
}

Schedule make_schedule(const Instance& instance, std::vector<int> assignment) {
  return make_schedule(instance, instance.machines, std::move(assignment));
}

Schedule make_schedule(const Instance& instance, const std::vector<Machine>& machines,
                       std::vector<int> assignment) {
  if (assignment.size() != instance.n())
    fail(ErrorCode::PartitionInvalid, "assignment does not cover all jobs");
  if (machines.size() != instance.m())
    fail(ErrorCode::PartitionInvalid, "machine list does not match the instance");
  Schedule schedule;
  schedule.assignment = std::move(assignment);
  schedule.works.assign(instance.m(), Rat(0));
  schedule.loads.assign(instance.m(), Rat(0));
  for (std::size_t j = 0; j < instance.n(); ++j) {
    int idx = instance.machine_index(schedule.assignment[j]);
    if (idx < 0)
      fail(ErrorCode::PartitionInvalid,
           "job assigned to unknown machine " + std::to_string(schedule.assignment[j]));
    schedule.works[idx] += instance.jobs[j];
  }
  Rat total = 0;
  for (std::size_t i = 0; i < instance.m(); ++i) {
    const Machine* speed_source = nullptr;
    for (const Machine& machine : machines)
      if (machine.id == instance.machines[i].id) speed_source = &machine;
    if (!speed_source || speed_source->speed <= 0)
      fail(ErrorCode::PartitionInvalid, "missing or invalid speed for machine " +
                                            std::to_string(instance.machines[i].id));
    schedule.loads[i] = schedule.works[i] / speed_source->speed;
    total += schedule.works[i];
  }
  if (total != instance.total_size())
    fail(ErrorCode::Internal, "work conservation violated");
  return schedule;
}

WellBehavedFn WellBehavedFn::exact_power(unsigned long p) {
  if (p < 2) fail(ErrorCode::ParseError, "exact power requires integer p >= 2");
  WellBehavedFn fn;
  fn.exact_power_ = p;
  return fn;
}

WellBehavedFn WellBehavedFn::piecewise(std::vector<Rat> breakpoints,
                                       std::vector<Rat> values) {
  if (breakpoints.size() < 2 || breakpoints.size() != values.size())
    fail(ErrorCode::ParseError, "piecewise function needs matching breakpoints/values");
  if (breakpoints.front() != 0)
    fail(ErrorCode::ParseError, "piecewise breakpoints must start at 0");
  if (values.front() < 0)
    fail(ErrorCode::ParseError, "piecewise values must be non-negative");
  std::vector<Rat> slopes;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (breakpoints[k + 1] <= breakpoints[k])
      fail(ErrorCode::ParseError, "piecewise breakpoints must ascend");
    if (values[k + 1] <= values[k])
      fail(ErrorCode::ParseError, "piecewise values must strictly increase");
    Rat slope = (values[k + 1] - values[k]) / (breakpoints[k + 1] - breakpoints[k]);
    if (!slopes.empty() && slope < slopes.back())
      fail(ErrorCode::ParseError, "piecewise slopes must be non-decreasing");
    slopes.push_back(std::move(slope));
  }
  WellBehavedFn fn;
  fn.breakpoints_ = std::move(breakpoints);
  fn.values_ = std::move(values);
  fn.slopes_ = std::move(slopes);
  return fn;
}

const Rat& WellBehavedFn::slope_right_of(const Rat& x) const {
  std::size_t hi = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                   breakpoints_.begin();
  std::size_t seg = hi < breakpoints_.size() ? hi - 1 : slopes_.size() - 1;
  return slopes_[seg];
}

Rat WellBehavedFn::operator()(const Rat& x) const {
  if (exact_power_) return rat_pow(x, *exact_power_);
  const auto& bp = breakpoints_;
  const auto& vals = values_;
  if (x <= bp.front()) return vals.front();
  // Interpolate on the segment holding x; beyond the last breakpoint the
  // last slope is extended.
  std::size_t hi = std::upper_bound(bp.begin(), bp.end(), x) - bp.begin();
  std::size_t seg_start = (hi < bp.size()) ? hi - 1 : bp.size() - 1;
  std::size_t seg = (hi < bp.size()) ? hi - 1 : slopes_.size() - 1;
  return vals[seg_start] + slopes_[seg] * (x - bp[seg_start]);
}

namespace {

// Smallest integer R with R^v >= value (value a positive rational), exact.
Int ceil_vth_root(const Rat& value, unsigned long v) {
  Int quot = value.get_num() / value.get_den();
  Int root;
  mpz_root(root.get_mpz_t(), quot.get_mpz_t(), v);
  // The true root lies within a couple of steps of the truncated root of
  // the truncated quotient; walk down first, then up, with exact checks.
  auto ge = [&](const Int& cand) {
    Rat powv = 1;
    for (unsigned long i = 0; i < v; ++i) powv *= Rat(cand);
    return powv >= value;
  };
  while (root > 0 && ge(root - 1)) root -= 1;
  while (!ge(root)) root += 1;
  return root;
}

// Upper rational bound for x^(u/v) with absolute error below 2^-scale.
Rat upper_root_pow(const Rat& x, unsigned long u, unsigned long v, long scale) {
  Rat xu = rat_pow(x, u);
  if (v == 1) return xu;
  Rat scaled = xu * rat_pow(pow2(scale), v);
  Int r = ceil_vth_root(scaled, v);
  return Rat(r) * pow2(-scale);
}

}  // namespace

WellBehavedFn build_pl_power(const Rat& p, const Rat& eps, const Rat& lo,
                             const Rat& hi) {
  if (lo >= hi) fail(ErrorCode::RangeEmpty, "empty load range");
  if (lo <= 0) fail(ErrorCode::RangeEmpty, "load range must be positive");
  if (p <= 1) fail(ErrorCode::ParseError, "power must exceed 1");
  if (eps <= 0) fail(ErrorCode::ParseError, "eps must be positive");

  const Rat one_eps = 1 + eps;
  const Rat left = lo / one_eps;
  const Rat right = hi * one_eps;

  // Walk to the smallest power of (1+eps) at or above `left`.
  Rat x = 1;
  while (x < left) x *= one_eps;
  while (x / one_eps >= left) x /= one_eps;

  if (!mpz_fits_ulong_p(p.get_num().get_mpz_t()) ||
      !mpz_fits_ulong_p(p.get_den().get_mpz_t()))
    fail(ErrorCode::ParseError, "power exponent out of range");
  unsigned long u = p.get_num().get_ui();
  unsigned long v = p.get_den().get_ui();

  std::vector<Rat> breakpoints{Rat(0)};
  std::vector<Rat> values{Rat(0)};
  while (x <= right) {
    // x^p >= x_left^p where x >= left; pick the scale so that the absolute
    // rounding grain 2^-scale stays below 2^-64 relative to x^p.
    long value_log2_floor = (ceil_log2(x) - 1) * static_cast<long>(u);
    if (v > 1)
      value_log2_floor = value_log2_floor >= 0 ? value_log2_floor / static_cast<long>(v)
                                               : -((-value_log2_floor + static_cast<long>(v) - 1) /
                                                   static_cast<long>(v));
    long scale = 66 + std::max(0L, -value_log2_floor);
    breakpoints.push_back(x);
    values.push_back(upper_root_pow(x, u, v, scale));
    x *= one_eps;
  }
  if (breakpoints.size() < 3)
    fail(ErrorCode::RangeEmpty, "load range holds no breakpoints");

  // Upper roundings of a strictly convex function at (1+eps)-spaced points
  // stay convex: the rounding grain is far below the curvature margin. The
  // construction still repairs and re-verifies rather than assuming it.
  for (std::size_t kidx = 1; kidx + 1 < breakpoints.size(); ++kidx) {
    Rat slope_prev = (values[kidx] - values[kidx - 1]) /
                     (breakpoints[kidx] - breakpoints[kidx - 1]);
    Rat floor_next = values[kidx] + slope_prev * (breakpoints[kidx + 1] - breakpoints[kidx]);
    if (values[kidx + 1] < floor_next) values[kidx + 1] = floor_next;
  }
  for (std::size_t kidx = 1; kidx < breakpoints.size(); ++kidx) {
    Rat exact_floor = rat_pow(breakpoints[kidx], u);
    Rat upper = values[kidx];
    Rat powv = rat_pow(upper, v);
    if (powv < exact_floor)
      fail(ErrorCode::Internal, "piecewise power approximation lost its lower bound");
    Rat bound = rat_pow(upper / (1 + pow2(-64)), v);
    if (bound > exact_floor)
      fail(ErrorCode::Internal, "piecewise power approximation exceeded 2^-64");
  }
  return WellBehavedFn::piecewise(std::move(breakpoints), std::move(values));
}

Rat objective_value(const Instance& instance, const Schedule& schedule,
                    const Objective& objective) {
  if (schedule.loads.size() != instance.m() || schedule.loads.empty())
    fail(ErrorCode::PartitionInvalid, "schedule does not match the instance");
  switch (objective.kind) {
    case Objective::Kind::Makespan: {
      Rat best = schedule.loads.front();
      for (const Rat& load : schedule.loads) best = std::max(best, load);
      return best;
    }
    case Objective::Kind::Cover: {
      Rat best = schedule.loads.front();
      for (const Rat& load : schedule.loads) best = std::min(best, load);
      return best;
    }
    case Objective::Kind::SumF: {
      if (!objective.f) fail(ErrorCode::Internal, "sum objective without function");
      Rat total = 0;
      for (const Rat& load : schedule.loads) total += (*objective.f)(load);
      return total;
    }
  }
  fail(ErrorCode::Internal, "unknown objective");
}

}  // namespace relsched
