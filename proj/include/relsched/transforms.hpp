#pragma once

#include <map>
#include <vector>

#include "relsched/job_classes.hpp"
#include "relsched/model.hpp"

namespace relsched {

// Fractional allocation produced by Fractional Next-Fit Increasing: machines
// are filled in order, each job split only when a bound runs out.
struct FnfiAllocation {
  // Per machine, the (job, amount) pieces in assignment order.
  std::vector<std::vector<std::pair<int, Rat>>> pieces;

  Rat amount(int job, int machine) const;
  Rat machine_total(int machine) const;
  int fractional_jobs_on(int machine) const;  // jobs only partially here
};

// sizes must be ascending; sum of sizes must equal sum of bounds exactly.
FnfiAllocation fnfi(const std::vector<Rat>& sizes, const std::vector<Rat>& bounds);

// A fractional schedule over m machines: per job the positive amounts on
// each machine, plus the split into integrally-assigned jobs and jobs that
// are small for every machine touching them.
struct FractionalSchedule {
  std::vector<Rat> sizes;
  int machines = 0;
  std::vector<std::map<int, Rat>> amounts;  // per job: machine -> amount > 0
  std::vector<char> in_jr;                  // 1 when the job may be split

  Rat machine_work(int machine) const;
};

// Checks that every job is fully assigned and that jr-jobs are small against
// the rounded work of every machine holding a piece of them.
void check_valid_fractional(const FractionalSchedule& x, const Rat& eps);

struct RoundFnfiResult {
  std::vector<int> assignment;  // job -> machine
  std::vector<Rat> works;
};

// Rounds a valid fractional schedule whose jr-part is reproduced exactly by
// fnfi (checked); every jr job goes to its lowest-index positive machine.
// The resulting works stay within a factor (1 +- 2 eps) of the fractional
// works, re-checked exactly.
RoundFnfiResult round_fnfi(const FractionalSchedule& x, const Rat& eps);

// Re-sorts a partition so the machine works become non-decreasing: machine
// by machine, each remaining subset is re-instantiated with the smallest
// still-available items of its classes and the lightest subset is fixed.
// Bundles of the alternative sets in use move as single items.
std::vector<std::vector<int>> sorting_procedure(
    const Instance& instance, const std::vector<std::vector<int>>& partition,
    const std::vector<AlternativeJobSet>& alt_sets_in_use);

// Removes reversed adjacent pairs of the work vector by swapping whole job
// sets; never hurts makespan or cover (checked exactly per swap).
Schedule normalize_sorted_works(const Instance& instance, const Schedule& schedule,
                                Objective::Kind objective);

}  // namespace relsched
