#pragma once

#include <vector>

#include "relsched/model.hpp"

namespace relsched {

// Reads RELSCHED_ORACLE_BUDGET, defaults to 10^7 enumerated assignments.
unsigned long long default_oracle_budget();

// Lexicographic enumeration of all m^n assignment vectors (machine indices
// per job, the last job cycling fastest). Throws BudgetExceeded up front.
class AssignmentEnumerator {
 public:
  AssignmentEnumerator(const Instance& instance, unsigned long long budget);

  // Fills `machine_index_per_job`; returns false when exhausted.
  bool next(std::vector<int>& machine_index_per_job);

 private:
  std::size_t n_, m_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> current_;
};

struct OracleResult {
  Rat value;
  Schedule witness;  // works non-decreasing along the machine order
  unsigned long long optimum_count = 0;
};

// Exhaustive exact optimum; the witness is the first optimal assignment in
// enumeration order whose works are sorted along the machine order.
OracleResult brute_force_opt(const Instance& instance, const Objective& objective,
                             unsigned long long budget);
OracleResult brute_force_opt(const Instance& instance, const Objective& objective);

}  // namespace relsched
