#include "relsched/oracle.hpp"

#include <cstdlib>
#include <optional>

#include "relsched/errors.hpp"

namespace relsched {

unsigned long long default_oracle_budget() {
  if (const char* env = std::getenv("RELSCHED_ORACLE_BUDGET")) {
    char* end = nullptr;
    unsigned long long value = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && value > 0) return value;
  }
  return 10'000'000ULL;
}

AssignmentEnumerator::AssignmentEnumerator(const Instance& instance,
                                           unsigned long long budget)
    : n_(instance.n()), m_(instance.m()) {
  Int count = 1;
  for (std::size_t j = 0; j < n_; ++j) count *= static_cast<long>(m_);
  if (count > Int(static_cast<unsigned long>(budget)))
    fail(ErrorCode::BudgetExceeded,
         "m^n = " + count.get_str() + " exceeds budget " + std::to_string(budget));
  current_.assign(n_, 0);
}

bool AssignmentEnumerator::next(std::vector<int>& machine_index_per_job) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    machine_index_per_job = current_;
    return true;
  }
  // Odometer with the last position cycling fastest.
  std::size_t pos = n_;
  while (pos > 0) {
    --pos;
    if (current_[pos] + 1 < static_cast<int>(m_)) {
      ++current_[pos];
      for (std::size_t k = pos + 1; k < n_; ++k) current_[k] = 0;
      machine_index_per_job = current_;
      return true;
    }
  }
  done_ = true;
  return false;
}

OracleResult brute_force_opt(const Instance& instance, const Objective& objective,
                             unsigned long long budget) {
  AssignmentEnumerator enumerator(instance, budget);
  MachineOrder order = machine_order(instance);
  const std::size_t m = instance.m();
  std::vector<int> order_pos(m);  // machines index -> order position
  for (std::size_t i = 0; i < m; ++i)
    order_pos[instance.machine_index(order.ids[i])] = static_cast<int>(i);

  std::vector<int> assign;
  std::vector<Rat> works(m);
  std::optional<Rat> best;
  unsigned long long best_count = 0;
  std::vector<int> witness;

  while (enumerator.next(assign)) {
    for (std::size_t i = 0; i < m; ++i) works[i] = 0;
    for (std::size_t j = 0; j < instance.n(); ++j)
      works[assign[j]] += instance.jobs[j];

    Rat value;
    bool first = true;
    for (std::size_t i = 0; i < m; ++i) {
      Rat load = works[i] / instance.machines[i].speed;
      switch (objective.kind) {
        case Objective::Kind::Makespan:
          value = first ? load : std::max(value, load);
          break;
        case Objective::Kind::Cover:
          value = first ? load : std::min(value, load);
          break;
        case Objective::Kind::SumF: {
          Rat cost = (*objective.f)(load);
          value = first ? cost : value + cost;
          break;
        }
      }
      first = false;
    }

    int cmp;
    if (!best) {
      cmp = -1;
    } else if (value == *best) {
      cmp = 0;
    } else {
      bool better = objective.maximizing() ? value > *best : value < *best;
      cmp = better ? -1 : 1;
    }
    if (cmp > 0) continue;
    if (cmp < 0) {
      best = value;
      best_count = 1;
      witness.clear();
    } else {
      ++best_count;
    }
    if (witness.empty()) {
      bool sorted = true;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        // works along the speed-sorted order
        Rat wa = 0, wb = 0;
        for (std::size_t k = 0; k < m; ++k) {
          if (order_pos[k] == static_cast<int>(i)) wa = works[k];
          if (order_pos[k] == static_cast<int>(i + 1)) wb = works[k];
        }
        if (wa > wb) {
          sorted = false;
          break;
        }
      }
      if (sorted) witness = assign;
    }
  }

  if (!best) fail(ErrorCode::Internal, "oracle saw no assignment");
  if (witness.empty())
    fail(ErrorCode::Internal, "no optimal assignment with sorted works");

  OracleResult result;
  result.value = *best;
  result.optimum_count = best_count;
  std::vector<int> by_id(instance.n());
  for (std::size_t j = 0; j < instance.n(); ++j)
    by_id[j] = instance.machines[witness[j]].id;
  result.witness = make_schedule(instance, std::move(by_id));
  return result;
}

OracleResult brute_force_opt(const Instance& instance, const Objective& objective) {
  return brute_force_opt(instance, objective, default_oracle_budget());
}

}  // namespace relsched
