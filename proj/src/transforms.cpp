#include "relsched/transforms.hpp"

#include <algorithm>
#include <optional>

#include "relsched/errors.hpp"
#include "relsched/magnitude.hpp"

namespace relsched {

Rat FnfiAllocation::amount(int job, int machine) const {
  Rat total = 0;
  for (const auto& [j, amt] : pieces[machine])
    if (j == job) total += amt;
  return total;
}

Rat FnfiAllocation::machine_total(int machine) const {
  Rat total = 0;
  for (const auto& [j, amt] : pieces[machine]) total += amt;
  return total;
}

int FnfiAllocation::fractional_jobs_on(int machine) const {
  int count = 0;
  for (const auto& [j, amt] : pieces[machine]) {
    Rat elsewhere = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (static_cast<int>(i) != machine) elsewhere += amount(j, static_cast<int>(i));
    if (elsewhere > 0) ++count;
  }
  return count;
}

FnfiAllocation fnfi(const std::vector<Rat>& sizes, const std::vector<Rat>& bounds) {
  for (std::size_t j = 0; j + 1 < sizes.size(); ++j)
    if (sizes[j] > sizes[j + 1])
      fail(ErrorCode::Internal, "fnfi requires ascending sizes");
  for (const Rat& b : bounds)
    if (b < 0) fail(ErrorCode::Internal, "fnfi bounds must be non-negative");
  Rat size_total = 0, bound_total = 0;
  for (const Rat& p : sizes) size_total += p;
  for (const Rat& b : bounds) bound_total += b;
  if (size_total != bound_total)
    fail(ErrorCode::SumMismatch, "total size " + rat_str(size_total) +
                                     " differs from total bound " + rat_str(bound_total));

  FnfiAllocation alloc;
  alloc.pieces.assign(bounds.size(), {});
  std::size_t machine = 0;
  std::vector<Rat> remaining_bound = bounds;
  std::size_t job = 0;
  Rat remaining_size = sizes.empty() ? Rat(0) : sizes[0];
  while (job < sizes.size() && machine < bounds.size()) {
    Rat beta = std::min(remaining_size, remaining_bound[machine]);
    if (beta > 0) alloc.pieces[machine].push_back({static_cast<int>(job), beta});
    remaining_size -= beta;
    remaining_bound[machine] -= beta;
    if (remaining_bound[machine] == 0) ++machine;
    if (remaining_size == 0) {
      ++job;
      if (job < sizes.size()) remaining_size = sizes[job];
    }
  }
  if (job < sizes.size())
    fail(ErrorCode::Internal, "fnfi failed to place every job");
  return alloc;
}

Rat FractionalSchedule::machine_work(int machine) const {
  Rat total = 0;
  for (const auto& job_amounts : amounts) {
    auto it = job_amounts.find(machine);
    if (it != job_amounts.end()) total += it->second;
  }
  return total;
}

void check_valid_fractional(const FractionalSchedule& x, const Rat& eps) {
  if (x.sizes.size() != x.amounts.size() || x.sizes.size() != x.in_jr.size())
    fail(ErrorCode::Internal, "fractional schedule field sizes disagree");
  std::vector<Rat> works(x.machines, Rat(0));
  for (std::size_t j = 0; j < x.sizes.size(); ++j) {
    Rat total = 0;
    for (const auto& [machine, amt] : x.amounts[j]) {
      if (machine < 0 || machine >= x.machines)
        fail(ErrorCode::Internal, "fractional amount on unknown machine");
      if (amt <= 0) fail(ErrorCode::Internal, "non-positive fractional amount");
      total += amt;
      works[machine] += amt;
    }
    if (total != x.sizes[j])
      fail(ErrorCode::Internal, "job " + std::to_string(j + 1) + " not fully assigned");
    if (!x.in_jr[j] && x.amounts[j].size() != 1)
      fail(ErrorCode::Internal, "integral job split across machines");
  }
  for (std::size_t j = 0; j < x.sizes.size(); ++j) {
    if (!x.in_jr[j]) continue;
    for (const auto& [machine, amt] : x.amounts[j]) {
      // rounded work 2^ceil(log2 W); a jr piece must be small against it
      if (works[machine] <= 0)
        fail(ErrorCode::Internal, "jr piece on an empty machine");
      Rat rounded = pow2(ceil_log2(works[machine]));
      if (x.sizes[j] > eps * rounded)
        fail(ErrorCode::Internal,
             "jr job " + std::to_string(j + 1) + " too large for machine work");
    }
  }
}

RoundFnfiResult round_fnfi(const FractionalSchedule& x, const Rat& eps) {
  check_valid_fractional(x, eps);

  // Definition-of-compatibility check: re-running fnfi on the jr jobs with
  // the induced bounds must reproduce the allocation exactly.
  std::vector<int> jr_jobs;
  for (std::size_t j = 0; j < x.sizes.size(); ++j)
    if (x.in_jr[j]) jr_jobs.push_back(static_cast<int>(j));
  std::vector<Rat> jr_sizes;
  for (int j : jr_jobs) jr_sizes.push_back(x.sizes[j]);
  std::vector<Rat> bounds(x.machines, Rat(0));
  for (int j : jr_jobs)
    for (const auto& [machine, amt] : x.amounts[j]) bounds[machine] += amt;
  FnfiAllocation rerun = fnfi(jr_sizes, bounds);
  for (int machine = 0; machine < x.machines; ++machine) {
    std::map<int, Rat> got;
    for (const auto& [local, amt] : rerun.pieces[machine]) got[jr_jobs[local]] += amt;
    std::map<int, Rat> want;
    for (int j : jr_jobs) {
      auto it = x.amounts[j].find(machine);
      if (it != x.amounts[j].end()) want[j] = it->second;
    }
    if (got != want)
      fail(ErrorCode::NotFNFICompatible,
           "fnfi does not reproduce the fractional schedule on machine " +
               std::to_string(machine + 1));
  }

  RoundFnfiResult result;
  result.assignment.assign(x.sizes.size(), -1);
  result.works.assign(x.machines, Rat(0));
  for (std::size_t j = 0; j < x.sizes.size(); ++j) {
    int target = x.amounts[j].begin()->first;  // lowest-index positive machine
    result.assignment[j] = target;
    result.works[target] += x.sizes[j];
  }
  for (int machine = 0; machine < x.machines; ++machine) {
    Rat frac = x.machine_work(machine);
    Rat lo = (1 - 2 * eps) * frac;
    Rat hi = (1 + 2 * eps) * frac;
    if (result.works[machine] < lo || result.works[machine] > hi)
      fail(ErrorCode::Internal, "rounded work escaped the (1 +- 2 eps) window");
  }
  return result;
}

namespace {

struct ItemPool {
  // Items of one class in ascending (size, first-job) order with prefix sums.
  std::vector<std::vector<int>> item_jobs;
  std::vector<Rat> prefix;  // size items+1
  std::size_t consumed = 0;

  Rat take_cost(int count) const { return prefix[consumed + count] - prefix[consumed]; }
};

}  // namespace

std::vector<std::vector<int>> sorting_procedure(
    const Instance& instance, const std::vector<std::vector<int>>& partition,
    const std::vector<AlternativeJobSet>& alt_sets_in_use) {
  const std::size_t m = partition.size();
  std::vector<int> cover(instance.n(), 0);
  for (const auto& subset : partition)
    for (int j : subset) {
      if (j < 0 || j >= static_cast<int>(instance.n()))
        fail(ErrorCode::PartitionInvalid, "job index out of range");
      ++cover[j];
    }
  for (std::size_t j = 0; j < cover.size(); ++j)
    if (cover[j] != 1)
      fail(ErrorCode::PartitionInvalid,
           "job " + std::to_string(j + 1) + " covered " + std::to_string(cover[j]) + " times");

  // Which bundle owns each job, for the alternative sets in use.
  struct BundleRef {
    int set = -1;
    int bundle = -1;
  };
  std::vector<BundleRef> owner(instance.n());
  for (std::size_t s = 0; s < alt_sets_in_use.size(); ++s) {
    const AlternativeJobSet& set = alt_sets_in_use[s];
    for (std::size_t b = 0; b < set.bundles.size(); ++b)
      for (int j : set.bundles[b].members) {
        if (owner[j].set != -1)
          fail(ErrorCode::PartitionInvalid, "alternative sets overlap on job " +
                                                std::to_string(j + 1));
        owner[j] = {static_cast<int>(s), static_cast<int>(b)};
      }
  }

  // Build items: bundles for owned jobs (which must be co-located), single
  // jobs otherwise; classify by mini-class of the item size.
  struct RawItem {
    Rat size;
    std::vector<int> jobs;
    int subset;
  };
  std::vector<RawItem> items;
  std::vector<int> subset_of(instance.n(), -1);
  for (std::size_t i = 0; i < m; ++i)
    for (int j : partition[i]) subset_of[j] = static_cast<int>(i);
  std::vector<char> emitted(instance.n(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (int j : partition[i]) {
      if (emitted[j]) continue;
      if (owner[j].set >= 0) {
        const AlternativeJob& bundle =
            alt_sets_in_use[owner[j].set].bundles[owner[j].bundle];
        for (int member : bundle.members) {
          if (subset_of[member] != subset_of[j])
            fail(ErrorCode::PartitionInvalid, "bundle split across subsets");
          emitted[member] = 1;
        }
        items.push_back({bundle.size, bundle.members, static_cast<int>(i)});
      } else {
        emitted[j] = 1;
        items.push_back({instance.jobs[j], {j}, static_cast<int>(i)});
      }
    }
  }

  std::map<ClassKey, ItemPool> pools;
  std::vector<std::map<ClassKey, int>> profile(m);
  {
    // Group items per class; pools sorted ascending.
    std::map<ClassKey, std::vector<const RawItem*>> grouped;
    for (const RawItem& item : items) {
      ClassKey key;
      if (item.jobs.size() == 1 && owner[item.jobs[0]].set < 0) {
        key = ClassKey{false, MegaRange{}, mini_class(item.size, instance.eps)};
      } else {
        const AlternativeJobSet& set = alt_sets_in_use[owner[item.jobs[0]].set];
        key = ClassKey{true, set.range, mini_class(item.size, instance.eps)};
      }
      grouped[key].push_back(&item);
      ++profile[item.subset][key];
    }
    for (auto& [key, list] : grouped) {
      std::sort(list.begin(), list.end(), [](const RawItem* a, const RawItem* b) {
        if (a->size != b->size) return a->size < b->size;
        return a->jobs.front() < b->jobs.front();
      });
      ItemPool pool;
      pool.prefix.push_back(0);
      for (const RawItem* item : list) {
        pool.item_jobs.push_back(item->jobs);
        pool.prefix.push_back(pool.prefix.back() + item->size);
      }
      pools.emplace(key, std::move(pool));
    }
  }

  std::vector<std::vector<int>> result(m);
  std::vector<char> fixed(m, 0);
  for (std::size_t position = 0; position < m; ++position) {
    // Re-instantiated total of each remaining subset.
    std::optional<Rat> best;
    int best_subset = -1;
    for (std::size_t i = 0; i < m; ++i) {
      if (fixed[i]) continue;
      Rat total = 0;
      for (const auto& [key, count] : profile[i]) total += pools[key].take_cost(count);
      if (!best || total < *best) {
        best = total;
        best_subset = static_cast<int>(i);
      }
    }
    fixed[best_subset] = 1;
    for (const auto& [key, count] : profile[best_subset]) {
      ItemPool& pool = pools[key];
      for (int c = 0; c < count; ++c) {
        for (int j : pool.item_jobs[pool.consumed]) result[position].push_back(j);
        ++pool.consumed;
      }
    }
    std::sort(result[position].begin(), result[position].end());
  }
  return result;
}

Schedule normalize_sorted_works(const Instance& instance, const Schedule& schedule,
                                Objective::Kind objective) {
  if (objective != Objective::Kind::Makespan && objective != Objective::Kind::Cover)
    fail(ErrorCode::Internal, "normalization applies to makespan and cover only");
  MachineOrder order = machine_order(instance);
  const std::size_t m = order.ids.size();
  std::vector<std::vector<int>> sets(m);
  for (std::size_t j = 0; j < instance.n(); ++j) {
    int pos = -1;
    for (std::size_t i = 0; i < m; ++i)
      if (order.ids[i] == schedule.assignment[j]) pos = static_cast<int>(i);
    if (pos < 0) fail(ErrorCode::PartitionInvalid, "assignment to unknown machine");
    sets[pos].push_back(static_cast<int>(j));
  }
  std::vector<Rat> works(m, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    for (int j : sets[i]) works[i] += instance.jobs[j];

  auto makespan_of = [&]() {
    Rat best = works[0] / order.speeds[0];
    for (std::size_t i = 1; i < m; ++i) best = std::max(best, Rat(works[i] / order.speeds[i]));
    return best;
  };
  auto cover_of = [&]() {
    Rat best = works[0] / order.speeds[0];
    for (std::size_t i = 1; i < m; ++i) best = std::min(best, Rat(works[i] / order.speeds[i]));
    return best;
  };

  long swaps = 0;
  const long swap_cap = static_cast<long>(m) * (static_cast<long>(m) - 1) / 2;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (works[i] <= works[i + 1]) continue;
      Rat before_makespan = makespan_of();
      Rat before_cover = cover_of();
      std::swap(sets[i], sets[i + 1]);
      std::swap(works[i], works[i + 1]);
      ++swaps;
      if (makespan_of() > before_makespan)
        fail(ErrorCode::Internal, "swap increased the makespan");
      if (cover_of() < before_cover)
        fail(ErrorCode::Internal, "swap decreased the cover");
      if (swaps > swap_cap)
        fail(ErrorCode::Internal, "normalization exceeded its swap bound");
      changed = true;
    }
  }

  std::vector<int> assignment(instance.n(), -1);
  for (std::size_t i = 0; i < m; ++i)
    for (int j : sets[i]) assignment[j] = order.ids[i];
  return make_schedule(instance, std::move(assignment));
}

}  // namespace relsched
