#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relsched/errors.hpp"
#include "relsched/gen.hpp"
#include "relsched/transforms.hpp"

using namespace relsched;

namespace {

Instance of_jobs(std::vector<Rat> jobs, std::vector<Rat> speeds, int r = 5) {
  std::vector<Machine> ms;
  for (std::size_t i = 0; i < speeds.size(); ++i)
    ms.push_back({static_cast<int>(i) + 1, speeds[i]});
  return validate_instance(jobs, ms, r);
}

FractionalSchedule induced(const std::vector<Rat>& sizes,
                           const std::vector<int>& assignment, int machines,
                           const Rat& eps) {
  FractionalSchedule x;
  x.sizes = sizes;
  x.machines = machines;
  x.amounts.resize(sizes.size());
  x.in_jr.assign(sizes.size(), 0);
  std::vector<Rat> works(machines, Rat(0));
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    x.amounts[j][assignment[j]] = sizes[j];
    works[assignment[j]] += sizes[j];
  }
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    Rat w = works[assignment[j]];
    if (w > 0 && sizes[j] <= eps * pow2(ceil_log2(w))) x.in_jr[j] = 1;
  }
  return x;
}

}  // namespace

TEST_CASE("greedy fill splits only at bound boundaries") {
  SUBCASE("integral outcome") {
    FnfiAllocation alloc = fnfi({Rat(1), Rat(1), Rat(2)}, {Rat(2), Rat(2)});
    CHECK(alloc.amount(0, 0) == 1);
    CHECK(alloc.amount(1, 0) == 1);
    CHECK(alloc.amount(2, 1) == 2);
    CHECK(alloc.amount(2, 0) == 0);
  }
  SUBCASE("a job splits when the bound runs out") {
    FnfiAllocation alloc = fnfi({Rat(1), Rat(1), Rat(2)}, {rat(3, 2), rat(5, 2)});
    CHECK(alloc.amount(0, 0) == 1);
    CHECK(alloc.amount(1, 0) == rat(1, 2));
    CHECK(alloc.amount(1, 1) == rat(1, 2));
    CHECK(alloc.amount(2, 1) == 2);
  }
  SUBCASE("zero bounds receive nothing") {
    FnfiAllocation alloc = fnfi({Rat(2)}, {Rat(0), Rat(2)});
    CHECK(alloc.pieces[0].empty());
    CHECK(alloc.amount(0, 1) == 2);
  }
  SUBCASE("sum mismatch is rejected") {
    CHECK_THROWS_AS(fnfi({Rat(1)}, {Rat(2)}), Error);
  }
}

TEST_CASE("greedy fill conserves bounds and splits at most two jobs per machine") {
  for (int iter = 0; iter < 1000; ++iter) {
    Rng rng(100000 + iter);
    int n = static_cast<int>(rng.range(1, 8));
    int m = static_cast<int>(rng.range(1, 4));
    std::vector<Rat> sizes;
    Rat total = 0;
    for (int j = 0; j < n; ++j) {
      sizes.push_back(rat(rng.range(1, 64), rng.range(1, 16)));
      total += sizes.back();
    }
    std::sort(sizes.begin(), sizes.end());
    std::vector<Rat> bounds;
    Rat left = total;
    for (int i = 0; i + 1 < m; ++i) {
      Rat share = left * rat(rng.range(0, 16), 16);
      bounds.push_back(share);
      left -= share;
    }
    bounds.push_back(left);
    FnfiAllocation alloc = fnfi(sizes, bounds);
    for (int i = 0; i < m; ++i) {
      CHECK(alloc.machine_total(i) == bounds[i]);
      CHECK(alloc.fractional_jobs_on(i) <= 2);
    }
  }
}

TEST_CASE("rounding keeps works inside the two-eps window") {
  SUBCASE("already integral schedules are unchanged") {
    Rat eps = rat(1, 32);
    FractionalSchedule x = induced({Rat(1), Rat(1), Rat(2)}, {0, 0, 1}, 2, eps);
    RoundFnfiResult rounded = round_fnfi(x, eps);
    CHECK(rounded.assignment == std::vector<int>{0, 0, 1});
    CHECK(rounded.works[0] == 2);
    CHECK(rounded.works[1] == 2);
  }
  SUBCASE("the worked split of 128 tiny jobs") {
    Rat eps = rat(1, 32);
    std::vector<Rat> sizes(128, rat(1, 32));
    FnfiAllocation alloc = fnfi(sizes, {rat(129, 64), rat(127, 64)});
    FractionalSchedule x;
    x.sizes = sizes;
    x.machines = 2;
    x.amounts.resize(sizes.size());
    x.in_jr.assign(sizes.size(), 1);
    for (int i = 0; i < 2; ++i)
      for (const auto& [j, amt] : alloc.pieces[i]) x.amounts[j][i] += amt;
    RoundFnfiResult rounded = round_fnfi(x, eps);
    CHECK(rounded.works[0] == rat(65, 32));
    CHECK(rounded.works[1] == rat(63, 32));
    CHECK(rounded.assignment[64] == 0);  // the split job goes down
    CHECK(rounded.works[0] <= rat(129, 64) * (1 + 2 * eps));
    CHECK(rounded.works[1] >= rat(127, 64) * (1 - 2 * eps));
  }
  SUBCASE("incompatible fractions are rejected") {
    Rat eps = rat(1, 32);
    // both tiny jobs split evenly; the greedy fill would never do that
    std::vector<Rat> sizes{rat(1, 32), rat(1, 32)};
    FractionalSchedule x;
    x.sizes = sizes;
    x.machines = 2;
    x.amounts.resize(2);
    x.in_jr.assign(2, 1);
    x.amounts[0][0] = rat(1, 64);
    x.amounts[0][1] = rat(1, 64);
    x.amounts[1][0] = rat(1, 64);
    x.amounts[1][1] = rat(1, 64);
    CHECK_THROWS_AS(round_fnfi(x, eps), Error);
  }
}

TEST_CASE("rounding bound holds over random compatible schedules") {
  int rounds = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    Rng rng(200000 + iter);
    Rat eps = rat(1, 32);
    int n = static_cast<int>(rng.range(60, 120));
    int m = static_cast<int>(rng.range(2, 3));
    std::vector<Rat> sizes;
    Rat total = 0;
    for (int j = 0; j < n; ++j) {
      sizes.push_back(rat(rng.range(1, 2), 128));
      total += sizes.back();
    }
    std::sort(sizes.begin(), sizes.end());
    std::vector<Rat> bounds;
    Rat left = total;
    for (int i = 0; i + 1 < m; ++i) {
      Rat share = left * rat(rng.range(5, 11), 16);
      bounds.push_back(share);
      left -= share;
    }
    bounds.push_back(left);
    FnfiAllocation alloc = fnfi(sizes, bounds);
    FractionalSchedule x;
    x.sizes = sizes;
    x.machines = m;
    x.amounts.resize(n);
    x.in_jr.assign(n, 1);
    for (int i = 0; i < m; ++i)
      for (const auto& [j, amt] : alloc.pieces[i]) x.amounts[j][i] += amt;
    bool valid = true;
    try {
      check_valid_fractional(x, eps);
    } catch (const Error&) {
      valid = false;  // a bound too small for the smallness condition
    }
    if (!valid) continue;
    ++rounds;
    RoundFnfiResult rounded = round_fnfi(x, eps);
    for (int i = 0; i < m; ++i) {
      Rat frac = x.machine_work(i);
      CHECK(rounded.works[i] >= (1 - 2 * eps) * frac);
      CHECK(rounded.works[i] <= (1 + 2 * eps) * frac);
    }
  }
  CHECK(rounds > 300);
}

TEST_CASE("sorting procedure worked examples") {
  SUBCASE("distinct mini classes sort by total size") {
    Instance instance = of_jobs({rat(33, 16), Rat(3)}, {Rat(1), Rat(1)});
    std::vector<std::vector<int>> partition{{1}, {0}};
    auto sorted = sorting_procedure(instance, partition, {});
    REQUIRE(sorted.size() == 2);
    CHECK(sorted[0] == std::vector<int>{0});  // 33/16 < 3
    CHECK(sorted[1] == std::vector<int>{1});
  }
  SUBCASE("already sorted partitions stay put") {
    Instance instance = of_jobs({Rat(1), Rat(2), Rat(4)}, {Rat(1), Rat(1)});
    std::vector<std::vector<int>> partition{{0}, {1, 2}};
    auto sorted = sorting_procedure(instance, partition, {});
    CHECK(sorted[0] == std::vector<int>{0});
    CHECK(sorted[1] == std::vector<int>{1, 2});
  }
  SUBCASE("incomplete partitions are rejected") {
    Instance instance = of_jobs({Rat(1), Rat(2)}, {Rat(1), Rat(1)});
    CHECK_THROWS_AS(sorting_procedure(instance, {{0}, {0, 1}}, {}), Error);
    CHECK_THROWS_AS(sorting_procedure(instance, {{0}, {}}, {}), Error);
  }
}

TEST_CASE("sorting procedure yields non-decreasing works and keeps class counts") {
  for (int iter = 0; iter < 1000; ++iter) {
    GenOptions options;
    options.seed = 300000 + iter;
    options.min_jobs = 2;
    GeneratedInstance gen = gen_random_instance(options);
    Instance instance = validate_instance(gen.jobs, gen.machines, gen.r);
    Rng rng(options.seed * 13 + 5);
    const int m = static_cast<int>(instance.m());
    std::vector<std::vector<int>> partition(m);
    for (std::size_t j = 0; j < instance.n(); ++j)
      partition[rng.range(0, m - 1)].push_back(static_cast<int>(j));
    auto sorted = sorting_procedure(instance, partition, {});

    std::vector<int> seen(instance.n(), 0);
    for (const auto& subset : sorted)
      for (int j : subset) ++seen[j];
    for (int c : seen) CHECK(c == 1);

    // mini-class count profiles survive as a multiset over machines
    auto profile = [&](const std::vector<std::vector<int>>& part) {
      std::vector<std::map<MiniClassId, int>> out(part.size());
      for (std::size_t i = 0; i < part.size(); ++i)
        for (int j : part[i]) ++out[i][mini_class(instance.jobs[j], instance.eps)];
      std::sort(out.begin(), out.end());
      return out;
    };
    CHECK(profile(partition) == profile(sorted));

    Rat prev = 0;
    for (const auto& subset : sorted) {
      Rat work = 0;
      for (int j : subset) work += instance.jobs[j];
      CHECK(work >= prev);
      prev = work;
    }
  }
}

TEST_CASE("sorting procedure moves bundles atomically") {
  Instance instance = of_jobs({rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4),
                               Rat(3), Rat(3)},
                              {Rat(1), Rat(1)});
  AlternativeJobSet set = make_alternative_jobs(instance, MegaRange{std::nullopt, -1});
  REQUIRE(set.bundles.size() == 1);  // the quarters fit one bundle of size 1
  std::vector<std::vector<int>> partition{{0, 1, 2, 3, 4}, {5}};
  auto sorted = sorting_procedure(instance, partition, {set});
  int where = -1;
  for (int i = 0; i < 2; ++i)
    for (int j : sorted[i])
      if (j == 0) where = i;
  REQUIRE(where >= 0);
  for (int j = 0; j < 4; ++j) {
    bool on_where = false;
    for (int j2 : sorted[where])
      if (j2 == j) on_where = true;
    CHECK(on_where);
  }
  std::vector<std::vector<int>> split{{0, 1, 4}, {2, 3, 5}};
  CHECK_THROWS_AS(sorting_procedure(instance, split, {set}), Error);
}

TEST_CASE("swap normalization repairs reversed pairs") {
  SUBCASE("single swap from the worked example") {
    Instance instance = of_jobs({Rat(1), Rat(3)}, {Rat(1), Rat(2)});
    Schedule reversed = make_schedule(instance, {2, 1});  // works (3, 1)
    CHECK(objective_value(instance, reversed, Objective::makespan()) == 3);
    Schedule fixed = normalize_sorted_works(instance, reversed,
                                            Objective::Kind::Makespan);
    CHECK(fixed.work_of(instance, 1) == 1);
    CHECK(fixed.work_of(instance, 2) == 3);
    CHECK(objective_value(instance, fixed, Objective::makespan()) == rat(3, 2));
  }
  SUBCASE("sorted and tied works stay put") {
    Instance instance = of_jobs({Rat(2), Rat(2)}, {Rat(1), Rat(2)});
    Schedule even = make_schedule(instance, {1, 2});
    Schedule result = normalize_sorted_works(instance, even, Objective::Kind::Cover);
    CHECK(result.assignment == even.assignment);
  }
}

TEST_CASE("swap normalization never hurts either extremum objective") {
  for (int iter = 0; iter < 1000; ++iter) {
    GenOptions options;
    options.seed = 400000 + iter;
    options.min_machines = 2;
    GeneratedInstance gen = gen_random_instance(options);
    Instance instance = validate_instance(gen.jobs, gen.machines, gen.r);
    Rng rng(options.seed + 3);
    std::vector<int> assignment;
    for (std::size_t j = 0; j < instance.n(); ++j)
      assignment.push_back(
          instance.machines[rng.range(0, static_cast<long>(instance.m()) - 1)].id);
    Schedule schedule = make_schedule(instance, assignment);
    Rat makespan_before = objective_value(instance, schedule, Objective::makespan());
    Rat cover_before = objective_value(instance, schedule, Objective::cover());
    Schedule fixed =
        normalize_sorted_works(instance, schedule, Objective::Kind::Makespan);
    CHECK(objective_value(instance, fixed, Objective::makespan()) <= makespan_before);
    CHECK(objective_value(instance, fixed, Objective::cover()) >= cover_before);
    MachineOrder order = machine_order(instance);
    for (std::size_t i = 0; i + 1 < order.ids.size(); ++i)
      CHECK(fixed.work_of(instance, order.ids[i]) <=
            fixed.work_of(instance, order.ids[i + 1]));
  }
}
