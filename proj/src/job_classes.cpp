#include "relsched/job_classes.hpp"

#include <algorithm>

#include "relsched/errors.hpp"

namespace relsched {

long mega_class(const Rat& p) {
  if (p <= 0) fail(ErrorCode::NonPositiveSize, "mega class of " + rat_str(p));
  return floor_log2_strict(p);
}

long lambda_for_eps(const Rat& eps) {
  if (eps <= 0 || eps > 1) fail(ErrorCode::InvalidPrecision, "eps out of range");
  const Rat base = 1 + eps;
  // (1+eps)^{1/eps} >= 2 for eps = 2^-r, so 1/eps bounds the search.
  long lo = 1, hi = 1;
  while (rat_pow(base, static_cast<unsigned long>(hi)) < 2) hi *= 2;
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (rat_pow(base, static_cast<unsigned long>(mid)) >= 2)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

MiniClassId mini_class(const Rat& p, const Rat& eps) {
  long k = mega_class(p);
  const Rat base = 1 + eps;
  const Rat scaled = p / pow2(k);  // in (1, 2]
  // Unique l with (1+eps)^l < scaled <= (1+eps)^{l+1}.
  long lo = 0, hi = lambda_for_eps(eps) - 1;
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (scaled <= rat_pow(base, static_cast<unsigned long>(mid + 1)))
      hi = mid;
    else
      lo = mid + 1;
  }
  return {k, lo};
}

bool MegaRange::contains(const Rat& p) const {
  if (p <= 0) return false;
  if (p > pow2(k2 + 1)) return false;
  if (k1 && p <= pow2(*k1)) return false;
  return true;
}

AlternativeJobSet make_alternative_jobs(const Instance& instance, MegaRange range) {
  AlternativeJobSet set;
  set.range = range;
  set.rho = pow2(range.k2);
  set.capacity = pow2(range.k2 + 1);

  std::vector<int> in_range;
  for (std::size_t j = 0; j < instance.n(); ++j)
    if (range.contains(instance.jobs[j])) in_range.push_back(static_cast<int>(j));
  if (in_range.empty()) fail(ErrorCode::EmptyRange, "no job in mega-class range");

  AlternativeJob current;
  current.size = 0;
  for (int j : in_range) {
    const Rat& p = instance.jobs[j];
    if (p > set.capacity)
      fail(ErrorCode::OversizedJob, "job " + rat_str(p) + " exceeds bundle capacity");
    if (current.size + p > set.capacity) {
      set.bundles.push_back(std::move(current));
      current = AlternativeJob{};
      current.size = 0;
    }
    current.members.push_back(j);
    current.size += p;
  }
  if (!current.members.empty()) set.bundles.push_back(std::move(current));
  return set;
}

std::vector<long> nonempty_mega_classes(const Instance& instance) {
  std::vector<long> classes;
  for (const Rat& p : instance.jobs) classes.push_back(mega_class(p));
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

std::map<MegaRange, AlternativeJobSet> enumerate_alternative_sets(
    const Instance& instance) {
  std::map<MegaRange, AlternativeJobSet> sets;
  std::vector<long> classes = nonempty_mega_classes(instance);
  for (long k2 : classes) {
    for (long k1 : classes) {
      if (k1 > k2) continue;
      MegaRange range{k1, k2};
      sets.emplace(range, make_alternative_jobs(instance, range));
    }
    MegaRange open{std::nullopt, k2};
    sets.emplace(open, make_alternative_jobs(instance, open));
  }
  return sets;
}

}  // namespace relsched
