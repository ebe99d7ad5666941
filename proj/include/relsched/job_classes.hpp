#pragma once

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "relsched/model.hpp"

namespace relsched {

// Mega-class k holds the jobs with size in (2^k, 2^{k+1}]; mini-class (k, l)
// refines it by factors of (1+eps), 0 <= l < lambda = ceil(log_{1+eps} 2).
struct MiniClassId {
  long k = 0;
  long ell = 0;
  auto operator<=>(const MiniClassId&) const = default;
};

long mega_class(const Rat& p);

// Smallest L with (1+eps)^L >= 2, exact.
long lambda_for_eps(const Rat& eps);

MiniClassId mini_class(const Rat& p, const Rat& eps);

// A consecutive mega-class range; k1 absent means the range is open below
// (all jobs of size at most 2^{k2+1}).
struct MegaRange {
  std::optional<long> k1;
  long k2 = 0;

  bool contains(const Rat& p) const;
  auto operator<=>(const MegaRange&) const = default;
};

struct AlternativeJob {
  std::vector<int> members;  // ascending job indices, a contiguous run
  Rat size;
};

struct AlternativeJobSet {
  MegaRange range;
  Rat rho;       // 2^{k2}
  Rat capacity;  // 2^{k2+1}
  std::vector<AlternativeJob> bundles;  // creation order
};

// Next-Fit Increasing bundling of the jobs in `range`: repeatedly take the
// maximal prefix of the remaining ascending jobs with total size at most
// 2^{k2+1}. Throws EmptyRange when no job falls in the range.
AlternativeJobSet make_alternative_jobs(const Instance& instance, MegaRange range);

// One set per pair (k1, k2) with k1 in K u {-inf}, k2 in K, k1 <= k2, where
// K is the set of non-empty mega-class indices.
std::map<MegaRange, AlternativeJobSet> enumerate_alternative_sets(
    const Instance& instance);

// Set of non-empty mega-class indices, ascending.
std::vector<long> nonempty_mega_classes(const Instance& instance);

}  // namespace relsched
