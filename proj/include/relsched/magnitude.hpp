#pragma once

#include <array>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "relsched/job_classes.hpp"
#include "relsched/model.hpp"

namespace relsched {

inline constexpr long kNegInf = std::numeric_limits<long>::min();
inline constexpr long kPosInf = std::numeric_limits<long>::max();

inline bool is_finite_mag(long v) { return v != kNegInf && v != kPosInf; }

// a_0 = -inf, non-decreasing, and every increase jumps by at least r+1.
struct MagnitudeVector {
  std::vector<long> a;
};

void check_magnitude_vector(const MagnitudeVector& vec, int r);

// Run-length encoding of the distinct values of a magnitude vector:
// nu_t is the t-th distinct value, xi_t the first machine carrying it.
struct SignatureEntry {
  int xi = 0;  // 1-based machine index
  long nu = 0;
};

std::vector<SignatureEntry> signature(const MagnitudeVector& vec, int r);

// Jobs strictly between the r-neighbourhoods of nu_t and nu_{t+1}; the gap
// above the last distinct value is open-ended.
std::vector<int> gap_jobs(const Instance& instance,
                          const std::vector<SignatureEntry>& sig, int t);

// Seven consecutive distinct values of a magnitude vector, -inf padded in
// front, +inf allowed only as the last entry. The machine owning the vector
// has magnitude e[5].
struct Psi {
  std::array<long, 7> e{kNegInf, kNegInf, kNegInf, kNegInf, kNegInf, kNegInf, kNegInf};

  bool operator==(const Psi&) const = default;
  auto operator<=>(const Psi&) const = default;
};

void check_psi(const Psi& psi, int r);

std::vector<long> candidate_magnitudes(const Instance& instance);

// Identity of one status-vector component: a mini-class of an original
// mega-class, or one alternative mini-class of an NFI range.
struct ClassKey {
  bool is_alt = false;
  MegaRange range;  // meaningful only when is_alt
  MiniClassId mini;

  bool operator==(const ClassKey&) const = default;
  bool operator<(const ClassKey& other) const;
  std::string text() const;
};

struct ActiveClasses {
  std::vector<long> original_megas;   // ascending
  std::vector<MegaRange> alt_ranges;  // ascending

  bool covers_mega(long k) const;
};

ActiveClasses active_classes_of(const Psi& psi, int r);

// One schedulable item of a class: a single job or one NFI bundle.
struct ClassItem {
  Rat size;
  std::vector<int> jobs;  // ascending original indices
};

struct ClassItems {
  ClassKey key;
  std::vector<ClassItem> items;  // ascending (size, first job index)
  std::vector<Rat> prefix;       // prefix sums of item sizes, size items+1

  int population() const { return static_cast<int>(items.size()); }
};

struct DeltaItem {
  const ClassItems* cls = nullptr;
  int item = 0;

  const ClassItem& get() const { return cls->items[item]; }
};

// Per-instance caches for the state algebra: candidate magnitudes, active
// classes per short magnitude vector, item tables per class. Immutable from
// the outside once a solver has been built on top of it.
class StateSpace {
 public:
  explicit StateSpace(const Instance& instance);

  const Instance& instance() const { return *instance_; }
  const std::vector<long>& candidates() const { return candidates_; }
  long max_job_mega() const { return max_job_mega_; }

  struct PsiInfo {
    Psi psi;
    ActiveClasses active;
    // Non-empty classes of A(psi) in canonical key order.
    std::vector<const ClassItems*> classes;
    std::vector<int> populations;
    std::string psi_text;
  };

  const PsiInfo& info(const Psi& psi);
  const ClassItems& items_for(const ClassKey& key);
  const AlternativeJobSet& alt_set(const MegaRange& range);

  // Status vectors are count vectors aligned with info(psi).classes.
  bool compatible(const Psi& psi, const std::vector<int>& u, const Psi& psi2,
                  const std::vector<int>& u2);
  std::pair<std::vector<DeltaItem>, Rat> delta_jobs(const Psi& psi,
                                                    const std::vector<int>& u,
                                                    const Psi& psi2,
                                                    const std::vector<int>& u2);
  std::vector<Psi> shift_candidates(const Psi& psi) const;

  // Canonical serialization of a (psi, u) pair; total-orders states and,
  // pairwise, the vertices of a layer.
  std::string state_key(const Psi& psi, const std::vector<int>& u);

 private:
  void validate_counts(const PsiInfo& info, const std::vector<int>& u) const;

  const Instance* instance_;
  std::vector<long> candidates_;
  long max_job_mega_ = 0;
  std::map<MiniClassId, std::vector<int>> mini_members_;
  std::map<Psi, std::unique_ptr<PsiInfo>> psi_cache_;
  std::map<ClassKey, std::unique_ptr<ClassItems>> class_cache_;
  std::map<MegaRange, std::unique_ptr<AlternativeJobSet>> alt_cache_;
};

std::string psi_text(const Psi& psi);

}  // namespace relsched
