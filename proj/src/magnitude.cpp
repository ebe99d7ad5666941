#include "relsched/magnitude.hpp"

#include <algorithm>
#include <sstream>

#include "relsched/errors.hpp"

namespace relsched {

namespace {

// a dominates b when a >= b + r + 1, with the sentinel conventions.
bool dominates(long hi, long lo, int r) {
  if (lo == kNegInf) return true;
  if (hi == kPosInf) return true;
  if (hi == kNegInf || lo == kPosInf) return false;
  return hi >= lo + r + 1;
}

std::string mag_text(long v) {
  if (v == kNegInf) return "-inf";
  if (v == kPosInf) return "+inf";
  return std::to_string(v);
}

}  // namespace

void check_magnitude_vector(const MagnitudeVector& vec, int r) {
  if (vec.a.empty() || vec.a.front() != kNegInf)
    fail(ErrorCode::Internal, "magnitude vector must start at -inf");
  for (std::size_t i = 0; i + 1 < vec.a.size(); ++i) {
    long cur = vec.a[i], next = vec.a[i + 1];
    if (cur == kPosInf || next == kPosInf)
      fail(ErrorCode::Internal, "magnitude vector entries must be finite or -inf");
    if (next == cur) continue;
    if (next < cur || !dominates(next, cur, r))
      fail(ErrorCode::Internal, "magnitude vector increase below r+1 at position " +
                                    std::to_string(i + 1));
  }
}

std::vector<SignatureEntry> signature(const MagnitudeVector& vec, int r) {
  check_magnitude_vector(vec, r);
  std::vector<SignatureEntry> sig;
  for (std::size_t i = 1; i < vec.a.size(); ++i) {
    if (sig.empty() || vec.a[i] != sig.back().nu)
      sig.push_back({static_cast<int>(i), vec.a[i]});
  }
  return sig;
}

std::vector<int> gap_jobs(const Instance& instance,
                          const std::vector<SignatureEntry>& sig, int t) {
  if (t < 0 || t + 1 >= static_cast<int>(sig.size()))
    fail(ErrorCode::Internal, "gap index out of range");
  long lo = sig[t].nu;
  long hi = sig[t + 1].nu;
  std::vector<int> jobs;
  for (std::size_t j = 0; j < instance.n(); ++j) {
    long mega = mega_class(instance.jobs[j]);
    bool above = lo == kNegInf || mega >= lo + instance.r + 1;
    bool below = mega <= hi - instance.r - 1;
    if (above && below) jobs.push_back(static_cast<int>(j));
  }
  return jobs;
}

void check_psi(const Psi& psi, int r) {
  bool finite_seen = false;
  for (int i = 0; i < 7; ++i) {
    long v = psi.e[i];
    if (v == kNegInf) {
      if (finite_seen)
        fail(ErrorCode::Internal, "-inf entries must form a prefix");
      continue;
    }
    if (v == kPosInf) {
      if (i != 6) fail(ErrorCode::Internal, "+inf allowed only as the last entry");
      continue;
    }
    finite_seen = true;
    if (i > 0 && is_finite_mag(psi.e[i - 1]) && !dominates(v, psi.e[i - 1], r))
      fail(ErrorCode::Internal, "short magnitude entries must jump by r+1");
  }
}

std::vector<long> candidate_magnitudes(const Instance& instance) {
  long spread = ceil_log2(Rat(static_cast<long>(instance.n())));
  std::vector<long> set;
  for (const Rat& p : instance.jobs) {
    long base = ceil_log2(p);
    for (long k = -1; k <= spread + 1; ++k) set.push_back(base + k);
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

bool ClassKey::operator<(const ClassKey& other) const {
  if (is_alt != other.is_alt) return !is_alt;
  if (!is_alt) return mini < other.mini;
  if (range != other.range) return range < other.range;
  return mini < other.mini;
}

std::string ClassKey::text() const {
  std::ostringstream out;
  if (!is_alt) {
    out << "o:" << mini.k << "." << mini.ell;
  } else {
    out << "a:";
    if (range.k1)
      out << *range.k1;
    else
      out << "-inf";
    out << ".." << range.k2 << ":" << mini.k << "." << mini.ell;
  }
  return out.str();
}

bool ActiveClasses::covers_mega(long k) const {
  if (std::binary_search(original_megas.begin(), original_megas.end(), k))
    return true;
  for (const MegaRange& range : alt_ranges) {
    if (k > range.k2) continue;
    if (!range.k1 || k >= *range.k1) return true;
  }
  return false;
}

ActiveClasses active_classes_of(const Psi& psi, int r) {
  ActiveClasses active;
  for (long v : psi.e) {
    if (!is_finite_mag(v)) continue;
    for (long k = v - r; k <= v + r; ++k) active.original_megas.push_back(k);
  }
  std::sort(active.original_megas.begin(), active.original_megas.end());
  active.original_megas.erase(
      std::unique(active.original_megas.begin(), active.original_megas.end()),
      active.original_megas.end());

  for (int eta = 0; eta < 6; ++eta) {
    long lo = psi.e[eta], hi = psi.e[eta + 1];
    if (hi == kPosInf || hi == kNegInf) continue;  // gaps ending at +inf give no range
    if (lo == kNegInf) {
      // Only the last -inf entry opens a gap (the next entry is finite).
      active.alt_ranges.push_back(MegaRange{std::nullopt, hi - r - 1});
      continue;
    }
    if (hi - lo >= 2L * r + 2)
      active.alt_ranges.push_back(MegaRange{lo + r + 1, hi - r - 1});
  }
  std::sort(active.alt_ranges.begin(), active.alt_ranges.end());
  return active;
}

StateSpace::StateSpace(const Instance& instance) : instance_(&instance) {
  candidates_ = candidate_magnitudes(instance);
  max_job_mega_ = kNegInf;
  for (std::size_t j = 0; j < instance.n(); ++j) {
    MiniClassId mini = mini_class(instance.jobs[j], instance.eps);
    mini_members_[mini].push_back(static_cast<int>(j));
    max_job_mega_ = std::max(max_job_mega_, mini.k);
  }
}

const AlternativeJobSet& StateSpace::alt_set(const MegaRange& range) {
  auto it = alt_cache_.find(range);
  if (it == alt_cache_.end()) {
    auto set = std::make_unique<AlternativeJobSet>(make_alternative_jobs(*instance_, range));
    it = alt_cache_.emplace(range, std::move(set)).first;
  }
  return *it->second;
}

const ClassItems& StateSpace::items_for(const ClassKey& key) {
  auto it = class_cache_.find(key);
  if (it != class_cache_.end()) return *it->second;

  auto table = std::make_unique<ClassItems>();
  table->key = key;
  if (!key.is_alt) {
    auto members = mini_members_.find(key.mini);
    if (members != mini_members_.end()) {
      for (int j : members->second) {
        ClassItem item;
        item.size = instance_->jobs[j];
        item.jobs = {j};
        table->items.push_back(std::move(item));
      }
    }
  } else {
    const AlternativeJobSet& set = alt_set(key.range);
    for (const AlternativeJob& bundle : set.bundles) {
      if (mini_class(bundle.size, instance_->eps) != key.mini) continue;
      ClassItem item;
      item.size = bundle.size;
      item.jobs = bundle.members;
      table->items.push_back(std::move(item));
    }
    std::sort(table->items.begin(), table->items.end(),
              [](const ClassItem& a, const ClassItem& b) {
                if (a.size != b.size) return a.size < b.size;
                return a.jobs.front() < b.jobs.front();
              });
  }
  table->prefix.assign(table->items.size() + 1, Rat(0));
  for (std::size_t i = 0; i < table->items.size(); ++i)
    table->prefix[i + 1] = table->prefix[i] + table->items[i].size;
  return *class_cache_.emplace(key, std::move(table)).first->second;
}

const StateSpace::PsiInfo& StateSpace::info(const Psi& psi) {
  auto it = psi_cache_.find(psi);
  if (it != psi_cache_.end()) return *it->second;

  check_psi(psi, instance_->r);
  auto info = std::make_unique<PsiInfo>();
  info->psi = psi;
  info->active = active_classes_of(psi, instance_->r);
  info->psi_text = psi_text(psi);

  std::vector<ClassKey> keys;
  for (long k : info->active.original_megas) {
    auto lo = mini_members_.lower_bound(MiniClassId{k, 0});
    for (auto mit = lo; mit != mini_members_.end() && mit->first.k == k; ++mit)
      keys.push_back(ClassKey{false, MegaRange{}, mit->first});
  }
  for (const MegaRange& range : info->active.alt_ranges) {
    bool any = false;
    for (const Rat& p : instance_->jobs)
      if (range.contains(p)) {
        any = true;
        break;
      }
    if (!any) continue;
    const AlternativeJobSet& set = alt_set(range);
    std::vector<MiniClassId> minis;
    for (const AlternativeJob& bundle : set.bundles)
      minis.push_back(mini_class(bundle.size, instance_->eps));
    std::sort(minis.begin(), minis.end());
    minis.erase(std::unique(minis.begin(), minis.end()), minis.end());
    for (const MiniClassId& mini : minis)
      keys.push_back(ClassKey{true, range, mini});
  }
  std::sort(keys.begin(), keys.end());
  for (const ClassKey& key : keys) {
    const ClassItems& items = items_for(key);
    if (items.population() == 0) continue;
    info->classes.push_back(&items);
    info->populations.push_back(items.population());
  }
  return *psi_cache_.emplace(psi, std::move(info)).first->second;
}

void StateSpace::validate_counts(const PsiInfo& info, const std::vector<int>& u) const {
  if (u.size() != info.classes.size())
    fail(ErrorCode::KeyMismatch,
         "status vector has " + std::to_string(u.size()) + " components, active classes " +
             std::to_string(info.classes.size()));
  for (std::size_t c = 0; c < u.size(); ++c)
    if (u[c] < 0 || u[c] > info.populations[c])
      fail(ErrorCode::InsufficientPopulation,
           "count " + std::to_string(u[c]) + " outside class population");
}

namespace {

bool is_left_shift(const Psi& from, const Psi& to) {
  for (int eta = 1; eta <= 6; ++eta)
    if (from.e[eta] != to.e[eta - 1]) return false;
  return true;
}

}  // namespace

bool StateSpace::compatible(const Psi& psi, const std::vector<int>& u,
                            const Psi& psi2, const std::vector<int>& u2) {
  const PsiInfo& a = info(psi);
  const PsiInfo& b = info(psi2);
  validate_counts(a, u);
  validate_counts(b, u2);

  if (psi == psi2) {
    for (std::size_t c = 0; c < u.size(); ++c)
      if (u[c] > u2[c]) return false;
    return true;
  }
  if (!is_left_shift(psi, psi2)) return false;

  // Merge-walk the two canonical key lists: shared classes need u <= u2,
  // classes entering the window must be untouched.
  std::size_t ia = 0, ib = 0;
  while (ia < a.classes.size() || ib < b.classes.size()) {
    if (ia == a.classes.size()) {
      if (u2[ib] != 0) return false;
      ++ib;
    } else if (ib == b.classes.size()) {
      ++ia;  // leaving class, no constraint here
    } else if (a.classes[ia]->key == b.classes[ib]->key) {
      if (u[ia] > u2[ib]) return false;
      ++ia;
      ++ib;
    } else if (a.classes[ia]->key < b.classes[ib]->key) {
      ++ia;
    } else {
      if (u2[ib] != 0) return false;
      ++ib;
    }
  }
  return true;
}

std::pair<std::vector<DeltaItem>, Rat> StateSpace::delta_jobs(
    const Psi& psi, const std::vector<int>& u, const Psi& psi2,
    const std::vector<int>& u2) {
  if (!compatible(psi, u, psi2, u2))
    fail(ErrorCode::Internal, "delta of incompatible pairs");
  const PsiInfo& a = info(psi);
  const PsiInfo& b = info(psi2);

  std::vector<DeltaItem> items;
  Rat total = 0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.classes.size()) {
    const ClassItems* cls = a.classes[ia];
    while (ib < b.classes.size() && b.classes[ib]->key < cls->key) ++ib;
    int from = u[ia];
    int to;
    if (ib < b.classes.size() && b.classes[ib]->key == cls->key) {
      to = u2[ib];
      if (to > cls->population())
        fail(ErrorCode::InsufficientPopulation, "class " + cls->key.text());
    } else {
      to = cls->population();  // class leaves the window, finish it
    }
    for (int idx = from; idx < to; ++idx) items.push_back(DeltaItem{cls, idx});
    total += cls->prefix[to] - cls->prefix[from];
    ++ia;
  }
  return {std::move(items), std::move(total)};
}

std::vector<Psi> StateSpace::shift_candidates(const Psi& psi) const {
  std::vector<Psi> result{psi};
  long last = psi.e[6];
  if (!is_finite_mag(last)) return result;  // +inf is terminal
  Psi shifted;
  for (int eta = 0; eta < 6; ++eta) shifted.e[eta] = psi.e[eta + 1];
  for (long cand : candidates_) {
    if (cand < last + instance_->r + 1) continue;
    Psi next = shifted;
    next.e[6] = cand;
    result.push_back(next);
  }
  Psi next = shifted;
  next.e[6] = kPosInf;
  result.push_back(next);
  return result;
}

std::string StateSpace::state_key(const Psi& psi, const std::vector<int>& u) {
  const PsiInfo& inf = info(psi);
  validate_counts(inf, u);
  std::ostringstream out;
  out << inf.psi_text << ";";
  for (std::size_t c = 0; c < u.size(); ++c) {
    if (c) out << ",";
    out << inf.classes[c]->key.text() << "=" << u[c];
  }
  return out.str();
}

std::string psi_text(const Psi& psi) {
  std::ostringstream out;
  for (int i = 0; i < 7; ++i) {
    if (i) out << ",";
    out << mag_text(psi.e[i]);
  }
  return out.str();
}

}  // namespace relsched
