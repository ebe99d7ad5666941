#include "relsched/dp.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "relsched/errors.hpp"

namespace relsched {

namespace {

constexpr int kMaxTransitions = 30'000'000;

}  // namespace

LayeredGraph::LayeredGraph(const Instance& instance)
    : instance_(&instance), space_(instance) {
  build();
}

int LayeredGraph::intern_state(const Psi& psi, std::vector<int> counts, int depth) {
  std::string key = space_.state_key(psi, counts);
  auto it = state_index_.find(key);
  if (it != state_index_.end()) {
    states_[it->second].mindepth = std::min(states_[it->second].mindepth, depth);
    return it->second;
  }
  const StateSpace::PsiInfo& info = space_.info(psi);
  StateRec rec;
  rec.psi = psi;
  rec.counts = std::move(counts);
  rec.key = key;
  rec.mindepth = depth;
  bool zero = true;
  for (int c : rec.counts) zero &= (c == 0);
  bool neg_prefix = true;
  for (int i = 0; i < 5; ++i) neg_prefix &= (psi.e[i] == kNegInf);
  rec.start = zero && neg_prefix && is_finite_mag(psi.e[5]);
  rec.final_ok = psi.e[6] == kPosInf && rec.counts == info.populations &&
                 space_.max_job_mega() <= psi.e[5] + instance_->r;
  int id = static_cast<int>(states_.size());
  states_.push_back(std::move(rec));
  state_index_.emplace(std::move(key), id);
  out_.emplace_back();
  return id;
}

void LayeredGraph::expand(int s) {
  // Copy what we need up front: states_ may reallocate during interning.
  const Psi psi = states_[s].psi;
  const std::vector<int> counts = states_[s].counts;
  const int depth = states_[s].mindepth;
  const StateSpace::PsiInfo& info = space_.info(psi);
  const std::size_t ncls = info.classes.size();

  auto add_transition = [&](const Psi& psi2, std::vector<int> counts2, Rat work) {
    if (static_cast<int>(transitions_.size()) >= kMaxTransitions)
      fail(ErrorCode::BudgetExceeded, "state graph exceeded the transition cap");
    int to = intern_state(psi2, std::move(counts2), depth + 1);
    int id = static_cast<int>(transitions_.size());
    transitions_.push_back(Transition{s, to, std::move(work)});
    out_[s].push_back(id);
  };

  // Same-window successors: every componentwise increase of the counts.
  {
    std::vector<int> next(counts);
    std::function<void(std::size_t, Rat)> rec = [&](std::size_t c, Rat acc) {
      if (c == ncls) {
        add_transition(psi, next, acc);
        return;
      }
      const ClassItems& cls = *info.classes[c];
      for (int v = counts[c]; v <= cls.population(); ++v) {
        next[c] = v;
        rec(c + 1, acc + (cls.prefix[v] - cls.prefix[counts[c]]));
      }
      next[c] = counts[c];
    };
    rec(0, Rat(0));
  }

  // Shifted windows: classes leaving the window are finished on this
  // machine, entering classes start untouched, shared classes may advance.
  for (const Psi& psi2 : space_.shift_candidates(psi)) {
    if (psi2 == psi) continue;
    const StateSpace::PsiInfo& info2 = space_.info(psi2);
    const std::size_t ncls2 = info2.classes.size();

    // Map each class of psi2 to its position in psi's class list (-1 = new).
    std::vector<int> shared_pos(ncls2, -1);
    {
      std::size_t ia = 0;
      for (std::size_t ib = 0; ib < ncls2; ++ib) {
        while (ia < ncls && info.classes[ia]->key < info2.classes[ib]->key) ++ia;
        if (ia < ncls && info.classes[ia]->key == info2.classes[ib]->key)
          shared_pos[ib] = static_cast<int>(ia);
      }
    }
    Rat leave_work = 0;
    {
      std::vector<char> kept(ncls, 0);
      for (std::size_t ib = 0; ib < ncls2; ++ib)
        if (shared_pos[ib] >= 0) kept[shared_pos[ib]] = 1;
      for (std::size_t c = 0; c < ncls; ++c) {
        if (kept[c]) continue;
        const ClassItems& cls = *info.classes[c];
        leave_work += cls.prefix[cls.population()] - cls.prefix[counts[c]];
      }
    }

    std::vector<int> next(ncls2, 0);
    std::function<void(std::size_t, Rat)> rec = [&](std::size_t c, Rat acc) {
      if (c == ncls2) {
        add_transition(psi2, next, acc);
        return;
      }
      if (shared_pos[c] < 0) {
        next[c] = 0;  // entering class, must be untouched
        rec(c + 1, acc);
        return;
      }
      const ClassItems& cls = *info2.classes[c];
      int base = counts[shared_pos[c]];
      for (int v = base; v <= cls.population(); ++v) {
        next[c] = v;
        rec(c + 1, acc + (cls.prefix[v] - cls.prefix[base]));
      }
    };
    rec(0, leave_work);
  }
}

void LayeredGraph::build() {
  const int m = static_cast<int>(instance_->m());
  const int r = instance_->r;
  const std::vector<long>& cands = space_.candidates();

  std::deque<int> queue;
  for (long c5 : cands) {
    std::vector<long> tails{kPosInf};
    for (long c6 : cands)
      if (c6 >= c5 + r + 1) tails.push_back(c6);
    for (long c6 : tails) {
      Psi psi;
      psi.e[5] = c5;
      psi.e[6] = c6;
      const StateSpace::PsiInfo& info = space_.info(psi);
      std::vector<int> zero(info.classes.size(), 0);
      int id = intern_state(psi, std::move(zero), 0);
      queue.push_back(id);
    }
  }

  std::vector<char> expanded;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    if (s < static_cast<int>(expanded.size()) && expanded[s]) continue;
    if (s >= static_cast<int>(expanded.size())) expanded.resize(s + 1, 0);
    if (states_[s].mindepth >= m) continue;  // no layer left for its successors
    expanded[s] = 1;
    std::size_t before = states_.size();
    expand(s);
    for (std::size_t ns = before; ns < states_.size(); ++ns)
      queue.push_back(static_cast<int>(ns));
  }

  in_by_key_.assign(states_.size(), {});
  in_by_work_.assign(states_.size(), {});
  for (int t = 0; t < static_cast<int>(transitions_.size()); ++t)
    in_by_key_[transitions_[t].to].push_back(t);
  for (auto& list : in_by_key_) {
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return states_[transitions_[a].from].key < states_[transitions_[b].from].key;
    });
  }
  in_by_work_ = in_by_key_;
  for (auto& list : in_by_work_) {
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
      return transitions_[a].work < transitions_[b].work;
    });
  }
  out_by_work_ = out_;
  for (auto& list : out_by_work_) {
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
      return transitions_[a].work < transitions_[b].work;
    });
  }

  distinct_works_.clear();
  for (const Transition& tr : transitions_) distinct_works_.push_back(tr.work);
  std::sort(distinct_works_.begin(), distinct_works_.end());
  distinct_works_.erase(std::unique(distinct_works_.begin(), distinct_works_.end()),
                        distinct_works_.end());
  work_idx_.resize(transitions_.size());
  for (std::size_t t = 0; t < transitions_.size(); ++t)
    work_idx_[t] = static_cast<int>(
        std::lower_bound(distinct_works_.begin(), distinct_works_.end(),
                         transitions_[t].work) -
        distinct_works_.begin());
}

std::vector<int> LayeredGraph::start_vertices() const {
  std::vector<int> result;
  for (int s = 0; s < num_states(); ++s) {
    if (!states_[s].start) continue;
    for (int t : out_[s]) result.push_back(t);
  }
  std::sort(result.begin(), result.end(),
            [&](int a, int b) { return vertex_before(a, b); });
  return result;
}

std::vector<int> LayeredGraph::successors(int t) const {
  std::vector<int> result;
  const Transition& tr = transitions_[t];
  for (int nxt : out_[tr.to])
    if (transitions_[nxt].work >= tr.work) result.push_back(nxt);
  std::sort(result.begin(), result.end(),
            [&](int a, int b) { return vertex_before(a, b); });
  return result;
}

bool LayeredGraph::vertex_before(int a, int b) const {
  const Transition& ta = transitions_[a];
  const Transition& tb = transitions_[b];
  const std::string& fa = states_[ta.from].key;
  const std::string& fb = states_[tb.from].key;
  if (fa != fb) return fa < fb;
  return states_[ta.to].key < states_[tb.to].key;
}

namespace {

struct SolveContext {
  LayeredGraph& graph;
  const Objective& objective;
  std::vector<Rat> layer_speeds;
  // weight per (layer, distinct work), filled on demand
  mutable std::vector<std::vector<std::optional<Rat>>> weight_cache;

  void init_cache() {
    weight_cache.assign(layer_speeds.size(),
                        std::vector<std::optional<Rat>>(graph.distinct_works().size()));
  }

  bool makespan() const { return objective.kind == Objective::Kind::Makespan; }
  bool cover() const { return objective.kind == Objective::Kind::Cover; }
  bool sum() const { return objective.kind == Objective::Kind::SumF; }

  const Rat& weight(int t, int layer) const {
    auto& slot = weight_cache[layer][graph.work_index(t)];
    if (!slot) {
      Rat load = graph.transition(t).work / layer_speeds[layer];
      slot = sum() ? (*objective.f)(load) : std::move(load);
    }
    return *slot;
  }

  // "a is a better label than b" for path values.
  bool better(const Rat& a, const Rat& b) const {
    return cover() ? a > b : a < b;
  }

  Rat combine(const Rat& prefix, const Rat& w) const {
    if (makespan()) return std::max(prefix, w);
    if (cover()) return std::min(prefix, w);
    return prefix + w;
  }
};

}  // namespace

PathResult best_path(LayeredGraph& graph, const std::vector<Machine>& machines,
                     const Objective& objective) {
  const Instance& instance = graph.instance();
  const int m = static_cast<int>(instance.m());
  if (static_cast<int>(machines.size()) != m)
    fail(ErrorCode::KeyMismatch, "machine list does not match the instance");
  if (objective.kind == Objective::Kind::SumF && !objective.f)
    fail(ErrorCode::Internal, "sum objective without function");

  SolveContext ctx{graph, objective, {}, {}};
  MachineOrder order = machine_order(machines);
  ctx.layer_speeds = order.speeds;
  ctx.init_cache();

  const int T = graph.num_transitions();
  // labels[layer][t]: best value of a partial path ending with vertex t at
  // that layer (0-based layers here).
  std::vector<std::vector<std::optional<Rat>>> labels(
      m, std::vector<std::optional<Rat>>(T));

  for (int t = 0; t < T; ++t)
    if (graph.state_is_start(graph.transition(t).from))
      labels[0][t] = ctx.weight(t, 0);

  for (int layer = 1; layer < m; ++layer) {
    const auto& prev = labels[layer - 1];
    auto& cur = labels[layer];
    // For each state, the prefix-best label of its in-vertices ordered by
    // work; out-vertices then binary-search their work bound.
    for (int s = 0; s < graph.num_states(); ++s) {
      if (graph.out_of(s).empty()) continue;
      const std::vector<int>& in_list = graph.into_by_work(s);
      std::vector<const Rat*> works;
      std::vector<Rat> best;
      works.reserve(in_list.size());
      for (int t : in_list) {
        if (!prev[t]) continue;
        const Rat& label = *prev[t];
        if (best.empty()) {
          best.push_back(label);
        } else {
          best.push_back(ctx.better(label, best.back()) ? label : best.back());
        }
        works.push_back(&graph.transition(t).work);
      }
      if (works.empty()) continue;
      for (int nxt : graph.out_of(s)) {
        const Rat& bound = graph.transition(nxt).work;
        // Rightmost labeled in-vertex with work <= bound.
        long lo = 0, hi = static_cast<long>(works.size()) - 1, pos = -1;
        while (lo <= hi) {
          long mid = (lo + hi) / 2;
          if (*works[mid] <= bound) {
            pos = mid;
            lo = mid + 1;
          } else {
            hi = mid - 1;
          }
        }
        if (pos < 0) continue;
        cur[nxt] = ctx.combine(best[pos], ctx.weight(nxt, layer));
      }
    }
  }

  // Optimum over final vertices of the last layer.
  std::optional<Rat> opt;
  for (int t = 0; t < T; ++t) {
    if (!labels[m - 1][t] || !graph.is_final_vertex(t)) continue;
    if (!opt || ctx.better(*labels[m - 1][t], *opt)) opt = *labels[m - 1][t];
  }
  if (!opt) fail(ErrorCode::NoFeasiblePath, "no complete schedule in the graph");

  // Backward pass: lexicographically smallest reversed vertex-number
  // sequence among optimal paths, chosen greedily from the last layer.
  std::vector<int> path(m, -1);
  {
    int chosen = -1;
    for (int t = 0; t < T; ++t) {
      if (!labels[m - 1][t] || !graph.is_final_vertex(t)) continue;
      if (*labels[m - 1][t] != *opt) continue;
      if (chosen < 0 || graph.vertex_before(t, chosen)) chosen = t;
    }
    path[m - 1] = chosen;
  }
  Rat required = *opt;  // for sum objectives: exact prefix value still needed
  for (int layer = m - 2; layer >= 0; --layer) {
    const int next_t = path[layer + 1];
    if (ctx.sum()) required -= ctx.weight(next_t, layer + 1);
    const LayeredGraph::Transition& next_tr = graph.transition(next_t);
    int chosen = -1;
    for (int t : graph.into_by_key(next_tr.from)) {
      if (!labels[layer][t]) continue;
      if (graph.transition(t).work > next_tr.work) continue;
      const Rat& label = *labels[layer][t];
      bool ok = ctx.makespan() ? label <= *opt
                               : (ctx.cover() ? label >= *opt : label == required);
      if (ok) {
        chosen = t;
        break;
      }
    }
    if (chosen < 0) fail(ErrorCode::Internal, "backward pass lost the optimal path");
    path[layer] = chosen;
  }

  PathResult result;
  result.order = order;
  result.vertex_per_layer = path;
  result.value = *opt;
  std::vector<int> assignment(instance.n(), -1);
  for (int layer = 0; layer < m; ++layer) {
    const LayeredGraph::Transition& tr = graph.transition(path[layer]);
    auto [items, work] = graph.space().delta_jobs(
        graph.state_psi(tr.from), graph.state_counts(tr.from),
        graph.state_psi(tr.to), graph.state_counts(tr.to));
    if (work != tr.work) fail(ErrorCode::Internal, "delta work mismatch");
    for (const DeltaItem& item : items) {
      for (int j : item.get().jobs) {
        if (assignment[j] != -1) fail(ErrorCode::Internal, "job assigned twice");
        assignment[j] = order.ids[layer];
      }
    }
    result.items_per_layer.push_back(std::move(items));
  }
  for (std::size_t j = 0; j < assignment.size(); ++j)
    if (assignment[j] == -1) fail(ErrorCode::Internal, "job left unassigned");
  result.schedule = make_schedule(instance, machines, std::move(assignment));
  if (objective_value(instance, result.schedule, objective) != result.value)
    fail(ErrorCode::Internal, "schedule value does not match path value");
  return result;
}

PathResult best_path(LayeredGraph& graph, const Objective& objective) {
  return best_path(graph, graph.instance().machines, objective);
}

std::vector<std::string> verify_path(LayeredGraph& graph, const PathResult& path) {
  const Instance& instance = graph.instance();
  std::vector<std::string> violations;
  const int m = static_cast<int>(path.vertex_per_layer.size());
  if (m != static_cast<int>(instance.m())) {
    violations.push_back("path length differs from machine count");
    return violations;
  }

  std::vector<int> seen(instance.n(), 0);
  for (int layer = 0; layer < m; ++layer) {
    for (const DeltaItem& item : path.items_per_layer[layer]) {
      // Window containment of the item's class in the layer's pair1 window.
      const LayeredGraph::Transition& tr = graph.transition(path.vertex_per_layer[layer]);
      const ActiveClasses& active =
          active_classes_of(graph.state_psi(tr.from), instance.r);
      const ClassKey& key = item.cls->key;
      bool contained =
          key.is_alt
              ? std::find(active.alt_ranges.begin(), active.alt_ranges.end(),
                          key.range) != active.alt_ranges.end()
              : std::binary_search(active.original_megas.begin(),
                                   active.original_megas.end(), key.mini.k);
      if (!contained)
        violations.push_back("layer " + std::to_string(layer + 1) +
                             " schedules class " + key.text() +
                             " outside its window");
      int machine = -1;
      for (int j : item.get().jobs) {
        ++seen[j];
        int assigned = path.schedule.assignment[j];
        if (machine == -1) machine = assigned;
        if (assigned != machine)
          violations.push_back("bundle split across machines at job " +
                               std::to_string(j + 1));
        if (assigned != path.order.ids[layer])
          violations.push_back("job " + std::to_string(j + 1) +
                               " not on its layer's machine");
      }
    }
  }
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (seen[j] == 0)
      violations.push_back("job " + std::to_string(j + 1) + " unassigned");
    if (seen[j] > 1)
      violations.push_back("job " + std::to_string(j + 1) + " assigned twice");
  }
  for (int layer = 0; layer + 1 < m; ++layer) {
    const Rat& w1 = graph.transition(path.vertex_per_layer[layer]).work;
    const Rat& w2 = graph.transition(path.vertex_per_layer[layer + 1]).work;
    if (w1 > w2)
      violations.push_back("works decrease between layers " +
                           std::to_string(layer + 1) + " and " +
                           std::to_string(layer + 2));
  }
  for (int layer = 0; layer + 1 < m; ++layer) {
    const LayeredGraph::Transition& a = graph.transition(path.vertex_per_layer[layer]);
    const LayeredGraph::Transition& b = graph.transition(path.vertex_per_layer[layer + 1]);
    if (a.to != b.from)
      violations.push_back("pair mismatch between layers " +
                           std::to_string(layer + 1) + " and " +
                           std::to_string(layer + 2));
  }
  return violations;
}

}  // namespace relsched
