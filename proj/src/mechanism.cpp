#include "relsched/mechanism.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "relsched/errors.hpp"

namespace relsched {

Rat WorkCurve::eval(const Rat& bid) const {
  if (bid <= 0) fail(ErrorCode::Internal, "bids are positive");
  std::size_t pos =
      std::lower_bound(breakpoints.begin(), breakpoints.end(), bid) - breakpoints.begin();
  if (pos < breakpoints.size() && breakpoints[pos] == bid) return breakpoint_values[pos];
  return segment_values[pos];
}

Rat WorkCurve::integral_prefix(const Rat& bid) const {
  Rat total = 0;
  Rat left = 0;
  std::size_t seg = 0;
  while (seg < breakpoints.size() && breakpoints[seg] < bid) {
    total += segment_values[seg] * (breakpoints[seg] - left);
    left = breakpoints[seg];
    ++seg;
  }
  total += segment_values[seg] * (bid - left);
  return total;
}

Rat WorkCurve::integral_total() const {
  if (!vanishes()) fail(ErrorCode::UnboundedH, "work does not vanish for large bids");
  Rat total = 0;
  Rat left = 0;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    total += segment_values[k] * (breakpoints[k] - left);
    left = breakpoints[k];
  }
  return total;
}

bool WorkCurve::non_increasing() const {
  for (std::size_t k = 0; k + 1 < segment_values.size(); ++k)
    if (segment_values[k] < segment_values[k + 1]) return false;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (breakpoint_values[k] > segment_values[k]) return false;
    if (breakpoint_values[k] < segment_values[k + 1]) return false;
  }
  return true;
}

namespace {

// One per-vertex value function restricted to a bid interval: makespan
// max(base, work*b), cover min(base, work*b), sum objective base + f(work*b).
// All piecewise linear and continuous in the bid b.
struct FFun {
  Rat work;
  Rat base;

  bool operator<(const FFun& other) const {
    if (work != other.work) return work < other.work;
    return base < other.base;
  }
  bool operator==(const FFun& other) const {
    return work == other.work && base == other.base;
  }
};

struct FamilyContext {
  Objective::Kind kind;
  const WellBehavedFn* f = nullptr;  // sum objective only

  Rat value(const FFun& fn, const Rat& b) const {
    switch (kind) {
      case Objective::Kind::Makespan: return std::max(fn.base, Rat(fn.work * b));
      case Objective::Kind::Cover: return std::min(fn.base, Rat(fn.work * b));
      case Objective::Kind::SumF: return fn.base + (*f)(fn.work * b);
    }
    fail(ErrorCode::Internal, "unknown objective");
  }

  // Slope of the linear piece immediately to the right of b.
  Rat right_slope(const FFun& fn, const Rat& b) const {
    if (fn.work == 0) return 0;
    switch (kind) {
      case Objective::Kind::Makespan:
        return fn.work * b >= fn.base ? fn.work : Rat(0);
      case Objective::Kind::Cover:
        return fn.work * b < fn.base ? fn.work : Rat(0);
      case Objective::Kind::SumF:
        return fn.work * f->slope_right_of(fn.work * b);
    }
    fail(ErrorCode::Internal, "unknown objective");
  }

  // Smallest kink of fn strictly above b, if any.
  std::optional<Rat> kink_after(const FFun& fn, const Rat& b) const {
    if (fn.work == 0) return std::nullopt;
    if (kind != Objective::Kind::SumF) {
      if (fn.base <= 0) return std::nullopt;
      Rat kink = fn.base / fn.work;
      return kink > b ? std::optional<Rat>(kink) : std::nullopt;
    }
    const auto& bp = f->breakpoints();
    const Rat x = fn.work * b;
    std::size_t idx = std::upper_bound(bp.begin(), bp.end(), x) - bp.begin();
    if (idx >= bp.size()) return std::nullopt;
    return bp[idx] / fn.work;
  }

  int pieces_between(const FFun& fn, const Rat& lo, const std::optional<Rat>& hi) const {
    int kinks = 0;
    Rat at = lo;
    while (true) {
      std::optional<Rat> k = kink_after(fn, at);
      if (!k || (hi && *k >= *hi)) break;
      ++kinks;
      at = *k;
    }
    return kinks + 1;
  }

  // Minimize for makespan/sum, maximize for cover; ties by right slope.
  bool germ_better(const FFun& a, const FFun& b, const Rat& at) const {
    Rat va = value(a, at), vb = value(b, at);
    bool maximize = kind == Objective::Kind::Cover;
    if (va != vb) return maximize ? va > vb : va < vb;
    Rat sa = right_slope(a, at), sb = right_slope(b, at);
    return maximize ? sa > sb : sa < sb;
  }
};

int sign_of(const Rat& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int sign_at(const FamilyContext& ctx, const FFun& u, const FFun& c, const Rat& b) {
  return sign_of(ctx.value(u, b) - ctx.value(c, b));
}

// Sign of F_u - F_c on (b, b + delta) for small delta.
int sign_after(const FamilyContext& ctx, const FFun& u, const FFun& c, const Rat& b) {
  int s = sign_at(ctx, u, c, b);
  if (s != 0) return s;
  return sign_of(ctx.right_slope(u, b) - ctx.right_slope(c, b));
}

// First point strictly above e (and below limit, when given) where the order
// of F_u and F_c leaves the state it has just after e. Returns a point where
// the two functions meet, separate, or cross.
std::optional<Rat> first_order_change(const FamilyContext& ctx, const FFun& u,
                                      const FFun& c, const Rat& e,
                                      const std::optional<Rat>& limit) {
  const int ref = sign_after(ctx, u, c, e);
  auto in_range = [&](const Rat& x) { return x > e && (!limit || x < *limit); };
  auto changed = [&](const Rat& b) {
    return sign_at(ctx, u, c, b) != ref || sign_after(ctx, u, c, b) != ref;
  };

  if (ctx.kind != Objective::Kind::SumF) {
    // At most one kink each: walk the handful of linear cells.
    std::vector<Rat> cells;
    for (const FFun* fn : {&u, &c}) {
      std::optional<Rat> k = ctx.kink_after(*fn, e);
      if (k && in_range(*k)) cells.push_back(*k);
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    Rat a = e;
    for (std::size_t idx = 0; idx <= cells.size(); ++idx) {
      std::optional<Rat> cell_end =
          idx < cells.size() ? std::optional<Rat>(cells[idx]) : limit;
      Rat va = ctx.value(u, a) - ctx.value(c, a);
      Rat slope = ctx.right_slope(u, a) - ctx.right_slope(c, a);
      if (slope != 0) {
        Rat root = a - va / slope;
        if (root > a && in_range(root) && (!cell_end || root <= *cell_end) &&
            changed(root))
          return root;
      }
      if (!cell_end || !in_range(*cell_end)) return std::nullopt;
      if (changed(*cell_end)) return *cell_end;
      a = *cell_end;
    }
    return std::nullopt;
  }

  // Sum objective: with distinct works the difference is monotone in b, so
  // `changed` is monotone along b. Binary-search each function's kink grid
  // for the first changed kink, which brackets a kink-free final cell.
  if (u.work == c.work) return std::nullopt;

  std::optional<Rat> first_true;  // smallest changed kink seen
  Rat cell_lo = e;                // largest unchanged point seen
  auto search = [&](const FFun& fn) {
    if (fn.work == 0) return;  // constant function, no kinks
    const auto& bp = ctx.f->breakpoints();
    auto kink = [&](std::size_t i) { return bp[i] / fn.work; };
    std::size_t lo = 1, hi = bp.size();
    while (lo < hi) {  // first kink strictly above e
      std::size_t mid = (lo + hi) / 2;
      if (kink(mid) > e) hi = mid; else lo = mid + 1;
    }
    std::size_t begin = lo;
    hi = bp.size();
    if (limit) {
      std::size_t l2 = begin;
      while (l2 < hi) {  // first kink at or above the limit
        std::size_t mid = (l2 + hi) / 2;
        if (kink(mid) >= *limit) hi = mid; else l2 = mid + 1;
      }
    }
    if (begin >= hi) return;
    std::size_t lo3 = begin, hi3 = hi;
    while (lo3 < hi3) {  // first kink with the order changed
      std::size_t mid = (lo3 + hi3) / 2;
      if (changed(kink(mid))) hi3 = mid; else lo3 = mid + 1;
    }
    if (lo3 < hi) {
      Rat k = kink(lo3);
      if (!first_true || k < *first_true) first_true = k;
    }
    if (lo3 > begin) {
      Rat k = kink(lo3 - 1);
      if (k > cell_lo) cell_lo = k;
    }
  };
  search(u);
  search(c);

  std::optional<Rat> cell_hi = limit;
  if (first_true && (!cell_hi || *first_true < *cell_hi)) cell_hi = first_true;

  Rat va = ctx.value(u, cell_lo) - ctx.value(c, cell_lo);
  Rat slope = ctx.right_slope(u, cell_lo) - ctx.right_slope(c, cell_lo);
  if (slope != 0) {
    Rat root = cell_lo - va / slope;
    if (root > cell_lo && in_range(root) && (!cell_hi || root <= *cell_hi) &&
        changed(root))
      return root;
  }
  if (first_true && in_range(*first_true)) return first_true;
  return std::nullopt;
}

struct LabelContext {
  LayeredGraph& graph;
  const Objective& objective;
  std::vector<Rat> layer_speeds;
  mutable std::vector<std::vector<std::optional<Rat>>> weight_cache;

  void init_cache() {
    weight_cache.assign(layer_speeds.size(),
                        std::vector<std::optional<Rat>>(graph.distinct_works().size()));
  }

  bool maximize() const { return objective.kind == Objective::Kind::Cover; }

  const Rat& weight(int t, int layer) const {
    auto& slot = weight_cache[layer][graph.work_index(t)];
    if (!slot) {
      Rat load = graph.transition(t).work / layer_speeds[layer];
      slot = objective.kind == Objective::Kind::SumF ? (*objective.f)(load)
                                                     : std::move(load);
    }
    return *slot;
  }
  bool better(const Rat& a, const Rat& b) const { return maximize() ? a > b : a < b; }
  Rat combine(const Rat& acc, const Rat& w) const {
    switch (objective.kind) {
      case Objective::Kind::Makespan: return std::max(acc, w);
      case Objective::Kind::Cover: return std::min(acc, w);
      case Objective::Kind::SumF: return acc + w;
    }
    fail(ErrorCode::Internal, "unknown objective");
  }
};

// Forward labels at `upto_layer` (0-based); layer 0 admits start states only.
std::vector<std::optional<Rat>> forward_labels(const LabelContext& ctx, int upto_layer) {
  const int T = ctx.graph.num_transitions();
  std::vector<std::optional<Rat>> cur(T);
  for (int t = 0; t < T; ++t)
    if (ctx.graph.state_is_start(ctx.graph.transition(t).from))
      cur[t] = ctx.weight(t, 0);
  for (int layer = 1; layer <= upto_layer; ++layer) {
    std::vector<std::optional<Rat>> next(T);
    for (int s = 0; s < ctx.graph.num_states(); ++s) {
      if (ctx.graph.out_of(s).empty()) continue;
      std::vector<const Rat*> works;
      std::vector<Rat> best;
      for (int t : ctx.graph.into_by_work(s)) {
        if (!cur[t]) continue;
        const Rat& label = *cur[t];
        best.push_back(best.empty() ? label
                                    : (ctx.better(label, best.back()) ? label : best.back()));
        works.push_back(&ctx.graph.transition(t).work);
      }
      if (works.empty()) continue;
      for (int nxt : ctx.graph.out_of(s)) {
        const Rat& bound = ctx.graph.transition(nxt).work;
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
        next[nxt] = ctx.combine(best[pos], ctx.weight(nxt, layer));
      }
    }
    cur.swap(next);
  }
  return cur;
}

// Backward labels at `from_layer`: best completion of a path whose vertex at
// that layer is the given transition (its own weight included).
std::vector<std::optional<Rat>> backward_labels(const LabelContext& ctx, int from_layer) {
  const int T = ctx.graph.num_transitions();
  const int m = static_cast<int>(ctx.layer_speeds.size());
  std::vector<std::optional<Rat>> cur(T);
  for (int t = 0; t < T; ++t)
    if (ctx.graph.is_final_vertex(t)) cur[t] = ctx.weight(t, m - 1);
  for (int layer = m - 2; layer >= from_layer; --layer) {
    std::vector<std::optional<Rat>> next(T);
    for (int s = 0; s < ctx.graph.num_states(); ++s) {
      const std::vector<int>& out = ctx.graph.out_by_work(s);
      if (out.empty()) continue;
      // suffix best over successors, walked in descending work order
      std::vector<const Rat*> works;
      std::vector<Rat> best;
      for (auto it = out.rbegin(); it != out.rend(); ++it) {
        if (!cur[*it]) continue;
        const Rat& label = *cur[*it];
        best.push_back(best.empty() ? label
                                    : (ctx.better(label, best.back()) ? label : best.back()));
        works.push_back(&ctx.graph.transition(*it).work);
      }
      if (works.empty()) continue;
      for (int t : ctx.graph.into_by_key(s)) {
        const Rat& bound = ctx.graph.transition(t).work;
        long lo = 0, hi = static_cast<long>(works.size()) - 1, pos = -1;
        while (lo <= hi) {
          long mid = (lo + hi) / 2;
          if (*works[mid] >= bound) {
            pos = mid;
            lo = mid + 1;
          } else {
            hi = mid - 1;
          }
        }
        if (pos < 0) continue;
        next[t] = ctx.combine(best[pos], ctx.weight(t, layer));
      }
    }
    cur.swap(next);
  }
  return cur;
}

Rat solve_agent_work(LayeredGraph& graph, const Objective& objective,
                     const std::vector<Machine>& machines, int agent_id) {
  PathResult path = best_path(graph, machines, objective);
  return path.schedule.work_of(graph.instance(), agent_id);
}

std::vector<Machine> machines_for_bid(const Instance& instance,
                                      const std::vector<Rat>& bids, int agent_idx,
                                      const Rat& agent_bid) {
  std::vector<Machine> machines = instance.machines;
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const Rat& bid = static_cast<int>(i) == agent_idx ? agent_bid : bids[i];
    if (bid <= 0) fail(ErrorCode::NonPositiveSpeed, "bids must be positive");
    machines[i].speed = 1 / bid;
  }
  return machines;
}

}  // namespace

WorkCurve work_curve(LayeredGraph& graph, const Objective& objective, int agent_id,
                     const std::vector<Rat>& bids, const Rat& sample_frac,
                     CurveDiagnostics* diag) {
  const Instance& instance = graph.instance();
  const int m = static_cast<int>(instance.m());
  const int agent_idx = instance.machine_index(agent_id);
  if (agent_idx < 0) fail(ErrorCode::UnknownAgent, "agent " + std::to_string(agent_id));
  if (bids.size() != instance.m())
    fail(ErrorCode::KeyMismatch, "bid vector does not match the machine list");
  if (sample_frac <= 0 || sample_frac >= 1)
    fail(ErrorCode::Internal, "sample fraction must lie in (0, 1)");
  if (objective.kind == Objective::Kind::SumF && objective.f->is_exact_power())
    fail(ErrorCode::ExactPowerUnsupported,
         "payments need the piecewise-linear cost representation");

  WorkCurve curve;
  curve.agent_id = agent_id;
  if (diag) *diag = CurveDiagnostics{};

  if (m == 1) {
    curve.segment_values = {instance.total_size()};
    return curve;
  }

  // Between consecutive distinct bids of the other machines the ordering of
  // the machines, and hence the agent's layer, is fixed.
  std::vector<Rat> cuts;
  for (int i = 0; i < m; ++i) {
    if (i == agent_idx) continue;
    if (bids[i] <= 0) fail(ErrorCode::NonPositiveSpeed, "bids must be positive");
    cuts.push_back(bids[i]);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  FamilyContext fam{objective.kind,
                    objective.kind == Objective::Kind::SumF ? &*objective.f : nullptr};

  std::set<Rat> candidates(cuts.begin(), cuts.end());
  std::set<FFun> family_all;

  for (std::size_t iv = 0; iv <= cuts.size(); ++iv) {
    const std::optional<Rat> lo =
        iv == 0 ? std::nullopt : std::optional<Rat>(cuts[iv - 1]);
    const std::optional<Rat> hi =
        iv == cuts.size() ? std::nullopt : std::optional<Rat>(cuts[iv]);
    Rat rep;  // interior representative fixing the machine order
    if (!lo)
      rep = *hi / 2;
    else if (!hi)
      rep = *lo + 1;
    else
      rep = (*lo + *hi) / 2;

    std::vector<Machine> machines = machines_for_bid(instance, bids, agent_idx, rep);
    MachineOrder order = machine_order(machines);
    int agent_layer = -1;
    for (int i = 0; i < m; ++i)
      if (order.ids[i] == agent_id) agent_layer = i;

    LabelContext ctx{graph, objective, order.speeds, {}};
    ctx.init_cache();
    std::vector<std::optional<Rat>> fwd, bwd;
    if (agent_layer > 0) fwd = forward_labels(ctx, agent_layer - 1);
    if (agent_layer < m - 1) bwd = backward_labels(ctx, agent_layer + 1);

    // Deduplicated per-vertex value functions at the agent's layer.
    std::set<FFun> family;
    for (int t = 0; t < graph.num_transitions(); ++t) {
      const LayeredGraph::Transition& tr = graph.transition(t);
      std::optional<Rat> pre, suf;
      if (agent_layer == 0) {
        if (!graph.state_is_start(tr.from)) continue;
      } else {
        for (int p : graph.into_by_work(tr.from)) {
          if (graph.transition(p).work > tr.work) break;
          if (!fwd[p]) continue;
          if (!pre || ctx.better(*fwd[p], *pre)) pre = *fwd[p];
        }
        if (!pre) continue;
      }
      if (agent_layer == m - 1) {
        if (!graph.is_final_vertex(t)) continue;
      } else {
        for (int nx : graph.out_by_work(tr.to)) {
          if (graph.transition(nx).work < tr.work) continue;
          if (!bwd[nx]) continue;
          if (!suf || ctx.better(*bwd[nx], *suf)) suf = *bwd[nx];
        }
        if (!suf) continue;
      }
      Rat base;
      switch (objective.kind) {
        case Objective::Kind::Makespan:
          base = pre && suf ? std::max(*pre, *suf) : (pre ? *pre : *suf);
          break;
        case Objective::Kind::Cover:
          base = pre && suf ? std::min(*pre, *suf) : (pre ? *pre : *suf);
          break;
        case Objective::Kind::SumF:
          base = (pre ? *pre : Rat(0)) + (suf ? *suf : Rat(0));
          break;
      }
      family.insert(FFun{tr.work, base});
    }
    if (family.empty())
      fail(ErrorCode::NoFeasiblePath, "no path through the agent layer");
    family_all.insert(family.begin(), family.end());

    if (diag) {
      for (const FFun& fn : family)
        diag->max_pieces_per_fn = std::max(
            diag->max_pieces_per_fn, fam.pieces_between(fn, lo ? *lo : Rat(0), hi));
    }

    // Envelope walk: hop from event to event. Only a change of order
    // against the current champion can change the chosen schedule, and
    // first_order_change resolves the kinks of both functions internally,
    // so the champion's own kinks need no events of their own.
    std::vector<FFun> members(family.begin(), family.end());
    Rat at = lo ? *lo : Rat(0);
    int guard = 0;
    while (true) {
      if (++guard > 100000) fail(ErrorCode::Internal, "envelope walk did not terminate");
      const FFun* champ = &members[0];
      for (const FFun& fn : members)
        if (fam.germ_better(fn, *champ, at)) champ = &fn;
      std::optional<Rat> next;
      for (const FFun& fn : members) {
        if (fn == *champ) continue;
        std::optional<Rat> ev = first_order_change(fam, fn, *champ, at, next ? next : hi);
        if (ev && (!next || *ev < *next)) next = ev;
      }
      if (!next || (hi && *next >= *hi)) break;
      candidates.insert(*next);
      at = *next;
    }
  }

  if (diag) {
    diag->intervals = static_cast<int>(cuts.size()) + 1;
    diag->family_size = static_cast<int>(family_all.size());
    diag->candidate_points = static_cast<int>(candidates.size());
  }

  // Solve at every candidate and inside every candidate segment; merge
  // segments whose work agrees across a candidate.
  std::vector<Rat> points(candidates.begin(), candidates.end());
  auto run = [&](const Rat& bid) {
    if (diag) ++diag->solver_runs;
    return solve_agent_work(graph, objective,
                            machines_for_bid(instance, bids, agent_idx, bid), agent_id);
  };

  std::vector<Rat> seg_values, point_values;
  for (std::size_t k = 0; k <= points.size(); ++k) {
    Rat sample;
    if (points.empty())
      sample = 1;
    else if (k == 0)
      sample = points[0] * sample_frac;
    else if (k == points.size())
      sample = points.back() + 1 / sample_frac;
    else
      sample = points[k - 1] + (points[k] - points[k - 1]) * sample_frac;
    seg_values.push_back(run(sample));
    if (k < points.size()) point_values.push_back(run(points[k]));
  }

  curve.segment_values.push_back(seg_values[0]);
  for (std::size_t k = 0; k < points.size(); ++k) {
    bool redundant = seg_values[k + 1] == curve.segment_values.back() &&
                     point_values[k] == curve.segment_values.back();
    if (redundant) continue;
    curve.breakpoints.push_back(points[k]);
    curve.breakpoint_values.push_back(point_values[k]);
    curve.segment_values.push_back(seg_values[k + 1]);
  }
  return curve;
}

PaymentReport payment_from_curve(const WorkCurve& curve, const Rat& bid,
                                 HConvention convention) {
  PaymentReport report;
  report.agent_id = curve.agent_id;
  report.convention = convention;
  report.bid = bid;
  report.curve = curve;
  report.work_at_bid = curve.eval(bid);
  report.integral = curve.integral_prefix(bid);
  report.h_value = convention == HConvention::Zero ? Rat(0) : curve.integral_total();
  report.payment = report.h_value + bid * report.work_at_bid - report.integral;
  return report;
}

PaymentReport payment(LayeredGraph& graph, const Objective& objective, int agent_id,
                      const std::vector<Rat>& bids, HConvention convention,
                      const Rat& sample_frac) {
  const int agent_idx = graph.instance().machine_index(agent_id);
  if (agent_idx < 0) fail(ErrorCode::UnknownAgent, "agent " + std::to_string(agent_id));
  WorkCurve curve = work_curve(graph, objective, agent_id, bids, sample_frac);
  return payment_from_curve(curve, bids[agent_idx], convention);
}

SweepReport monotonicity_sweep(LayeredGraph& graph, const Objective& objective,
                               int agent_id, const std::vector<Rat>& speed_grid) {
  const Instance& instance = graph.instance();
  const int agent_idx = instance.machine_index(agent_id);
  if (agent_idx < 0) fail(ErrorCode::UnknownAgent, "agent " + std::to_string(agent_id));
  SweepReport report;
  report.agent_id = agent_id;
  std::vector<Rat> grid = speed_grid;
  std::sort(grid.begin(), grid.end());
  for (const Rat& speed : grid) {
    if (speed <= 0) fail(ErrorCode::NonPositiveSpeed, "grid speed " + rat_str(speed));
    std::vector<Machine> machines = instance.machines;
    machines[agent_idx].speed = speed;
    report.rows.push_back({speed, solve_agent_work(graph, objective, machines, agent_id)});
  }
  for (std::size_t k = 0; k + 1 < report.rows.size(); ++k) {
    if (report.rows[k].work > report.rows[k + 1].work)
      report.violations.push_back(
          "work drops from " + rat_str(report.rows[k].work) + " to " +
          rat_str(report.rows[k + 1].work) + " when speed rises from " +
          rat_str(report.rows[k].speed) + " to " + rat_str(report.rows[k + 1].speed));
  }
  return report;
}

TruthReport truthfulness_check(LayeredGraph& graph, const Objective& objective,
                               int agent_id, const Rat& true_cost,
                               const std::vector<Rat>& bid_grid,
                               HConvention convention) {
  const Instance& instance = graph.instance();
  const int agent_idx = instance.machine_index(agent_id);
  if (agent_idx < 0) fail(ErrorCode::UnknownAgent, "agent " + std::to_string(agent_id));
  std::vector<Rat> grid = bid_grid;
  std::sort(grid.begin(), grid.end());
  if (!std::binary_search(grid.begin(), grid.end(), true_cost))
    fail(ErrorCode::Internal, "bid grid must contain the true cost");

  std::vector<Rat> bids(instance.m());
  for (std::size_t i = 0; i < instance.m(); ++i)
    bids[i] = 1 / instance.machines[i].speed;
  WorkCurve curve = work_curve(graph, objective, agent_id, bids);

  TruthReport report;
  report.agent_id = agent_id;
  report.true_cost = true_cost;
  std::optional<Rat> truthful_profit;
  for (const Rat& bid : grid) {
    PaymentReport pay = payment_from_curve(curve, bid, convention);
    TruthRow row{bid, pay.work_at_bid, pay.payment,
                 pay.payment - true_cost * pay.work_at_bid};
    if (bid == true_cost) truthful_profit = row.profit;
    report.rows.push_back(std::move(row));
  }
  for (const TruthRow& row : report.rows) {
    if (row.profit > *truthful_profit)
      report.violations.push_back("bid " + rat_str(row.bid) + " earns " +
                                  rat_str(row.profit) + " instead of " +
                                  rat_str(*truthful_profit));
  }
  return report;
}

}  // namespace relsched
