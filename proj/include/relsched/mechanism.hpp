#pragma once

#include <optional>
#include <vector>

#include "relsched/dp.hpp"

namespace relsched {

enum class HConvention { Zero, NormalizeAtInfinity };

// Piecewise-constant work-vs-bid function of one agent, with the exact value
// at every breakpoint kept separately (the solver's tie-break decides it).
struct WorkCurve {
  int agent_id = 0;
  std::vector<Rat> breakpoints;        // ascending, all positive
  std::vector<Rat> segment_values;     // one per open segment, breakpoints+1
  std::vector<Rat> breakpoint_values;  // value at each breakpoint

  Rat eval(const Rat& bid) const;
  Rat integral_prefix(const Rat& bid) const;  // exact segment sum over (0, bid)
  bool vanishes() const { return segment_values.back() == 0; }
  Rat integral_total() const;  // requires vanishes()
  bool non_increasing() const;
};

struct CurveDiagnostics {
  int intervals = 0;
  int family_size = 0;          // distinct (work, base) pairs across intervals
  int max_pieces_per_fn = 0;    // pieces of any per-vertex value function
  int candidate_points = 0;     // envelope events before merging
  int solver_runs = 0;
};

// The agent's work as a function of its own bid, all other bids fixed.
// `bids` is aligned with instance.machines; the agent's own entry is unused.
// `sample_frac` picks the interior sample point of each candidate segment;
// the resulting curve must not depend on it.
WorkCurve work_curve(LayeredGraph& graph, const Objective& objective, int agent_id,
                     const std::vector<Rat>& bids, const Rat& sample_frac = Rat(1, 2),
                     CurveDiagnostics* diag = nullptr);

struct PaymentReport {
  int agent_id = 0;
  HConvention convention = HConvention::Zero;
  Rat h_value;
  Rat bid;
  Rat work_at_bid;
  Rat integral;  // over (0, bid)
  Rat payment;   // h + bid * work - integral
  WorkCurve curve;
};

PaymentReport payment(LayeredGraph& graph, const Objective& objective, int agent_id,
                      const std::vector<Rat>& bids, HConvention convention,
                      const Rat& sample_frac = Rat(1, 2));
PaymentReport payment_from_curve(const WorkCurve& curve, const Rat& bid,
                                 HConvention convention);

struct SweepRow {
  Rat speed;
  Rat work;
};

struct SweepReport {
  int agent_id = 0;
  std::vector<SweepRow> rows;  // ordered by speed ascending
  std::vector<std::string> violations;
};

// Solves at every grid speed for the agent (other speeds from the instance)
// and checks that the agent's work never decreases. Exact comparisons.
SweepReport monotonicity_sweep(LayeredGraph& graph, const Objective& objective,
                               int agent_id, const std::vector<Rat>& speed_grid);

struct TruthRow {
  Rat bid;
  Rat work;
  Rat pay;
  Rat profit;
};

struct TruthReport {
  int agent_id = 0;
  Rat true_cost;
  std::vector<TruthRow> rows;  // ordered by bid ascending
  std::vector<std::string> violations;
};

// Profit of every grid bid against bidding the true unit cost; the grid must
// contain the true cost. Violations are grid bids with strictly larger profit.
TruthReport truthfulness_check(LayeredGraph& graph, const Objective& objective,
                               int agent_id, const Rat& true_cost,
                               const std::vector<Rat>& bid_grid,
                               HConvention convention);

}  // namespace relsched
