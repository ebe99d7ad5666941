#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "relsched/dp.hpp"
#include "relsched/errors.hpp"
#include "relsched/gen.hpp"
#include "relsched/mechanism.hpp"

using namespace relsched;

namespace {

Instance micro() {
  return validate_instance({Rat(1), Rat(1), Rat(2)},
                           {{1, Rat(1)}, {2, Rat(2)}}, 5);
}

std::vector<Rat> bids_of(const Instance& instance) {
  std::vector<Rat> bids;
  for (const Machine& machine : instance.machines) bids.push_back(1 / machine.speed);
  return bids;
}

// Midpoint rule over a refinement of the curve's own segments, evaluated
// pointwise in floating point: an integration route independent of the
// exact segment-sum code path.
double riemann_midpoint(const WorkCurve& curve, const Rat& upto, int cells_per_segment) {
  std::vector<Rat> edges{Rat(0)};
  for (const Rat& bp : curve.breakpoints)
    if (bp < upto) edges.push_back(bp);
  edges.push_back(upto);
  double total = 0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    Rat width = (edges[k + 1] - edges[k]) / cells_per_segment;
    for (int c = 0; c < cells_per_segment; ++c) {
      Rat mid = edges[k] + width * c + width / 2;
      total += curve.eval(mid).get_d() * width.get_d();
    }
  }
  return total;
}

Rat direct_agent_work(LayeredGraph& graph, const Objective& objective, int agent_id,
                      const std::vector<Rat>& bids, const Rat& own_bid) {
  std::vector<Machine> machines = graph.instance().machines;
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const Rat& bid = machines[i].id == agent_id ? own_bid : bids[i];
    machines[i].speed = 1 / bid;
  }
  return best_path(graph, machines, objective).schedule.work_of(graph.instance(), agent_id);
}

}  // namespace

TEST_CASE("micro work curve across all bids") {
  Instance instance = micro();
  LayeredGraph graph(instance);
  CurveDiagnostics diag;
  WorkCurve curve = work_curve(graph, Objective::makespan(), 2, bids_of(instance),
                               rat(1, 2), &diag);

  // regression pinned from direct enumeration of the monotone-works
  // partitions (0,4), (1,3), (2,2), (1,3)... and solver runs at samples
  REQUIRE(curve.breakpoints.size() == 4);
  CHECK(curve.breakpoints[0] == rat(1, 4));
  CHECK(curve.breakpoints[1] == rat(2, 3));
  CHECK(curve.breakpoints[2] == rat(3, 2));
  CHECK(curve.breakpoints[3] == Rat(4));
  REQUIRE(curve.segment_values.size() == 5);
  CHECK(curve.segment_values[0] == 4);
  CHECK(curve.segment_values[1] == 3);
  CHECK(curve.segment_values[2] == 2);
  CHECK(curve.segment_values[3] == 1);
  CHECK(curve.segment_values[4] == 0);
  CHECK(curve.non_increasing());
  CHECK(diag.max_pieces_per_fn <= 2);

  // cross-check against fresh solver runs at assorted bids
  Rng rng(99);
  for (int iter = 0; iter < 40; ++iter) {
    Rat b = rat(rng.range(1, 600), rng.range(37, 100));
    CHECK(curve.eval(b) == direct_agent_work(graph, Objective::makespan(), 2,
                                             bids_of(instance), b));
  }
  // and right at / next to every breakpoint, where ties are resolved
  for (const Rat& bp : curve.breakpoints) {
    for (const Rat& b : {bp, Rat(bp - rat(1, 1000)), Rat(bp + rat(1, 1000))}) {
      CHECK(curve.eval(b) == direct_agent_work(graph, Objective::makespan(), 2,
                                               bids_of(instance), b));
    }
  }
}

TEST_CASE("micro payments re-derived through the segment integrals") {
  Instance instance = micro();
  LayeredGraph graph(instance);
  WorkCurve curve = work_curve(graph, Objective::makespan(), 2, bids_of(instance));

  SUBCASE("zero convention at bid one") {
    PaymentReport report = payment_from_curve(curve, Rat(1), HConvention::Zero);
    CHECK(report.work_at_bid == 2);
    CHECK(report.integral == rat(35, 12));
    CHECK(report.payment == rat(-11, 12));
  }
  SUBCASE("normalized convention at bid one") {
    PaymentReport report =
        payment_from_curve(curve, Rat(1), HConvention::NormalizeAtInfinity);
    CHECK(report.h_value == rat(77, 12));
    CHECK(report.payment == rat(11, 2));
  }
  SUBCASE("segment sums match the numeric midpoint rule") {
    PaymentReport report = payment_from_curve(curve, Rat(1), HConvention::Zero);
    double numeric = riemann_midpoint(curve, Rat(1), 7);
    double exact = report.integral.get_d();
    CHECK(std::abs(numeric - exact) <= 1e-6 * std::abs(exact));
  }
}

TEST_CASE("interior sample choice does not change the curve") {
  Instance instance = micro();
  LayeredGraph graph(instance);
  WorkCurve a = work_curve(graph, Objective::makespan(), 2, bids_of(instance), rat(1, 2));
  WorkCurve b = work_curve(graph, Objective::makespan(), 2, bids_of(instance), rat(1, 3));
  WorkCurve c = work_curve(graph, Objective::makespan(), 2, bids_of(instance), rat(2, 5));
  CHECK(a.breakpoints == b.breakpoints);
  CHECK(a.segment_values == b.segment_values);
  CHECK(a.breakpoint_values == b.breakpoint_values);
  CHECK(a.breakpoints == c.breakpoints);
  CHECK(a.segment_values == c.segment_values);
  CHECK(a.breakpoint_values == c.breakpoint_values);
  PaymentReport pa = payment_from_curve(a, Rat(1), HConvention::Zero);
  PaymentReport pb = payment_from_curve(b, Rat(1), HConvention::Zero);
  CHECK(pa.payment == pb.payment);
}

TEST_CASE("single machine curves are constant and payments vanish") {
  Instance instance = validate_instance({Rat(1), Rat(2)}, {{1, Rat(1)}}, 5);
  LayeredGraph graph(instance);
  WorkCurve curve = work_curve(graph, Objective::makespan(), 1, {Rat(1)});
  CHECK(curve.breakpoints.empty());
  CHECK(curve.segment_values == std::vector<Rat>{Rat(3)});
  PaymentReport report = payment_from_curve(curve, Rat(2), HConvention::Zero);
  CHECK(report.payment == 0);  // b*w cancels the integral of a constant
  CHECK_THROWS_AS(payment_from_curve(curve, Rat(2), HConvention::NormalizeAtInfinity),
                  Error);
}

TEST_CASE("exact powers are rejected for payment computations") {
  Instance instance = micro();
  LayeredGraph graph(instance);
  CHECK_THROWS_AS(work_curve(graph, Objective::sum_f(WellBehavedFn::exact_power(2)),
                             2, bids_of(instance)),
                  Error);
}

TEST_CASE("piecewise sum objective curves stay monotone and match the solver") {
  for (int iter = 0; iter < 8; ++iter) {
    GenOptions options;
    options.seed = 710000 + iter;
    options.min_machines = 2;
    options.max_jobs = 5;
    GeneratedInstance gen = gen_random_instance(options);
    Instance instance = validate_instance(gen.jobs, gen.machines, gen.r);
    Rat lo = instance.jobs.front() / Rat(32);
    Rat hi = instance.total_size() * Rat(32);
    Objective objective = Objective::sum_f(build_pl_power(Rat(2), instance.eps, lo, hi));
    LayeredGraph graph(instance);
    std::vector<Rat> bids = bids_of(instance);
    for (const Machine& machine : instance.machines) {
      CurveDiagnostics diag;
      WorkCurve curve = work_curve(graph, objective, machine.id, bids, rat(1, 2), &diag);
      CHECK(curve.non_increasing());
      // one piece per cost segment at most (interior kinks map to kinks of
      // the per-vertex value functions)
      CHECK(diag.max_pieces_per_fn <=
            static_cast<int>(objective.f->breakpoints().size()));
      Rng rng(1000 + iter);
      for (int probe = 0; probe < 6; ++probe) {
        Rat b = rat(rng.range(1, 400), rng.range(29, 97));
        CHECK(curve.eval(b) == direct_agent_work(graph, objective, machine.id, bids, b));
      }
    }
  }
}

TEST_CASE("cover curves match the solver as well") {
  for (int iter = 0; iter < 10; ++iter) {
    GenOptions options;
    options.seed = 720000 + iter;
    options.min_machines = 2;
    options.max_jobs = 5;
    GeneratedInstance gen = gen_random_instance(options);
    Instance instance = validate_instance(gen.jobs, gen.machines, gen.r);
    LayeredGraph graph(instance);
    std::vector<Rat> bids = bids_of(instance);
    for (const Machine& machine : instance.machines) {
      WorkCurve curve = work_curve(graph, Objective::cover(), machine.id, bids);
      CHECK(curve.non_increasing());
      Rng rng(2000 + iter);
      for (int probe = 0; probe < 6; ++probe) {
        Rat b = rat(rng.range(1, 400), rng.range(29, 97));
        CHECK(curve.eval(b) ==
              direct_agent_work(graph, Objective::cover(), machine.id, bids, b));
      }
    }
  }
}

TEST_CASE("sweeps reproduce the curve steps") {
  Instance instance = micro();
  LayeredGraph graph(instance);
  SweepReport report = monotonicity_sweep(
      graph, Objective::makespan(), 2,
      {rat(1, 5), rat(1, 2), Rat(1), Rat(2), Rat(5)});
  REQUIRE(report.rows.size() == 5);
  CHECK(report.violations.empty());
  // works read off the work curve at bids 1/speed
  CHECK(report.rows[0].work == 0);  // speed 1/5 -> bid 5 > 4
  CHECK(report.rows[1].work == 1);  // bid 2 in (3/2, 4)
  CHECK(report.rows[2].work == 2);  // bid 1 in (2/3, 3/2)
  CHECK(report.rows[3].work == 3);  // bid 1/2 in (1/4, 2/3)
  CHECK(report.rows[4].work == 4);  // bid 1/5 < 1/4
}

TEST_CASE("sweep on a single machine is constant") {
  Instance instance = validate_instance({Rat(1), Rat(2)}, {{1, Rat(1)}}, 5);
  LayeredGraph graph(instance);
  SweepReport report = monotonicity_sweep(graph, Objective::makespan(), 1,
                                          {rat(1, 2), Rat(1), Rat(3)});
  for (const SweepRow& row : report.rows) CHECK(row.work == 3);
  CHECK(report.violations.empty());
}

TEST_CASE("equal-speed grids keep identical works") {
  Instance instance = validate_instance({Rat(1), Rat(2), Rat(3)},
                                        {{1, Rat(2)}, {2, Rat(2)}}, 5);
  LayeredGraph graph(instance);
  SweepReport report =
      monotonicity_sweep(graph, Objective::makespan(), 2, {Rat(2), Rat(2)});
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].work == report.rows[1].work);
}

TEST_CASE("truthfulness on the micro instance") {
  Instance instance = micro();
  LayeredGraph graph(instance);
  // machine 2's true unit cost equals one in this scenario
  std::vector<Machine> machines = instance.machines;
  machines[1].speed = 1;  // bid 1
  Instance priced = validate_instance({Rat(1), Rat(1), Rat(2)},
                                      {{1, Rat(1)}, {2, Rat(1)}}, 5);
  LayeredGraph graph2(priced);
  TruthReport report = truthfulness_check(
      graph2, Objective::makespan(), 2, Rat(1),
      {rat(1, 4), rat(2, 5), Rat(1), Rat(2), rat(7, 2), Rat(5)}, HConvention::Zero);
  CHECK(report.violations.empty());
  // the additive constant of the normalized convention changes nothing
  TruthReport shifted = truthfulness_check(
      graph2, Objective::makespan(), 2, Rat(1),
      {rat(1, 4), rat(2, 5), Rat(1), Rat(2), rat(7, 2), Rat(5)},
      HConvention::NormalizeAtInfinity);
  CHECK(shifted.violations.empty());
  for (std::size_t k = 0; k < report.rows.size(); ++k)
    CHECK(shifted.rows[k].profit - report.rows[k].profit ==
          shifted.rows[k].pay - report.rows[k].pay);
}

TEST_CASE("truthfulness on a single machine is flat") {
  Instance instance = validate_instance({Rat(1), Rat(2)}, {{1, Rat(1)}}, 5);
  LayeredGraph graph(instance);
  TruthReport report = truthfulness_check(graph, Objective::makespan(), 1, Rat(1),
                                          {rat(1, 2), Rat(1), Rat(2)},
                                          HConvention::Zero);
  CHECK(report.violations.empty());
  for (const TruthRow& row : report.rows) CHECK(row.profit == report.rows[0].profit);
}
