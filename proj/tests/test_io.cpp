#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relsched/dp.hpp"
#include "relsched/errors.hpp"
#include "relsched/gen.hpp"
#include "relsched/io.hpp"

using namespace relsched;

namespace {

const char* kMicro = R"({
  "jobs": ["1", "1", "2"],
  "machines": [{"id": 1, "speed": "1"}, {"id": 2, "speed": "2"}],
  "r": 5,
  "objective": {"kind": "makespan"}
})";

}  // namespace

TEST_CASE("parsing the worked file") {
  ParsedInstance parsed = parse_instance_text(kMicro);
  CHECK(parsed.instance.n() == 3);
  CHECK(parsed.instance.m() == 2);
  CHECK(parsed.instance.jobs == std::vector<Rat>{Rat(1), Rat(1), Rat(2)});
  CHECK(parsed.objective.kind == Objective::Kind::Makespan);
}

TEST_CASE("parse errors carry nonzero diagnostics") {
  CHECK_THROWS_AS(parse_instance_text("{"), Error);
  CHECK_THROWS_AS(parse_instance_text(R"({"jobs": ["1/0"], "machines": [{"id":1,"speed":"1"}], "r": 5})"),
                  Error);
  CHECK_THROWS_AS(parse_instance_text(R"({"jobs": ["1"], "machines": [], "r": 5})"),
                  Error);
  CHECK_THROWS_AS(parse_instance_text(R"({"jobs": ["1"], "machines": [{"id":1,"speed":"1"}], "r": 5,
                                          "objective": {"kind": "sumf", "p": "5/2", "representation": "exact"}})"),
                  Error);
}

TEST_CASE("serialization round-trips bit-exactly") {
  for (int iter = 0; iter < 50; ++iter) {
    GenOptions options;
    options.seed = 800000 + iter;
    GeneratedInstance gen = gen_random_instance(options);
    Instance instance = validate_instance(gen.jobs, gen.machines, gen.r);
    ObjectiveSpec spec;
    switch (iter % 4) {
      case 0: spec.kind = "makespan"; break;
      case 1: spec.kind = "cover"; break;
      case 2:
        spec.kind = "sumf";
        spec.p = 2;
        spec.representation = "exact";
        break;
      case 3:
        spec.kind = "sumf";
        spec.p = rat(5, 2);
        spec.representation = "piecewise";
        break;
    }
    std::string text = serialize_instance(instance, spec);
    ParsedInstance parsed = parse_instance_text(text);
    CHECK(parsed.instance.jobs == instance.jobs);
    CHECK(parsed.instance.r == instance.r);
    REQUIRE(parsed.instance.m() == instance.m());
    for (std::size_t i = 0; i < instance.m(); ++i) {
      CHECK(parsed.instance.machines[i].id == instance.machines[i].id);
      CHECK(parsed.instance.machines[i].speed == instance.machines[i].speed);
    }
    CHECK(parsed.objective_spec.kind == spec.kind);
    if (spec.kind == "sumf") {
      CHECK(parsed.objective_spec.p == spec.p);
      CHECK(parsed.objective_spec.representation == spec.representation);
    }
    // a second pass over the canonical form is byte-identical
    CHECK(serialize_instance(parsed.instance, parsed.objective_spec) == text);
  }
}

TEST_CASE("reports are deterministic") {
  ParsedInstance parsed = parse_instance_text(kMicro);
  LayeredGraph graph(parsed.instance);
  PathResult path = best_path(graph, parsed.objective);
  std::string a = solve_report(parsed.instance, parsed.objective_spec, path, nullptr, -1);
  PathResult path2 = best_path(graph, parsed.objective);
  std::string b = solve_report(parsed.instance, parsed.objective_spec, path2, nullptr, -1);
  CHECK(a == b);
  CHECK(a.find("value: 3/2") != std::string::npos);
  CHECK(a.find("elapsed") == std::string::npos);  // timing is opt-in
}

TEST_CASE("sweep reports flag violations") {
  SweepReport report;
  report.agent_id = 1;
  report.rows.push_back({Rat(1), Rat(3)});
  report.rows.push_back({Rat(2), Rat(2)});
  report.violations.push_back("work drops from 3 to 2");
  ObjectiveSpec spec;
  std::string text = sweep_report_text(spec, report);
  CHECK(text.find("monotone: no") != std::string::npos);
  CHECK(text.find("violation: work drops") != std::string::npos);
}

TEST_CASE("approximation bounds per objective") {
  ParsedInstance parsed = parse_instance_text(kMicro);
  ObjectiveSpec spec = parsed.objective_spec;
  CHECK(approximation_bound(parsed.instance, spec) == rat(23, 16));
  spec.kind = "cover";
  CHECK(approximation_bound(parsed.instance, spec) == rat(9, 16));
  spec.kind = "sumf";
  spec.p = 2;
  CHECK(approximation_bound(parsed.instance, spec) == rat(529, 256));
  CHECK(ratio_within_bound(parsed.instance, spec, rat(13, 4), rat(13, 4)));
  CHECK_FALSE(ratio_within_bound(parsed.instance, spec, Rat(1), Rat(3)));
}
