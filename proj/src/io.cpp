#include "relsched/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relsched/errors.hpp"

namespace relsched {

namespace {

using nlohmann::json;

Rat parse_rat_field(const json& value, const char* what) {
  if (value.is_number_integer())
    return Rat(static_cast<long>(value.get<long long>()));
  if (value.is_string()) return parse_rat(value.get<std::string>());
  fail(ErrorCode::ParseError, std::string(what) + " must be an integer or a rational string");
}

}  // namespace

ParsedInstance parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad instance file: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::ParseError, "instance file must be an object");
  if (!doc.contains("jobs") || !doc["jobs"].is_array())
    fail(ErrorCode::ParseError, "missing jobs array");
  if (!doc.contains("machines") || !doc["machines"].is_array())
    fail(ErrorCode::ParseError, "missing machines array");
  if (!doc.contains("r") || !doc["r"].is_number_integer())
    fail(ErrorCode::ParseError, "missing integer r");

  std::vector<Rat> jobs;
  for (const json& entry : doc["jobs"]) jobs.push_back(parse_rat_field(entry, "job size"));
  std::vector<Machine> machines;
  for (const json& entry : doc["machines"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry.contains("speed"))
      fail(ErrorCode::ParseError, "machine entries need id and speed");
    Machine machine;
    machine.id = entry["id"].get<int>();
    machine.speed = parse_rat_field(entry["speed"], "machine speed");
    machines.push_back(std::move(machine));
  }

  ParsedInstance parsed;
  parsed.instance = validate_instance(jobs, machines, doc["r"].get<int>());

  ObjectiveSpec spec;
  if (doc.contains("objective")) {
    const json& obj = doc["objective"];
    if (!obj.is_object() || !obj.contains("kind"))
      fail(ErrorCode::ParseError, "objective needs a kind");
    spec.kind = obj["kind"].get<std::string>();
    if (spec.kind == "sumf") {
      if (!obj.contains("p")) fail(ErrorCode::ParseError, "sumf objective needs p");
      spec.p = parse_rat_field(obj["p"], "exponent p");
      spec.representation =
          obj.contains("representation") ? obj["representation"].get<std::string>() : "exact";
    } else if (spec.kind != "makespan" && spec.kind != "cover") {
      fail(ErrorCode::ParseError, "unknown objective kind '" + spec.kind + "'");
    }
  }
  parsed.objective_spec = spec;
  parsed.objective = build_objective(parsed.instance, spec);
  return parsed;
}

ParsedInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance_text(buffer.str());
}

std::string serialize_instance(const Instance& instance, const ObjectiveSpec& spec) {
  json doc;
  doc["jobs"] = json::array();
  for (const Rat& p : instance.jobs) doc["jobs"].push_back(rat_str(p));
  doc["machines"] = json::array();
  for (const Machine& machine : instance.machines) {
    json entry;
    entry["id"] = machine.id;
    entry["speed"] = rat_str(machine.speed);
    doc["machines"].push_back(entry);
  }
  doc["r"] = instance.r;
  json obj;
  obj["kind"] = spec.kind;
  if (spec.kind == "sumf") {
    obj["p"] = rat_str(spec.p);
    obj["representation"] = spec.representation;
  }
  doc["objective"] = obj;
  return doc.dump(2) + "\n";
}

Objective build_objective(const Instance& instance, const ObjectiveSpec& spec) {
  if (spec.kind == "makespan") return Objective::makespan();
  if (spec.kind == "cover") return Objective::cover();
  if (spec.kind != "sumf") fail(ErrorCode::ParseError, "unknown objective kind");
  if (spec.representation == "exact") {
    if (!is_integer(spec.p) || spec.p < 2)
      fail(ErrorCode::ParseError, "exact sumf needs an integer exponent p >= 2");
    return Objective::sum_f(WellBehavedFn::exact_power(spec.p.get_num().get_ui()));
  }
  if (spec.representation != "piecewise")
    fail(ErrorCode::ParseError, "sumf representation must be exact or piecewise");
  Rat max_speed = instance.machines.front().speed;
  Rat min_speed = max_speed;
  for (const Machine& machine : instance.machines) {
    max_speed = std::max(max_speed, machine.speed);
    min_speed = std::min(min_speed, machine.speed);
  }
  Rat lo = instance.jobs.front() / max_speed;
  Rat hi = instance.total_size() / min_speed;
  if (hi <= lo) hi = lo * (1 + instance.eps);  // single job on one machine
  return Objective::sum_f(build_pl_power(spec.p, instance.eps, lo, hi));
}

namespace {

std::string objective_line(const ObjectiveSpec& spec) {
  std::string line = "objective: " + spec.kind;
  if (spec.kind == "sumf")
    line += " p=" + rat_str(spec.p) + " representation=" + spec.representation;
  return line;
}

void machine_lines(std::ostream& out, const Instance& instance,
                   const MachineOrder& order, const Schedule& schedule) {
  for (std::size_t layer = 0; layer < order.ids.size(); ++layer) {
    int id = order.ids[layer];
    out << "layer " << layer + 1 << ": machine=" << id
        << " speed=" << rat_str(order.speeds[layer])
        << " work=" << rat_str(schedule.work_of(instance, id))
        << " load=" << rat_str(schedule.load_of(instance, id)) << " jobs=";
    bool first = true;
    for (std::size_t j = 0; j < instance.n(); ++j) {
      if (schedule.assignment[j] != id) continue;
      if (!first) out << ",";
      out << j + 1;
      first = false;
    }
    if (first) out << "-";
    out << "\n";
  }
}

}  // namespace

std::string solve_report(const Instance& instance, const ObjectiveSpec& spec,
                         const PathResult& path,
                         const std::vector<std::string>* verify_violations,
                         long elapsed_us) {
  std::ostringstream out;
  out << objective_line(spec) << "\n";
  out << "n: " << instance.n() << "\n";
  out << "m: " << instance.m() << "\n";
  if (instance.low_precision_warning)
    out << "warning: r below the guaranteed precision range\n";
  out << "value: " << rat_str(path.value) << "\n";
  machine_lines(out, instance, path.order, path.schedule);
  out << "assignment:";
  for (std::size_t j = 0; j < instance.n(); ++j)
    out << " " << j + 1 << ":" << path.schedule.assignment[j];
  out << "\n";
  if (verify_violations) {
    if (verify_violations->empty()) {
      out << "verify: ok\n";
    } else {
      for (const std::string& v : *verify_violations) out << "verify: " << v << "\n";
    }
  }
  if (elapsed_us >= 0) out << "elapsed_us: " << elapsed_us << "\n";
  return out.str();
}

std::string oracle_report(const Instance& instance, const ObjectiveSpec& spec,
                          const OracleResult& result) {
  std::ostringstream out;
  out << objective_line(spec) << "\n";
  out << "value: " << rat_str(result.value) << "\n";
  out << "optima: " << result.optimum_count << "\n";
  MachineOrder order = machine_order(instance);
  machine_lines(out, instance, order, result.witness);
  return out.str();
}

Rat approximation_bound(const Instance& instance, const ObjectiveSpec& spec) {
  Rat guarantee = 1 + 14 * instance.eps;
  if (spec.kind == "makespan") return guarantee;
  if (spec.kind == "cover") return 1 - 14 * instance.eps;
  // sumf: f(x (1+14 eps)) <= (1+14 eps)^p f(x); round the exponent up so the
  // bound stays exact for fractional p.
  Int ceil_p = (spec.p.get_num() + spec.p.get_den() - 1) / spec.p.get_den();
  return rat_pow(guarantee, ceil_p.get_ui());
}

bool ratio_within_bound(const Instance& instance, const ObjectiveSpec& spec,
                        const Rat& oracle_value, const Rat& solver_value) {
  Rat bound = approximation_bound(instance, spec);
  if (spec.kind == "cover") {
    // oracle >= solver >= (1 - 14 eps) * oracle
    return solver_value <= oracle_value && solver_value >= bound * oracle_value;
  }
  return solver_value >= oracle_value && solver_value <= bound * oracle_value;
}

std::string compare_report(const Instance& instance, const ObjectiveSpec& spec,
                           const Rat& oracle_value, const Rat& solver_value,
                           bool pass) {
  std::ostringstream out;
  out << objective_line(spec) << "\n";
  out << "oracle: " << rat_str(oracle_value) << "\n";
  out << "solver: " << rat_str(solver_value) << "\n";
  if (oracle_value != 0)
    out << "ratio: " << rat_str(solver_value / oracle_value) << "\n";
  else
    out << "ratio: n/a\n";
  out << "bound: " << rat_str(approximation_bound(instance, spec)) << "\n";
  out << "pass: " << (pass ? "yes" : "no") << "\n";
  return out.str();
}

std::string payment_report_text(const ObjectiveSpec& spec, const PaymentReport& report) {
  std::ostringstream out;
  out << objective_line(spec) << "\n";
  out << "agent: " << report.agent_id << "\n";
  out << "h: "
      << (report.convention == HConvention::Zero ? "zero" : "normalize") << "\n";
  const WorkCurve& curve = report.curve;
  out << "segments: " << curve.segment_values.size() << "\n";
  for (std::size_t k = 0; k < curve.segment_values.size(); ++k) {
    std::string left = k == 0 ? "0" : rat_str(curve.breakpoints[k - 1]);
    std::string right =
        k < curve.breakpoints.size() ? rat_str(curve.breakpoints[k]) : "inf";
    out << "segment " << k + 1 << ": (" << left << ", " << right
        << ") work=" << rat_str(curve.segment_values[k]) << "\n";
    if (k < curve.breakpoints.size())
      out << "breakpoint " << k + 1 << ": " << rat_str(curve.breakpoints[k])
          << " work=" << rat_str(curve.breakpoint_values[k]) << "\n";
  }
  out << "bid: " << rat_str(report.bid) << "\n";
  out << "work_at_bid: " << rat_str(report.work_at_bid) << "\n";
  out << "integral: " << rat_str(report.integral) << "\n";
  out << "h_value: " << rat_str(report.h_value) << "\n";
  out << "payment: " << rat_str(report.payment) << "\n";
  return out.str();
}

std::string sweep_report_text(const ObjectiveSpec& spec, const SweepReport& report) {
  std::ostringstream out;
  out << objective_line(spec) << "\n";
  out << "agent: " << report.agent_id << "\n";
  for (std::size_t k = 0; k < report.rows.size(); ++k)
    out << "row " << k + 1 << ": speed=" << rat_str(report.rows[k].speed)
        << " work=" << rat_str(report.rows[k].work) << "\n";
  for (const std::string& v : report.violations) out << "violation: " << v << "\n";
  out << "monotone: " << (report.violations.empty() ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace relsched
