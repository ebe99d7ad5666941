#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relsched/magnitude.hpp"
#include "relsched/model.hpp"

namespace relsched {

// Layered graph over (psi, status) states. The topology and the vertex works
// depend only on the job set and the machine count, never on speeds, so one
// graph serves every solve on the same instance (mechanism sweeps re-solve
// with different speeds against a shared frozen graph).
class LayeredGraph {
 public:
  explicit LayeredGraph(const Instance& instance);

  LayeredGraph(const LayeredGraph&) = delete;
  LayeredGraph& operator=(const LayeredGraph&) = delete;

  struct Transition {
    int from = 0;
    int to = 0;
    Rat work;
  };

  const Instance& instance() const { return *instance_; }
  StateSpace& space() { return space_; }

  int num_states() const { return static_cast<int>(states_.size()); }
  int num_transitions() const { return static_cast<int>(transitions_.size()); }
  const Transition& transition(int t) const { return transitions_[t]; }
  const std::string& state_key(int s) const { return states_[s].key; }
  const Psi& state_psi(int s) const { return states_[s].psi; }
  const std::vector<int>& state_counts(int s) const { return states_[s].counts; }
  bool state_is_start(int s) const { return states_[s].start; }
  bool state_is_final(int s) const { return states_[s].final_ok; }
  const std::vector<int>& out_of(int s) const { return out_[s]; }
  const std::vector<int>& out_by_work(int s) const { return out_by_work_[s]; }
  const std::vector<int>& into_by_key(int s) const { return in_by_key_[s]; }
  const std::vector<int>& into_by_work(int s) const { return in_by_work_[s]; }
  // Transition works deduplicated (subset sums of job/bundle prefixes);
  // weight computations cache per distinct work instead of per transition.
  const std::vector<Rat>& distinct_works() const { return distinct_works_; }
  int work_index(int t) const { return work_idx_[t]; }

  // Vertex-level views: a vertex of layer i is a transition whose from-state
  // is reachable with i-1 machines.
  std::vector<int> start_vertices() const;
  std::vector<int> successors(int t) const;
  bool is_final_vertex(int t) const { return states_[transitions_[t].to].final_ok; }

  // Total order of vertices within a layer: (key(pair1), key(pair2)).
  bool vertex_before(int a, int b) const;

 private:
  struct StateRec {
    Psi psi;
    std::vector<int> counts;
    std::string key;
    bool start = false;
    bool final_ok = false;
    int mindepth = 0;
  };

  int intern_state(const Psi& psi, std::vector<int> counts, int depth);
  void expand(int s);
  void build();

  const Instance* instance_;
  StateSpace space_;
  std::vector<StateRec> states_;
  std::map<std::string, int> state_index_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> out_by_work_;
  std::vector<std::vector<int>> in_by_key_;
  std::vector<std::vector<int>> in_by_work_;
  std::vector<Rat> distinct_works_;
  std::vector<int> work_idx_;
};

struct PathResult {
  MachineOrder order;
  std::vector<int> vertex_per_layer;  // transition ids, layer 1..m
  std::vector<std::vector<DeltaItem>> items_per_layer;
  Rat value;
  Schedule schedule;
};

// Best s-t path for the objective with the reversed-number lexicographic
// tie-break; machines carry the speeds to solve with (ids must match the
// instance). Expands alternative bundles back to original jobs.
PathResult best_path(LayeredGraph& graph, const std::vector<Machine>& machines,
                     const Objective& objective);
PathResult best_path(LayeredGraph& graph, const Objective& objective);

// Re-checks a path against the instance: total assignment, monotone works,
// window containment of every scheduled item, bundle co-location.
std::vector<std::string> verify_path(LayeredGraph& graph, const PathResult& path);

}  // namespace relsched
