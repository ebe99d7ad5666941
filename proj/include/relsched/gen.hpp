#pragma once

#include <cstdint>

#include "relsched/model.hpp"

namespace relsched {

// Deterministic 64-bit generator (splitmix64); identical streams across
// platforms for a given seed, which the seeded test corpora rely on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // uniform in [lo, hi]
  long range(long lo, long hi);

 private:
  std::uint64_t state_;
};

struct GenOptions {
  std::uint64_t seed = 1;
  int min_jobs = 1;
  int max_jobs = 7;
  int min_machines = 1;
  int max_machines = 3;
  bool equal_speed_pair = false;  // force two machines of equal speed
  int r = 5;
};

struct GeneratedInstance {
  std::vector<Rat> jobs;      // sizes in [1/4, 16]
  std::vector<Machine> machines;  // speeds in [1/4, 8], ids 1..m
  int r = 5;
};

GeneratedInstance gen_random_instance(const GenOptions& options);

}  // namespace relsched
