#include "relsched/gen.hpp"

namespace relsched {

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long Rng::range(long lo, long hi) {
  return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

GeneratedInstance gen_random_instance(const GenOptions& options) {
  Rng rng(options.seed);
  GeneratedInstance gen;
  gen.r = options.r;

  const int n = static_cast<int>(rng.range(options.min_jobs, options.max_jobs));
  int m = static_cast<int>(rng.range(options.min_machines, options.max_machines));
  if (options.equal_speed_pair && m < 2) m = 2;

  // Sizes in [1/4, 16] with small denominators, mixing powers of two with
  // odd denominators so mini-class boundaries get exercised.
  static const long denominators[] = {1, 2, 3, 4, 5, 7, 8, 16, 32};
  for (int j = 0; j < n; ++j) {
    long den = denominators[rng.range(0, 8)];
    long num = rng.range((den + 3) / 4, 16 * den);
    gen.jobs.push_back(rat(num, den));
  }

  for (int i = 0; i < m; ++i) {
    long den = denominators[rng.range(0, 8)];
    long num = rng.range((den + 3) / 4, 8 * den);
    gen.machines.push_back(Machine{i + 1, rat(num, den)});
  }
  if (options.equal_speed_pair) {
    int a = static_cast<int>(rng.range(0, m - 1));
    int b = static_cast<int>(rng.range(0, m - 2));
    if (b >= a) ++b;
    gen.machines[b].speed = gen.machines[a].speed;
  }
  return gen;
}

}  // namespace relsched
