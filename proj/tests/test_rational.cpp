#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relsched/errors.hpp"
#include "relsched/gen.hpp"
#include "relsched/rational.hpp"

using namespace relsched;

TEST_CASE("construction keeps lowest terms and positive denominators") {
  Rat q = rat(2, 4);
  CHECK(q.get_num() == 1);
  CHECK(q.get_den() == 2);
  Rat negative = rat(3, -6);
  CHECK(negative.get_num() == -1);
  CHECK(negative.get_den() == 2);
  CHECK_THROWS_AS(rat(1, 0), Error);
}

TEST_CASE("parse and format round-trip") {
  CHECK(rat_str(parse_rat("33/16")) == "33/16");
  CHECK(rat_str(parse_rat("4/2")) == "2");
  CHECK(rat_str(parse_rat("-7/3")) == "-7/3");
  CHECK(parse_rat("12") == Rat(12));
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("a/3"), Error);
  CHECK_THROWS_AS(parse_rat(""), Error);
  CHECK_THROWS_AS(parse_rat("1/ 2"), Error);
}

TEST_CASE("pow2 on both signs") {
  CHECK(pow2(0) == 1);
  CHECK(pow2(5) == 32);
  CHECK(pow2(-5) == rat(1, 32));
  CHECK(pow2(-1) * pow2(1) == 1);
}

TEST_CASE("ceil_log2 pins the exact dyadic bracket") {
  CHECK(ceil_log2(Rat(1)) == 0);
  CHECK(ceil_log2(Rat(8)) == 3);
  CHECK(ceil_log2(Rat(9)) == 4);
  CHECK(ceil_log2(rat(1, 2)) == -1);
  CHECK(ceil_log2(rat(129, 64)) == 2);
  CHECK(ceil_log2(rat(1, 3)) == -1);

  Rng rng(42);
  for (int iter = 0; iter < 2000; ++iter) {
    Rat q = rat(rng.range(1, 100000), rng.range(1, 100000));
    long a = ceil_log2(q);
    CHECK(q <= pow2(a));
    CHECK(q > pow2(a - 1));
    long k = floor_log2_strict(q);
    CHECK(q > pow2(k));
    CHECK(q <= pow2(k + 1));
  }
}

TEST_CASE("rat_pow is exact") {
  CHECK(rat_pow(rat(3, 2), 4) == rat(81, 16));
  CHECK(rat_pow(Rat(7), 0) == 1);
  CHECK(rat_pow(rat(33, 32), 23) >= 2);
  CHECK(rat_pow(rat(33, 32), 22) < 2);
}
