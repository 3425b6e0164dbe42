#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "klsat/instance.hpp"
#include "klsat/pool.hpp"

using namespace klsat;

namespace {

Pool pair_pool() {
  Pool p;
  p.k = 2;
  p.templates.push_back({{1, 1}, 0.0});
  p.box_lo = 0;
  p.box_hi = 1;
  p.w_x = 0;
  p.w_psi = 1;
  return p;
}

Instance manual_instance(const Pool& pool, int n,
                         std::vector<ConstraintInstance> cons) {
  Instance ins;
  ins.pool = pool;
  ins.n = n;
  ins.c = static_cast<double>(cons.size()) / n;
  ins.seed = 0;
  ins.constraints = std::move(cons);
  return ins;
}

}  // namespace

TEST_CASE("generate_instance shape and ranges") {
  Pool p = cube_cover_pool();
  p.weight_dist = WeightDistSpec::uniform(-0.25, 0.25);
  Instance ins = generate_instance(p, 50, 1.5, 99);
  CHECK(ins.n == 50);
  CHECK(ins.m() == 75);  // floor(1.5 * 50)
  for (const auto& con : ins.constraints) {
    CHECK(con.template_index >= 0);
    CHECK(con.template_index < 8);
    REQUIRE(con.vars.size() == 3);
    std::set<int> distinct(con.vars.begin(), con.vars.end());
    CHECK(distinct.size() == 3);  // replacement=false
    for (int v : con.vars) {
      CHECK(v >= 0);
      CHECK(v < 50);
    }
    CHECK(con.weight >= -0.25);
    CHECK(con.weight <= 0.25);
  }
}

TEST_CASE("generate_instance is deterministic and seed-sensitive") {
  Pool p = cube_cover_pool();
  Instance a = generate_instance(p, 30, 2.0, 7);
  Instance b = generate_instance(p, 30, 2.0, 7);
  Instance c = generate_instance(p, 30, 2.0, 8);
  REQUIRE(a.m() == b.m());
  bool same = true;
  for (int j = 0; j < a.m(); ++j) {
    same = same && a.constraints[j].template_index ==
                       b.constraints[j].template_index &&
           a.constraints[j].vars == b.constraints[j].vars &&
           a.constraints[j].weight == b.constraints[j].weight;
  }
  CHECK(same);
  bool differs = c.m() != a.m();
  for (int j = 0; !differs && j < std::min(a.m(), c.m()); ++j)
    differs = a.constraints[j].vars != c.constraints[j].vars;
  CHECK(differs);
}

TEST_CASE("replacement=true can repeat variables in a tuple") {
  Pool p = cube_cover_pool();
  bool repeated = false;
  for (std::uint64_t seed = 0; seed < 20 && !repeated; ++seed) {
    Instance ins = generate_instance(p, 4, 5.0, seed, true);
    for (const auto& con : ins.constraints) {
      std::set<int> distinct(con.vars.begin(), con.vars.end());
      if (distinct.size() < con.vars.size()) repeated = true;
    }
  }
  CHECK(repeated);
}

TEST_CASE("extend_instance matches direct generation constraint-for-constraint") {
  Pool p = cube_cover_pool();
  p.weight_dist = WeightDistSpec::uniform(-0.5, 0.5);
  for (std::uint64_t seed : {0ull, 3ull, 12345ull}) {
    Instance base = generate_instance(p, 40, 0.5, seed);
    Instance grown = extend_instance(base, 1.0);
    Instance direct = generate_instance(p, 40, 1.0, seed);
    REQUIRE(grown.m() == direct.m());
    CHECK(grown.m() >= base.m());
    for (int j = 0; j < grown.m(); ++j) {
      CHECK(grown.constraints[j].template_index ==
            direct.constraints[j].template_index);
      CHECK(grown.constraints[j].vars == direct.constraints[j].vars);
      CHECK(grown.constraints[j].weight == direct.constraints[j].weight);
    }
    for (int j = 0; j < base.m(); ++j)
      CHECK(grown.constraints[j].vars == base.constraints[j].vars);
  }
}

TEST_CASE("neighborhood on a chain and a triangle") {
  Pool p = pair_pool();
  // Chain: C0 on (0,1), C1 on (1,2).
  Instance chain = manual_instance(
      p, 3, {{0, {0, 1}, 0.0}, {0, {1, 2}, 0.0}});
  Neighborhood b1 = neighborhood(chain, 0, 1);
  CHECK(b1.root == 0);
  CHECK(b1.variables == std::vector<int>{0, 1});
  CHECK(b1.constraints == std::vector<int>{0});
  CHECK(b1.is_tree);
  Neighborhood b2 = neighborhood(chain, 0, 2);
  CHECK(b2.variables == std::vector<int>{0, 1, 2});
  CHECK(b2.constraints == std::vector<int>{0, 1});
  CHECK(b2.is_tree);

  // Triangle: adds C2 on (0,2); any depth-2 ball closes the cycle.
  Instance tri = manual_instance(
      p, 3, {{0, {0, 1}, 0.0}, {0, {1, 2}, 0.0}, {0, {0, 2}, 0.0}});
  Neighborhood t2 = neighborhood(tri, 0, 2);
  CHECK(t2.variables == std::vector<int>{0, 1, 2});
  CHECK(t2.constraints == std::vector<int>{0, 1, 2});
  CHECK_FALSE(t2.is_tree);
}

TEST_CASE("cycle_census fixtures") {
  Pool p = pair_pool();
  Instance tri = manual_instance(
      p, 3, {{0, {0, 1}, 0.0}, {0, {1, 2}, 0.0}, {0, {0, 2}, 0.0}});
  std::map<int, long long> census = cycle_census(tri, 4);
  CHECK(census[2] == 0);
  CHECK(census[3] == 1);
  CHECK(census[4] == 0);

  Instance dup =
      manual_instance(p, 2, {{0, {0, 1}, 0.0}, {0, {0, 1}, 0.0}});
  std::map<int, long long> census2 = cycle_census(dup, 3);
  CHECK(census2[2] == 1);
  CHECK(census2[3] == 0);

  Instance star = manual_instance(
      p, 4, {{0, {0, 1}, 0.0}, {0, {0, 2}, 0.0}, {0, {0, 3}, 0.0}});
  std::map<int, long long> census3 = cycle_census(star, 4);
  CHECK(census3[2] == 0);
  CHECK(census3[3] == 0);
  CHECK(census3[4] == 0);
}

TEST_CASE("degree_histogram sums to one and counts multiplicity") {
  Pool p = pair_pool();
  Instance ins = manual_instance(
      p, 3, {{0, {0, 1}, 0.0}, {0, {1, 2}, 0.0}});
  std::map<int, double> h = degree_histogram(ins);
  CHECK(h[1] == doctest::Approx(2.0 / 3.0));
  CHECK(h[2] == doctest::Approx(1.0 / 3.0));
  double total = 0;
  for (auto [deg, freq] : h) total += freq;
  CHECK(total == doctest::Approx(1.0));

  Instance rep = manual_instance(p, 3, {{0, {1, 1}, 0.0}});
  std::map<int, double> h2 = degree_histogram(rep);
  CHECK(h2[0] == doctest::Approx(2.0 / 3.0));
  CHECK(h2[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("instance file round-trip") {
  Pool p = cube_cover_pool();
  p.weight_dist = WeightDistSpec::uniform(-0.25, 0.25);
  Instance ins = generate_instance(p, 20, 1.0, 5);
  std::string body = instance_to_string(ins);
  Instance back = instance_from_string(body, p);
  CHECK(back.n == ins.n);
  CHECK(back.seed == ins.seed);
  REQUIRE(back.m() == ins.m());
  for (int j = 0; j < ins.m(); ++j) {
    CHECK(back.constraints[j].template_index ==
          ins.constraints[j].template_index);
    CHECK(back.constraints[j].vars == ins.constraints[j].vars);
    CHECK(back.constraints[j].weight == ins.constraints[j].weight);
  }
}

TEST_CASE("instance parser rejects malformed bodies") {
  Pool p = cube_cover_pool();
  CHECK_THROWS(instance_from_string("C 0 1 2 3 0.5\n", p));
  CHECK_THROWS(
      instance_from_string("KLSAT n=5 m=1 K=3 seed=0\nC 0 1 2\n", p));
  CHECK_THROWS(instance_from_string(
      "KLSAT n=5 m=1 K=3 seed=0\nC 9 1 2 3 0.5\n", p));
  CHECK_THROWS(instance_from_string(
      "KLSAT n=5 m=1 K=3 seed=0\nC 0 1 2 7 0.5\n", p));
}
