#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "klsat/pool.hpp"
#include "klsat/rng.hpp"

using namespace klsat;

namespace {

int popcount3(int s) { return (s & 1) + ((s >> 1) & 1) + ((s >> 2) & 1); }

Pool single_template_pool(std::vector<double> coeffs, double rhs) {
  Pool p;
  p.k = static_cast<int>(coeffs.size());
  p.templates.push_back({std::move(coeffs), rhs});
  p.box_lo = 0;
  p.box_hi = 1;
  p.w_x = 0;
  p.w_psi = 1;
  return p;
}

}  // namespace

TEST_CASE("cube_cover_pool layout") {
  Pool p = cube_cover_pool();
  CHECK(p.k == 3);
  REQUIRE(p.templates.size() == 8);
  CHECK(p.box_lo == 0.0);
  CHECK(p.box_hi == 1.0);
  CHECK(p.w_x == 0.0);
  CHECK(p.w_psi == 1.0);
  CHECK(p.weight_dist == WeightDistSpec::constant(0));
  // Every sign pattern appears once, rhs = (#positive coefficients) - 7/4.
  std::vector<bool> seen(8, false);
  for (const auto& t : p.templates) {
    REQUIRE(t.coefficients.size() == 3);
    int mask = 0;
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(t.coefficients[k]) == 1.0);
      if (t.coefficients[k] > 0) mask |= 1 << k;
    }
    CHECK_FALSE(seen[mask]);
    seen[mask] = true;
    CHECK(t.rhs == doctest::Approx(popcount3(mask) - 1.75).epsilon(1e-15));
  }
  CHECK_NOTHROW(validate_pool(p));
}

TEST_CASE("validate_pool rejects malformed pools") {
  Pool p = cube_cover_pool();
  Pool bad = p;
  bad.w_psi = 0;
  CHECK_THROWS_AS(validate_pool(bad), std::invalid_argument);
  bad = p;
  bad.w_x = -1;
  CHECK_THROWS_AS(validate_pool(bad), std::invalid_argument);
  bad = p;
  bad.templates.clear();
  CHECK_THROWS_AS(validate_pool(bad), std::invalid_argument);
  bad = p;
  bad.templates[0].coefficients.pop_back();
  CHECK_THROWS_AS(validate_pool(bad), std::invalid_argument);
  bad = p;
  bad.box_lo = 1;
  bad.box_hi = 0;
  CHECK_THROWS_AS(validate_pool(bad), std::invalid_argument);
}

TEST_CASE("box_min_partial takes preferred endpoints") {
  Pool p = single_template_pool({1, -2, 3}, 0.0);
  const ConstraintTemplate& t = p.templates[0];
  // Pin y0 = 0.5: min is 0.5*1 + 1*(-2) + 0*3 = -1.5.
  CHECK(box_min_partial(t, 0, 0.5, p) == doctest::Approx(-1.5));
  // Pin y1 = 0: min is 0*1 + 0 + 0*3 = 0 with y0 = 0, y2 = 0.
  CHECK(box_min_partial(t, 1, 0.0, p) == doctest::Approx(0.0));
  CHECK_THROWS_AS(box_min_partial(t, 3, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(box_min_partial(t, 0, 2.0, p), std::invalid_argument);
}

TEST_CASE("condition A holds for the cube pool") {
  ConditionAResult a = check_condition_a(cube_cover_pool());
  CHECK(a.holds);
  CHECK_FALSE(a.witness.has_value());
}

TEST_CASE("condition A fails with a concrete witness") {
  // y0 + y1 <= 0 on [0,1]: pinning y0 = 1 leaves min lhs = 1 > 0.
  Pool p = single_template_pool({1, 1}, 0.0);
  ConditionAResult a = check_condition_a(p);
  REQUIRE_FALSE(a.holds);
  REQUIRE(a.witness.has_value());
  CHECK(a.witness->template_index == 0);
  CHECK(a.witness->value == doctest::Approx(1.0));
  double floor_at_witness = box_min_partial(
      p.templates[a.witness->template_index], a.witness->coordinate,
      a.witness->value, p);
  CHECK(floor_at_witness > p.templates[0].rhs);
}

TEST_CASE("condition B on the cube pool: nu=1/4 holds, nu=0.26 fails") {
  Pool p = cube_cover_pool();
  ConditionBResult ok = check_condition_b(p, 2, 0.25);
  CHECK(ok.holds);
  CHECK_FALSE(ok.failing_cube.has_value());

  ConditionBResult bad = check_condition_b(p, 2, 0.26);
  REQUIRE_FALSE(bad.holds);
  REQUIRE(bad.failing_cube.has_value());
  CHECK(*bad.failing_cube == std::vector<int>{0, 0, 0});
}

TEST_CASE("condition B grid validation") {
  Pool p = cube_cover_pool();
  p.box_hi = 0.9;  // l*(hi-lo) = 1.8, not an integer
  CHECK_THROWS_AS(check_condition_b(p, 2, 0.1), std::invalid_argument);
  Pool q = cube_cover_pool();
  CHECK_THROWS_AS(check_condition_b(q, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(check_condition_b(q, 2, 0.0), std::invalid_argument);
}

TEST_CASE("slack bounds for the cube pool") {
  Pool p = cube_cover_pool();
  CHECK(b_psi(p) == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(b_psi_printed(p) == doctest::Approx(10.75).epsilon(1e-15));
}

TEST_CASE("b_psi includes the weight support bound") {
  Pool p = cube_cover_pool();
  p.weight_dist = WeightDistSpec::uniform(-0.25, 0.25);
  CHECK(p.weight_dist.support_bound() == doctest::Approx(0.25));
  CHECK(b_psi(p) == doctest::Approx(2.0));
}

TEST_CASE("weight dist parsing round-trips") {
  WeightDistSpec c = WeightDistSpec::parse("constant(0.5)");
  CHECK(c == WeightDistSpec::constant(0.5));
  CHECK(WeightDistSpec::parse(c.spec_string()) == c);

  WeightDistSpec u = WeightDistSpec::parse("uniform(-0.25,0.25)");
  CHECK(u.min_support() == doctest::Approx(-0.25));
  CHECK(u.max_support() == doctest::Approx(0.25));
  CHECK(WeightDistSpec::parse(u.spec_string()) == u);

  WeightDistSpec d = WeightDistSpec::parse("discrete(0:0.25,1:0.75)");
  CHECK(d.support_bound() == doctest::Approx(1.0));
  CHECK(WeightDistSpec::parse(d.spec_string()) == d);

  CHECK_THROWS_AS(WeightDistSpec::parse("triangle(1,2)"),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeightDistSpec::parse("uniform(1)"),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeightDistSpec::parse("discrete(0:0.5,1:0.4)"),
                  std::invalid_argument);
}

TEST_CASE("weight dist samples stay inside the support") {
  Rng rng(11);
  WeightDistSpec u = WeightDistSpec::uniform(-0.25, 0.25);
  for (int i = 0; i < 500; ++i) {
    double v = u.sample(rng);
    CHECK(v >= -0.25);
    CHECK(v <= 0.25);
  }
  WeightDistSpec d = WeightDistSpec::discrete({0.0, 2.0}, {0.5, 0.5});
  bool saw0 = false, saw2 = false;
  for (int i = 0; i < 200; ++i) {
    double v = d.sample(rng);
    CHECK((v == 0.0 || v == 2.0));
    if (v == 0.0) saw0 = true;
    if (v == 2.0) saw2 = true;
  }
  CHECK(saw0);
  CHECK(saw2);
  WeightDistSpec c = WeightDistSpec::constant(0.75);
  CHECK(c.sample(rng) == 0.75);
}

TEST_CASE("pool file round-trip") {
  Pool p = cube_cover_pool();
  p.weight_dist = WeightDistSpec::uniform(-0.5, 0.5);
  p.w_x = 0.25;
  std::string s = pool_to_string(p);
  Pool q = pool_from_string(s);
  CHECK(q.k == p.k);
  CHECK(q.box_lo == p.box_lo);
  CHECK(q.box_hi == p.box_hi);
  CHECK(q.w_x == p.w_x);
  CHECK(q.w_psi == p.w_psi);
  CHECK(q.weight_dist == p.weight_dist);
  REQUIRE(q.templates.size() == p.templates.size());
  for (size_t r = 0; r < p.templates.size(); ++r) {
    CHECK(q.templates[r].coefficients == p.templates[r].coefficients);
    CHECK(q.templates[r].rhs == p.templates[r].rhs);
  }
}

TEST_CASE("pool file rejects malformed input") {
  CHECK_THROWS_AS(pool_from_string("T 1 1 1 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(pool_from_string("POOL K=3\nT 1 1 1 0\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      pool_from_string("POOL K=2 BOX=0,1 WX=0 WPSI=1 WDIST=constant(0)\n"
                       "T 1 0.5\n"),
      std::invalid_argument);
}
