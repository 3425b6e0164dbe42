#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "klsat/glp.hpp"
#include "klsat/instance.hpp"
#include "klsat/pool.hpp"
#include "klsat/rng.hpp"

using namespace klsat;

namespace {

Pool tiny_pool(int k, std::vector<ConstraintTemplate> templates, double lo,
               double hi, double wx, double wpsi) {
  Pool p;
  p.k = k;
  p.templates = std::move(templates);
  p.box_lo = lo;
  p.box_hi = hi;
  p.w_x = wx;
  p.w_psi = wpsi;
  return p;
}

Instance hand_instance(Pool pool, int n,
                       std::vector<ConstraintInstance> constraints) {
  Instance inst;
  inst.pool = std::move(pool);
  inst.n = n;
  inst.c = 0;
  inst.seed = 0;
  inst.constraints = std::move(constraints);
  return inst;
}

// Random small pool for oracle comparisons: K in [1, n], signed halves as
// coefficients, box and weights varied across draws.
Pool random_pool(Rng& rng, int k) {
  static const double coef[] = {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5};
  int ntempl = 1 + static_cast<int>(rng.below(3));
  std::vector<ConstraintTemplate> ts;
  for (int t = 0; t < ntempl; ++t) {
    ConstraintTemplate ct;
    for (int i = 0; i < k; ++i)
      ct.coefficients.push_back(coef[rng.below(6)]);
    ct.rhs = rng.uniform(-1.0, 1.0);
    ts.push_back(std::move(ct));
  }
  double lo = rng.below(2) ? 0.0 : -0.5;
  double hi = lo + (rng.below(2) ? 1.0 : 1.5);
  double wx = rng.below(2) ? 0.0 : 0.3;
  double wpsi = rng.below(2) ? 1.0 : 0.5;
  Pool p = tiny_pool(k, std::move(ts), lo, hi, wx, wpsi);
  if (rng.below(2)) p.weight_dist = WeightDistSpec::uniform(-0.3, 0.3);
  return p;
}

}  // namespace

TEST_CASE("solve_glp on hand-checkable programs") {
  // psi must absorb an unavoidable violation: x1 + x2 <= -1/2 + psi on
  // [0,1]^2 forces psi >= 1/2 at the optimum x = 0.
  Pool p = tiny_pool(2, {{{1.0, 1.0}, -0.5}}, 0, 1, 0, 1);
  Instance inst = hand_instance(p, 2, {{0, {0, 1}, 0.0}});
  GlpResult res = solve_glp(inst);
  REQUIRE(res.solution.status == SolveStatus::optimal);
  CHECK(res.solution.objective == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(res.solution.x[0] + res.solution.x[1] == doctest::Approx(0.0));
  REQUIRE(res.solution.psi.size() == 1);
  CHECK(res.solution.psi[0] == doctest::Approx(0.5).epsilon(1e-9));

  // Positive w_x pulls against the constraint: -x1 - x2 <= -1 + psi with
  // w_psi = 10 keeps psi = 0 and spends exactly x1 + x2 = 1.
  Pool q = tiny_pool(2, {{{-1.0, -1.0}, -1.0}}, 0, 1, 1, 10);
  Instance inst2 = hand_instance(q, 2, {{0, {0, 1}, 0.0}});
  GlpResult res2 = solve_glp(inst2);
  REQUIRE(res2.solution.status == SolveStatus::optimal);
  CHECK(res2.solution.objective == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res2.solution.psi[0] == doctest::Approx(0.0));

  // Two opposing cube templates force total slack 1/2 no matter where
  // x1 + x2 + x3 lands between the two thresholds.
  Pool cube = cube_cover_pool();
  Instance inst3 = hand_instance(cube, 3,
                                 {{0, {0, 1, 2}, 0.0}, {7, {0, 1, 2}, 0.0}});
  GlpResult res3 = solve_glp(inst3);
  REQUIRE(res3.solution.status == SolveStatus::optimal);
  CHECK(res3.solution.objective == doctest::Approx(0.5).epsilon(1e-9));
  double s = res3.solution.x[0] + res3.solution.x[1] + res3.solution.x[2];
  CHECK(s >= 1.25 - 1e-7);
  CHECK(s <= 1.75 + 1e-7);
}

TEST_CASE("solve_glp closes its duality gap and verifies") {
  Rng rng(20240817);
  for (int rep = 0; rep < 25; ++rep) {
    int k = 1 + static_cast<int>(rng.below(3));
    Pool pool = random_pool(rng, k);
    int n = k + static_cast<int>(rng.below(3));
    Instance inst = generate_instance(pool, n, 2.0, rng.next());
    GlpResult res = solve_glp(inst);
    REQUIRE(res.solution.status == SolveStatus::optimal);
    CHECK(std::abs(res.certificate.gap) <=
          1e-7 * (1 + std::abs(res.solution.objective)));
    VerifyResult v = verify_solution(inst, res.solution);
    CHECK(v.feasible);
    CHECK(v.objective_recomputed ==
          doctest::Approx(res.solution.objective).epsilon(1e-9));
    for (double ps : res.solution.psi) CHECK(ps >= -1e-12);
  }
}

TEST_CASE("solve_glp matches the grid oracle on small instances") {
  Rng rng(7);
  const double h = 2e-3;
  for (int rep = 0; rep < 25; ++rep) {
    int k = 1 + static_cast<int>(rng.below(3));
    Pool pool = random_pool(rng, k);
    int n = std::max(k, 1 + static_cast<int>(rng.below(3)));
    if (n > 3) n = 3;
    if (k > n) continue;
    Instance inst = generate_instance(pool, n, 1.5, rng.next());
    GlpResult res = solve_glp(inst);
    REQUIRE(res.solution.status == SolveStatus::optimal);
    double brute = brute_oracle_glp(inst, h);
    double slack = oracle_lipschitz(inst) * h + 1e-7;
    CHECK(std::abs(res.solution.objective - brute) <= slack);
    // The oracle explores feasible points only, so it can never beat the
    // certified optimum by more than the solver tolerance.
    CHECK(brute >= res.solution.objective - 1e-7);
  }
}

TEST_CASE("brute_oracle_glp refuses large instances") {
  Pool cube = cube_cover_pool();
  Instance inst = generate_instance(cube, 5, 1.0, 3);
  CHECK_THROWS_AS(brute_oracle_glp(inst, 1e-2), std::invalid_argument);
}

TEST_CASE("oracle_lipschitz sums box and slack scales") {
  Pool cube = cube_cover_pool();
  Instance inst = hand_instance(cube, 4,
                                {{0, {0, 1, 2}, 0.0}, {3, {1, 2, 3}, 0.1}});
  // w_x*n + w_psi * sum_j sum_k |a_jk| = 0 + 1*(3 + 3).
  CHECK(oracle_lipschitz(inst) == doctest::Approx(6.0));
  Pool p = tiny_pool(2, {{{0.5, -1.5}, 0.0}}, 0, 1, 0.25, 2.0);
  Instance inst2 = hand_instance(p, 3, {{0, {0, 2}, 0.0}});
  CHECK(oracle_lipschitz(inst2) == doctest::Approx(0.25 * 3 + 2.0 * 2.0));
}

TEST_CASE("optimal_psi recomputes slacks from x") {
  Pool cube = cube_cover_pool();
  Instance inst = hand_instance(
      cube, 3, {{0, {0, 1, 2}, 0.0}, {7, {0, 1, 2}, -0.25}});
  std::vector<double> x = {0.5, 0.25, 0.0};
  std::vector<double> psi = optimal_psi(inst, x);
  REQUIRE(psi.size() == 2);
  // Template 0: -x0 - x1 - x2 <= -1.75 + psi.
  CHECK(psi[0] == doctest::Approx(1.75 - 0.75).epsilon(1e-12));
  // Template 7: x0 + x1 + x2 <= 1.25 - 0.25 + psi, satisfied at 0.75.
  CHECK(psi[1] == doctest::Approx(0.0));
}

TEST_CASE("verify_solution flags violations and recomputes") {
  Pool cube = cube_cover_pool();
  Instance inst = hand_instance(cube, 3, {{0, {0, 1, 2}, 0.0}});
  Solution sol;
  sol.x = {1.0, 1.0, 1.0};
  sol.psi = optimal_psi(inst, sol.x);
  sol.objective = 0.0;
  CHECK(verify_solution(inst, sol).feasible);

  Solution bad = sol;
  bad.x = {0.0, 0.0, 0.0};
  bad.psi[0] = -0.5;
  // Row residual: 0 <= -1.75 + (-0.5) fails by 2.25; psi >= 0 fails by 0.5.
  VerifyResult v = verify_solution(inst, bad);
  CHECK_FALSE(v.feasible);
  CHECK(v.max_violation == doctest::Approx(2.25).epsilon(1e-9));

  Solution neg = sol;
  neg.psi[0] = -1e-3;
  VerifyResult v2 = verify_solution(inst, neg);
  CHECK_FALSE(v2.feasible);
  CHECK(v2.max_violation >= 1e-3 - 1e-12);

  Solution out = sol;
  out.x[1] = 1.5;
  out.psi = optimal_psi(inst, out.x);
  CHECK_FALSE(verify_solution(inst, out).feasible);
}

TEST_CASE("solution_to_string layout") {
  Solution sol;
  sol.x = {0.5, 1.0};
  sol.psi = {0.25};
  sol.objective = 0.25;
  std::string s = solution_to_string(sol);
  CHECK(s.find("SOL objective=0.25") == 0);
  CHECK(s.find("\nx 0 0.5\n") != std::string::npos);
  CHECK(s.find("\nx 1 1\n") != std::string::npos);
  CHECK(s.find("\npsi 0 0.25\n") != std::string::npos);
}

TEST_CASE("solve_glp is deterministic") {
  Pool cube = cube_cover_pool();
  Instance inst = generate_instance(cube, 40, 3.0, 99);
  GlpResult a = solve_glp(inst);
  GlpResult b = solve_glp(inst);
  REQUIRE(a.solution.status == SolveStatus::optimal);
  CHECK(a.solution.objective == b.solution.objective);
  CHECK(a.solution.x == b.solution.x);
  CHECK(a.solution.psi == b.solution.psi);
  CHECK(a.iterations == b.iterations);
}
