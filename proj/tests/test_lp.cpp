#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "klsat/lp.hpp"
#include "klsat/rng.hpp"

using namespace klsat;

namespace {

// Reduced costs of the minimized form, recomputed from the certificate's
// row duals: d_j = c_j - y.A_j.
std::vector<double> recompute_reduced_costs(const LpProblem& p,
                                            const LpResult& res) {
  std::vector<double> d(p.num_vars);
  for (int j = 0; j < p.num_vars; ++j)
    d[j] = p.maximize ? -p.objective[j] : p.objective[j];
  for (size_t r = 0; r < p.rows.size(); ++r)
    for (auto [j, a] : p.rows[r].coeffs)
      d[j] -= res.certificate.row_duals[r] * a;
  return d;
}

double row_value(const LpRow& row, const std::vector<double>& x) {
  double v = 0;
  for (auto [j, a] : row.coeffs) v += a * x[j];
  return v;
}

// Full KKT audit: primal feasibility, reduced-cost consistency,
// complementary slackness and a closed duality gap. Together these prove
// optimality by weak duality, independent of the solver's own claim.
void check_optimal_certificate(const LpProblem& p, const LpResult& res) {
  REQUIRE(res.status == SolveStatus::optimal);
  const double tol = 1e-6;
  for (int j = 0; j < p.num_vars; ++j) {
    CHECK(res.x[j] >= p.lower[j] - tol);
    CHECK(res.x[j] <= p.upper[j] + tol);
  }
  for (const auto& row : p.rows) {
    double v = row_value(row, res.x);
    double scale = 1 + std::abs(row.rhs);
    if (row.sense == RowSense::le) CHECK(v <= row.rhs + tol * scale);
    if (row.sense == RowSense::ge) CHECK(v >= row.rhs - tol * scale);
    if (row.sense == RowSense::eq)
      CHECK(std::abs(v - row.rhs) <= tol * scale);
  }
  double obj_min = p.maximize ? -res.objective : res.objective;
  double scale = 1 + std::abs(obj_min);
  CHECK(std::abs(res.certificate.gap) <= tol * scale);
  CHECK(obj_min - res.certificate.dual_objective <= tol * scale);
  CHECK(res.certificate.comp_slack_residual <= tol * scale);

  std::vector<double> d = recompute_reduced_costs(p, res);
  for (int j = 0; j < p.num_vars; ++j) {
    CHECK(std::abs(d[j] - res.certificate.bound_duals[j]) <= tol * scale);
    // Strictly signed reduced cost pins the variable to a bound.
    if (d[j] > tol * scale)
      CHECK(std::abs(res.x[j] - p.lower[j]) <= tol * (1 + std::abs(p.lower[j])));
    if (d[j] < -tol * scale)
      CHECK(std::abs(res.x[j] - p.upper[j]) <= tol * (1 + std::abs(p.upper[j])));
  }
}

}  // namespace

TEST_CASE("two-variable pinned optimum") {
  // min x0 - 2 x1, x in [0,2]^2, x0 + x1 <= 3: optimum at (0, 2) = -4.
  LpProblem p;
  p.num_vars = 2;
  p.lower = {0, 0};
  p.upper = {2, 2};
  p.objective = {1, -2};
  LpRow row;
  row.coeffs = {{0, 1.0}, {1, 1.0}};
  row.rhs = 3;
  p.rows.push_back(row);
  LpResult res = solve_lp(p);
  check_optimal_certificate(p, res);
  CHECK(res.objective == doctest::Approx(-4.0).epsilon(1e-9));
  CHECK(res.x[0] == doctest::Approx(0.0));
  CHECK(res.x[1] == doctest::Approx(2.0));
}

TEST_CASE("binding row at an interior vertex") {
  // max 3 x0 + 2 x1 s.t. x0 + x1 <= 4, x0 + 3 x1 <= 6, x in [0, 10]^2.
  // Vertex (4, 0) gives 12? No: x0 <= 4 via first row; (4,0): 12.
  // (3,1): 11. LP optimum is x0=4, x1=0, value 12.
  LpProblem p;
  p.num_vars = 2;
  p.lower = {0, 0};
  p.upper = {10, 10};
  p.objective = {3, 2};
  p.maximize = true;
  LpRow r1, r2;
  r1.coeffs = {{0, 1.0}, {1, 1.0}};
  r1.rhs = 4;
  r2.coeffs = {{0, 1.0}, {1, 3.0}};
  r2.rhs = 6;
  p.rows = {r1, r2};
  LpResult res = solve_lp(p);
  check_optimal_certificate(p, res);
  CHECK(res.objective == doctest::Approx(12.0).epsilon(1e-9));
}

TEST_CASE("equality rows force phase 1") {
  // x0 + x1 = 1.5, x0 - x1 = 0.5 -> x = (1, 0.5); min x0 + x1 = 1.5.
  LpProblem p;
  p.num_vars = 2;
  p.lower = {0, 0};
  p.upper = {2, 2};
  p.objective = {1, 1};
  LpRow r1, r2;
  r1.coeffs = {{0, 1.0}, {1, 1.0}};
  r1.sense = RowSense::eq;
  r1.rhs = 1.5;
  r2.coeffs = {{0, 1.0}, {1, -1.0}};
  r2.sense = RowSense::eq;
  r2.rhs = 0.5;
  p.rows = {r1, r2};
  LpResult res = solve_lp(p);
  check_optimal_certificate(p, res);
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.x[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("duplicate coefficients on a row are summed") {
  // Row lists x0 twice with coefficient 1: effectively 2 x0 <= 1.
  LpProblem p;
  p.num_vars = 1;
  p.lower = {0};
  p.upper = {5};
  p.objective = {-1};
  LpRow row;
  row.coeffs = {{0, 1.0}, {0, 1.0}};
  row.rhs = 1;
  p.rows.push_back(row);
  LpResult res = solve_lp(p);
  check_optimal_certificate(p, res);
  CHECK(res.x[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("infeasible rows are detected in phase 1") {
  LpProblem p;
  p.num_vars = 2;
  p.lower = {0, 0};
  p.upper = {1, 1};
  p.objective = {1, 1};
  LpRow row;
  row.coeffs = {{0, 1.0}, {1, 1.0}};
  row.sense = RowSense::ge;
  row.rhs = 3;  // unreachable on [0,1]^2
  p.rows.push_back(row);
  LpResult res = solve_lp(p);
  CHECK(res.status == SolveStatus::infeasible_input);
}

TEST_CASE("unbounded objective throws") {
  LpProblem p;
  p.num_vars = 1;
  p.lower = {0};
  p.upper = {std::numeric_limits<double>::infinity()};
  p.objective = {-1};
  CHECK_THROWS_AS((void)solve_lp(p), std::runtime_error);
}

TEST_CASE("free variables are rejected") {
  LpProblem p;
  p.num_vars = 1;
  p.lower = {-std::numeric_limits<double>::infinity()};
  p.upper = {std::numeric_limits<double>::infinity()};
  p.objective = {1};
  CHECK_THROWS((void)solve_lp(p));
}

TEST_CASE("random feasible programs satisfy the full KKT audit") {
  Rng rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng.below(8));
    int mrows = static_cast<int>(rng.below(7));
    LpProblem p;
    p.num_vars = n;
    p.maximize = rng.below(2) == 0;
    p.lower.resize(n);
    p.upper.resize(n);
    p.objective.resize(n);
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
      p.lower[j] = rng.uniform(-2, 0);
      p.upper[j] = p.lower[j] + rng.uniform(0.25, 3);
      p.objective[j] = rng.uniform(-2, 2);
      x0[j] = rng.uniform(p.lower[j], p.upper[j]);
    }
    for (int r = 0; r < mrows; ++r) {
      LpRow row;
      int nz = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      for (int t = 0; t < nz; ++t)
        row.coeffs.emplace_back(static_cast<int>(rng.below(n)),
                                rng.uniform(-2, 2));
      double v = row_value(row, x0);
      int sense = static_cast<int>(rng.below(3));
      if (sense == 0) {
        row.sense = RowSense::le;
        row.rhs = v + rng.uniform(0, 1);
      } else if (sense == 1) {
        row.sense = RowSense::ge;
        row.rhs = v - rng.uniform(0, 1);
      } else {
        row.sense = RowSense::eq;
        row.rhs = v;
      }
      p.rows.push_back(row);
    }
    LpResult res = solve_lp(p);
    check_optimal_certificate(p, res);  // x0 feasible => optimal exists
    ++solved;
  }
  CHECK(solved == 200);
}

TEST_CASE("solves are deterministic") {
  Rng rng(5);
  LpProblem p;
  p.num_vars = 6;
  p.lower.assign(6, 0);
  p.upper.assign(6, 1);
  p.objective.resize(6);
  for (double& c : p.objective) c = rng.uniform(-1, 1);
  for (int r = 0; r < 5; ++r) {
    LpRow row;
    for (int j = 0; j < 6; ++j)
      row.coeffs.emplace_back(j, rng.uniform(-1, 1));
    row.rhs = rng.uniform(0.5, 1.5);
    p.rows.push_back(row);
  }
  LpResult a = solve_lp(p);
  LpResult b = solve_lp(p);
  CHECK(a.status == b.status);
  CHECK(a.objective == b.objective);  // bitwise
  CHECK(a.iterations == b.iterations);
  CHECK(a.x == b.x);
}

TEST_CASE("perturbation off still certifies") {
  LpProblem p;
  p.num_vars = 4;
  p.lower.assign(4, 0);
  p.upper.assign(4, 1);
  p.objective = {0, 0, 1, 1};  // heavy cost ties
  LpRow row;
  row.coeffs = {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
  row.sense = RowSense::ge;
  row.rhs = 2;
  p.rows.push_back(row);
  LpOptions opt;
  opt.perturb = 0;
  LpResult a = solve_lp(p, nullptr, opt);
  LpResult b = solve_lp(p);
  check_optimal_certificate(p, a);
  check_optimal_certificate(p, b);
  CHECK(a.objective == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-9));
}

TEST_CASE("valid basis hint is honored, bad hints fall back") {
  LpProblem p;
  p.num_vars = 3;
  p.lower.assign(3, 0);
  p.upper.assign(3, 2);
  p.objective = {1, 2, -1};
  for (int r = 0; r < 2; ++r) {
    LpRow row;
    row.coeffs = {{0, 1.0}, {1, r ? -1.0 : 1.0}, {2, 1.0}};
    row.rhs = 1.5 + r;
    p.rows.push_back(row);
  }
  LpResult cold = solve_lp(p);
  check_optimal_certificate(p, cold);

  BasisHint hint;
  hint.row_basic = {-1, -1};  // all-slack start, trivially feasible
  LpResult warm = solve_lp(p, &hint);
  check_optimal_certificate(p, warm);
  CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));

  BasisHint bad;
  bad.row_basic = {7, 7};  // out of range and repeated
  LpResult fallback = solve_lp(p, &bad);
  check_optimal_certificate(p, fallback);
  CHECK(fallback.objective == doctest::Approx(cold.objective).epsilon(1e-9));

  BasisHint wrong_size;
  wrong_size.row_basic = {-1};
  LpResult fb2 = solve_lp(p, &wrong_size);
  check_optimal_certificate(p, fb2);
  CHECK(fb2.objective == doctest::Approx(cold.objective).epsilon(1e-9));
}
