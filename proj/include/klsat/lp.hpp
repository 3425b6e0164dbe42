#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace klsat {

// optimal: a certified optimum was reached. infeasible_input: phase 1
// proved the constraints inconsistent. numerical_failure: the iteration
// budget or the anti-cycling fallback was exhausted, or a basis could not
// be refactorized; the returned values are not trustworthy.
enum class SolveStatus { optimal, infeasible_input, numerical_failure };

// Thrown by batch drivers when solves report numerical failure too often
// to aggregate (and by wrappers that cannot return a status). The CLI
// maps it to its numerical-failure exit code, distinct from usage errors.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Certificate in the minimization orientation (maximize problems are
// solved as minimize of the negated objective; `gap` and `dual_objective`
// refer to that minimized form, whose optimum is -objective).
// dual_objective = y.rhs + sum over nonbasic columns of reduced_cost *
// active bound; gap = minimized objective - dual_objective.
struct DualCertificate {
  std::vector<double> row_duals;    // y per input row
  std::vector<double> bound_duals;  // reduced cost per structural variable
  double dual_objective = 0;
  double gap = 0;
  double comp_slack_residual = 0;
};

enum class RowSense { le, ge, eq };

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  RowSense sense = RowSense::le;
  double rhs = 0;
};

// Bounded-variable linear program. Every variable needs at least one
// finite bound (free variables are rejected); duplicate coefficients on a
// row are summed.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> lower;      // may be -inf entrywise
  std::vector<double> upper;      // may be +inf entrywise
  std::vector<double> objective;  // dense, length num_vars
  bool maximize = false;
  std::vector<LpRow> rows;
};

// Warm start: row_basic[r] is the structural column to make basic for row
// r, or -1 for the row's slack; at_upper[j] puts nonbasic structural j at
// its upper bound (empty = all at lower). An invalid or infeasible hint
// silently falls back to the cold phase-1 start.
struct BasisHint {
  std::vector<int> row_basic;
  std::vector<char> at_upper;
};

struct LpOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-11;
  long long iteration_limit = 0;  // 0: 20000 + 40*(rows + columns)
  // Relative scale of the deterministic cost perturbation that breaks
  // pricing ties on degenerate problems (0 disables). The perturbation is
  // removed before the final optimality pass, so reported optima are for
  // the exact input costs.
  double perturb = 1e-7;
};

struct LpResult {
  SolveStatus status = SolveStatus::optimal;
  std::vector<double> x;  // structural variables, clamped into their boxes
  double objective = 0;   // in the problem's own orientation
  DualCertificate certificate;
  long long iterations = 0;
};

// Bounded-variable primal simplex with a deterministic largest-reduced-
// cost pivot rule, switching to Bland's rule after a run of degenerate
// pivots. The basis is kept factorized: rows covered by single-entry
// columns are eliminated directly, the uncovered core gets a sparse LU,
// and pivots since the last refactorization live in a product-form eta
// file. Throws std::runtime_error on an unbounded ray (out of scope by
// construction) and std::invalid_argument on malformed input.
LpResult solve_lp(const LpProblem& problem, const BasisHint* hint = nullptr,
                  const LpOptions& options = {});

}  // namespace klsat
