#pragma once

#include <string>
#include <vector>

#include "klsat/instance.hpp"
#include "klsat/lp.hpp"

namespace klsat {

// A (not necessarily optimal) feasible point of the instance's program:
// minimize w_x*sum(x) + w_psi*sum(psi) over the box and psi >= 0.
// Heuristics reuse status `optimal` to mean "completed successfully";
// their objective is generally above the true optimum.
struct Solution {
  std::vector<double> x;
  std::vector<double> psi;
  double objective = 0;
  SolveStatus status = SolveStatus::optimal;
};

struct GlpResult {
  Solution solution;
  DualCertificate certificate;
  long long iterations = 0;
};

// Global optimum via the simplex engine, warm-started from x = box_lo
// with each violated constraint's psi basic. The returned psi is resolved
// from the returned x (psi_j = max(0, a.x - b - w)), and the objective is
// recomputed from x and psi.
GlpResult solve_glp(const Instance& instance);

// psi_j = max(0, sum_k a_rk x_{i_k} - b_r - w_j), the optimal slack for a
// fixed x.
std::vector<double> optimal_psi(const Instance& instance,
                                const std::vector<double>& x);

// Minimizes the reduced convex piecewise-linear objective
//   F(x) = w_x*sum(x) + w_psi*sum_j max(0, a.x - b - w)
// by an exhaustive grid of step h over the first n-1 coordinates with an
// exact line minimization over the last, then one dense local refinement.
// The result is within oracle_lipschitz(instance)*h of the optimum.
// Refuses n > 4.
double brute_oracle_glp(const Instance& instance, double grid_step);

// L = w_x*n + w_psi*sum_j sum_k |a_{r_j k}|: a Lipschitz constant of F in
// the max norm, hence the oracle's error scale.
double oracle_lipschitz(const Instance& instance);

struct VerifyResult {
  bool feasible = false;
  double max_violation = 0;
  double objective_recomputed = 0;
};

// Independent recomputation of every residual (box, psi >= 0, rows) and
// of the objective. feasible means max_violation <= 1e-9.
VerifyResult verify_solution(const Instance& instance, const Solution& solution);

// `SOL objective=<17 digits>` then `x i v` and `psi j v` lines.
std::string solution_to_string(const Solution& solution);

}  // namespace klsat
