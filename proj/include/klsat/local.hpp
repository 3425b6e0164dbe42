#pragma once

#include "klsat/glp.hpp"
#include "klsat/instance.hpp"

namespace klsat {

struct PropagateResult {
  Solution solution;
  int positive_psi_count = 0;  // psi_j > 1e-12
};

// Constructive feasible assignment by breadth-first propagation. Roots
// (unassigned variables, ascending) get box_lo; when a constraint is
// first reached, each still-free variable takes the endpoint minimizing
// its summed coefficient's term (lower endpoint on ties/zero); all psi
// are resolved at the end from the final x. Under Condition A a
// constraint reached with a single assigned variable is satisfiable with
// psi = 0, so on tree hypergraphs the total psi is 0. Throws
// std::invalid_argument with the Condition-A witness when the pool
// violates the precondition.
PropagateResult propagate_assign(const Instance& instance);

struct LocalProjectResult {
  Solution solution;
  int fallback_count = 0;  // variables that used the fallback value
};

// Depth-d local projection: each variable solves the sub-program
// restricted to its d-ball (when the ball is a tree within the size cap)
// and keeps the root's value; otherwise it takes `fallback`. psi is then
// resolved globally from x. Ball cap: 10*(cK)^d + 50 constraints.
LocalProjectResult local_project(const Instance& instance, int d,
                                 double fallback);

}  // namespace klsat
