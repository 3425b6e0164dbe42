#include "klsat/local.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "klsat/pool.hpp"
#include "klsat/text.hpp"

namespace klsat {

PropagateResult propagate_assign(const Instance& instance) {
  const Pool& pool = instance.pool;
  ConditionAResult ca = check_condition_a(pool);
  if (!ca.holds) {
    throw std::invalid_argument(
        "propagate_assign: pool is not single-coordinate completable "
        "(template " +
        std::to_string(ca.witness->template_index) + ", coordinate " +
        std::to_string(ca.witness->coordinate) + ", value " +
        text::fmt_double(ca.witness->value) + ")");
  }

  int n = instance.n;
  int m = instance.m();
  std::vector<std::vector<int>> incident(n);
  for (int j = 0; j < m; ++j) {
    for (int v : instance.constraints[j].vars) {
      auto& list = incident[v];
      if (list.empty() || list.back() != j) list.push_back(j);
    }
  }

  std::vector<double> x(n, 0.0);
  std::vector<char> assigned(n, 0);
  std::vector<char> processed(m, 0);
  std::queue<int> q;
  for (int root = 0; root < n; ++root) {
    if (assigned[root]) continue;
    assigned[root] = 1;
    x[root] = pool.box_lo;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int j : incident[v]) {
        if (processed[j]) continue;
        processed[j] = 1;
        const auto& con = instance.constraints[j];
        const ConstraintTemplate& t = pool.templates[con.template_index];
        for (size_t k = 0; k < con.vars.size(); ++k) {
          int u = con.vars[k];
          if (assigned[u]) continue;
          double sum = 0;
          for (size_t k2 = 0; k2 < con.vars.size(); ++k2)
            if (con.vars[k2] == u) sum += t.coefficients[k2];
          x[u] = sum < 0 ? pool.box_hi : pool.box_lo;
          assigned[u] = 1;
          q.push(u);
        }
      }
    }
  }

  PropagateResult out;
  out.solution.x = std::move(x);
  out.solution.psi = optimal_psi(instance, out.solution.x);
  double obj = 0;
  for (double v : out.solution.x) obj += pool.w_x * v;
  for (double v : out.solution.psi) {
    obj += pool.w_psi * v;
    if (v > 1e-12) ++out.positive_psi_count;
  }
  out.solution.objective = obj;
  out.solution.status = SolveStatus::optimal;
  return out;
}

LocalProjectResult local_project(const Instance& instance, int d,
                                 double fallback) {
  const Pool& pool = instance.pool;
  if (d < 0) throw std::invalid_argument("local_project: d must be >= 0");
  if (fallback < pool.box_lo - 1e-12 || fallback > pool.box_hi + 1e-12)
    throw std::invalid_argument("local_project: fallback outside the box");

  int n = instance.n;
  double cap =
      10.0 * std::pow(instance.c * pool.k, d) + 50.0;

  LocalProjectResult out;
  std::vector<double> x(n, fallback);
  for (int i = 0; i < n; ++i) {
    Neighborhood nb = neighborhood(instance, i, d);
    bool usable =
        nb.is_tree && static_cast<double>(nb.constraints.size()) <= cap;
    if (!usable) {
      ++out.fallback_count;
      continue;
    }
    Instance sub;
    sub.pool = pool;
    sub.n = static_cast<int>(nb.variables.size());
    sub.c = sub.n > 0 ? static_cast<double>(nb.constraints.size()) / sub.n : 0;
    sub.seed = instance.seed;
    sub.replacement = instance.replacement;
    sub.constraints.reserve(nb.constraints.size());
    for (int j : nb.constraints) {
      ConstraintInstance con = instance.constraints[j];
      for (int& v : con.vars) {
        auto it = std::lower_bound(nb.variables.begin(), nb.variables.end(), v);
        v = static_cast<int>(it - nb.variables.begin());
      }
      sub.constraints.push_back(std::move(con));
    }
    GlpResult sol = solve_glp(sub);
    if (sol.solution.status != SolveStatus::optimal) {
      ++out.fallback_count;
      continue;
    }
    auto it = std::lower_bound(nb.variables.begin(), nb.variables.end(), i);
    x[i] = sol.solution.x[it - nb.variables.begin()];
  }

  out.solution.x = std::move(x);
  out.solution.psi = optimal_psi(instance, out.solution.x);
  double obj = 0;
  for (double v : out.solution.x) obj += pool.w_x * v;
  for (double v : out.solution.psi) obj += pool.w_psi * v;
  out.solution.objective = obj;
  out.solution.status = SolveStatus::optimal;
  return out;
}

}  // namespace klsat
