#include "klsat/glp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "klsat/text.hpp"

namespace klsat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FlatConstraint {
  const std::vector<int>* vars;
  const std::vector<double>* coeffs;
  double cut;  // rhs + weight
};

std::vector<FlatConstraint> flatten(const Instance& inst) {
  std::vector<FlatConstraint> out;
  out.reserve(inst.constraints.size());
  for (const auto& con : inst.constraints) {
    const ConstraintTemplate& t = inst.pool.templates[con.template_index];
    out.push_back({&con.vars, &t.coefficients, t.rhs + con.weight});
  }
  return out;
}

double lhs_of(const FlatConstraint& f, const std::vector<double>& x) {
  double s = 0;
  for (size_t k = 0; k < f.vars->size(); ++k)
    s += (*f.coeffs)[k] * x[(*f.vars)[k]];
  return s;
}

}  // namespace

std::vector<double> optimal_psi(const Instance& instance,
                                const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != instance.n)
    throw std::invalid_argument("optimal_psi: x size mismatch");
  std::vector<double> psi;
  psi.reserve(instance.constraints.size());
  for (const auto& con : instance.constraints) {
    const ConstraintTemplate& t = instance.pool.templates[con.template_index];
    double lhs = 0;
    for (size_t k = 0; k < con.vars.size(); ++k)
      lhs += t.coefficients[k] * x[con.vars[k]];
    psi.push_back(std::max(0.0, lhs - t.rhs - con.weight));
  }
  return psi;
}

GlpResult solve_glp(const Instance& instance) {
  const Pool& pool = instance.pool;
  int n = instance.n;
  int m = instance.m();

  LpProblem p;
  p.num_vars = n + m;
  p.maximize = false;
  p.lower.assign(n + m, pool.box_lo);
  p.upper.assign(n + m, pool.box_hi);
  p.objective.assign(n + m, pool.w_x);
  for (int j = 0; j < m; ++j) {
    p.lower[n + j] = 0;
    p.upper[n + j] = kInf;
    p.objective[n + j] = pool.w_psi;
  }
  p.rows.reserve(m);
  BasisHint hint;
  hint.row_basic.resize(m);
  for (int j = 0; j < m; ++j) {
    const auto& con = instance.constraints[j];
    const ConstraintTemplate& t = pool.templates[con.template_index];
    LpRow row;
    row.sense = RowSense::le;
    row.rhs = t.rhs + con.weight;
    double lhs0 = 0;
    for (size_t k = 0; k < con.vars.size(); ++k) {
      row.coeffs.emplace_back(con.vars[k], t.coefficients[k]);
      lhs0 += t.coefficients[k] * pool.box_lo;
    }
    row.coeffs.emplace_back(n + j, -1.0);
    p.rows.push_back(std::move(row));
    hint.row_basic[j] = lhs0 > row.rhs ? n + j : -1;
  }

  LpResult res = solve_lp(p, &hint);
  GlpResult out;
  out.iterations = res.iterations;
  out.certificate = res.certificate;
  out.solution.status = res.status;
  if (res.status != SolveStatus::optimal) return out;

  out.solution.x.assign(res.x.begin(), res.x.begin() + n);
  out.solution.psi = optimal_psi(instance, out.solution.x);
  double obj = 0;
  for (double v : out.solution.x) obj += pool.w_x * v;
  for (double v : out.solution.psi) obj += pool.w_psi * v;
  out.solution.objective = obj;
  out.certificate.gap = obj - out.certificate.dual_objective;
  return out;
}

double oracle_lipschitz(const Instance& instance) {
  double sum = 0;
  for (const auto& con : instance.constraints) {
    const ConstraintTemplate& t = instance.pool.templates[con.template_index];
    for (double a : t.coefficients) sum += std::abs(a);
  }
  return instance.pool.w_x * instance.n + instance.pool.w_psi * sum;
}

namespace {

struct LineScratch {
  std::vector<double> cand, rest, alpha;
};

// Exact minimization of the reduced objective over the last coordinate
// with the others fixed: convex piecewise-linear in t, so the minimum sits
// at a kink or a box endpoint.
double line_min(const Instance& inst, const std::vector<FlatConstraint>& flat,
                std::vector<double>& x, double head_sum, LineScratch& s) {
  const Pool& pool = inst.pool;
  int last = inst.n - 1;
  double lo = pool.box_lo, hi = pool.box_hi;
  auto& cand = s.cand;
  cand.clear();
  cand.push_back(lo);
  cand.push_back(hi);
  size_t m = flat.size();
  auto& rest = s.rest;
  auto& alpha = s.alpha;
  rest.assign(m, 0.0);
  alpha.assign(m, 0.0);
  for (size_t j = 0; j < m; ++j) {
    double r = 0, a = 0;
    const FlatConstraint& f = flat[j];
    for (size_t k = 0; k < f.vars->size(); ++k) {
      int v = (*f.vars)[k];
      if (v == last)
        a += (*f.coeffs)[k];
      else
        r += (*f.coeffs)[k] * x[v];
    }
    rest[j] = r;
    alpha[j] = a;
    if (a != 0) {
      double t = (f.cut - r) / a;
      if (t > lo && t < hi) cand.push_back(t);
    }
  }
  double best = kInf;
  double best_t = lo;
  for (double t : cand) {
    double val = pool.w_x * (head_sum + t);
    for (size_t j = 0; j < m; ++j)
      val += pool.w_psi * std::max(0.0, rest[j] + alpha[j] * t - flat[j].cut);
    if (val < best) {
      best = val;
      best_t = t;
    }
  }
  x[last] = best_t;
  return best;
}

// Odometer scan of an axis-aligned grid over coordinates 0..n-2; the last
// coordinate is minimized exactly. Updates best value/point in place.
void grid_scan(const Instance& inst, const std::vector<FlatConstraint>& flat,
               const std::vector<double>& lo, const std::vector<double>& hi,
               double step, double& best, std::vector<double>& best_x) {
  int head = inst.n - 1;
  std::vector<long long> steps(head);
  for (int i = 0; i < head; ++i) {
    double width = hi[i] - lo[i];
    steps[i] = std::max(1LL, static_cast<long long>(
                                 std::ceil(width / step - 1e-9)));
  }
  std::vector<long long> idx(head, 0);
  std::vector<double> x(inst.n, 0.0);
  LineScratch scratch;
  for (;;) {
    double head_sum = 0;
    for (int i = 0; i < head; ++i) {
      x[i] = std::min(lo[i] + static_cast<double>(idx[i]) * step, hi[i]);
      head_sum += x[i];
    }
    double val = line_min(inst, flat, x, head_sum, scratch);
    if (val < best) {
      best = val;
      best_x = x;
    }
    int i = 0;
    while (i < head && ++idx[i] > steps[i]) {
      idx[i] = 0;
      ++i;
    }
    if (i >= head) break;
  }
}

}  // namespace

double brute_oracle_glp(const Instance& instance, double grid_step) {
  if (instance.n > 4)
    throw std::invalid_argument("brute_oracle_glp: supports at most 4 variables");
  if (!(grid_step > 0) || !std::isfinite(grid_step))
    throw std::invalid_argument("brute_oracle_glp: grid_step must be positive");
  const Pool& pool = instance.pool;
  std::vector<FlatConstraint> flat = flatten(instance);
  int head = instance.n - 1;

  std::vector<double> lo(head, pool.box_lo), hi(head, pool.box_hi);
  double best = kInf;
  std::vector<double> best_x(instance.n, pool.box_lo);
  grid_scan(instance, flat, lo, hi, grid_step, best, best_x);

  for (int i = 0; i < head; ++i) {
    lo[i] = std::max(pool.box_lo, best_x[i] - grid_step);
    hi[i] = std::min(pool.box_hi, best_x[i] + grid_step);
  }
  grid_scan(instance, flat, lo, hi, grid_step / 10.0, best, best_x);
  return best;
}

VerifyResult verify_solution(const Instance& instance,
                             const Solution& solution) {
  if (static_cast<int>(solution.x.size()) != instance.n)
    throw std::invalid_argument("verify_solution: x size mismatch");
  if (solution.psi.size() != instance.constraints.size())
    throw std::invalid_argument("verify_solution: psi size mismatch");
  const Pool& pool = instance.pool;
  VerifyResult out;
  double worst = -kInf;
  for (double v : solution.x) {
    worst = std::max(worst, pool.box_lo - v);
    worst = std::max(worst, v - pool.box_hi);
  }
  for (double v : solution.psi) worst = std::max(worst, -v);
  std::vector<FlatConstraint> flat = flatten(instance);
  for (size_t j = 0; j < flat.size(); ++j)
    worst = std::max(worst, lhs_of(flat[j], solution.x) - solution.psi[j] -
                                flat[j].cut);
  if (worst == -kInf) worst = 0;
  out.max_violation = worst;
  out.feasible = worst <= 1e-9;
  double obj = 0;
  for (double v : solution.x) obj += pool.w_x * v;
  for (double v : solution.psi) obj += pool.w_psi * v;
  out.objective_recomputed = obj;
  return out;
}

std::string solution_to_string(const Solution& solution) {
  std::string out = "SOL objective=" + text::fmt_double17(solution.objective);
  out += '\n';
  for (size_t i = 0; i < solution.x.size(); ++i) {
    out += "x " + std::to_string(i) + ' ' + text::fmt_double17(solution.x[i]);
    out += '\n';
  }
  for (size_t j = 0; j < solution.psi.size(); ++j) {
    out += "psi " + std::to_string(j) + ' ' +
           text::fmt_double17(solution.psi[j]);
    out += '\n';
  }
  return out;
}

}  // namespace klsat
