#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "klsat/pool.hpp"

namespace klsat {

// One realized constraint: template row r applied to an ordered variable
// tuple, shifted by a weight drawn from the pool's distribution:
//   sum_k a_{rk} x_{vars[k]} <= rhs_r + weight + psi.
struct ConstraintInstance {
  int template_index = 0;
  std::vector<int> vars;
  double weight = 0;
};

struct Instance {
  Pool pool;
  int n = 0;
  double c = 0;
  std::uint64_t seed = 0;
  bool replacement = false;
  std::vector<ConstraintInstance> constraints;

  int m() const { return static_cast<int>(constraints.size()); }
};

// floor(c*n) constraints, each built by drawing the variable tuple, then
// the template index, then the weight, from three independent substreams
// of `seed`. Generation is sequential per stream, so an instance at c2 >
// c1 with the same (pool, n, seed, flag) extends the c1 instance
// constraint-for-constraint: the coupling used by the monotonicity
// experiments. replacement=false rejects tuples with repeated variables
// and redraws the whole tuple.
Instance generate_instance(const Pool& pool, int n, double c,
                           std::uint64_t seed, bool replacement = false);

// Extends `base` in place to density c2 by appending the constraints the
// generator would have produced anyway; generate_instance(pool, n, c2,
// seed, fl) gives the identical result.
Instance extend_instance(const Instance& base, double c2);

struct Neighborhood {
  int root = 0;
  int depth = 0;
  std::vector<int> variables;    // sorted ascending, includes root
  std::vector<int> constraints;  // sorted ascending; all K vars inside
  bool is_tree = true;
};

// Variables reachable from `root` by chains of at most d constraints, plus
// every constraint fully contained in that variable set. is_tree checks
// the induced bipartite variable-constraint graph for cycles by edge
// counting (the induced graph is connected by construction).
Neighborhood neighborhood(const Instance& instance, int root, int d);

// Exact number of constraint cycles per length r in [2, r_max]. A cycle of
// length r is r distinct constraints, cyclically consecutive pairs sharing
// a variable, for which distinct shared variables can be chosen at every
// step (so length 2 means two constraints sharing two distinct variables).
// Counted once per canonical rotation/reflection.
std::map<int, long long> cycle_census(const Instance& instance, int r_max);

// Per-degree frequency over variables, with multiplicity when replacement
// repeated a variable inside one constraint. Frequencies sum to 1 (n > 0).
std::map<int, double> degree_histogram(const Instance& instance);

// Line-oriented instance body: header
//   KLSAT n=<int> m=<int> K=<int> seed=<u64>
// then one line per constraint: C r i_1 ... i_K w, weights at 17
// significant digits. The pool travels separately; load_instance
// re-attaches it.
std::string instance_to_string(const Instance& instance);
Instance instance_from_string(std::string_view content, const Pool& pool);
Instance load_instance(const std::string& path, const Pool& pool);
void save_instance(const Instance& instance, const std::string& path);

}  // namespace klsat
