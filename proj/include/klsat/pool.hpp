#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "klsat/rng.hpp"

namespace klsat {

// One row of the constraint pool: a_1 y_1 + ... + a_K y_K <= b.
struct ConstraintTemplate {
  std::vector<double> coefficients;
  double rhs = 0;
};

// Distribution of the per-constraint weight shift W_j. The support bound
// B_w is derived from the parameters; the entire support lies within
// [-B_w, B_w].
class WeightDistSpec {
 public:
  enum class Kind { constant, uniform, discrete };

  static WeightDistSpec constant(double v);
  static WeightDistSpec uniform(double lo, double hi);
  static WeightDistSpec discrete(std::vector<double> values,
                                 std::vector<double> probabilities);

  Kind kind() const { return kind_; }
  double support_bound() const { return b_w_; }
  double min_support() const;
  double max_support() const;

  double sample(Rng& rng) const;

  // Textual form used in pool files: constant(v), uniform(lo,hi),
  // discrete(v1:p1,v2:p2,...).
  std::string spec_string() const;
  static WeightDistSpec parse(std::string_view spec);

  bool operator==(const WeightDistSpec&) const = default;

 private:
  WeightDistSpec() = default;
  Kind kind_ = Kind::constant;
  double a_ = 0, b_ = 0;           // constant value, or uniform [a, b]
  std::vector<double> values_;     // discrete support
  std::vector<double> probs_;      // discrete probabilities, sum 1
  double b_w_ = 0;
};

// The fixed constraint pool: templates, variable box, weight distribution
// and objective weights.
struct Pool {
  int k = 1;
  std::vector<ConstraintTemplate> templates;
  double box_lo = 0;
  double box_hi = 1;
  WeightDistSpec weight_dist = WeightDistSpec::constant(0);
  double w_x = 0;    // >= 0
  double w_psi = 1;  // > 0
};

// Throws std::invalid_argument naming the offending field.
void validate_pool(const Pool& pool);

// Exact minimum of the template's left-hand side over the box slice where
// coordinate fixed_index is pinned to fixed_value. Every other coordinate
// independently takes the endpoint its coefficient prefers, which is exact
// because the objective is separable and linear per coordinate.
double box_min_partial(const ConstraintTemplate& t, int fixed_index,
                       double fixed_value, const Pool& pool);

struct ConditionAWitness {
  int template_index = 0;
  int coordinate = 0;
  double value = 0;
};

struct ConditionAResult {
  bool holds = true;
  std::optional<ConditionAWitness> witness;
};

// Single-coordinate completability: for every template, coordinate and
// pinned value, the remaining coordinates can satisfy the constraint.
// Checking the two box endpoints of the pinned value is exact because
// box_min_partial is linear in it.
ConditionAResult check_condition_a(const Pool& pool);

struct ConditionBResult {
  bool holds = true;
  std::optional<std::vector<int>> failing_cube;
};

// Uniform cube-wise violation: every side-1/l grid cube inside the box is
// violated by at least nu by some template. The cube minimum of a*y - b is
// termwise (each coordinate takes the cube endpoint its coefficient
// prefers). Requires l*(box_hi - box_lo) to be an integer so the cube grid
// tiles the box exactly.
ConditionBResult check_condition_b(const Pool& pool, int l, double nu);

// Tight uniform upper bound on any optimal slack:
// max(0, max_r(sum_k max(a_rk*lo, a_rk*hi) - b_r) + B_w).
double b_psi(const Pool& pool);

// The looser closed-form bound kept for comparison:
// max_r((|lo| + |hi|) * K * sum_k|a_rk| + |b_r|). Note it carries no B_w
// term, so it does not dominate b_psi() once B_w > 0.
double b_psi_printed(const Pool& pool);

// The canonical hard pool: all 2^3 sign patterns of -y1-y2-y3 <= -7/4 on
// [0,1]^3 (substituting y -> 1-y flips a sign and shifts the rhs), with
// w_x=0, w_psi=1 and constant-zero weights. Every point of the cube
// violates one of the eight templates by at least 1/4.
Pool cube_cover_pool();

// Line-oriented pool file: header
//   POOL K=<int> BOX=<lo>,<hi> WX=<real> WPSI=<real> WDIST=<spec>
// then one line per template: T a_1 ... a_K b. '#' starts a comment.
std::string pool_to_string(const Pool& pool);
Pool pool_from_string(std::string_view content);
Pool load_pool(const std::string& path);
void save_pool(const Pool& pool, const std::string& path);

}  // namespace klsat
