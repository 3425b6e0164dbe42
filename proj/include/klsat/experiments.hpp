#pragma once

#include <cstdint>
#include <vector>

#include "klsat/instance.hpp"
#include "klsat/pool.hpp"

namespace klsat {

// Instance seed for point `index` of a batch: spreads (base, point, seed)
// so different grid points never share instance streams.
std::uint64_t batch_seed(std::uint64_t base_seed, int point, int index);

struct ScanRecord {
  double c = 0;
  int n = 0;
  int seeds = 0;
  double mean_scaled = 0;  // mean optimum/n over successful solves
  double std_scaled = 0;   // sample std (0 when seeds < 2)
  double mean_runtime = 0; // wall seconds per solve; not deterministic
  int failures = 0;        // numerical failures, excluded from the means
};

// Empirical f(c): per grid point, `seeds` instances (without replacement)
// solved and aggregated in seed order. Throws NumericalError if 5% or
// more of a batch fails numerically. workers > 1 parallelizes the solves
// without changing any reported value except mean_runtime.
std::vector<ScanRecord> scan_f(const Pool& pool,
                               const std::vector<double>& c_grid, int n,
                               int seeds, std::uint64_t base_seed,
                               int workers = 1);

struct ThresholdEstimate {
  double c_lo = 0;
  double c_hi = 0;
  double eps_feas = 0;
  int n = 0;
  int seeds = 0;
  bool never_exceeded = false;  // mean_scaled(c_max) <= eps_feas
};

// Bisection bracket for the density where the mean scaled optimum crosses
// eps_feas. If even c_max stays below eps_feas the estimate is returned
// flagged with c_lo = c_hi = c_max.
ThresholdEstimate estimate_threshold(const Pool& pool, int n, int seeds,
                                     double eps_feas, double c_max, double tol,
                                     std::uint64_t base_seed);

struct CouplingResult {
  std::uint64_t seed = 0;
  double opt1 = 0;
  double opt2 = 0;
  bool pass = false;  // opt2 >= opt1 - 1e-9
};

// Per seed: the c2-instance is the c1-instance plus appended constraints
// (same streams), so its optimum can only grow.
std::vector<CouplingResult> coupling_monotone_test(const Pool& pool, int n,
                                                   double c1, double c2,
                                                   int seeds,
                                                   std::uint64_t base_seed);

struct ConcentrationRecord {
  int n = 0;
  int seeds = 0;
  double mean_scaled = 0;
  double std_scaled = 0;
};

std::vector<ConcentrationRecord> concentration_report(
    const Pool& pool, double c, const std::vector<int>& n_list, int seeds,
    std::uint64_t base_seed);

struct TreeStats {
  double tv_degree = 0;      // TV(root degree histogram, Pois(cK))
  double tree_fraction = 0;  // share of depth-d balls that are trees
  double gw_tree_fraction = 1.0;  // branching-process reference (always 1)
  double mean_ball_constraints = 0;
  double gw_mean_constraints = 0;  // same statistic on simulated GW trees
};

// One fresh instance per sample, root drawn from the sample's roots
// substream. The Galton-Watson reference grows Pois(cK) constraint
// children per variable and K-1 fresh variables per constraint, d rounds.
TreeStats tree_stats(const Pool& pool, int n, double c, int d, int samples,
                     std::uint64_t base_seed);

struct MatchingLimitRecord {
  double c = 0;
  int n = 0;
  double lpm0_frac = 0;      // mean LPM0/n (upper bound on matching/n)
  double ks_lower_frac = 0;  // mean Karp-Sipser marked count / n
  double ks_printed = 0;     // formula curve, as printed
  double ks_degnorm = 0;     // formula curve, degree-normalized
};

// Empirical matching fractions against both closed-form normalizations.
// Graphs get unit weights (the cardinality comparison needs b = 1).
std::vector<MatchingLimitRecord> matching_limit_report(
    const std::vector<double>& c_grid, int n, int seeds, int b,
    std::uint64_t base_seed);

}  // namespace klsat
