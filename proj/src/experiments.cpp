#include "klsat/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "klsat/glp.hpp"
#include "klsat/matching.hpp"
#include "klsat/rng.hpp"
#include "klsat/text.hpp"

namespace klsat {

std::uint64_t batch_seed(std::uint64_t base_seed, int point, int index) {
  std::uint64_t pack =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(point)) << 32) |
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(index));
  return mix64(base_seed + mix64(pack));
}

namespace {

struct SolveSample {
  bool ok = false;
  double scaled = 0;
  double runtime = 0;
};

SolveSample solve_one(const Pool& pool, double c, int n, std::uint64_t seed) {
  SolveSample s;
  Instance inst = generate_instance(pool, n, c, seed, false);
  auto t0 = std::chrono::steady_clock::now();
  GlpResult res = solve_glp(inst);
  auto t1 = std::chrono::steady_clock::now();
  s.runtime = std::chrono::duration<double>(t1 - t0).count();
  if (res.solution.status == SolveStatus::optimal) {
    s.ok = true;
    s.scaled = res.solution.objective / n;
  }
  return s;
}

struct Moments {
  int count = 0;
  double mean = 0;
  double stddev = 0;  // sample standard deviation, 0 when count < 2
};

Moments aggregate(const std::vector<double>& values) {
  Moments m;
  m.count = static_cast<int>(values.size());
  if (m.count == 0) return m;
  double sum = 0;
  for (double v : values) sum += v;
  m.mean = sum / m.count;
  if (m.count >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(ss / (m.count - 1));
  }
  return m;
}

void check_batch_args(const Pool& pool, int n, int seeds) {
  validate_pool(pool);
  if (n < 1) throw std::invalid_argument("experiments: n must be >= 1");
  if (n < pool.k)
    throw std::invalid_argument(
        "experiments: n must be >= the pool arity for distinct variables");
  if (seeds < 1) throw std::invalid_argument("experiments: seeds must be >= 1");
}

}  // namespace

std::vector<ScanRecord> scan_f(const Pool& pool,
                               const std::vector<double>& c_grid, int n,
                               int seeds, std::uint64_t base_seed,
                               int workers) {
  check_batch_args(pool, n, seeds);
  if (workers < 1)
    throw std::invalid_argument("scan_f: workers must be >= 1");
  for (double c : c_grid)
    if (!(c >= 0) || !std::isfinite(c))
      throw std::invalid_argument("scan_f: densities must be finite and >= 0");

  int points = static_cast<int>(c_grid.size());
  std::vector<std::vector<SolveSample>> samples(
      points, std::vector<SolveSample>(seeds));

  size_t total = static_cast<size_t>(points) * seeds;
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      size_t job = next.fetch_add(1);
      if (job >= total || failed.load()) break;
      int p = static_cast<int>(job / seeds);
      int i = static_cast<int>(job % seeds);
      try {
        samples[p][i] =
            solve_one(pool, c_grid[p], n, batch_seed(base_seed, p, i));
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        break;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool_threads;
    int w = static_cast<int>(
        std::min(static_cast<size_t>(workers), total));
    for (int t = 0; t < w; ++t) pool_threads.emplace_back(worker);
    for (auto& t : pool_threads) t.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);

  std::vector<ScanRecord> out;
  out.reserve(points);
  for (int p = 0; p < points; ++p) {
    ScanRecord rec;
    rec.c = c_grid[p];
    rec.n = n;
    rec.seeds = seeds;
    std::vector<double> scaled;
    double rt = 0;
    for (int i = 0; i < seeds; ++i) {
      const SolveSample& s = samples[p][i];
      if (!s.ok) {
        ++rec.failures;
        continue;
      }
      scaled.push_back(s.scaled);
      rt += s.runtime;
    }
    if (rec.failures * 20 >= seeds)
      throw NumericalError("scan_f: too many numerical failures at c=" +
                               text::fmt_double(rec.c));
    Moments m = aggregate(scaled);
    rec.mean_scaled = m.mean;
    rec.std_scaled = m.stddev;
    rec.mean_runtime = m.count > 0 ? rt / m.count : 0;
    out.push_back(rec);
  }
  return out;
}

ThresholdEstimate estimate_threshold(const Pool& pool, int n, int seeds,
                                     double eps_feas, double c_max, double tol,
                                     std::uint64_t base_seed) {
  check_batch_args(pool, n, seeds);
  if (!(eps_feas > 0) || !std::isfinite(eps_feas))
    throw std::invalid_argument("estimate_threshold: eps_feas must be > 0");
  if (!(c_max > 0) || !std::isfinite(c_max))
    throw std::invalid_argument("estimate_threshold: c_max must be > 0");
  if (!(tol > 0) || !std::isfinite(tol))
    throw std::invalid_argument("estimate_threshold: tol must be > 0");

  int eval_point = 0;
  auto mean_at = [&](double c) {
    int point = eval_point++;
    std::vector<double> scaled;
    int failures = 0;
    for (int i = 0; i < seeds; ++i) {
      SolveSample s = solve_one(pool, c, n, batch_seed(base_seed, point, i));
      if (s.ok)
        scaled.push_back(s.scaled);
      else
        ++failures;
    }
    if (failures * 20 >= seeds)
      throw NumericalError(
          "estimate_threshold: too many numerical failures at c=" +
          text::fmt_double(c));
    return aggregate(scaled).mean;
  };

  ThresholdEstimate est;
  est.eps_feas = eps_feas;
  est.n = n;
  est.seeds = seeds;
  if (mean_at(c_max) <= eps_feas) {
    est.c_lo = c_max;
    est.c_hi = c_max;
    est.never_exceeded = true;
    return est;
  }
  double lo = 0, hi = c_max;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mean_at(mid) > eps_feas)
      hi = mid;
    else
      lo = mid;
  }
  est.c_lo = lo;
  est.c_hi = hi;
  return est;
}

std::vector<CouplingResult> coupling_monotone_test(const Pool& pool, int n,
                                                   double c1, double c2,
                                                   int seeds,
                                                   std::uint64_t base_seed) {
  check_batch_args(pool, n, seeds);
  if (!(c1 >= 0) || !(c2 >= c1) || !std::isfinite(c2))
    throw std::invalid_argument(
        "coupling_monotone_test: need 0 <= c1 <= c2 finite");

  std::vector<CouplingResult> out;
  out.reserve(seeds);
  for (int i = 0; i < seeds; ++i) {
    CouplingResult r;
    r.seed = batch_seed(base_seed, 0, i);
    Instance inst1 = generate_instance(pool, n, c1, r.seed, false);
    Instance inst2 = extend_instance(inst1, c2);
    GlpResult g1 = solve_glp(inst1);
    GlpResult g2 = solve_glp(inst2);
    if (g1.solution.status == SolveStatus::optimal &&
        g2.solution.status == SolveStatus::optimal) {
      r.opt1 = g1.solution.objective;
      r.opt2 = g2.solution.objective;
      r.pass = r.opt2 >= r.opt1 - 1e-9;
    }
    out.push_back(r);
  }
  return out;
}

std::vector<ConcentrationRecord> concentration_report(
    const Pool& pool, double c, const std::vector<int>& n_list, int seeds,
    std::uint64_t base_seed) {
  validate_pool(pool);
  if (seeds < 1)
    throw std::invalid_argument("concentration_report: seeds must be >= 1");
  if (!(c >= 0) || !std::isfinite(c))
    throw std::invalid_argument("concentration_report: bad density");

  std::vector<ConcentrationRecord> out;
  out.reserve(n_list.size());
  for (size_t p = 0; p < n_list.size(); ++p) {
    int n = n_list[p];
    if (n < pool.k)
      throw std::invalid_argument("concentration_report: n below pool arity");
    std::vector<double> scaled;
    int failures = 0;
    for (int i = 0; i < seeds; ++i) {
      SolveSample s = solve_one(pool, c, n,
                                batch_seed(base_seed, static_cast<int>(p), i));
      if (s.ok)
        scaled.push_back(s.scaled);
      else
        ++failures;
    }
    if (failures * 20 >= seeds)
      throw NumericalError(
          "concentration_report: too many numerical failures at n=" +
          std::to_string(n));
    Moments m = aggregate(scaled);
    ConcentrationRecord rec;
    rec.n = n;
    rec.seeds = seeds;
    rec.mean_scaled = m.mean;
    rec.std_scaled = m.stddev;
    out.push_back(rec);
  }
  return out;
}

namespace {

// Knuth's product-of-uniforms Poisson sampler; fine for the moderate
// rates used here.
int poisson_draw(Rng& rng, double lambda) {
  double limit = std::exp(-lambda);
  double p = 1;
  int k = 0;
  do {
    ++k;
    p *= rng.unit();
  } while (p > limit);
  return k - 1;
}

}  // namespace

TreeStats tree_stats(const Pool& pool, int n, double c, int d, int samples,
                     std::uint64_t base_seed) {
  check_batch_args(pool, n, samples);
  if (!(c >= 0) || !std::isfinite(c))
    throw std::invalid_argument("tree_stats: bad density");
  if (d < 0) throw std::invalid_argument("tree_stats: d must be >= 0");

  double lambda = c * pool.k;
  std::vector<long long> degree_count;
  long long trees = 0;
  double ball_cons = 0;
  double gw_cons = 0;

  for (int s = 0; s < samples; ++s) {
    std::uint64_t seed = base_seed + static_cast<std::uint64_t>(s);
    Instance inst = generate_instance(pool, n, c, seed, false);
    Rng roots = substream(seed, Stream::roots);
    int root = static_cast<int>(roots.below(static_cast<std::uint64_t>(n)));

    int deg = 0;
    for (const auto& con : inst.constraints)
      for (int v : con.vars)
        if (v == root) ++deg;
    if (deg >= static_cast<int>(degree_count.size()))
      degree_count.resize(deg + 1, 0);
    ++degree_count[deg];

    Neighborhood nb = neighborhood(inst, root, d);
    if (nb.is_tree) ++trees;
    ball_cons += static_cast<double>(nb.constraints.size());

    Rng gw = substream(seed, Stream::galton_watson);
    long long frontier = 1;
    long long total_cons = 0;
    for (int round = 0; round < d && frontier > 0; ++round) {
      long long new_cons = 0;
      for (long long v = 0; v < frontier; ++v)
        new_cons += poisson_draw(gw, lambda);
      total_cons += new_cons;
      frontier = new_cons * (pool.k - 1);
    }
    gw_cons += static_cast<double>(total_cons);
  }

  TreeStats out;
  out.tree_fraction = static_cast<double>(trees) / samples;
  out.gw_tree_fraction = 1.0;
  out.mean_ball_constraints = ball_cons / samples;
  out.gw_mean_constraints = gw_cons / samples;

  // Total variation between the empirical root degree and Pois(lambda),
  // with the tail beyond the largest observed degree counted exactly.
  double tv = 0;
  double pmf = std::exp(-lambda);
  double seen_mass = 0;
  for (size_t k = 0; k < degree_count.size(); ++k) {
    double emp = static_cast<double>(degree_count[k]) / samples;
    tv += std::abs(emp - pmf);
    seen_mass += pmf;
    pmf *= lambda / static_cast<double>(k + 1);
  }
  tv += std::max(0.0, 1.0 - seen_mass);
  out.tv_degree = 0.5 * tv;
  return out;
}

std::vector<MatchingLimitRecord> matching_limit_report(
    const std::vector<double>& c_grid, int n, int seeds, int b,
    std::uint64_t base_seed) {
  if (n < 1)
    throw std::invalid_argument("matching_limit_report: n must be >= 1");
  if (seeds < 1)
    throw std::invalid_argument("matching_limit_report: seeds must be >= 1");
  if (b < 1)
    throw std::invalid_argument("matching_limit_report: b must be >= 1");

  WeightDistSpec unit = WeightDistSpec::constant(1.0);
  std::vector<MatchingLimitRecord> out;
  out.reserve(c_grid.size());
  for (size_t p = 0; p < c_grid.size(); ++p) {
    double c = c_grid[p];
    if (!(c >= 0) || !std::isfinite(c))
      throw std::invalid_argument("matching_limit_report: bad density");
    MatchingLimitRecord rec;
    rec.c = c;
    rec.n = n;
    double lpm0_sum = 0;
    double ks_sum = 0;
    for (int i = 0; i < seeds; ++i) {
      std::uint64_t seed = batch_seed(base_seed, static_cast<int>(p), i);
      WeightedGraph g = gen_graph(n, c, unit, seed);
      Lpm0Primal relax = lpm0_primal(g, b);
      if (relax.status != SolveStatus::optimal)
        throw NumericalError(
            "matching_limit_report: relaxation solve failed");
      lpm0_sum += relax.value / n;
      KarpSipserResult ks = karp_sipser(g);
      ks_sum += static_cast<double>(ks.marked_edges.size()) / n;
    }
    rec.lpm0_frac = lpm0_sum / seeds;
    rec.ks_lower_frac = ks_sum / seeds;
    rec.ks_printed = ks_limit(c, KsForm::printed);
    rec.ks_degnorm = c > 0 ? ks_limit(c, KsForm::degree_normalized) : 0.0;
    out.push_back(rec);
  }
  return out;
}

}  // namespace klsat
