#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "klsat/instance.hpp"
#include "klsat/lp.hpp"
#include "klsat/pool.hpp"

namespace klsat {

struct Edge {
  int u = 0, v = 0;  // u < v
  double w = 0;
};

// Simple undirected graph with nonnegative bounded edge weights.
struct WeightedGraph {
  int n = 0;
  std::vector<Edge> edges;

  int m() const { return static_cast<int>(edges.size()); }
};

// floor(c*n) distinct uniform edges (rejection sampling), weights drawn
// independently from weight_dist, which must have support in [0, inf).
// Deterministic per seed via the graph_edges / graph_weights substreams.
WeightedGraph gen_graph(int n, double c, const WeightDistSpec& weight_dist,
                        std::uint64_t seed);

struct Lpm0Primal {
  double value = 0;
  std::vector<double> x;  // per edge, in [0,1]
  SolveStatus status = SolveStatus::optimal;
};

// Degree-only relaxation of maximum weight b-matching:
// maximize sum w_e x_e s.t. per-node degree <= b, x in [0,1]^m.
Lpm0Primal lpm0_primal(const WeightedGraph& graph, int b);

struct Lpm0Dual {
  double value = 0;
  std::vector<double> y;    // per node, >= 0
  std::vector<double> psi;  // per edge, >= 0
  SolveStatus status = SolveStatus::optimal;
};

// minimize b*sum(y) + sum(psi) s.t. y_i + y_j + psi_e >= w_e. Equals
// lpm0_primal by strong duality.
Lpm0Dual lpm0_dual(const WeightedGraph& graph, int b);

// The dual written as a constraint-pool program: pool {-y1 - y2 <= 0} on
// box [0, max(w_max, 1)] with w_x = b, w_psi = 1; edge e becomes the
// constraint -y_u - y_v <= -w_e + psi_e (realized weight -w_e). Its
// optimum equals lpm0_dual.
Instance dual_as_glp(const WeightedGraph& graph, int b);

struct KarpSipserResult {
  std::vector<int> marked_edges;  // indices into graph.edges
  WeightedGraph residual;         // leafless remainder, isolated nodes dropped
  std::optional<int> exact_total;
};

// Leaf removal: repeatedly take the lowest-index degree-1 node, mark its
// edge, delete both endpoints. The marked edges extend to a maximum
// cardinality matching, so when the residual is small enough to solve
// exactly (<= 16 non-isolated nodes and <= 24 edges), exact_total =
// |marked| + max matching of the residual = max matching of the input.
KarpSipserResult karp_sipser(const WeightedGraph& graph);

struct BruteMatching {
  double value = 0;  // maximum total weight
  int size = 0;      // cardinality of the first maximizer found
};

// Exhaustive include/exclude search with suffix-weight pruning; exact for
// |edges| <= 24 (refuses larger inputs).
BruteMatching exact_bmatching_bruteforce(const WeightedGraph& graph, int b);

struct GammaPair {
  double gamma_star = 0;   // smallest root of x = c*exp(-c*exp(-x))
  double gamma_upper = 0;  // c*exp(-gamma_star)
};

// Monotone fixed-point iteration from 0 (converges upward to the least
// root), polished by bisection on [iterate, 1]; residual < 1e-12.
GammaPair gamma_fixed_point(double c);

enum class KsForm { printed, degree_normalized };

// Evaluates the closed-form limit curve. printed:
//   1 - (g* + g^ + g*g^)/2;
// degree_normalized divides the bracket by 2c instead of 2 (the two
// coincide at c = 1). Evaluation only; which form (if either) matches
// simulated fractions is reported by the experiments, never asserted.
double ks_limit(double c, KsForm form);

struct MatchingCertificate {
  double lpm0 = 0;
  int d = 0;
  long long m_d = 0;  // edges on at least one cycle of length < d
  double w_max = 0;
  double lower = 0;  // max(0, ((d-1)/d) * (lpm0 - m_d*w_max))
  double upper = 0;  // lpm0
};

// Sandwich bounds on the true maximum weight b-matching:
// lower <= M_w(graph, b) <= upper. Requires d >= 3.
MatchingCertificate certify_bmatching(const WeightedGraph& graph, int b, int d);

// `GRAPH n=<int> m=<int>` then `E i j w` lines, weights at 17 digits.
std::string graph_to_string(const WeightedGraph& graph);
WeightedGraph graph_from_string(std::string_view content);
WeightedGraph load_graph(const std::string& path);
void save_graph(const WeightedGraph& graph, const std::string& path);

}  // namespace klsat
