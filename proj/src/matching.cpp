#include "klsat/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

#include "klsat/rng.hpp"
#include "klsat/text.hpp"

namespace klsat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_weights(const WeightedGraph& g, const char* who) {
  for (const Edge& e : g.edges) {
    if (!std::isfinite(e.w) || e.w < 0)
      throw std::invalid_argument(std::string(who) +
                                  ": edge weights must be finite and >= 0");
    if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n || e.u == e.v)
      throw std::invalid_argument(std::string(who) + ": bad edge endpoints");
  }
}

double max_weight(const WeightedGraph& g) {
  double w = 0;
  for (const Edge& e : g.edges) w = std::max(w, e.w);
  return w;
}

}  // namespace

WeightedGraph gen_graph(int n, double c, const WeightDistSpec& weight_dist,
                        std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_graph: n must be >= 1");
  if (!(c >= 0) || !std::isfinite(c))
    throw std::invalid_argument("gen_graph: c must be finite and >= 0");
  if (weight_dist.min_support() < 0)
    throw std::invalid_argument("gen_graph: weight support must be >= 0");
  long long m = static_cast<long long>(std::floor(c * n + 1e-9));
  long long cap = static_cast<long long>(n) * (n - 1) / 2;
  if (m > cap)
    throw std::invalid_argument("gen_graph: more edges than distinct pairs");

  Rng redges = substream(seed, Stream::graph_edges);
  Rng rweights = substream(seed, Stream::graph_weights);
  WeightedGraph g;
  g.n = n;
  g.edges.reserve(static_cast<size_t>(m));
  std::unordered_set<long long> seen;
  seen.reserve(static_cast<size_t>(m) * 2);
  while (static_cast<long long>(g.edges.size()) < m) {
    int u = static_cast<int>(redges.below(static_cast<std::uint64_t>(n)));
    int v = static_cast<int>(redges.below(static_cast<std::uint64_t>(n)));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    long long key = static_cast<long long>(u) * n + v;
    if (!seen.insert(key).second) continue;
    Edge e;
    e.u = u;
    e.v = v;
    e.w = weight_dist.sample(rweights);
    g.edges.push_back(e);
  }
  return g;
}

Lpm0Primal lpm0_primal(const WeightedGraph& graph, int b) {
  if (b < 1) throw std::invalid_argument("lpm0_primal: b must be >= 1");
  check_weights(graph, "lpm0_primal");
  int m = graph.m();
  LpProblem p;
  p.num_vars = m;
  p.maximize = true;
  p.lower.assign(m, 0.0);
  p.upper.assign(m, 1.0);
  p.objective.resize(m);
  for (int e = 0; e < m; ++e) p.objective[e] = graph.edges[e].w;
  std::vector<std::vector<int>> at_node(graph.n);
  for (int e = 0; e < m; ++e) {
    at_node[graph.edges[e].u].push_back(e);
    at_node[graph.edges[e].v].push_back(e);
  }
  for (int i = 0; i < graph.n; ++i) {
    if (at_node[i].empty()) continue;
    LpRow row;
    row.sense = RowSense::le;
    row.rhs = b;
    for (int e : at_node[i]) row.coeffs.emplace_back(e, 1.0);
    p.rows.push_back(std::move(row));
  }
  LpResult res = solve_lp(p);
  Lpm0Primal out;
  out.status = res.status;
  if (res.status != SolveStatus::optimal) return out;
  out.value = res.objective;
  out.x = std::move(res.x);
  return out;
}

Lpm0Dual lpm0_dual(const WeightedGraph& graph, int b) {
  if (b < 1) throw std::invalid_argument("lpm0_dual: b must be >= 1");
  check_weights(graph, "lpm0_dual");
  int n = graph.n;
  int m = graph.m();
  LpProblem p;
  p.num_vars = n + m;
  p.maximize = false;
  p.lower.assign(n + m, 0.0);
  p.upper.assign(n + m, kInf);
  p.objective.assign(n + m, 1.0);
  for (int i = 0; i < n; ++i) p.objective[i] = b;
  BasisHint hint;
  hint.row_basic.resize(m);
  p.rows.reserve(m);
  for (int e = 0; e < m; ++e) {
    LpRow row;
    row.sense = RowSense::ge;
    row.rhs = graph.edges[e].w;
    row.coeffs.emplace_back(graph.edges[e].u, 1.0);
    row.coeffs.emplace_back(graph.edges[e].v, 1.0);
    row.coeffs.emplace_back(n + e, 1.0);
    p.rows.push_back(std::move(row));
    hint.row_basic[e] = n + e;
  }
  LpResult res = solve_lp(p, &hint);
  Lpm0Dual out;
  out.status = res.status;
  if (res.status != SolveStatus::optimal) return out;
  out.value = res.objective;
  out.y.assign(res.x.begin(), res.x.begin() + n);
  out.psi.assign(res.x.begin() + n, res.x.end());
  return out;
}

Instance dual_as_glp(const WeightedGraph& graph, int b) {
  if (b < 1) throw std::invalid_argument("dual_as_glp: b must be >= 1");
  check_weights(graph, "dual_as_glp");
  double hi = std::max(max_weight(graph), 1.0);
  Pool pool;
  pool.k = 2;
  pool.templates = {ConstraintTemplate{{-1.0, -1.0}, 0.0}};
  pool.box_lo = 0;
  pool.box_hi = hi;
  pool.w_x = b;
  pool.w_psi = 1;
  pool.weight_dist = WeightDistSpec::uniform(-hi, 0.0);

  Instance inst;
  inst.pool = std::move(pool);
  inst.n = graph.n;
  inst.c = graph.n > 0 ? static_cast<double>(graph.m()) / graph.n : 0.0;
  inst.seed = 0;
  inst.replacement = false;
  inst.constraints.reserve(graph.edges.size());
  for (const Edge& e : graph.edges) {
    ConstraintInstance con;
    con.template_index = 0;
    con.vars = {e.u, e.v};
    con.weight = -e.w;
    inst.constraints.push_back(std::move(con));
  }
  return inst;
}

KarpSipserResult karp_sipser(const WeightedGraph& graph) {
  check_weights(graph, "karp_sipser");
  int n = graph.n;
  int m = graph.m();
  std::vector<std::vector<int>> inc(n);
  for (int e = 0; e < m; ++e) {
    inc[graph.edges[e].u].push_back(e);
    inc[graph.edges[e].v].push_back(e);
  }
  std::vector<int> deg(n);
  for (int i = 0; i < n; ++i) deg[i] = static_cast<int>(inc[i].size());
  std::vector<char> node_alive(n, 1), edge_alive(m, 1);
  std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
  for (int i = 0; i < n; ++i)
    if (deg[i] == 1) leaves.push(i);

  KarpSipserResult out;
  auto kill_node = [&](int v) {
    node_alive[v] = 0;
    for (int e : inc[v]) {
      if (!edge_alive[e]) continue;
      edge_alive[e] = 0;
      int other = graph.edges[e].u == v ? graph.edges[e].v : graph.edges[e].u;
      if (--deg[other] == 1 && node_alive[other]) leaves.push(other);
    }
    deg[v] = 0;
  };

  while (!leaves.empty()) {
    int u = leaves.top();
    leaves.pop();
    if (!node_alive[u] || deg[u] != 1) continue;
    int me = -1;
    for (int e : inc[u])
      if (edge_alive[e]) {
        me = e;
        break;
      }
    out.marked_edges.push_back(me);
    edge_alive[me] = 0;
    int v = graph.edges[me].u == u ? graph.edges[me].v : graph.edges[me].u;
    --deg[u];
    --deg[v];
    kill_node(u);
    kill_node(v);
  }

  std::vector<int> remap(n, -1);
  int rn = 0;
  for (int i = 0; i < n; ++i)
    if (node_alive[i] && deg[i] > 0) remap[i] = rn++;
  out.residual.n = rn;
  for (int e = 0; e < m; ++e) {
    if (!edge_alive[e]) continue;
    Edge copy = graph.edges[e];
    copy.u = remap[copy.u];
    copy.v = remap[copy.v];
    out.residual.edges.push_back(copy);
  }
  if (rn <= 16 && out.residual.m() <= 24) {
    WeightedGraph unit = out.residual;
    for (Edge& e : unit.edges) e.w = 1.0;
    BruteMatching bm = exact_bmatching_bruteforce(unit, 1);
    out.exact_total = static_cast<int>(out.marked_edges.size()) + bm.size;
  }
  return out;
}

BruteMatching exact_bmatching_bruteforce(const WeightedGraph& graph, int b) {
  if (b < 1)
    throw std::invalid_argument("exact_bmatching_bruteforce: b must be >= 1");
  int m = graph.m();
  if (m > 24)
    throw std::invalid_argument(
        "exact_bmatching_bruteforce: too many edges (max 24)");
  std::vector<double> suffix(m + 1, 0.0);
  for (int e = m - 1; e >= 0; --e)
    suffix[e] = suffix[e + 1] + std::max(graph.edges[e].w, 0.0);
  std::vector<int> cap(graph.n, b);
  BruteMatching best;
  best.value = -1;
  std::function<void(int, double, int)> go = [&](int e, double val, int count) {
    if (val + suffix[e] <= best.value - 1e-12) return;
    if (e == m) {
      if (val > best.value) {
        best.value = val;
        best.size = count;
      }
      return;
    }
    const Edge& ed = graph.edges[e];
    if (cap[ed.u] > 0 && cap[ed.v] > 0) {
      --cap[ed.u];
      --cap[ed.v];
      go(e + 1, val + ed.w, count + 1);
      ++cap[ed.u];
      ++cap[ed.v];
    }
    go(e + 1, val, count);
  };
  go(0, 0.0, 0);
  if (best.value < 0) {
    best.value = 0;
    best.size = 0;
  }
  return best;
}

GammaPair gamma_fixed_point(double c) {
  if (!(c >= 0) || !std::isfinite(c))
    throw std::invalid_argument("gamma_fixed_point: c must be finite and >= 0");
  auto g = [c](double x) { return c * std::exp(-c * std::exp(-x)); };
  double x = 0;
  for (int i = 0; i < 200; ++i) x = g(x);
  if (std::abs(x - g(x)) >= 1e-12) {
    // The least root always lies in [x, 1]: iterates from 0 stay below it
    // and 1 - g(1) = 1 - c*exp(-c/e) >= 0 for every c, with no other root
    // of t - g(t) inside [0, 1]. Plain bisection is safe where the
    // iteration stalls (the near-tangent region around c = e).
    double lo = x, hi = 1.0;
    for (int i = 0; i < 200 && lo < hi; ++i) {
      double mid = 0.5 * (lo + hi);
      if (mid - g(mid) < 0)
        lo = mid;
      else
        hi = mid;
    }
    x = hi;
  }
  GammaPair out;
  out.gamma_star = x;
  out.gamma_upper = c * std::exp(-x);
  return out;
}

double ks_limit(double c, KsForm form) {
  GammaPair gp = gamma_fixed_point(c);
  double bracket =
      gp.gamma_star + gp.gamma_upper + gp.gamma_star * gp.gamma_upper;
  if (form == KsForm::printed) return 1.0 - bracket / 2.0;
  if (!(c > 0))
    throw std::invalid_argument(
        "ks_limit: degree_normalized form needs c > 0");
  return 1.0 - bracket / (2.0 * c);
}

MatchingCertificate certify_bmatching(const WeightedGraph& graph, int b,
                                      int d) {
  if (d < 3) throw std::invalid_argument("certify_bmatching: d must be >= 3");
  Lpm0Primal relax = lpm0_primal(graph, b);
  if (relax.status != SolveStatus::optimal)
    throw NumericalError("certify_bmatching: relaxation solve failed");

  int n = graph.n;
  int m = graph.m();
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge)
  for (int e = 0; e < m; ++e) {
    adj[graph.edges[e].u].emplace_back(graph.edges[e].v, e);
    adj[graph.edges[e].v].emplace_back(graph.edges[e].u, e);
  }
  std::vector<char> on_path(n, 0);
  long long m_d = 0;
  for (int e = 0; e < m; ++e) {
    int target = graph.edges[e].v;
    std::function<bool(int, int)> dfs = [&](int cur, int rem) -> bool {
      if (cur == target) return true;
      if (rem == 0) return false;
      on_path[cur] = 1;
      for (auto [nxt, eid] : adj[cur]) {
        if (eid == e || on_path[nxt]) continue;
        if (dfs(nxt, rem - 1)) {
          on_path[cur] = 0;
          return true;
        }
      }
      on_path[cur] = 0;
      return false;
    };
    if (dfs(graph.edges[e].u, d - 2)) ++m_d;
  }

  MatchingCertificate cert;
  cert.lpm0 = relax.value;
  cert.d = d;
  cert.m_d = m_d;
  cert.w_max = max_weight(graph);
  double frac = static_cast<double>(d - 1) / d;
  cert.lower = std::max(0.0, frac * (cert.lpm0 - cert.m_d * cert.w_max));
  cert.upper = cert.lpm0;
  return cert;
}

std::string graph_to_string(const WeightedGraph& graph) {
  std::string out = "GRAPH n=" + std::to_string(graph.n) +
                    " m=" + std::to_string(graph.m()) + "\n";
  for (const Edge& e : graph.edges) {
    out += "E " + std::to_string(e.u) + ' ' + std::to_string(e.v) + ' ' +
           text::fmt_double17(e.w) + '\n';
  }
  return out;
}

WeightedGraph graph_from_string(std::string_view content) {
  std::vector<std::string_view> lines = text::split(content, '\n');
  WeightedGraph g;
  long long declared_m = -1;
  std::unordered_set<long long> seen;
  bool header_done = false;
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = text::trim(lines[ln]);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> tok = text::split_ws(line);
    std::string where = "graph line " + std::to_string(ln + 1);
    if (!header_done) {
      if (tok.size() != 3 || tok[0] != "GRAPH")
        throw std::runtime_error(where + ": expected GRAPH n=<int> m=<int>");
      std::string_view val;
      if (!text::consume_key(tok[1], "n", val))
        throw std::runtime_error(where + ": expected n=<int>");
      g.n = static_cast<int>(text::parse_int(val));
      if (!text::consume_key(tok[2], "m", val))
        throw std::runtime_error(where + ": expected m=<int>");
      declared_m = text::parse_int(val);
      if (g.n < 0 || declared_m < 0)
        throw std::runtime_error(where + ": negative sizes");
      header_done = true;
      continue;
    }
    if (tok.size() != 4 || tok[0] != "E")
      throw std::runtime_error(where + ": expected E <u> <v> <w>");
    Edge e;
    e.u = static_cast<int>(text::parse_int(tok[1]));
    e.v = static_cast<int>(text::parse_int(tok[2]));
    e.w = text::parse_double(tok[3]);
    if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n || e.u == e.v)
      throw std::runtime_error(where + ": edge endpoints out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!std::isfinite(e.w) || e.w < 0)
      throw std::runtime_error(where + ": weight must be finite and >= 0");
    long long key = static_cast<long long>(e.u) * g.n + e.v;
    if (!seen.insert(key).second)
      throw std::runtime_error(where + ": duplicate edge");
    g.edges.push_back(e);
  }
  if (!header_done) throw std::runtime_error("graph: missing GRAPH header");
  if (declared_m != static_cast<long long>(g.edges.size()))
    throw std::runtime_error("graph: edge count does not match header");
  return g;
}

WeightedGraph load_graph(const std::string& path) {
  return graph_from_string(text::read_file(path));
}

void save_graph(const WeightedGraph& graph, const std::string& path) {
  text::write_file(path, graph_to_string(graph));
}

}  // namespace klsat
