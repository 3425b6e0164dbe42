#include "klsat/instance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "klsat/text.hpp"

namespace klsat {

namespace {

int constraint_count(double c, int n) {
  if (c < 0) throw std::invalid_argument("generate_instance: c must be >= 0");
  // The + 1e-9 guard keeps values like 0.4 * 10 (stored as 3.9999...) from
  // flooring to the wrong count.
  return static_cast<int>(std::floor(c * n + 1e-9));
}

ConstraintInstance draw_constraint(const Pool& pool, int n, bool replacement,
                                   Rng& topology, Rng& templates, Rng& weights) {
  ConstraintInstance con;
  con.vars.resize(pool.k);
  for (;;) {
    bool repeat = false;
    for (int k = 0; k < pool.k; ++k) {
      con.vars[k] = static_cast<int>(topology.below(static_cast<std::uint64_t>(n)));
      if (!replacement)
        for (int j = 0; j < k; ++j)
          if (con.vars[j] == con.vars[k]) repeat = true;
    }
    if (replacement || !repeat) break;
  }
  con.template_index =
      static_cast<int>(templates.below(pool.templates.size()));
  con.weight = pool.weight_dist.sample(weights);
  return con;
}

}  // namespace

Instance generate_instance(const Pool& pool, int n, double c,
                           std::uint64_t seed, bool replacement) {
  validate_pool(pool);
  if (n < pool.k && !replacement)
    throw std::invalid_argument("generate_instance: n < K without replacement");
  if (n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
  Instance inst;
  inst.pool = pool;
  inst.n = n;
  inst.c = c;
  inst.seed = seed;
  inst.replacement = replacement;
  int m = constraint_count(c, n);
  auto topology = substream(seed, Stream::topology);
  auto templates = substream(seed, Stream::template_choice);
  auto weights = substream(seed, Stream::weights);
  inst.constraints.reserve(m);
  for (int j = 0; j < m; ++j)
    inst.constraints.push_back(
        draw_constraint(pool, n, replacement, topology, templates, weights));
  return inst;
}

Instance extend_instance(const Instance& base, double c2) {
  int m2 = constraint_count(c2, base.n);
  if (m2 < base.m())
    throw std::invalid_argument("extend_instance: target density below current");
  Instance inst = base;
  inst.c = c2;
  // Replay the generator streams past the constraints already present.
  auto topology = substream(base.seed, Stream::topology);
  auto templates = substream(base.seed, Stream::template_choice);
  auto weights = substream(base.seed, Stream::weights);
  for (int j = 0; j < m2; ++j) {
    auto con = draw_constraint(base.pool, base.n, base.replacement, topology,
                               templates, weights);
    if (j >= base.m()) inst.constraints.push_back(std::move(con));
  }
  return inst;
}

Neighborhood neighborhood(const Instance& instance, int root, int d) {
  if (root < 0 || root >= instance.n)
    throw std::invalid_argument("neighborhood: root out of range");
  if (d < 0) throw std::invalid_argument("neighborhood: d must be >= 0");
  Neighborhood nb;
  nb.root = root;
  nb.depth = d;
  nb.variables = {root};
  if (d == 0) return nb;

  // Adjacency: variable -> incident constraint indices.
  std::vector<std::vector<int>> incident(instance.n);
  for (int j = 0; j < instance.m(); ++j)
    for (int v : instance.constraints[j].vars) incident[v].push_back(j);

  std::vector<char> var_in(instance.n, 0), con_seen(instance.m(), 0);
  var_in[root] = 1;
  std::vector<int> frontier = {root};
  for (int round = 0; round < d && !frontier.empty(); ++round) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int j : incident[v]) {
        if (con_seen[j]) continue;
        con_seen[j] = 1;
        for (int u : instance.constraints[j].vars) {
          if (!var_in[u]) {
            var_in[u] = 1;
            next.push_back(u);
          }
        }
      }
    }
    frontier = std::move(next);
  }

  nb.variables.clear();
  for (int v = 0; v < instance.n; ++v)
    if (var_in[v]) nb.variables.push_back(v);
  long long edge_count = 0;
  for (int j = 0; j < instance.m(); ++j) {
    bool inside = true;
    for (int v : instance.constraints[j].vars)
      if (!var_in[v]) inside = false;
    if (inside && !instance.constraints[j].vars.empty()) {
      nb.constraints.push_back(j);
      edge_count += static_cast<long long>(instance.constraints[j].vars.size());
    }
  }
  // The induced bipartite graph is connected (every kept variable was
  // reached from the root), so it is a tree exactly when
  // #edges = #vertices - 1. Repeated variables inside one constraint count
  // as parallel edges, i.e. cycles.
  long long vertices = static_cast<long long>(nb.variables.size()) +
                       static_cast<long long>(nb.constraints.size());
  nb.is_tree = (edge_count == vertices - 1);
  return nb;
}

namespace {

// Distinct shared variables along a candidate cycle: consecutive
// constraints must be linked by variables that can all be chosen distinct
// (a system of distinct representatives over the shared-variable sets).
bool has_distinct_links(const std::vector<std::vector<int>>& shared) {
  size_t r = shared.size();
  std::vector<int> chosen;
  std::vector<size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return shared[a].size() < shared[b].size();
  });
  std::function<bool(size_t)> assign = [&](size_t pos) -> bool {
    if (pos == r) return true;
    for (int v : shared[order[pos]]) {
      if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
      chosen.push_back(v);
      if (assign(pos + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return assign(0);
}

std::vector<int> shared_vars(const ConstraintInstance& a,
                             const ConstraintInstance& b) {
  std::vector<int> out;
  for (int v : a.vars)
    if (std::find(b.vars.begin(), b.vars.end(), v) != b.vars.end() &&
        std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  return out;
}

}  // namespace

std::map<int, long long> cycle_census(const Instance& instance, int r_max) {
  if (r_max < 2) throw std::invalid_argument("cycle_census: r_max must be >= 2");
  std::map<int, long long> counts;
  for (int r = 2; r <= r_max; ++r) counts[r] = 0;
  int m = instance.m();

  // Constraint adjacency (sharing at least one variable).
  std::vector<std::vector<int>> incident(instance.n);
  for (int j = 0; j < m; ++j) {
    std::set<int> uniq(instance.constraints[j].vars.begin(),
                       instance.constraints[j].vars.end());
    for (int v : uniq) incident[v].push_back(j);
  }
  std::vector<std::set<int>> adj(m);
  for (int v = 0; v < instance.n; ++v)
    for (size_t a = 0; a < incident[v].size(); ++a)
      for (size_t b = a + 1; b < incident[v].size(); ++b) {
        adj[incident[v][a]].insert(incident[v][b]);
        adj[incident[v][b]].insert(incident[v][a]);
      }

  // Length 2: an unordered pair sharing two distinct variables.
  for (int a = 0; a < m; ++a)
    for (int b : adj[a]) {
      if (b <= a) continue;
      if (shared_vars(instance.constraints[a], instance.constraints[b]).size() >= 2)
        ++counts[2];
    }

  // Lengths >= 3: DFS over constraint paths with canonical start = minimum
  // index and second < last for reflection normalization, then an SDR
  // check so every step can use its own variable.
  std::vector<int> path;
  std::vector<char> on_path(m, 0);
  std::function<void(int, int)> extend = [&](int start, int depth) {
    int cur = path.back();
    for (int nxt : adj[cur]) {
      if (nxt == start && depth >= 3) {
        if (path[1] > path.back()) continue;  // reflection: count one direction
        std::vector<std::vector<int>> links;
        bool ok = true;
        for (size_t i = 0; i < path.size() && ok; ++i) {
          auto s = shared_vars(instance.constraints[path[i]],
                               instance.constraints[path[(i + 1) % path.size()]]);
          if (s.empty()) ok = false;
          links.push_back(std::move(s));
        }
        if (ok && has_distinct_links(links)) ++counts[depth];
      }
      if (depth >= r_max) continue;
      if (nxt <= start || on_path[nxt]) continue;
      on_path[nxt] = 1;
      path.push_back(nxt);
      extend(start, depth + 1);
      path.pop_back();
      on_path[nxt] = 0;
    }
  };
  if (r_max >= 3) {
    for (int s = 0; s < m; ++s) {
      path = {s};
      on_path[s] = 1;
      extend(s, 1);
      on_path[s] = 0;
    }
  }
  return counts;
}

std::map<int, double> degree_histogram(const Instance& instance) {
  std::vector<long long> degree(instance.n, 0);
  for (const auto& con : instance.constraints)
    for (int v : con.vars) ++degree[v];
  std::map<int, double> hist;
  for (int v = 0; v < instance.n; ++v)
    hist[static_cast<int>(degree[v])] += 1.0 / instance.n;
  return hist;
}

std::string instance_to_string(const Instance& instance) {
  std::ostringstream out;
  out << "KLSAT n=" << instance.n << " m=" << instance.m()
      << " K=" << instance.pool.k << " seed=" << instance.seed << "\n";
  for (const auto& con : instance.constraints) {
    out << "C " << con.template_index;
    for (int v : con.vars) out << " " << v;
    out << " " << text::fmt_double17(con.weight) << "\n";
  }
  return out.str();
}

Instance instance_from_string(std::string_view content, const Pool& pool) {
  validate_pool(pool);
  Instance inst;
  inst.pool = pool;
  bool saw_header = false;
  int lineno = 0, expected_m = 0;
  for (auto raw : text::split(content, '\n')) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto tokens = text::split_ws(line);
    if (!saw_header) {
      if (tokens[0] != "KLSAT")
        throw std::invalid_argument("instance file: line " + std::to_string(lineno) +
                                    ": expected KLSAT header");
      for (size_t i = 1; i < tokens.size(); ++i) {
        std::string_view v;
        if (text::consume_key(tokens[i], "n", v))
          inst.n = static_cast<int>(text::parse_int(v));
        else if (text::consume_key(tokens[i], "m", v))
          expected_m = static_cast<int>(text::parse_int(v));
        else if (text::consume_key(tokens[i], "K", v)) {
          if (text::parse_int(v) != pool.k)
            throw std::invalid_argument("instance file: K does not match the pool");
        } else if (text::consume_key(tokens[i], "seed", v))
          inst.seed = text::parse_u64(v);
        else
          throw std::invalid_argument("instance file: unknown header token '" +
                                      std::string(tokens[i]) + "'");
      }
      saw_header = true;
      continue;
    }
    if (tokens[0] != "C")
      throw std::invalid_argument("instance file: line " + std::to_string(lineno) +
                                  ": expected C line");
    if (static_cast<int>(tokens.size()) != pool.k + 3)
      throw std::invalid_argument("instance file: line " + std::to_string(lineno) +
                                  ": expected template, K variables and weight");
    ConstraintInstance con;
    con.template_index = static_cast<int>(text::parse_int(tokens[1]));
    if (con.template_index < 0 ||
        con.template_index >= static_cast<int>(pool.templates.size()))
      throw std::invalid_argument("instance file: line " + std::to_string(lineno) +
                                  ": template index out of range");
    for (int k = 0; k < pool.k; ++k) {
      int v = static_cast<int>(text::parse_int(tokens[2 + k]));
      if (v < 0 || v >= inst.n)
        throw std::invalid_argument("instance file: line " + std::to_string(lineno) +
                                    ": variable index out of range");
      con.vars.push_back(v);
    }
    con.weight = text::parse_double(tokens[pool.k + 2]);
    inst.constraints.push_back(std::move(con));
  }
  if (!saw_header) throw std::invalid_argument("instance file: missing KLSAT header");
  if (inst.m() != expected_m)
    throw std::invalid_argument("instance file: m in header does not match body");
  if (inst.n > 0) inst.c = static_cast<double>(inst.m()) / inst.n;
  return inst;
}

Instance load_instance(const std::string& path, const Pool& pool) {
  return instance_from_string(text::read_file(path), pool);
}

void save_instance(const Instance& instance, const std::string& path) {
  text::write_file(path, instance_to_string(instance));
}

}  // namespace klsat
