#include "klsat/pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "klsat/text.hpp"

namespace klsat {

namespace {

constexpr double kEps = 1e-12;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

WeightDistSpec WeightDistSpec::constant(double v) {
  if (!finite(v)) throw std::invalid_argument("weight dist: constant value not finite");
  WeightDistSpec d;
  d.kind_ = Kind::constant;
  d.a_ = v;
  d.b_w_ = std::abs(v);
  return d;
}

WeightDistSpec WeightDistSpec::uniform(double lo, double hi) {
  if (!finite(lo) || !finite(hi) || lo > hi)
    throw std::invalid_argument("weight dist: bad uniform range");
  WeightDistSpec d;
  d.kind_ = Kind::uniform;
  d.a_ = lo;
  d.b_ = hi;
  d.b_w_ = std::max(std::abs(lo), std::abs(hi));
  return d;
}

WeightDistSpec WeightDistSpec::discrete(std::vector<double> values,
                                        std::vector<double> probabilities) {
  if (values.empty() || values.size() != probabilities.size())
    throw std::invalid_argument("weight dist: discrete needs matching nonempty value/probability lists");
  double sum = 0, bound = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!finite(values[i]) || !finite(probabilities[i]) || probabilities[i] < 0)
      throw std::invalid_argument("weight dist: bad discrete entry");
    sum += probabilities[i];
    bound = std::max(bound, std::abs(values[i]));
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("weight dist: discrete probabilities must sum to 1 within 1e-12");
  WeightDistSpec d;
  d.kind_ = Kind::discrete;
  d.values_ = std::move(values);
  d.probs_ = std::move(probabilities);
  d.b_w_ = bound;
  return d;
}

double WeightDistSpec::min_support() const {
  switch (kind_) {
    case Kind::constant: return a_;
    case Kind::uniform: return a_;
    case Kind::discrete: return *std::min_element(values_.begin(), values_.end());
  }
  return 0;
}

double WeightDistSpec::max_support() const {
  switch (kind_) {
    case Kind::constant: return a_;
    case Kind::uniform: return b_;
    case Kind::discrete: return *std::max_element(values_.begin(), values_.end());
  }
  return 0;
}

double WeightDistSpec::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::constant:
      return a_;
    case Kind::uniform:
      return a_ + (b_ - a_) * rng.unit();
    case Kind::discrete: {
      double u = rng.unit();
      double acc = 0;
      for (size_t i = 0; i + 1 < values_.size(); ++i) {
        acc += probs_[i];
        if (u < acc) return values_[i];
      }
      return values_.back();
    }
  }
  return 0;
}

std::string WeightDistSpec::spec_string() const {
  using text::fmt_double;
  switch (kind_) {
    case Kind::constant:
      return "constant(" + fmt_double(a_) + ")";
    case Kind::uniform:
      return "uniform(" + fmt_double(a_) + "," + fmt_double(b_) + ")";
    case Kind::discrete: {
      std::string out = "discrete(";
      for (size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(values_[i]) + ":" + fmt_double(probs_[i]);
      }
      return out + ")";
    }
  }
  return {};
}

WeightDistSpec WeightDistSpec::parse(std::string_view spec) {
  auto s = text::trim(spec);
  auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')')
    throw std::invalid_argument("weight dist: expected kind(args), got '" + std::string(s) + "'");
  auto kind = s.substr(0, open);
  auto args = s.substr(open + 1, s.size() - open - 2);
  if (kind == "constant") {
    return constant(text::parse_double(args));
  }
  if (kind == "uniform") {
    auto parts = text::split(args, ',');
    if (parts.size() != 2) throw std::invalid_argument("weight dist: uniform needs lo,hi");
    return uniform(text::parse_double(text::trim(parts[0])),
                   text::parse_double(text::trim(parts[1])));
  }
  if (kind == "discrete") {
    std::vector<double> vals, probs;
    for (auto part : text::split(args, ',')) {
      auto vp = text::split(text::trim(part), ':');
      if (vp.size() != 2) throw std::invalid_argument("weight dist: discrete entries are value:prob");
      vals.push_back(text::parse_double(text::trim(vp[0])));
      probs.push_back(text::parse_double(text::trim(vp[1])));
    }
    return discrete(std::move(vals), std::move(probs));
  }
  throw std::invalid_argument("weight dist: unknown kind '" + std::string(kind) + "'");
}

void validate_pool(const Pool& pool) {
  if (pool.k < 1) throw std::invalid_argument("pool: K must be >= 1");
  if (pool.templates.empty()) throw std::invalid_argument("pool: needs at least one template");
  if (!finite(pool.box_lo) || !finite(pool.box_hi) || !(pool.box_lo < pool.box_hi))
    throw std::invalid_argument("pool: box_lo must be < box_hi and finite");
  if (!finite(pool.w_x) || pool.w_x < 0) throw std::invalid_argument("pool: w_x must be >= 0");
  if (!finite(pool.w_psi) || pool.w_psi <= 0) throw std::invalid_argument("pool: w_psi must be > 0");
  for (size_t r = 0; r < pool.templates.size(); ++r) {
    const auto& t = pool.templates[r];
    if (static_cast<int>(t.coefficients.size()) != pool.k)
      throw std::invalid_argument("pool: template " + std::to_string(r) + " has wrong coefficient count");
    if (!finite(t.rhs)) throw std::invalid_argument("pool: template rhs not finite");
    for (double a : t.coefficients)
      if (!finite(a)) throw std::invalid_argument("pool: template coefficient not finite");
  }
}

double box_min_partial(const ConstraintTemplate& t, int fixed_index,
                       double fixed_value, const Pool& pool) {
  int k = static_cast<int>(t.coefficients.size());
  if (fixed_index < 0 || fixed_index >= k)
    throw std::invalid_argument("box_min_partial: coordinate index out of range");
  if (fixed_value < pool.box_lo - kEps || fixed_value > pool.box_hi + kEps)
    throw std::invalid_argument("box_min_partial: fixed value outside the box");
  double sum = t.coefficients[fixed_index] * fixed_value;
  for (int j = 0; j < k; ++j) {
    if (j == fixed_index) continue;
    double a = t.coefficients[j];
    sum += std::min(a * pool.box_lo, a * pool.box_hi);
  }
  return sum;
}

ConditionAResult check_condition_a(const Pool& pool) {
  validate_pool(pool);
  for (int r = 0; r < static_cast<int>(pool.templates.size()); ++r) {
    for (int k = 0; k < pool.k; ++k) {
      for (double z : {pool.box_lo, pool.box_hi}) {
        if (box_min_partial(pool.templates[r], k, z, pool) > pool.templates[r].rhs + kEps)
          return {false, ConditionAWitness{r, k, z}};
      }
    }
  }
  return {true, std::nullopt};
}

ConditionBResult check_condition_b(const Pool& pool, int l, double nu) {
  validate_pool(pool);
  if (l < 1) throw std::invalid_argument("check_condition_b: l must be >= 1");
  if (!(nu > 0)) throw std::invalid_argument("check_condition_b: nu must be > 0");
  double cells_real = l * (pool.box_hi - pool.box_lo);
  auto cells = static_cast<long long>(std::llround(cells_real));
  if (cells < 1 || std::abs(cells_real - static_cast<double>(cells)) > 1e-9)
    throw std::invalid_argument("check_condition_b: l*(box_hi-box_lo) must be an integer");
  double total = std::pow(static_cast<double>(cells), pool.k);
  if (total > 2e7)
    throw std::invalid_argument("check_condition_b: cube grid too large to enumerate");

  std::vector<int> idx(pool.k, 0);
  double side = 1.0 / l;
  while (true) {
    bool cube_ok = false;
    for (const auto& t : pool.templates) {
      double lhs_min = 0;
      for (int k = 0; k < pool.k; ++k) {
        double lo = pool.box_lo + idx[k] * side;
        double hi = lo + side;
        double a = t.coefficients[k];
        lhs_min += std::min(a * lo, a * hi);
      }
      if (lhs_min - t.rhs >= nu - kEps) {
        cube_ok = true;
        break;
      }
    }
    if (!cube_ok) return {false, idx};
    int k = pool.k - 1;
    while (k >= 0 && idx[k] == cells - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return {true, std::nullopt};
}

double b_psi(const Pool& pool) {
  validate_pool(pool);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& t : pool.templates) {
    double lhs_max = 0;
    for (double a : t.coefficients)
      lhs_max += std::max(a * pool.box_lo, a * pool.box_hi);
    worst = std::max(worst, lhs_max - t.rhs);
  }
  return std::max(0.0, worst + pool.weight_dist.support_bound());
}

double b_psi_printed(const Pool& pool) {
  validate_pool(pool);
  double worst = -std::numeric_limits<double>::infinity();
  double box = std::abs(pool.box_lo) + std::abs(pool.box_hi);
  for (const auto& t : pool.templates) {
    double sum_abs = 0;
    for (double a : t.coefficients) sum_abs += std::abs(a);
    worst = std::max(worst, box * pool.k * sum_abs + std::abs(t.rhs));
  }
  return worst;
}

Pool cube_cover_pool() {
  Pool pool;
  pool.k = 3;
  pool.box_lo = 0;
  pool.box_hi = 1;
  pool.w_x = 0;
  pool.w_psi = 1;
  pool.weight_dist = WeightDistSpec::constant(0);
  for (int mask = 0; mask < 8; ++mask) {
    ConstraintTemplate t;
    int bits = 0;
    for (int k = 0; k < 3; ++k) {
      bool flipped = (mask >> k) & 1;
      t.coefficients.push_back(flipped ? 1.0 : -1.0);
      bits += flipped ? 1 : 0;
    }
    t.rhs = bits - 7.0 / 4.0;
    pool.templates.push_back(std::move(t));
  }
  return pool;
}

std::string pool_to_string(const Pool& pool) {
  validate_pool(pool);
  using text::fmt_double;
  std::ostringstream out;
  out << "POOL K=" << pool.k << " BOX=" << fmt_double(pool.box_lo) << ","
      << fmt_double(pool.box_hi) << " WX=" << fmt_double(pool.w_x)
      << " WPSI=" << fmt_double(pool.w_psi)
      << " WDIST=" << pool.weight_dist.spec_string() << "\n";
  for (const auto& t : pool.templates) {
    out << "T";
    for (double a : t.coefficients) out << " " << fmt_double(a);
    out << " " << fmt_double(t.rhs) << "\n";
  }
  return out.str();
}

Pool pool_from_string(std::string_view content) {
  Pool pool;
  pool.templates.clear();
  bool saw_header = false;
  int lineno = 0;
  for (auto raw : text::split(content, '\n')) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto tokens = text::split_ws(line);
    if (!saw_header) {
      if (tokens[0] != "POOL")
        throw std::invalid_argument("pool file: line " + std::to_string(lineno) + ": expected POOL header");
      bool has_k = false, has_box = false;
      for (size_t i = 1; i < tokens.size(); ++i) {
        std::string_view v;
        if (text::consume_key(tokens[i], "K", v)) {
          pool.k = static_cast<int>(text::parse_int(v));
          has_k = true;
        } else if (text::consume_key(tokens[i], "BOX", v)) {
          auto parts = text::split(v, ',');
          if (parts.size() != 2)
            throw std::invalid_argument("pool file: BOX needs lo,hi");
          pool.box_lo = text::parse_double(parts[0]);
          pool.box_hi = text::parse_double(parts[1]);
          has_box = true;
        } else if (text::consume_key(tokens[i], "WX", v)) {
          pool.w_x = text::parse_double(v);
        } else if (text::consume_key(tokens[i], "WPSI", v)) {
          pool.w_psi = text::parse_double(v);
        } else if (text::consume_key(tokens[i], "WDIST", v)) {
          pool.weight_dist = WeightDistSpec::parse(v);
        } else {
          throw std::invalid_argument("pool file: unknown header token '" + std::string(tokens[i]) + "'");
        }
      }
      if (!has_k || !has_box)
        throw std::invalid_argument("pool file: header must set K and BOX");
      saw_header = true;
      continue;
    }
    if (tokens[0] != "T")
      throw std::invalid_argument("pool file: line " + std::to_string(lineno) + ": expected T line");
    if (static_cast<int>(tokens.size()) != pool.k + 2)
      throw std::invalid_argument("pool file: line " + std::to_string(lineno) + ": expected K coefficients and rhs");
    ConstraintTemplate t;
    for (int k = 0; k < pool.k; ++k)
      t.coefficients.push_back(text::parse_double(tokens[1 + k]));
    t.rhs = text::parse_double(tokens[pool.k + 1]);
    pool.templates.push_back(std::move(t));
  }
  if (!saw_header) throw std::invalid_argument("pool file: missing POOL header");
  validate_pool(pool);
  return pool;
}

Pool load_pool(const std::string& path) { return pool_from_string(text::read_file(path)); }

void save_pool(const Pool& pool, const std::string& path) {
  text::write_file(path, pool_to_string(pool));
}

}  // namespace klsat
