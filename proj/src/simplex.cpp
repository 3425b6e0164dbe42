#include "klsat/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace klsat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// KLSAT_LP_DEBUG=1 traces the failure paths to stderr.
bool lp_debug() {
  static const bool on = [] {
    const char* v = std::getenv("KLSAT_LP_DEBUG");
    return v != nullptr && v[0] != '\0' && v[0] != '0';
  }();
  return on;
}

void lp_trace(const char* what, long long a = -1, long long b = -1) {
  if (!lp_debug()) return;
  std::fprintf(stderr, "lp: %s", what);
  if (a >= 0) std::fprintf(stderr, " %lld", a);
  if (b >= 0) std::fprintf(stderr, " %lld", b);
  std::fprintf(stderr, "\n");
}

// Internal signal: the factorization or a pivot went numerically bad in a
// way a rebuild could not cure. Converted to SolveStatus::numerical_failure
// at the solve() boundary.
struct NumericalTrouble {};

enum class VarState : unsigned char { at_lower, at_upper, basic };

// Pricing scores in blocks with lazily maintained block maxima: updates
// only raise a block's bound, argmax rescans just the blocks whose bound
// beats the best so far and tightens them. Deterministic: returns the
// lowest index among the maxima.
class PriceIndex {
 public:
  static constexpr int kBlock = 4096;

  void reset(int n) {
    n_ = n;
    score_.assign(static_cast<size_t>(n), 0.0);
    ub_.assign(static_cast<size_t>((n + kBlock - 1) / kBlock), 0.0);
  }

  void set(int j, double s) {
    score_[j] = s;
    double& u = ub_[j / kBlock];
    if (s > u) u = s;
  }

  double get(int j) const { return score_[j]; }

  int argmax() {
    double best = 0;
    int best_j = -1;
    int nblocks = static_cast<int>(ub_.size());
    for (int b = 0; b < nblocks; ++b) {
      if (ub_[b] <= best) continue;
      int lo = b * kBlock, hi = std::min(n_, lo + kBlock);
      double mx = 0;
      int mj = -1;
      for (int j = lo; j < hi; ++j)
        if (score_[j] > mx) {
          mx = score_[j];
          mj = j;
        }
      ub_[b] = mx;
      if (mx > best) {
        best = mx;
        best_j = mj;
      }
    }
    return best_j;
  }

 private:
  int n_ = 0;
  std::vector<double> score_;
  std::vector<double> ub_;
};

// Sparse accumulator: dense values plus a touched list for O(support)
// clearing.
struct SparseAcc {
  std::vector<double> val;
  std::vector<int> touched;
  std::vector<char> mark;

  void resize(int n) {
    val.assign(static_cast<size_t>(n), 0.0);
    mark.assign(static_cast<size_t>(n), 0);
    touched.clear();
    touched.reserve(64);
  }
  void clear() {
    for (int i : touched) {
      val[i] = 0;
      mark[i] = 0;
    }
    touched.clear();
  }
  void add(int i, double v) {
    if (!mark[i]) {
      mark[i] = 1;
      touched.push_back(i);
    }
    val[i] += v;
  }
  void set(int i, double v) {
    if (!mark[i]) {
      mark[i] = 1;
      touched.push_back(i);
    }
    val[i] = v;
  }
};

// Sparse LU of the square core with Markowitz-style ordering: each step
// pivots in a lowest-count column, picking among its entries within a
// magnitude threshold of the column's largest the one lying in the
// shortest row. Row and column indices are core positions. solve() maps a
// right-hand side indexed by rows to a solution indexed by columns;
// solve_t() is the transpose map. factor() consumes the row lists it is
// given.
class SparseLu {
 public:
  bool factor(int k, std::vector<std::vector<std::pair<int, double>>>& rows) {
    k_ = k;
    steps_.clear();
    lent_.clear();
    uent_.clear();
    tmp_.assign(k, 0.0);
    if (k == 0) return true;
    steps_.reserve(k);
    rowcnt_.assign(k, 0);
    colcnt_.assign(k, 0);
    row_alive_.assign(k, 1);
    col_alive_.assign(k, 1);
    seen_.assign(k, 0);
    spa_val_.assign(k, 0.0);
    spa_in_.assign(k, 0);
    colrows_.resize(k);
    for (auto& cr : colrows_) cr.clear();
    buckets_.resize(k + 1);
    for (auto& b : buckets_) b.clear();
    for (int i = 0; i < k; ++i) {
      rowcnt_[i] = static_cast<int>(rows[i].size());
      for (auto [c, v] : rows[i]) {
        (void)v;
        ++colcnt_[c];
        colrows_[c].push_back(i);
      }
    }
    for (int c = 0; c < k; ++c) buckets_[colcnt_[c]].push_back(c);
    bucket_at_ = 0;
    for (int step = 0; step < k; ++step) {
      int pc = -1;
      for (;;) {
        while (bucket_at_ <= k && buckets_[bucket_at_].empty()) ++bucket_at_;
        if (bucket_at_ > k) return false;
        int c = buckets_[bucket_at_].back();
        buckets_[bucket_at_].pop_back();
        if (!col_alive_[c] || colcnt_[c] != bucket_at_) continue;
        if (bucket_at_ == 0) return false;  // alive column with no entries
        pc = c;
        break;
      }
      // Gather the alive entries of the pivot column (the lazy row list
      // may hold dead rows, duplicates, and rows whose entry cancelled).
      gather_.clear();
      double colmax = 0;
      {
        auto& cr = colrows_[pc];
        size_t keep = 0;
        for (int i : cr) {
          if (!row_alive_[i] || seen_[i]) continue;
          seen_[i] = 1;
          cr[keep++] = i;
        }
        cr.resize(keep);
        for (int i : cr) seen_[i] = 0;
        for (int i : cr)
          for (auto [c, v] : rows[i])
            if (c == pc) {
              gather_.emplace_back(i, v);
              colmax = std::max(colmax, std::abs(v));
              break;
            }
      }
      if (colmax < 1e-11) return false;
      int prow = -1;
      double pval = 0;
      for (auto [i, v] : gather_) {
        if (std::abs(v) < 0.1 * colmax) continue;
        if (prow < 0 || rowcnt_[i] < rowcnt_[prow] ||
            (rowcnt_[i] == rowcnt_[prow] && i < prow)) {
          prow = i;
          pval = v;
        }
      }
      Step st;
      st.row = prow;
      st.col = pc;
      st.piv = pval;
      st.ubeg = static_cast<int>(uent_.size());
      for (auto [c, v] : rows[prow])
        if (c != pc) uent_.emplace_back(c, v);
      st.uend = static_cast<int>(uent_.size());
      row_alive_[prow] = 0;
      col_alive_[pc] = 0;
      for (auto [c, v] : rows[prow]) {
        (void)v;
        if (c != pc) bump_col(c, -1);
      }
      st.lbeg = static_cast<int>(lent_.size());
      for (auto [i, aic] : gather_) {
        if (i == prow) continue;
        double m = aic / pval;
        lent_.emplace_back(i, m);
        // rows[i] -= m * pivot row, dropping the pivot column.
        auto& ri = rows[i];
        spa_touch_.clear();
        for (auto [c, v] : ri) {
          spa_val_[c] = v;
          spa_in_[c] = 1;
          spa_touch_.push_back(c);
        }
        for (int u = st.ubeg; u < st.uend; ++u) {
          auto [c, v] = uent_[u];
          if (spa_in_[c] == 0) {
            spa_in_[c] = 2;  // fill
            spa_val_[c] = 0;
            spa_touch_.push_back(c);
          }
          spa_val_[c] -= m * v;
        }
        ri.clear();
        for (int c : spa_touch_) {
          double v = spa_val_[c];
          char mode = spa_in_[c];
          spa_val_[c] = 0;
          spa_in_[c] = 0;
          if (c == pc) continue;
          if (v != 0) {
            ri.emplace_back(c, v);
            if (mode == 2) {
              colrows_[c].push_back(i);
              bump_col(c, +1);
            }
          } else if (mode == 1) {
            bump_col(c, -1);  // cancelled out
          }
        }
        rowcnt_[i] = static_cast<int>(ri.size());
      }
      st.lend = static_cast<int>(lent_.size());
      steps_.push_back(st);
    }
    return true;
  }

  void solve(double* x) const {
    if (k_ == 0) return;
    std::copy(x, x + k_, tmp_.begin());
    for (const Step& st : steps_) {
      double yp = tmp_[st.row];
      if (yp == 0) continue;
      for (int l = st.lbeg; l < st.lend; ++l)
        tmp_[lent_[l].first] -= lent_[l].second * yp;
    }
    for (int t = static_cast<int>(steps_.size()) - 1; t >= 0; --t) {
      const Step& st = steps_[t];
      double s = tmp_[st.row];
      for (int u = st.ubeg; u < st.uend; ++u)
        s -= uent_[u].second * x[uent_[u].first];
      x[st.col] = s / st.piv;
    }
  }

  void solve_t(double* x) const {
    if (k_ == 0) return;
    std::copy(x, x + k_, tmp_.begin());
    for (const Step& st : steps_) {
      double z = tmp_[st.col] / st.piv;
      x[st.row] = z;
      if (z == 0) continue;
      for (int u = st.ubeg; u < st.uend; ++u)
        tmp_[uent_[u].first] -= uent_[u].second * z;
    }
    for (int t = static_cast<int>(steps_.size()) - 1; t >= 0; --t) {
      const Step& st = steps_[t];
      double s = x[st.row];
      for (int l = st.lbeg; l < st.lend; ++l)
        s -= lent_[l].second * x[lent_[l].first];
      x[st.row] = s;
    }
  }

 private:
  struct Step {
    int row = 0, col = 0;
    double piv = 0;
    int lbeg = 0, lend = 0, ubeg = 0, uend = 0;
  };

  void bump_col(int c, int by) {
    if (!col_alive_[c]) return;
    colcnt_[c] += by;
    buckets_[colcnt_[c]].push_back(c);
    if (colcnt_[c] < bucket_at_) bucket_at_ = colcnt_[c];
  }

  int k_ = 0;
  int bucket_at_ = 0;
  std::vector<Step> steps_;
  std::vector<std::pair<int, double>> lent_, uent_;
  mutable std::vector<double> tmp_;
  // factorization scratch
  std::vector<int> rowcnt_, colcnt_;
  std::vector<char> row_alive_, col_alive_, seen_;
  std::vector<double> spa_val_;
  std::vector<char> spa_in_;
  std::vector<int> spa_touch_;
  std::vector<std::vector<int>> colrows_;
  std::vector<std::vector<int>> buckets_;
  std::vector<std::pair<int, double>> gather_;
};

struct Leave {
  int col = -1;
  int pos = -1;  // basis slot (row index) the candidate occupies
  double w = 0;  // FTRAN component at the leaving slot (the pivot)
  bool to_upper = false;
};

class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opts) : opt_(opts) { build(p); }

  LpResult solve(const BasisHint* hint) {
    LpResult res;
    try {
      bool have_basis = hint != nullptr && try_hint(*hint);
      if (!have_basis) cold_start();
      lp_trace(have_basis ? "start: hint basis" : "start: cold basis",
               art_count_, k_);
      if (budget_ == 0)
        budget_ = opt_.iteration_limit > 0
                      ? opt_.iteration_limit
                      : 20000 + 40LL * (nrows_ + ncol_);
      if (art_count_ > 0) {
        set_phase1_costs();
        if (opt_.perturb > 0)
          for (int a = 0; a < art_count_; ++a)
            cost_[nbase_ + a] +=
                opt_.perturb * (0.5 + 0.5 * unit_hash(a));
        refresh_duals();
        if (!loop_to_optimal()) return failure_result();
        double worst = 0;
        for (int a = 0; a < art_count_; ++a) {
          double scale = 1 + std::abs(rhs_[art_row_[a]]);
          worst = std::max(worst, xval_[nbase_ + a] / scale);
        }
        if (worst > opt_.feas_tol) {
          res.status = SolveStatus::infeasible_input;
          res.iterations = iter_;
          return res;
        }
        for (int a = 0; a < art_count_; ++a) {
          lower_[nbase_ + a] = 0;
          upper_[nbase_ + a] = 0;
        }
      }
      // Main pass runs on costs nudged apart by a deterministic relative
      // perturbation (ties among reduced costs are what make degenerate
      // stretches wander); a final pass on the exact costs removes its
      // effect before anything is reported.
      cost_ = real_cost_;
      bool perturbed = false;
      if (opt_.perturb > 0) {
        for (int j = 0; j < nbase_; ++j) {
          double xi = opt_.perturb * (1 + std::abs(cost_[j])) *
                      (0.5 + 0.5 * unit_hash(j));
          cost_[j] += state_[j] == VarState::at_upper ? -xi : xi;
        }
        perturbed = true;
      }
      refresh_duals();
      bland_ = false;
      degen_run_ = 0;
      if (!loop_to_optimal()) return failure_result();
      if (perturbed) {
        cost_ = real_cost_;
        refresh_duals();
        bland_ = false;
        degen_run_ = 0;
        if (!loop_to_optimal()) return failure_result();
      }
      lp_trace("solved: iters, rebuilds", iter_, rebuild_count_);
      lp_trace("  degen, bland", degen_pivots_, bland_pivots_);
      lp_trace("  flips, k", flip_count_, k_);
      return extract();
    } catch (const NumericalTrouble&) {
      return failure_result();
    }
  }

 private:
  // ---- problem data (minimize orientation) ----
  int nv_ = 0, nrows_ = 0, nbase_ = 0, ncol_ = 0;
  bool maximize_ = false;
  std::vector<double> lower_, upper_, real_cost_, cost_, xval_, d_;
  std::vector<VarState> state_;
  std::vector<double> rhs_;
  std::vector<int> col_ptr_, col_row_, row_ptr_, row_col_;
  std::vector<double> col_val_, row_val_;
  int art_count_ = 0;
  std::vector<int> art_row_;           // per artificial
  std::vector<double> art_sign_;       // per artificial
  std::vector<int> art_col_of_row_;    // per row, column id or -1
  std::vector<int> unital_row_;        // per column, row or -1
  std::vector<double> unital_sign_;

  // ---- basis ----
  // Frame, frozen at each refactorization: unital covers plus a sparse LU
  // of the uncovered-rows core. Basis changes since then live in the
  // product-form eta file. A slot is a row index; pos_col_[slot] is the
  // basic column currently occupying it.
  std::vector<int> covered_col_;       // per row
  std::vector<double> cov_sign_;       // per row
  std::vector<int> core_cols_, ur_rows_;
  std::vector<int> col_core_pos_, ur_pos_of_row_;
  int k_ = 0;
  SparseLu lu_;
  std::vector<std::vector<std::pair<int, double>>> lurows_;
  std::vector<int> pos_col_;
  struct Eta {
    int pos = 0;
    double piv = 0;
    int begin = 0, end = 0;  // range in eta_idx_/eta_val_, pivot excluded
  };
  std::vector<Eta> etas_;
  std::vector<int> eta_idx_;
  std::vector<double> eta_val_;

  // ---- scratch ----
  std::vector<double> wcore_;  // dense k-vector for LU right-hand sides
  double wdir_max_ = 0;    // max |entry| of the current FTRAN direction
  double trelax_min_ = 0;  // Harris relaxed minimum ratio
  SparseAcc wdir_;    // over slots (full FTRAN direction)
  SparseAcc alpha_;   // over rows (BTRAN)
  SparseAcc beta_;    // over columns
  SparseAcc racc_;    // over rows (general accumulation)
  std::vector<double> y_;
  std::vector<Leave> cands_;
  std::vector<double> tvals_;
  std::vector<double> vec_a_;

  // ---- control ----
  static constexpr int kEtaMax = 64;  // eta file length between rebuilds
  PriceIndex price_;
  bool bland_ = false;
  int degen_run_ = 0;
  int trouble_run_ = 0;
  long long iter_ = 0, budget_ = 0;
  long long gupdates_since_rebuild_ = 0;
  long long iters_since_refresh_ = 0;
  double drift_est_ = 0;   // accumulated inverse-error budget
  long long rebuild_count_ = 0;
  long long degen_pivots_ = 0, bland_pivots_ = 0, flip_count_ = 0;
  LpOptions opt_;

  // Deterministic uniform in [0, 1) from an index (SplitMix64 finalizer).
  static double unit_hash(int j) {
    uint64_t z =
        static_cast<uint64_t>(j) * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  template <class F>
  void for_col(int j, F&& f) const {
    if (j < nbase_) {
      for (int idx = col_ptr_[j]; idx < col_ptr_[j + 1]; ++idx)
        f(col_row_[idx], col_val_[idx]);
    } else {
      f(art_row_[j - nbase_], art_sign_[j - nbase_]);
    }
  }

  template <class F>
  void for_row(int r, F&& f) const {
    for (int idx = row_ptr_[r]; idx < row_ptr_[r + 1]; ++idx)
      f(row_col_[idx], row_val_[idx]);
    int a = art_col_of_row_[r];
    if (a >= 0) f(a, art_sign_[a - nbase_]);
  }

  static void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string("lp: non-finite ") + what);
  }

  void build(const LpProblem& p) {
    nv_ = p.num_vars;
    nrows_ = static_cast<int>(p.rows.size());
    nbase_ = nv_ + nrows_;
    ncol_ = nbase_;
    maximize_ = p.maximize;
    if (static_cast<int>(p.lower.size()) != nv_ ||
        static_cast<int>(p.upper.size()) != nv_ ||
        static_cast<int>(p.objective.size()) != nv_)
      throw std::invalid_argument("lp: bounds/objective size mismatch");

    lower_.assign(nbase_, 0);
    upper_.assign(nbase_, 0);
    real_cost_.assign(nbase_, 0);
    for (int j = 0; j < nv_; ++j) {
      double lo = p.lower[j], up = p.upper[j];
      if (std::isnan(lo) || std::isnan(up) || lo > up)
        throw std::invalid_argument("lp: empty or invalid variable box");
      if (lo == -kInf && up == kInf)
        throw std::invalid_argument("lp: free variables unsupported");
      lower_[j] = lo;
      upper_[j] = up;
      check_finite(p.objective[j], "objective");
      real_cost_[j] = maximize_ ? -p.objective[j] : p.objective[j];
    }

    rhs_.resize(nrows_);
    row_ptr_.assign(nrows_ + 1, 0);
    std::map<int, double> merged;
    std::vector<std::vector<std::pair<int, double>>> rows(nrows_);
    for (int r = 0; r < nrows_; ++r) {
      const LpRow& row = p.rows[r];
      check_finite(row.rhs, "rhs");
      rhs_[r] = row.rhs;
      merged.clear();
      for (auto [col, a] : row.coeffs) {
        if (col < 0 || col >= nv_)
          throw std::invalid_argument("lp: row coefficient column out of range");
        check_finite(a, "coefficient");
        merged[col] += a;
      }
      auto& out = rows[r];
      for (auto [col, a] : merged)
        if (a != 0) out.emplace_back(col, a);
      int s = nv_ + r;
      out.emplace_back(s, 1.0);  // slack
      switch (row.sense) {
        case RowSense::le:
          lower_[s] = 0;
          upper_[s] = kInf;
          break;
        case RowSense::ge:
          lower_[s] = -kInf;
          upper_[s] = 0;
          break;
        case RowSense::eq:
          lower_[s] = 0;
          upper_[s] = 0;
          break;
      }
    }

    // CSR then CSC.
    size_t nnz = 0;
    for (auto& row : rows) nnz += row.size();
    row_col_.resize(nnz);
    row_val_.resize(nnz);
    {
      size_t at = 0;
      for (int r = 0; r < nrows_; ++r) {
        row_ptr_[r] = static_cast<int>(at);
        for (auto [col, a] : rows[r]) {
          row_col_[at] = col;
          row_val_[at] = a;
          ++at;
        }
      }
      row_ptr_[nrows_] = static_cast<int>(at);
    }
    col_ptr_.assign(nbase_ + 1, 0);
    for (size_t idx = 0; idx < nnz; ++idx) ++col_ptr_[row_col_[idx] + 1];
    for (int j = 0; j < nbase_; ++j) col_ptr_[j + 1] += col_ptr_[j];
    col_row_.resize(nnz);
    col_val_.resize(nnz);
    {
      std::vector<int> at(col_ptr_.begin(), col_ptr_.end() - 1);
      for (int r = 0; r < nrows_; ++r)
        for (int idx = row_ptr_[r]; idx < row_ptr_[r + 1]; ++idx) {
          int j = row_col_[idx];
          col_row_[at[j]] = r;
          col_val_[at[j]] = row_val_[idx];
          ++at[j];
        }
    }

    unital_row_.assign(nbase_, -1);
    unital_sign_.assign(nbase_, 0);
    for (int j = 0; j < nbase_; ++j) {
      if (col_ptr_[j + 1] - col_ptr_[j] == 1) {
        double a = col_val_[col_ptr_[j]];
        if (a == 1.0 || a == -1.0) {
          unital_row_[j] = col_row_[col_ptr_[j]];
          unital_sign_[j] = a;
        }
      }
    }

    art_col_of_row_.assign(nrows_, -1);
    cost_ = real_cost_;
    state_.assign(nbase_, VarState::at_lower);
    xval_.assign(nbase_, 0.0);
    d_.assign(nbase_, 0.0);
  }

  void resize_scratch() {
    wdir_.resize(nrows_);
    alpha_.resize(nrows_);
    racc_.resize(nrows_);
    beta_.resize(ncol_);
    y_.assign(nrows_, 0.0);
    price_.reset(ncol_);
  }

  void place_nonbasic_at_default(int j) {
    if (lower_[j] > -kInf) {
      state_[j] = VarState::at_lower;
      xval_[j] = lower_[j];
    } else {
      state_[j] = VarState::at_upper;
      xval_[j] = upper_[j];
    }
  }

  // Start from scratch: structurals at their default bound, each row
  // covered by its slack when the residual fits the slack's bounds,
  // otherwise by a fresh artificial.
  void cold_start() {
    ncol_ = nbase_;
    art_count_ = 0;
    art_row_.clear();
    art_sign_.clear();
    art_col_of_row_.assign(nrows_, -1);
    state_.assign(nbase_, VarState::at_lower);
    xval_.assign(nbase_, 0.0);
    for (int j = 0; j < nv_; ++j) place_nonbasic_at_default(j);

    std::vector<double> acc(nrows_, 0.0);
    for (int j = 0; j < nv_; ++j) {
      double v = xval_[j];
      if (v == 0) continue;
      for_col(j, [&](int r, double a) { acc[r] += a * v; });
    }
    covered_col_.assign(nrows_, -1);
    cov_sign_.assign(nrows_, 0.0);
    for (int r = 0; r < nrows_; ++r) {
      double rho = rhs_[r] - acc[r];
      int s = nv_ + r;
      if (rho >= lower_[s] && rho <= upper_[s]) {
        state_[s] = VarState::basic;
        xval_[s] = rho;
        covered_col_[r] = s;
        cov_sign_[r] = 1.0;
        continue;
      }
      double sv = std::clamp(rho, lower_[s], upper_[s]);
      state_[s] = sv == lower_[s] ? VarState::at_lower : VarState::at_upper;
      xval_[s] = sv;
      double rem = rho - sv;
      double sign = rem > 0 ? 1.0 : -1.0;
      int col = nbase_ + art_count_;
      art_row_.push_back(r);
      art_sign_.push_back(sign);
      art_col_of_row_[r] = col;
      ++art_count_;
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      real_cost_.push_back(0.0);
      cost_.push_back(0.0);
      state_.push_back(VarState::basic);
      xval_.push_back(std::abs(rem));
      d_.push_back(0.0);
      unital_row_.push_back(r);
      unital_sign_.push_back(sign);
      covered_col_[r] = col;
      cov_sign_[r] = sign;
    }
    ncol_ = nbase_ + art_count_;
    resize_scratch();
    // Every row is covered, so this cannot fail structurally.
    if (!rebuild_from_basis()) throw NumericalTrouble{};
  }

  bool try_hint(const BasisHint& hint) {
    if (static_cast<int>(hint.row_basic.size()) != nrows_) return false;
    if (!hint.at_upper.empty() &&
        static_cast<int>(hint.at_upper.size()) != nv_)
      return false;
    ncol_ = nbase_;
    art_count_ = 0;
    art_row_.clear();
    art_sign_.clear();
    art_col_of_row_.assign(nrows_, -1);
    state_.assign(nbase_, VarState::at_lower);
    xval_.assign(nbase_, 0.0);
    d_.assign(nbase_, 0.0);
    for (int j = 0; j < nv_; ++j) {
      bool up = !hint.at_upper.empty() && hint.at_upper[j];
      if (up ? upper_[j] == kInf : lower_[j] == -kInf) return false;
      state_[j] = up ? VarState::at_upper : VarState::at_lower;
      xval_[j] = up ? upper_[j] : lower_[j];
    }
    std::vector<char> used(nv_, 0);
    for (int r = 0; r < nrows_; ++r) {
      int hb = hint.row_basic[r];
      int s = nv_ + r;
      if (hb == -1) {
        state_[s] = VarState::basic;
        continue;
      }
      if (hb < 0 || hb >= nv_ || used[hb]) return false;
      used[hb] = 1;
      state_[hb] = VarState::basic;
      place_nonbasic_at_default(s);
    }
    resize_scratch();
    if (!rebuild_from_basis()) return false;
    for (int j = 0; j < ncol_; ++j) {
      if (state_[j] != VarState::basic) continue;
      double v = xval_[j];
      if (v < lower_[j] - opt_.feas_tol * (1 + std::abs(lower_[j])) ||
          v > upper_[j] + opt_.feas_tol * (1 + std::abs(upper_[j])))
        return false;
    }
    return true;
  }

  void set_phase1_costs() {
    cost_.assign(ncol_, 0.0);
    for (int a = 0; a < art_count_; ++a) cost_[nbase_ + a] = 1.0;
  }

  // ---- factorization ----

  // Rebuilds covers, the uncovered-rows core, its sparse LU, the basic
  // values and the duals from the current basic set.
  bool rebuild_from_basis() {
    covered_col_.assign(nrows_, -1);
    cov_sign_.assign(nrows_, 0.0);
    core_cols_.clear();
    col_core_pos_.assign(ncol_, -1);
    ur_pos_of_row_.assign(nrows_, -1);
    int basic_count = 0;
    for (int j = 0; j < ncol_; ++j) {
      if (state_[j] != VarState::basic) continue;
      ++basic_count;
      int r = unital_row_[j];
      if (r >= 0) {
        if (covered_col_[r] >= 0) {
          lp_trace("rebuild: row covered twice", r, j);
          return false;
        }
        covered_col_[r] = j;
        cov_sign_[r] = unital_sign_[j];
      } else {
        core_cols_.push_back(j);
      }
    }
    if (basic_count != nrows_) {
      lp_trace("rebuild: basic count mismatch", basic_count, nrows_);
      return false;
    }
    ur_rows_.clear();
    for (int r = 0; r < nrows_; ++r)
      if (covered_col_[r] < 0) ur_rows_.push_back(r);
    if (ur_rows_.size() != core_cols_.size()) {
      lp_trace("rebuild: core shape mismatch",
               static_cast<long long>(ur_rows_.size()),
               static_cast<long long>(core_cols_.size()));
      return false;
    }
    k_ = static_cast<int>(core_cols_.size());
    for (int j = 0; j < k_; ++j) col_core_pos_[core_cols_[j]] = j;
    for (int i = 0; i < k_; ++i) ur_pos_of_row_[ur_rows_[i]] = i;
    lurows_.resize(k_);
    for (auto& lr : lurows_) lr.clear();
    for (int j = 0; j < k_; ++j)
      for_col(core_cols_[j], [&](int r, double a) {
        int i = ur_pos_of_row_[r];
        if (i >= 0) lurows_[i].emplace_back(j, a);
      });
    if (!lu_.factor(k_, lurows_)) {
      lp_trace("rebuild: singular core", k_);
      if (lp_debug()) dump_core("/tmp/core_dump.txt");
      return false;
    }
    // Slot pairing: covered rows keep their cover; uncovered row
    // ur_rows_[i] holds core column core_cols_[i].
    pos_col_.assign(nrows_, -1);
    for (int r = 0; r < nrows_; ++r)
      if (covered_col_[r] >= 0) pos_col_[r] = covered_col_[r];
    for (int i = 0; i < k_; ++i) pos_col_[ur_rows_[i]] = core_cols_[i];
    etas_.clear();
    eta_idx_.clear();
    eta_val_.clear();
    recompute_basic_values();
    refresh_duals();
    gupdates_since_rebuild_ = 0;
    drift_est_ = 0;
    return true;
  }

  // Debug-only invariant: every row keeps at least one basic column. A
  // violation means the basis went singular; report the pivot that did it.
  void debug_check_row_support(int e, const Leave& L) {
    static thread_local std::vector<int> support;
    support.assign(nrows_, 0);
    for (int j = 0; j < ncol_; ++j) {
      if (state_[j] != VarState::basic) continue;
      for_col(j, [&](int r, double) { ++support[r]; });
    }
    for (int r = 0; r < nrows_; ++r) {
      if (support[r] == 0) {
        std::fprintf(stderr,
                     "lp: row %d lost basic support at iter %lld "
                     "(enter col %d unital_row %d, leave col %d slot %d)\n",
                     r, iter_, e, unital_row_[e], L.col, L.pos);
        return;
      }
    }
  }

  // Debug-only: residual max|B w - a_e| of the last FTRAN against the
  // basis it was computed for (call before the pivot mutates anything).
  void debug_check_ftran(int e, const Leave& L) {
    racc_.clear();
    for (int pos : wdir_.touched) {
      double wv = wdir_.val[pos];
      if (wv == 0) continue;
      for_col(pos_col_[pos], [&](int r, double a) { racc_.add(r, a * wv); });
    }
    for_col(e, [&](int r, double a) { racc_.add(r, -a); });
    double worst = 0;
    for (int r : racc_.touched)
      worst = std::max(worst, std::abs(racc_.val[r]));
    racc_.clear();
    if (worst > 1e-6 * (1 + wdir_max_) || iter_ % 50 == 0)
      std::fprintf(stderr,
                   "lp: ftran residual %.3g wmax %.3g at iter %lld k %d "
                   "etas %zu (enter %d, leave col %d slot %d)\n",
                   worst, wdir_max_, iter_, k_, etas_.size(), e, L.col,
                   L.pos);
  }

  void dump_core(const char* path) {
    std::FILE* f = std::fopen(path, "w");
    if (!f) return;
    std::fprintf(f, "k %d\n", k_);
    for (int j = 0; j < k_; ++j) {
      int col = core_cols_[j];
      std::fprintf(f, "col %d id %d unital_row %d\n", j, col,
                   unital_row_[col]);
    }
    for (int i = 0; i < k_; ++i) std::fprintf(f, "row %d id %d\n", i,
                                              ur_rows_[i]);
    for (int j = 0; j < k_; ++j)
      for_col(core_cols_[j], [&](int r, double a) {
        int i = ur_pos_of_row_[r];
        if (i >= 0) std::fprintf(f, "a %d %d %.17g\n", i, j, a);
      });
    std::fclose(f);
  }

  void recompute_basic_values() {
    racc_.clear();
    for (int j = 0; j < ncol_; ++j) {
      if (state_[j] == VarState::basic) continue;
      double v = xval_[j];
      if (v == 0) continue;
      for_col(j, [&](int r, double a) { racc_.add(r, a * v); });
    }
    vec_a_.assign(k_, 0.0);
    for (int i = 0; i < k_; ++i) {
      int r = ur_rows_[i];
      vec_a_[i] = rhs_[r] - racc_.val[r];
    }
    lu_.solve(vec_a_.data());
    // Core columns add only to covered rows here, so the uncovered-row
    // residuals read above stay untouched.
    for (int j = 0; j < k_; ++j) {
      double v = vec_a_[j];
      xval_[core_cols_[j]] = v;
      if (v == 0) continue;
      for_col(core_cols_[j], [&](int r, double a) {
        if (covered_col_[r] >= 0) racc_.add(r, a * v);
      });
    }
    for (int r = 0; r < nrows_; ++r) {
      if (covered_col_[r] < 0) continue;
      xval_[covered_col_[r]] = cov_sign_[r] * (rhs_[r] - racc_.val[r]);
    }
    racc_.clear();
  }

  // Valid only on a fresh frame (empty eta file): rebuild_from_basis calls
  // it, and the phase transitions in solve() run right after a rebuild.
  void refresh_duals() {
    for (int r = 0; r < nrows_; ++r)
      y_[r] = covered_col_[r] >= 0 ? cov_sign_[r] * cost_[covered_col_[r]] : 0.0;
    vec_a_.assign(k_, 0.0);
    for (int j = 0; j < k_; ++j) {
      double s = cost_[core_cols_[j]];
      for_col(core_cols_[j], [&](int r, double a) {
        if (ur_pos_of_row_[r] < 0) s -= a * y_[r];
      });
      vec_a_[j] = s;
    }
    lu_.solve_t(vec_a_.data());
    for (int i = 0; i < k_; ++i) y_[ur_rows_[i]] = vec_a_[i];
    for (int j = 0; j < ncol_; ++j) {
      if (state_[j] == VarState::basic) {
        d_[j] = 0;
        continue;
      }
      double s = cost_[j];
      for_col(j, [&](int r, double a) { s -= a * y_[r]; });
      d_[j] = s;
    }
    rebuild_scores();
    iters_since_refresh_ = 0;
  }

  double score_of(int j) const {
    if (state_[j] == VarState::basic) return 0;
    if (lower_[j] == upper_[j]) return 0;
    if (state_[j] == VarState::at_lower)
      return d_[j] < -opt_.opt_tol ? -d_[j] : 0;
    return d_[j] > opt_.opt_tol ? d_[j] : 0;
  }

  void rebuild_scores() {
    price_.reset(ncol_);
    for (int j = 0; j < ncol_; ++j) {
      double s = score_of(j);
      if (s > 0) price_.set(j, s);
    }
  }

  int pick_entering() {
    if (!bland_) return price_.argmax();
    for (int j = 0; j < ncol_; ++j)
      if (price_.get(j) > 0) return j;
    return -1;
  }

  // wdir_ = B^{-1} a_e over slots: frame solve (covers plus core LU), then
  // the eta file in order.
  void ftran(int e) {
    wdir_.clear();
    wcore_.assign(k_, 0.0);
    bool any_core = false;
    for_col(e, [&](int r, double a) {
      int i = ur_pos_of_row_[r];
      if (i >= 0) {
        wcore_[i] = a;
        any_core = true;
      } else {
        wdir_.add(r, a);
      }
    });
    if (any_core) lu_.solve(wcore_.data());
    // wcore_[j] is now the coefficient of core column j. Push its
    // covered-row contributions, fold in the cover signs while every
    // touched slot is still a covered row, then deposit the core
    // coefficients at their own slots.
    for (int j = 0; j < k_; ++j) {
      double w = wcore_[j];
      if (w == 0) continue;
      for_col(core_cols_[j], [&](int r, double a) {
        if (covered_col_[r] >= 0) wdir_.add(r, -a * w);
      });
    }
    for (int r : wdir_.touched) wdir_.val[r] *= cov_sign_[r];
    for (int j = 0; j < k_; ++j)
      if (wcore_[j] != 0) wdir_.set(ur_rows_[j], wcore_[j]);
    for (const Eta& E : etas_) {
      double up = wdir_.val[E.pos];
      if (up == 0) continue;
      double s = up / E.piv;
      wdir_.set(E.pos, s);
      for (int idx = E.begin; idx < E.end; ++idx)
        wdir_.add(eta_idx_[idx], -s * eta_val_[idx]);
    }
    wdir_max_ = 0;
    for (int pos : wdir_.touched)
      wdir_max_ = std::max(wdir_max_, std::abs(wdir_.val[pos]));
  }

  // ---- the simplex loop ----

  // Runs pivots until a certified optimal claim. Returns false when the
  // iteration budget is exhausted (caller converts to numerical_failure);
  // throws NumericalTrouble on unrecoverable factorization problems.
  bool loop_to_optimal() {
    int cert_rounds = 0;
    for (;;) {
      if (iter_ > budget_) {
        lp_trace("iteration budget exhausted", iter_);
        return false;
      }
      // Refactorization period: the eta file both lengthens every FTRAN
      // and accumulates error, so cap it, and charge each update in
      // proportion to its squared amplification so stretches through
      // ill-conditioned bases refactorize almost every pivot.
      if (gupdates_since_rebuild_ >= kEtaMax || drift_est_ > 1e-10)
        force_rebuild();
      // Long bound-flip streaks refresh the duals through a rebuild (the
      // dual solve needs a fresh frame).
      if (iters_since_refresh_ > 30000) force_rebuild();
      int e = pick_entering();
      if (e < 0) {
        if (++cert_rounds > 5) {
          lp_trace("certification rounds exceeded", cert_rounds);
          throw NumericalTrouble{};
        }
        force_rebuild();
        if (pick_entering() >= 0) continue;
        if (basis_feasible()) return true;
        lp_trace("optimal claim with infeasible basis", iter_);
        throw NumericalTrouble{};
      }
      double sig = state_[e] == VarState::at_lower ? 1.0 : -1.0;
      bool handled = false;
      for (int attempt = 0; attempt < 2; ++attempt) {
        ftran(e);
        double t_star = kInf;
        collect_ratio_candidates(sig, t_star);
        double t_e = (lower_[e] > -kInf && upper_[e] < kInf)
                         ? upper_[e] - lower_[e]
                         : kInf;
        if (t_star == kInf && t_e == kInf)
          throw std::runtime_error("lp: unbounded objective");
        if (t_e <= t_star) {
          apply_bound_flip(e, sig, t_e);
          ++flip_count_;
          handled = true;
          break;
        }
        Leave L = select_leaving(t_star);
        // A winning pivot far below the direction's scale may be pure
        // drift noise; confirm it against a fresh factorization before
        // trusting it.
        if (attempt == 0 && !etas_.empty() &&
            std::abs(L.w) < 1e-5 * wdir_max_) {
          force_rebuild();
          continue;
        }
        // Degenerate steps advance by a sliver of the Harris grace so the
        // objective strictly decreases: any step up to trelax_min_ keeps
        // every candidate within feas_tol of its bound, and the overshoot
        // carried by basic variables is washed out whenever a rebuild
        // recomputes them from exactly-placed nonbasics. Bland mode keeps
        // the exact minimum ratio its termination argument needs.
        double t_step = t_star;
        if (!bland_)
          t_step = std::min(std::max(t_star, 0.5 * trelax_min_), t_e);
        if (apply_pivot(e, sig, L, t_step)) {
          trouble_run_ = 0;
          handled = true;
          if (t_star < 1e-12) ++degen_pivots_;
          if (bland_) ++bland_pivots_;
        }
        break;
      }
      if (!handled) {
        // Pivot numerically unusable: refactorize and retry the iteration.
        if (++trouble_run_ > 3) {
          lp_trace("repeated unusable pivots", iter_);
          throw NumericalTrouble{};
        }
        force_rebuild();
        continue;
      }
      cert_rounds = 0;
    }
  }

  void force_rebuild() {
    ++rebuild_count_;
    if (!rebuild_from_basis()) {
      lp_trace("refactorization failed", iter_);
      throw NumericalTrouble{};
    }
  }

  bool basis_feasible() {
    for (int j = 0; j < ncol_; ++j) {
      if (state_[j] != VarState::basic) continue;
      double v = xval_[j];
      if (v < lower_[j] - opt_.feas_tol * (1 + std::abs(lower_[j])) ||
          v > upper_[j] + opt_.feas_tol * (1 + std::abs(upper_[j])))
        return false;
    }
    racc_.clear();
    for (int j = 0; j < ncol_; ++j) {
      double v = xval_[j];
      if (v == 0) continue;
      for_col(j, [&](int r, double a) { racc_.add(r, a * v); });
    }
    for (int r = 0; r < nrows_; ++r) {
      if (std::abs(racc_.val[r] - rhs_[r]) >
          opt_.feas_tol * (1 + std::abs(rhs_[r]))) {
        racc_.clear();
        return false;
      }
    }
    racc_.clear();
    return true;
  }

  void collect_ratio_candidates(double sig, double& t_star) {
    cands_.clear();
    tvals_.clear();
    // Entries far below the direction's own magnitude are treated as zero:
    // after many product-form updates a true zero shows up as drift noise,
    // and pivoting on one makes the basis singular. The pivot element is
    // also the eta denominator, so the relative cut bounds every update.
    const double thresh =
        std::max(opt_.pivot_tol, 1e-8 * wdir_max_);
    trelax_min_ = kInf;
    for (int pos : wdir_.touched) {
      double w = wdir_.val[pos];
      if (std::abs(w) <= thresh) continue;
      double rate = -sig * w;
      int col = pos_col_[pos];
      double bound, t;
      bool to_upper;
      if (rate > 0) {
        bound = upper_[col];
        if (bound == kInf) continue;
        to_upper = true;
      } else {
        bound = lower_[col];
        if (bound == -kInf) continue;
        to_upper = false;
      }
      t = (bound - xval_[col]) / rate;
      if (t < 0) t = 0;
      cands_.push_back(Leave{col, pos, w, to_upper});
      tvals_.push_back(t);
      if (t < t_star) t_star = t;
      // Step length at which this candidate overshoots its bound by the
      // full feasibility tolerance (the Harris relaxation).
      double trel =
          t + opt_.feas_tol * (1 + std::abs(bound)) / std::abs(rate);
      if (trel < trelax_min_) trelax_min_ = trel;
    }
  }

  // Two-pass (Harris) selection: any candidate whose strict ratio lies at
  // or below the relaxed minimum may leave without hurting feasibility by
  // more than feas_tol, so among those the largest |pivot| wins. Bland
  // mode keeps the strict minimum and lowest column for its anti-cycling
  // guarantee. t_star is adjusted to the chosen candidate's strict ratio.
  Leave select_leaving(double& t_star) {
    int best = -1;
    if (bland_) {
      double tie = 1e-9 * (1 + t_star);
      for (size_t i = 0; i < cands_.size(); ++i) {
        if (tvals_[i] > t_star + tie) continue;
        if (best < 0 || cands_[i].col < cands_[best].col)
          best = static_cast<int>(i);
      }
    } else {
      for (size_t i = 0; i < cands_.size(); ++i) {
        if (tvals_[i] > trelax_min_) continue;
        if (best < 0) {
          best = static_cast<int>(i);
          continue;
        }
        double wa = std::abs(cands_[i].w), wb = std::abs(cands_[best].w);
        if (wa > wb || (wa == wb && cands_[i].col < cands_[best].col))
          best = static_cast<int>(i);
      }
      t_star = tvals_[best];
    }
    return cands_[best];
  }

  void apply_bound_flip(int e, double sig, double t_e) {
    double dt = sig * t_e;
    for (int pos : wdir_.touched)
      xval_[pos_col_[pos]] -= dt * wdir_.val[pos];
    if (state_[e] == VarState::at_lower) {
      state_[e] = VarState::at_upper;
      xval_[e] = upper_[e];
    } else {
      state_[e] = VarState::at_lower;
      xval_[e] = lower_[e];
    }
    price_.set(e, score_of(e));
    ++iter_;
    ++iters_since_refresh_;
    note_progress(std::abs(d_[e]) * t_e);
  }

  void note_progress(double improvement) {
    if (improvement > 1e-12) {
      degen_run_ = 0;
      if (bland_) bland_ = false;
    } else if (++degen_run_ >= 2048 && !bland_) {
      bland_ = true;
    }
  }

  // alpha_ := row p of the basis inverse: eta transposes in reverse order
  // (each changes only its own pivot slot), then the frame transpose
  // (cover signs, then the transposed core).
  void btran_unit(int p) {
    alpha_.clear();
    alpha_.set(p, 1.0);
    for (size_t t = etas_.size(); t-- > 0;) {
      const Eta& E = etas_[t];
      double vp = alpha_.val[E.pos];
      double dot = E.piv * vp;
      for (int idx = E.begin; idx < E.end; ++idx)
        dot += eta_val_[idx] * alpha_.val[eta_idx_[idx]];
      double nv = vp - (dot - vp) / E.piv;
      if (nv != vp) alpha_.set(E.pos, nv);
    }
    vec_a_.assign(k_, 0.0);
    bool any = false;
    for (int pos : alpha_.touched) {
      double v = alpha_.val[pos];
      if (v == 0) continue;
      int i = ur_pos_of_row_[pos];
      if (i >= 0) {
        // Slot of core column i: consume into the transpose-solve rhs.
        vec_a_[i] += v;
        alpha_.set(pos, 0.0);
        any = true;
      } else {
        double yr = cov_sign_[pos] * v;
        alpha_.set(pos, yr);
        for_row(pos, [&](int col, double a) {
          int j = col_core_pos_[col];
          if (j >= 0) {
            vec_a_[j] -= a * yr;
            any = true;
          }
        });
      }
    }
    if (any) {
      lu_.solve_t(vec_a_.data());
      for (int i = 0; i < k_; ++i)
        if (vec_a_[i] != 0) alpha_.set(ur_rows_[i], vec_a_[i]);
    }
  }

  // Appends the product-form eta replacing slot p with the current FTRAN
  // direction.
  void push_eta(int p) {
    Eta E;
    E.pos = p;
    E.piv = wdir_.val[p];
    E.begin = static_cast<int>(eta_idx_.size());
    for (int pos : wdir_.touched) {
      if (pos == p) continue;
      double v = wdir_.val[pos];
      if (v == 0) continue;
      eta_idx_.push_back(pos);
      eta_val_.push_back(v);
    }
    E.end = static_cast<int>(eta_idx_.size());
    etas_.push_back(E);
    ++gupdates_since_rebuild_;
    double amp = wdir_max_ / std::abs(E.piv);
    drift_est_ += 1e-15 * amp * amp;
  }

  // Returns false if the pivot had to be abandoned for numerical reasons
  // (nothing was modified in that case).
  bool apply_pivot(int e, double sig, const Leave& L, double t_star) {
    if (std::abs(L.w) < std::max(opt_.pivot_tol, 1e-12)) return false;
    if (lp_debug()) debug_check_ftran(e, L);

    // Primal step.
    double dt = sig * t_star;
    double d_e_before = d_[e];
    for (int pos : wdir_.touched)
      xval_[pos_col_[pos]] -= dt * wdir_.val[pos];
    xval_[e] =
        (state_[e] == VarState::at_lower ? lower_[e] : upper_[e]) + dt;
    xval_[L.col] = L.to_upper ? upper_[L.col] : lower_[L.col];

    // Dual step: alpha = row of B^{-1} for the leaving slot, beta =
    // alpha * A, d -= theta * beta.
    btran_unit(L.pos);
    beta_.clear();
    for (int r : alpha_.touched) {
      double av = alpha_.val[r];
      if (av == 0) continue;
      for_row(r, [&](int col, double a) { beta_.add(col, av * a); });
    }
    double theta = d_e_before / L.w;
    for (int col : beta_.touched) {
      if (state_[col] == VarState::basic) continue;
      if (col == e) continue;
      d_[col] -= theta * beta_.val[col];
      price_.set(col, score_of(col));
    }

    // Basis update: one eta, one slot.
    push_eta(L.pos);
    pos_col_[L.pos] = e;
    state_[e] = VarState::basic;
    state_[L.col] = L.to_upper ? VarState::at_upper : VarState::at_lower;
    d_[e] = 0;
    d_[L.col] = -theta;
    price_.set(e, 0);
    price_.set(L.col, score_of(L.col));

    // A pivot far below the direction's scale is numerically valid but
    // poisons the eta file; refactorize before it can spread.
    if (std::abs(L.w) < 1e-3 * wdir_max_) drift_est_ = 1.0;

    if (lp_debug()) debug_check_row_support(e, L);

    ++iter_;
    ++iters_since_refresh_;
    note_progress(std::abs(d_e_before) * t_star);
    return true;
  }

  // ---- results ----

  LpResult failure_result() {
    LpResult res;
    res.status = SolveStatus::numerical_failure;
    res.iterations = iter_;
    return res;
  }

  LpResult extract() {
    LpResult res;
    res.status = SolveStatus::optimal;
    res.iterations = iter_;
    res.x.resize(nv_);
    for (int j = 0; j < nv_; ++j)
      res.x[j] = std::clamp(xval_[j], lower_[j], upper_[j]);
    double obj_min = 0;
    for (int j = 0; j < nv_; ++j) obj_min += real_cost_[j] * res.x[j];
    res.objective = maximize_ ? -obj_min : obj_min;

    DualCertificate& cert = res.certificate;
    cert.row_duals.assign(y_.begin(), y_.end());
    cert.bound_duals.assign(d_.begin(), d_.begin() + nv_);
    double dual_obj = 0;
    for (int r = 0; r < nrows_; ++r) dual_obj += y_[r] * rhs_[r];
    double comp = 0;
    for (int j = 0; j < nbase_; ++j) {
      if (state_[j] == VarState::basic) continue;
      double dj = d_[j];
      if (state_[j] == VarState::at_lower && dj > 0 && lower_[j] > -kInf)
        dual_obj += dj * lower_[j];
      else if (state_[j] == VarState::at_upper && dj < 0 && upper_[j] < kInf)
        dual_obj += dj * upper_[j];
      double dist = std::min({std::abs(xval_[j] - lower_[j]),
                              std::abs(xval_[j] - upper_[j]), 1.0});
      comp = std::max(comp, std::abs(dj) * dist);
    }
    cert.dual_objective = dual_obj;
    cert.gap = obj_min - dual_obj;
    cert.comp_slack_residual = comp;
    return res;
  }
};

}  // namespace

LpResult solve_lp(const LpProblem& problem, const BasisHint* hint,
                  const LpOptions& options) {
  Simplex s(problem, options);
  return s.solve(hint);
}

}  // namespace klsat
