#pragma once

// Smith normal form and ranks of sparse matrices.
//
// Sparse phase: Gaussian elimination restricted to unit pivots (±1 over Z,
// any nonzero over F_p), chosen by row length and column count to keep
// fill-in low. Each unit pivot contributes an invariant factor 1 and removes
// one row and one column. Over Z the residual block without unit entries is
// finished by dense arbitrary-precision elimination.

#include <hstab/errors.hpp>
#include <hstab/integer.hpp>
#include <hstab/sparse_matrix.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace hstab {

struct IntegerPolicy {
  using value_type = Integer;
  static value_type convert(const Integer& v) { return v; }
  static bool is_zero(const value_type& v) { return v == 0; }
  static bool is_unit(const value_type& v) { return v == 1 || v == -1; }
  // a / u for a unit u
  static value_type divide_by_unit(const value_type& a, const value_type& u) { return a * u; }
  // d - f*s
  static value_type sub_mul(const value_type& d, const value_type& f, const value_type& s) {
    return d - f * s;
  }
  static value_type negate(const value_type& a) { return -a; }
  static value_type one() { return 1; }
};

struct FieldPolicy {
  using value_type = std::uint32_t;
  std::uint32_t p = 2;

  value_type convert(const Integer& v) const { return reduce_mod(v, p); }
  static bool is_zero(value_type v) { return v == 0; }
  static bool is_unit(value_type v) { return v != 0; }
  value_type inverse(value_type a) const {
    std::uint64_t r = 1, b = a, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return static_cast<value_type>(r);
  }
  value_type divide_by_unit(value_type a, value_type u) const {
    return static_cast<value_type>(std::uint64_t(a) * inverse(u) % p);
  }
  value_type sub_mul(value_type d, value_type f, value_type s) const {
    std::uint64_t prod = std::uint64_t(f) * s % p;
    return static_cast<value_type>((d + p - prod) % p);
  }
  value_type negate(value_type a) const { return a == 0 ? 0 : p - a; }
  static value_type one() { return 1; }
};

template <class T>
using SparseVec = std::vector<std::pair<std::uint32_t, T>>;  // sorted by index

namespace detail {

// dst := dst - f * src, both sorted. Reports indices that appeared/vanished.
template <class Policy, class T, class OnNew, class OnGone>
void sparse_axpy(const Policy& pol, SparseVec<T>& dst, const T& f, const SparseVec<T>& src,
                 OnNew&& on_new, OnGone&& on_gone) {
  SparseVec<T> out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0, j = 0;
  const T zero{};
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      out.push_back(std::move(dst[i++]));
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      T v = pol.sub_mul(zero, f, src[j].second);
      if (!pol.is_zero(v)) {
        on_new(src[j].first);
        out.emplace_back(src[j].first, std::move(v));
      }
      ++j;
    } else {
      T v = pol.sub_mul(dst[i].second, f, src[j].second);
      if (pol.is_zero(v))
        on_gone(dst[i].first);
      else
        out.emplace_back(dst[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  dst = std::move(out);
}

template <class T>
const T* find_entry(const SparseVec<T>& row, std::uint32_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::uint32_t c) { return e.first < c; });
  if (it != row.end() && it->first == col) return &it->second;
  return nullptr;
}

}  // namespace detail

// Row-oriented sparse elimination with unit pivots and optional tracking of
// the left (row) transform.
template <class Policy>
class UnitPivotEliminator {
 public:
  using T = typename Policy::value_type;
  using Row = SparseVec<T>;

  UnitPivotEliminator(const SparseIntMatrix& m, Policy pol = {}, bool track_left = false)
      : pol_(pol), ncols_(m.cols()), rows_(m.rows()), track_(track_left) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (const auto& [r, v] : m.column(j)) {
        T x = pol_.convert(v);
        if (!pol_.is_zero(x)) rows_[r].emplace_back(static_cast<std::uint32_t>(j), std::move(x));
      }
    col_rows_.resize(ncols_);
    col_count_.assign(ncols_, 0);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& e : rows_[r]) {
        col_rows_[e.first].push_back(static_cast<std::uint32_t>(r));
        ++col_count_[e.first];
      }
    row_active_.assign(rows_.size(), 1);
    col_active_.assign(ncols_, 1);
    if (track_) {
      transforms_.resize(rows_.size());
      for (std::size_t r = 0; r < rows_.size(); ++r)
        transforms_[r].emplace_back(static_cast<std::uint32_t>(r), Policy::one());
    }
    stamp_.assign(rows_.size(), 0);
  }

  // Runs unit-pivot elimination to exhaustion; returns the number of pivots.
  std::size_t run() {
    bool progress = true;
    while (progress) {
      progress = false;
      std::vector<std::uint32_t> order;
      for (std::size_t r = 0; r < rows_.size(); ++r)
        if (row_active_[r] && !rows_[r].empty()) order.push_back(static_cast<std::uint32_t>(r));
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return rows_[a].size() < rows_[b].size();
      });
      for (auto r : order) {
        if (!row_active_[r] || rows_[r].empty()) continue;
        std::optional<std::size_t> best;
        for (std::size_t k = 0; k < rows_[r].size(); ++k) {
          const auto& e = rows_[r][k];
          if (!pol_.is_unit(e.second)) continue;
          if (!best || col_count_[e.first] < col_count_[rows_[r][*best].first]) best = k;
        }
        if (!best) continue;
        pivot(r, rows_[r][*best].first);
        progress = true;
      }
    }
    return pivots_.size();
  }

  struct Pivot {
    std::uint32_t row;
    std::uint32_t col;
  };
  const std::vector<Pivot>& pivots() const { return pivots_; }

  // Active rows that still carry entries (the block without unit pivots).
  std::vector<std::uint32_t> residual_rows() const {
    std::vector<std::uint32_t> out;
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (row_active_[r] && !rows_[r].empty()) out.push_back(static_cast<std::uint32_t>(r));
    return out;
  }
  // Active rows that were reduced to zero.
  std::vector<std::uint32_t> zero_rows() const {
    std::vector<std::uint32_t> out;
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (row_active_[r] && rows_[r].empty()) out.push_back(static_cast<std::uint32_t>(r));
    return out;
  }
  const Row& row(std::uint32_t r) const { return rows_[r]; }
  const Row& transform(std::uint32_t r) const { return transforms_.at(r); }
  const Policy& policy() const { return pol_; }

 private:
  void pivot(std::uint32_t r, std::uint32_t c) {
    const T u = *detail::find_entry(rows_[r], c);
    ++epoch_;
    stamp_[r] = epoch_;
    const Row pivot_row = rows_[r];
    const Row pivot_transform = track_ ? transforms_[r] : Row{};
    auto candidates = std::move(col_rows_[c]);
    col_rows_[c].clear();
    for (auto r2 : candidates) {
      if (stamp_[r2] == epoch_ || !row_active_[r2]) continue;
      stamp_[r2] = epoch_;
      const T* a = detail::find_entry(rows_[r2], c);
      if (!a) continue;
      const T f = pol_.divide_by_unit(*a, u);
      detail::sparse_axpy(
          pol_, rows_[r2], f, pivot_row,
          [&](std::uint32_t col) {
            ++col_count_[col];
            col_rows_[col].push_back(r2);
          },
          [&](std::uint32_t col) { --col_count_[col]; });
      if (track_)
        detail::sparse_axpy(pol_, transforms_[r2], f, pivot_transform, [](std::uint32_t) {},
                            [](std::uint32_t) {});
    }
    for (const auto& e : rows_[r]) --col_count_[e.first];
    row_active_[r] = 0;
    col_active_[c] = 0;
    pivots_.push_back({r, c});
  }

  Policy pol_;
  std::size_t ncols_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<std::size_t> col_count_;
  std::vector<char> row_active_, col_active_;
  std::vector<Pivot> pivots_;
  bool track_;
  std::vector<Row> transforms_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
};

// Replaces a multiset of nonzero diagonal entries by the divisibility chain
// of invariant factors (ascending, positive).
inline std::vector<Integer> invariant_factors(std::vector<Integer> d) {
  for (auto& x : d) x = abs_value(x);
  d.erase(std::remove(d.begin(), d.end(), Integer(0)), d.end());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[j] % d[i] == 0) continue;
      Integer g = gcd(d[i], d[j]);
      Integer l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  std::sort(d.begin(), d.end());
  return d;
}

using DenseMatrix = std::vector<std::vector<Integer>>;

// In-place dense Smith diagonalization. Returns the (not chain-normalized)
// positive diagonal; if `left` is given it accumulates the row operations
// (left is R x R, initially anything; rows are combined alongside A).
inline std::vector<Integer> dense_smith(DenseMatrix& a, DenseMatrix* left = nullptr) {
  const std::size_t R = a.size();
  const std::size_t C = R ? a[0].size() : 0;
  std::vector<Integer> diag;
  auto row_axpy = [&](std::size_t dst, const Integer& q, std::size_t src, std::size_t from) {
    for (std::size_t k = from; k < C; ++k)
      if (a[src][k] != 0) a[dst][k] -= q * a[src][k];
    if (left)
      for (std::size_t k = 0; k < (*left)[src].size(); ++k)
        if ((*left)[src][k] != 0) (*left)[dst][k] -= q * (*left)[src][k];
  };
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    if (left) std::swap((*left)[i], (*left)[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
  };
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    std::size_t pi = R, pj = C;
    Integer best;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (a[i][j] != 0 && (pi == R || abs_value(a[i][j]) < best)) {
          best = abs_value(a[i][j]);
          pi = i;
          pj = j;
          if (best == 1) break;
        }
    if (pi == R) break;
    if (pi != t) swap_rows(t, pi);
    if (pj != t) swap_cols(t, pj);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (a[i][t] == 0) continue;
        Integer q = a[i][t] / a[t][t];
        if (q != 0) row_axpy(i, q, t, t);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (a[t][j] == 0) continue;
        Integer q = a[t][j] / a[t][t];
        if (q != 0)
          for (std::size_t i = t; i < R; ++i)
            if (a[i][t] != 0) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
      std::size_t bi = t, bj = t;
      Integer m = abs_value(a[t][t]);
      for (std::size_t i = t + 1; i < R; ++i)
        if (a[i][t] != 0 && abs_value(a[i][t]) < m) { m = abs_value(a[i][t]); bi = i; bj = t; }
      for (std::size_t j = t + 1; j < C; ++j)
        if (a[t][j] != 0 && abs_value(a[t][j]) < m) { m = abs_value(a[t][j]); bi = t; bj = j; }
      if (bi != t) swap_rows(t, bi);
      if (bj != t) swap_cols(t, bj);
    }
    if (a[t][t] < 0) {
      for (std::size_t k = t; k < C; ++k) a[t][k] = -a[t][k];
      if (left)
        for (auto& x : (*left)[t]) x = -x;
    }
    diag.push_back(a[t][t]);
  }
  return diag;
}

struct SmithResult {
  std::vector<Integer> divisors;  // divisibility chain, all nonzero invariant factors
  std::size_t rank = 0;

  // Invariant factors exceeding one.
  std::vector<Integer> torsion() const {
    std::vector<Integer> t;
    for (const auto& d : divisors)
      if (d > 1) t.push_back(d);
    return t;
  }
};

struct SmithOptions {
  std::size_t dense_column_threshold = 2000;
  std::size_t max_dense_cells = 40'000'000;
};

namespace detail {

template <class Elim>
DenseMatrix residual_dense(const Elim& elim, const std::vector<std::uint32_t>& rows,
                           std::vector<std::uint32_t>& cols, const SmithOptions& opt) {
  for (auto r : rows)
    for (const auto& e : elim.row(r)) cols.push_back(e.first);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  const std::size_t cells = rows.size() * cols.size();
  if (cells > opt.max_dense_cells)
    throw ResourceError("residual block without unit pivots is too large for dense elimination",
                        cells);
  DenseMatrix a(rows.size(), std::vector<Integer>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& e : elim.row(rows[i])) {
      auto j = std::lower_bound(cols.begin(), cols.end(), e.first) - cols.begin();
      a[i][j] = e.second;
    }
  return a;
}

}  // namespace detail

inline SmithResult smith_normal_form(const SparseIntMatrix& m, const SmithOptions& opt = {}) {
  UnitPivotEliminator<IntegerPolicy> elim(m);
  const std::size_t units = elim.run();
  const auto rows = elim.residual_rows();
  std::vector<std::uint32_t> cols;
  DenseMatrix a = detail::residual_dense(elim, rows, cols, opt);
  // `dense_column_threshold` only decides whether the residual is handled in
  // one dense block; larger residuals are still exact, just slower.
  (void)opt.dense_column_threshold;
  std::vector<Integer> diag = dense_smith(a);
  SmithResult res;
  res.rank = units + diag.size();
  res.divisors.assign(units, Integer(1));
  auto tail = invariant_factors(diag);
  res.divisors.insert(res.divisors.end(), tail.begin(), tail.end());
  res.divisors = invariant_factors(std::move(res.divisors));
  return res;
}

inline std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint32_t p) {
  UnitPivotEliminator<FieldPolicy> elim(m, FieldPolicy{p});
  return elim.run();
}

// Diagonalization with the left transform retained, as needed to put
// coordinates on homology: P·M·Q = diag, with P unimodular.
template <class T>
struct LeftDiagonalization {
  std::size_t rows = 0;
  struct PivotRow {
    Integer divisor;         // positive; 1 for unit pivots (always 1 over a field)
    SparseVec<T> transform;  // the corresponding row of P
  };
  std::vector<PivotRow> pivots;
  std::vector<SparseVec<T>> zero_rows;  // rows of P whose image row vanishes
};

inline LeftDiagonalization<Integer> diagonalize_left(const SparseIntMatrix& m,
                                                     const SmithOptions& opt = {}) {
  UnitPivotEliminator<IntegerPolicy> elim(m, {}, true);
  elim.run();
  LeftDiagonalization<Integer> out;
  out.rows = m.rows();
  for (const auto& p : elim.pivots()) out.pivots.push_back({Integer(1), elim.transform(p.row)});
  for (auto r : elim.zero_rows()) out.zero_rows.push_back(elim.transform(r));
  const auto rows = elim.residual_rows();
  if (rows.empty()) return out;
  std::vector<std::uint32_t> cols;
  DenseMatrix a = detail::residual_dense(elim, rows, cols, opt);
  DenseMatrix left(rows.size(), std::vector<Integer>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) left[i][i] = 1;
  auto diag = dense_smith(a, &left);
  auto combine = [&](std::size_t t) {
    std::vector<std::pair<std::uint32_t, Integer>> acc;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (left[t][k] == 0) continue;
      for (const auto& [idx, v] : elim.transform(rows[k])) acc.emplace_back(idx, left[t][k] * v);
    }
    std::sort(acc.begin(), acc.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    SparseVec<Integer> merged;
    for (auto& e : acc) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(std::move(e));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& e) { return e.second == 0; }),
                 merged.end());
    return merged;
  };
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (t < diag.size())
      out.pivots.push_back({diag[t], combine(t)});
    else
      out.zero_rows.push_back(combine(t));
  }
  return out;
}

inline LeftDiagonalization<std::uint32_t> diagonalize_left_mod_p(const SparseIntMatrix& m,
                                                                 std::uint32_t p) {
  UnitPivotEliminator<FieldPolicy> elim(m, FieldPolicy{p}, true);
  elim.run();
  LeftDiagonalization<std::uint32_t> out;
  out.rows = m.rows();
  for (const auto& pv : elim.pivots()) out.pivots.push_back({Integer(1), elim.transform(pv.row)});
  for (auto r : elim.zero_rows()) out.zero_rows.push_back(elim.transform(r));
  return out;
}

}  // namespace hstab
