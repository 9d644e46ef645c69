#pragma once

// Kernels, echelon forms of lattices and subspaces, and coordinates on
// homology groups (used to compute induced maps).

#include <hstab/chain_complex.hpp>
#include <hstab/errors.hpp>
#include <hstab/integer.hpp>
#include <hstab/smith.hpp>
#include <hstab/sparse_matrix.hpp>

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace hstab {

// ---------------------------------------------------------------------------
// Dense bit vectors over F_2

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    if (v)
      w_[i >> 6] |= std::uint64_t(1) << (i & 63);
    else
      w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }
  BitVec& operator^=(const BitVec& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }
  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }
  // first set index ≥ from, or size()
  std::size_t next(std::size_t from) const {
    if (from >= n_) return n_;
    std::size_t k = from >> 6;
    std::uint64_t x = w_[k] & (~std::uint64_t(0) << (from & 63));
    while (true) {
      if (x) {
        std::size_t i = (k << 6) + static_cast<std::size_t>(std::countr_zero(x));
        return i < n_ ? i : n_;
      }
      if (++k >= w_.size()) return n_;
      x = w_[k];
    }
  }
  friend bool operator==(const BitVec&, const BitVec&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Echelon basis of a subspace of F_2^n, rows keyed by pivot.
class SpanF2 {
 public:
  explicit SpanF2(std::size_t n) : n_(n), by_pivot_(n, -1) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t dimension() const { return n_; }

  BitVec reduce(BitVec v) const {
    std::size_t c = v.next(0);
    while (c < n_) {
      int r = by_pivot_[c];
      if (r >= 0) v ^= rows_[r];
      c = v.next(r >= 0 ? c + 1 : c + 1);
    }
    return v;
  }
  bool contains(const BitVec& v) const {
    BitVec w = v;
    std::size_t c = w.next(0);
    while (c < n_) {
      int r = by_pivot_[c];
      if (r < 0) return false;
      w ^= rows_[r];
      c = w.next(c + 1);
    }
    return true;
  }
  // true if the span grew
  bool insert(BitVec v) {
    std::size_t c = v.next(0);
    while (c < n_) {
      int r = by_pivot_[c];
      if (r < 0) {
        by_pivot_[c] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(v));
        return true;
      }
      v ^= rows_[r];
      c = v.next(c + 1);
    }
    return false;
  }

 private:
  std::size_t n_;
  std::vector<int> by_pivot_;
  std::vector<BitVec> rows_;
};

// Basis of {x : M x = 0} for M given by rows (each of width ncols).
inline std::vector<BitVec> kernel_f2(std::vector<BitVec> rows, std::size_t ncols) {
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t sel = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i)
      if (rows[i].get(c)) {
        sel = i;
        break;
      }
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<char> is_pivot(ncols, 0);
  for (auto c : pivot_col) is_pivot[c] = 1;
  std::vector<BitVec> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    BitVec v(ncols);
    v.set(f);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
      if (rows[k].get(f)) v.set(pivot_col[k]);
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Dense vectors over F_p

using FpVec = std::vector<std::uint32_t>;

class SpanFp {
 public:
  SpanFp(std::size_t n, std::uint32_t p) : n_(n), pol_{p}, by_pivot_(n, -1) {}

  std::size_t rank() const { return rows_.size(); }
  std::uint32_t prime() const { return pol_.p; }

  // Reduces v; returns the leading column left (or n).
  std::size_t reduce_in_place(FpVec& v) const {
    for (std::size_t c = 0; c < n_; ++c) {
      if (v[c] == 0) continue;
      int r = by_pivot_[c];
      if (r < 0) return c;
      axpy(v, v[c], rows_[r], c);
    }
    return n_;
  }
  bool contains(FpVec v) const { return reduce_in_place(v) == n_; }
  bool insert(FpVec v) {
    std::size_t c = reduce_in_place(v);
    if (c == n_) return false;
    const std::uint32_t inv = pol_.inverse(v[c]);
    for (std::size_t k = c; k < n_; ++k) v[k] = static_cast<std::uint32_t>(std::uint64_t(v[k]) * inv % pol_.p);
    by_pivot_[c] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    return true;
  }

 private:
  void axpy(FpVec& v, std::uint32_t f, const FpVec& row, std::size_t from) const {
    for (std::size_t k = from; k < n_; ++k)
      if (row[k]) v[k] = pol_.sub_mul(v[k], f, row[k]);
  }
  std::size_t n_;
  FieldPolicy pol_;
  std::vector<int> by_pivot_;
  std::vector<FpVec> rows_;
};

// Basis of the kernel of a sparse matrix over F_p.
inline std::vector<FpVec> kernel_fp(const SparseIntMatrix& m, std::uint32_t p) {
  auto d = diagonalize_left_mod_p(m.transpose(), p);
  std::vector<FpVec> out;
  for (const auto& row : d.zero_rows) {
    FpVec v(m.cols(), 0);
    for (const auto& [i, x] : row) v[i] = x;
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integer lattices

using IntVec = std::vector<Integer>;

// Row echelon basis of a sublattice of Z^n (Hermite-style: each row has a
// positive pivot, rows keyed by pivot column).
class LatticeEchelon {
 public:
  explicit LatticeEchelon(std::size_t n) : n_(n), by_pivot_(n, -1) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t dimension() const { return n_; }
  const std::vector<IntVec>& rows() const { return rows_; }
  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < n_; ++c)
      if (by_pivot_[c] >= 0) out.push_back(c);
    return out;
  }

  // Coefficients expressing v in the rows (indexed like rows()), if v lies in the lattice.
  std::optional<IntVec> solve(IntVec v) const {
    IntVec coeff(rows_.size());
    for (std::size_t c = 0; c < n_; ++c) {
      if (v[c] == 0) continue;
      int r = by_pivot_[c];
      if (r < 0) return std::nullopt;
      const IntVec& row = rows_[r];
      if (v[c] % row[c] != 0) return std::nullopt;
      Integer q = v[c] / row[c];
      coeff[r] = q;
      for (std::size_t k = c; k < n_; ++k)
        if (row[k] != 0) v[k] -= q * row[k];
    }
    return coeff;
  }
  bool contains(const IntVec& v) const { return solve(v).has_value(); }

  // true if the lattice grew
  bool insert(IntVec v) {
    bool grew = false;
    for (std::size_t c = 0; c < n_; ++c) {
      if (v[c] == 0) continue;
      int r = by_pivot_[c];
      if (r < 0) {
        if (v[c] < 0)
          for (auto& x : v) x = -x;
        by_pivot_[c] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(v));
        return true;
      }
      IntVec& row = rows_[r];
      if (v[c] % row[c] == 0) {
        Integer q = v[c] / row[c];
        for (std::size_t k = c; k < n_; ++k)
          if (row[k] != 0) v[k] -= q * row[k];
        continue;
      }
      // unimodular 2x2 step replacing (row, v) by (gcd row, v with zero pivot)
      ExtendedGcd e = extended_gcd(row[c], v[c]);
      const Integer a = row[c] / e.g, b = v[c] / e.g;
      IntVec nrow(n_), nv(n_);
      for (std::size_t k = c; k < n_; ++k) {
        nrow[k] = e.x * row[k] + e.y * v[k];
        nv[k] = a * v[k] - b * row[k];
      }
      if (nrow[c] < 0)
        for (auto& x : nrow) x = -x;
      row = std::move(nrow);
      v = std::move(nv);
      grew = true;
    }
    return grew;
  }

 private:
  std::size_t n_;
  std::vector<int> by_pivot_;
  std::vector<IntVec> rows_;
};

// Z-basis of the kernel of an integer matrix.
inline std::vector<IntVec> kernel_z(const SparseIntMatrix& m) {
  auto d = diagonalize_left(m.transpose());
  std::vector<IntVec> out;
  for (const auto& row : d.zero_rows) {
    IntVec v(m.cols());
    for (const auto& [i, x] : row) v[i] = x;
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coordinates on H_i = ker ∂_i / im ∂_{i+1}.
//
// With P ∂_{i+1} Q diagonal (P unimodular), the class of a cycle w is read
// from y = P w: pivot rows with divisor d > 1 give Z/d coordinates, and the
// remaining rows give a saturated lattice K of free coordinates.

struct AbelianGroupType {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
  friend bool operator==(const AbelianGroupType&, const AbelianGroupType&) = default;
};

class HomologyCoordinates {
 public:
  HomologyCoordinates(const ChainComplex& c, int degree) : ring_(c.ring()), degree_(degree) {
    if (degree > c.exact_through())
      throw InvalidInput("homology coordinates requested beyond the computable range");
    const SparseIntMatrix out = c.boundary(degree);
    const SparseIntMatrix in = c.boundary(degree + 1);
    dim_ = c.rank(degree);
    if (ring_.is_field()) {
      auto d = diagonalize_left_mod_p(in, ring_.p);
      for (const auto& z : d.zero_rows) free_rows_.push_back(widen(z));
      auto ker = kernel_fp(out, ring_.p);
      // projected cycle space
      std::vector<IntVec> proj;
      for (const auto& k : ker) {
        IntVec v(k.begin(), k.end());
        proj.push_back(project_free(v));
      }
      field_span_.emplace(free_rows_.size(), ring_.p);
      for (auto& pvec : proj) {
        FpVec f(pvec.size());
        for (std::size_t i = 0; i < pvec.size(); ++i) f[i] = reduce_mod(pvec[i], ring_.p);
        if (field_span_->insert(f)) field_basis_.push_back(f);
      }
      type_.free_rank = field_basis_.size();
      return;
    }
    auto d = diagonalize_left(in);
    for (const auto& pv : d.pivots)
      if (pv.divisor > 1) {
        torsion_rows_.push_back(pv.transform);
        divisors_.push_back(pv.divisor);
      }
    for (const auto& z : d.zero_rows) free_rows_.push_back(z);
    auto ker = kernel_z(out);
    lattice_.emplace(free_rows_.size());
    for (const auto& k : ker) lattice_->insert(project_free(k));
    type_.free_rank = lattice_->rank();
    // presentation ⊕ Z/d_t is not yet a chain; the type uses invariant factors
    type_.torsion = invariant_factors(divisors_);
  }

  const AbelianGroupType& type() const { return type_; }
  std::size_t coordinate_count() const { return divisors_.size() + type_.free_rank; }
  // Order of each coordinate (0 for free coordinates).
  std::vector<Integer> coordinate_orders() const {
    std::vector<Integer> o = divisors_;
    o.resize(coordinate_count(), 0);
    return o;
  }
  const Coefficients& ring() const { return ring_; }

  // Coordinates of the class of a cycle (torsion ones reduced mod d).
  IntVec coordinates(const IntVec& cycle) const {
    if (cycle.size() != dim_) throw InvalidInput("cycle has wrong length");
    IntVec out;
    for (std::size_t t = 0; t < torsion_rows_.size(); ++t)
      out.push_back(floor_mod(dot(torsion_rows_[t], cycle), divisors_[t]));
    IntVec f = project_free(cycle);
    if (ring_.is_field()) {
      // express f in field_basis_ by elimination against the basis
      out.resize(field_basis_.size());
      FpVec target(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) target[i] = reduce_mod(f[i], ring_.p);
      auto sol = solve_field(target);
      for (std::size_t i = 0; i < sol.size(); ++i) out[i] = sol[i];
      return out;
    }
    auto sol = lattice_->solve(f);
    if (!sol) throw IntegrityError("vector is not a cycle");
    out.insert(out.end(), sol->begin(), sol->end());
    return out;
  }

 private:
  static SparseVec<Integer> widen(const SparseVec<std::uint32_t>& v) {
    SparseVec<Integer> out;
    for (const auto& [i, x] : v) out.emplace_back(i, Integer(x));
    return out;
  }
  static Integer dot(const SparseVec<Integer>& row, const IntVec& v) {
    Integer s = 0;
    for (const auto& [i, x] : row)
      if (v[i] != 0) s += x * v[i];
    return s;
  }
  IntVec project_free(const IntVec& v) const {
    IntVec out(free_rows_.size());
    for (std::size_t k = 0; k < free_rows_.size(); ++k) out[k] = dot(free_rows_[k], v);
    return out;
  }
  std::vector<std::uint32_t> solve_field(const FpVec& target) const {
    // Gaussian elimination on the small system basis^T x = target.
    const std::size_t m = field_basis_.size(), n = target.size();
    const FieldPolicy pol{ring_.p};
    std::vector<FpVec> a(n, FpVec(m + 1));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) a[i][j] = field_basis_[j][i];
      a[i][m] = target[i];
    }
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t j = 0; j < m && r < n; ++j) {
      std::size_t sel = n;
      for (std::size_t i = r; i < n; ++i)
        if (a[i][j]) {
          sel = i;
          break;
        }
      if (sel == n) continue;
      std::swap(a[r], a[sel]);
      const auto inv = pol.inverse(a[r][j]);
      for (auto& x : a[r]) x = static_cast<std::uint32_t>(std::uint64_t(x) * inv % pol.p);
      for (std::size_t i = 0; i < n; ++i)
        if (i != r && a[i][j]) {
          auto f = a[i][j];
          for (std::size_t k = 0; k <= m; ++k) a[i][k] = pol.sub_mul(a[i][k], f, a[r][k]);
        }
      piv.push_back(j);
      ++r;
    }
    for (std::size_t i = r; i < n; ++i)
      if (a[i][m]) throw IntegrityError("vector is not a cycle");
    std::vector<std::uint32_t> x(m, 0);
    for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = a[k][m];
    return x;
  }

  Coefficients ring_;
  int degree_ = 0;
  std::size_t dim_ = 0;
  std::vector<SparseVec<Integer>> torsion_rows_;
  std::vector<Integer> divisors_;
  std::vector<SparseVec<Integer>> free_rows_;
  std::optional<LatticeEchelon> lattice_;
  std::optional<SpanFp> field_span_;
  std::vector<FpVec> field_basis_;
  AbelianGroupType type_;
};

// Smith invariants of the subgroup generated by `images` inside the group
// with coordinate orders `orders` (0 = free): returns the cokernel type.
inline AbelianGroupType cokernel_type(const std::vector<IntVec>& images,
                                      const std::vector<Integer>& orders, const Coefficients& ring) {
  const std::size_t n = orders.size();
  std::vector<Triplet> t;
  std::size_t col = 0;
  for (const auto& v : images) {
    for (std::size_t i = 0; i < n; ++i)
      if (v[i] != 0) t.push_back({i, col, v[i]});
    ++col;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (orders[i] != 0) t.push_back({i, col++, orders[i]});
  SparseIntMatrix m = SparseIntMatrix::from_triplets(n, col, std::move(t));
  AbelianGroupType out;
  if (ring.is_field()) {
    out.free_rank = n - rank_mod_p(m, ring.p);
    return out;
  }
  SmithResult s = smith_normal_form(m);
  out.free_rank = n - s.rank;
  out.torsion = s.torsion();
  return out;
}

inline std::string describe(const AbelianGroupType& t, const Coefficients& ring) {
  if (t.free_rank == 0 && t.torsion.empty()) return "0";
  std::string base = ring.is_field() ? ring.tag() : "Z";
  std::string s;
  if (t.free_rank) s = t.free_rank == 1 ? base : base + "^" + std::to_string(t.free_rank);
  for (const auto& d : t.torsion) s += (s.empty() ? "" : "+") + ("Z/" + d.str());
  return s;
}

inline AbelianGroupType type_of(const HomologyGroup& g) { return {g.betti, g.torsion}; }

}  // namespace hstab
