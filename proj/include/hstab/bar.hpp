#pragma once

// Normalized bar complex C_k(G; M) = M ⊗ Z[(G∖1)^k] and its functoriality.
//
// With the right action m·g = g^{-1}m:
//   ∂(m[g1|..|gk]) = m·g1 [g2|..|gk] + Σ (−1)^i m[..|g_i g_{i+1}|..] + (−1)^k m[g1|..|g_{k−1}]
// and tuples containing the identity vanish.

#include <hstab/chain_complex.hpp>
#include <hstab/errors.hpp>
#include <hstab/gmodule.hpp>

#include <vector>

namespace hstab {

namespace detail {

struct BarIndexing {
  std::vector<int> nonidentity;  // position -> element index
  std::vector<int> position;     // element index -> position, −1 for identity
  std::size_t base = 0;

  explicit BarIndexing(const FiniteGroup& g) {
    position.assign(g.order(), -1);
    for (std::size_t x = 0; x < g.order(); ++x)
      if (static_cast<int>(x) != g.identity_index()) {
        position[x] = static_cast<int>(nonidentity.size());
        nonidentity.push_back(static_cast<int>(x));
      }
    base = nonidentity.size();
  }
  std::uint64_t cells(int k) const {
    std::uint64_t c = 1;
    for (int i = 0; i < k; ++i) c = saturating_mul(c, base);
    return c;
  }
  void decode(std::uint64_t idx, int k, std::vector<int>& out) const {
    out.assign(k, 0);
    for (int i = k - 1; i >= 0; --i) {
      out[i] = nonidentity[idx % base];
      idx /= base;
    }
  }
  // encodes a tuple of element indices (all non-identity)
  std::uint64_t encode(const std::vector<int>& t) const {
    std::uint64_t idx = 0;
    for (int x : t) idx = idx * base + static_cast<std::uint64_t>(position[x]);
    return idx;
  }
};

inline void check_bar_caps(const FiniteGroup& g, std::size_t module_rank, int top, const HomologyCaps& caps) {
  if (g.order() > caps.bar_group_order)
    throw ResourceError("bar tier limited to groups of order " + std::to_string(caps.bar_group_order),
                        g.order());
  detail::BarIndexing ix(g);
  std::uint64_t nnz = 0;
  for (int k = 1; k <= top; ++k)
    nnz += saturating_mul(saturating_mul(ix.cells(k), module_rank * module_rank), k + 1);
  if (nnz > caps.chain_nonzeros)
    throw ResourceError("bar complex through degree " + std::to_string(top) + " exceeds the nonzero cap",
                        nnz);
}

}  // namespace detail

// Bar complex in degrees 0..top (homology determined through top−1).
inline ChainComplex bar_complex(const GModule& m, int top, const HomologyCaps& caps = {}) {
  if (top < 0) throw InvalidInput("degree cap must be non-negative");
  const FiniteGroup& g = m.group();
  detail::check_bar_caps(g, m.rank(), top, caps);
  detail::BarIndexing ix(g);
  const std::size_t r = m.rank();
  std::vector<std::size_t> ranks;
  for (int k = 0; k <= top; ++k) ranks.push_back(static_cast<std::size_t>(ix.cells(k)) * r);
  std::vector<SparseIntMatrix> bd;
  std::vector<int> t, u;
  for (int k = 1; k <= top; ++k) {
    std::vector<Triplet> trip;
    const std::uint64_t n = ix.cells(k);
    for (std::uint64_t idx = 0; idx < n; ++idx) {
      ix.decode(idx, k, t);
      // face 0: ρ(g1^{-1}) on coefficients
      u.assign(t.begin() + 1, t.end());
      const std::uint64_t f0 = ix.encode(u);
      const IntMatrix& a = m.rho(g.inverse(t[0]));
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i)
          if (a(i, j)) trip.push_back({f0 * r + i, idx * r + j, a(i, j)});
      for (int i = 1; i < k; ++i) {
        int prod = g.multiply(t[i - 1], t[i]);
        if (prod == g.identity_index()) continue;
        u.assign(t.begin(), t.end());
        u[i - 1] = prod;
        u.erase(u.begin() + i);
        const std::uint64_t fi = ix.encode(u);
        for (std::size_t j = 0; j < r; ++j) trip.push_back({fi * r + j, idx * r + j, (i % 2) ? -1 : 1});
      }
      u.assign(t.begin(), t.end() - 1);
      const std::uint64_t fk = ix.encode(u);
      for (std::size_t j = 0; j < r; ++j) trip.push_back({fk * r + j, idx * r + j, (k % 2) ? -1 : 1});
    }
    bd.push_back(SparseIntMatrix::from_triplets(ranks[k - 1], ranks[k], std::move(trip)));
  }
  return ChainComplex(0, std::move(ranks), std::move(bd), m.ring(), top - 1);
}

// Chain map in degree k induced by φ: G → H and an equivariant f: M_G → M_H:
// m[g1|..|gk] ↦ f(m)[φg1|..|φgk], zero when some φ(g_i) = 1.
inline SparseIntMatrix bar_chain_map(const GModule& mg, const GModule& mh, const GroupHom& phi,
                                     const IntMatrix& compat, int k) {
  require_equivariant(mg, mh, phi, compat);
  detail::BarIndexing sx(mg.group()), tx(mh.group());
  const std::size_t rg = mg.rank(), rh = mh.rank();
  std::vector<Triplet> trip;
  std::vector<int> t, u(k);
  const std::uint64_t n = sx.cells(k);
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    sx.decode(idx, k, t);
    bool vanishes = false;
    for (int i = 0; i < k; ++i) {
      u[i] = phi.images[t[i]];
      if (u[i] == mh.group().identity_index()) vanishes = true;
    }
    if (vanishes) continue;
    const std::uint64_t target = tx.encode(u);
    for (std::size_t j = 0; j < rg; ++j)
      for (std::size_t i = 0; i < rh; ++i)
        if (compat(i, j)) trip.push_back({target * rh + i, idx * rg + j, compat(i, j)});
  }
  return SparseIntMatrix::from_triplets(static_cast<std::size_t>(tx.cells(k)) * rh,
                                        static_cast<std::size_t>(n) * rg, std::move(trip));
}

}  // namespace hstab
