#pragma once

// Finite-rank modules over a finite group: Z^r or F_p^r with a left action.

#include <hstab/chain_complex.hpp>
#include <hstab/errors.hpp>
#include <hstab/families.hpp>
#include <hstab/finite_group.hpp>
#include <hstab/linalg.hpp>

#include <memory>
#include <string>
#include <vector>

namespace hstab {

struct HomologyCaps {
  std::uint64_t enumeration = kDefaultEnumerationCap;
  std::size_t bar_group_order = 24;
  std::size_t resolution_group_order = 10'000;
  std::size_t chain_nonzeros = 10'000'000;
  std::size_t generator_budget = 512;  // ZG-generators per resolution degree
};

// Small dense integer matrix, row-major.
struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<long long> a;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  static IntMatrix identity(std::size_t r) {
    IntMatrix m(r, r);
    for (std::size_t i = 0; i < r; ++i) m(i, i) = 1;
    return m;
  }
  long long& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  long long operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols != o.rows) throw InvalidInput("matrix shape mismatch");
    IntMatrix m(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < cols; ++k) {
        long long x = (*this)(i, k);
        if (!x) continue;
        for (std::size_t j = 0; j < o.cols; ++j) m(i, j) += x * o(k, j);
      }
    return m;
  }
  IntMatrix reduced(std::uint32_t p) const {
    if (p == 0) return *this;
    IntMatrix m = *this;
    for (auto& x : m.a) x = ((x % p) + p) % p;
    return m;
  }
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows; ++i) {
      if (i) s += "; ";
      for (std::size_t j = 0; j < cols; ++j) s += (j ? " " : "") + std::to_string((*this)(i, j));
    }
    return s + "]";
  }
};

class GModule {
 public:
  using GroupPtr = std::shared_ptr<const FiniteGroup>;

  // Action given on the group's generators; extended along the Cayley graph
  // and checked against every product x·s.
  static GModule from_generators(GroupPtr g, Coefficients ring, std::size_t rank,
                                 const std::vector<IntMatrix>& generator_action, std::string label) {
    const auto& gens = g->generator_indices();
    if (generator_action.size() != gens.size())
      throw InvalidInput("module " + label + ": need one action matrix per generator (" +
                         std::to_string(gens.size()) + ")");
    GModule m(std::move(g), ring, rank, std::move(label));
    std::vector<IntMatrix> gen;
    for (const auto& a : generator_action) {
      if (a.rows != rank || a.cols != rank) throw InvalidInput("action matrix has wrong shape");
      gen.push_back(a.reduced(ring.p));
    }
    const auto& G = *m.group_;
    std::vector<char> have(G.order(), 0);
    m.action_.assign(G.order(), IntMatrix());
    m.action_[G.identity_index()] = IntMatrix::identity(rank);
    have[G.identity_index()] = 1;
    std::vector<int> queue{G.identity_index()};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      int x = queue[q];
      for (std::size_t k = 0; k < gens.size(); ++k) {
        int y = G.multiply(x, gens[k]);
        IntMatrix a = (m.action_[x] * gen[k]).reduced(ring.p);
        if (!have[y]) {
          have[y] = 1;
          m.action_[y] = std::move(a);
          queue.push_back(y);
        } else if (!(m.action_[y] == a)) {
          throw InvalidInput("module " + m.label_ + ": generator matrices do not define an action (" +
                             G.element(y).to_string() + " gets two different matrices)");
        }
      }
    }
    return m;
  }

  static GModule trivial(GroupPtr g, Coefficients ring = Coefficients::integers(), std::size_t rank = 1) {
    std::vector<IntMatrix> a(g->generator_indices().size(), IntMatrix::identity(rank));
    return from_generators(std::move(g), ring, rank, a, ring.tag() + (rank == 1 ? "" : "^" + std::to_string(rank)));
  }

  // Z^n with g·e_i = ±e_{|g(i)|} for (signed) permutation groups.
  static GModule permutation(GroupPtr g, Coefficients ring = Coefficients::integers()) {
    const Family f = g->family();
    if (f.kind == FamilyKind::GeneralLinear)
      throw InvalidInput("the permutation module is defined for permutation families");
    const auto n = static_cast<std::size_t>(g->rank());
    std::vector<IntMatrix> a;
    for (const auto& s : g->generator_elements()) a.push_back(permutation_matrix(s));
    return from_generators(std::move(g), ring, n, a, "standard");
  }

  // Z with g acting by the sign of its underlying permutation.
  static GModule sign(GroupPtr g, Coefficients ring = Coefficients::integers()) {
    std::vector<IntMatrix> a;
    for (const auto& s : g->generator_elements()) {
      IntMatrix m(1, 1);
      m(0, 0) = permutation_sign(s);
      a.push_back(m);
    }
    return from_generators(std::move(g), ring, 1, a, "sign");
  }

  static IntMatrix permutation_matrix(const GroupElement& s) {
    const auto& pl = s.payload();
    IntMatrix m(pl.size(), pl.size());
    for (std::size_t i = 0; i < pl.size(); ++i) {
      int img = pl[i];
      m(static_cast<std::size_t>(std::abs(img) - 1), i) = img > 0 ? 1 : -1;
    }
    return m;
  }
  static int permutation_sign(const GroupElement& s) {
    if (s.family().kind == FamilyKind::GeneralLinear)
      throw InvalidInput("sign is defined for permutation families");
    const auto& pl = s.payload();
    std::vector<int> p;
    for (int x : pl) p.push_back(std::abs(x) - 1);
    int sign = 1;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = p[j]) {
        seen[j] = 1;
        ++len;
      }
      if (len % 2 == 0) sign = -sign;
    }
    return sign;
  }

  const FiniteGroup& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const Coefficients& ring() const { return ring_; }
  std::size_t rank() const { return rank_; }
  const std::string& label() const { return label_; }
  const IntMatrix& rho(int g) const { return action_[g]; }

  bool is_trivial() const {
    for (const auto& a : action_)
      if (!(a == IntMatrix::identity(rank_))) return false;
    return true;
  }

  // Coinvariants M / <s·m − m : s a generator>, read off the action directly.
  AbelianGroupType coinvariants() const {
    std::vector<IntVec> rel;
    for (int s : group_->generator_indices())
      for (std::size_t j = 0; j < rank_; ++j) {
        IntVec v(rank_);
        for (std::size_t i = 0; i < rank_; ++i) v[i] = action_[s](i, j) - (i == j ? 1 : 0);
        rel.push_back(std::move(v));
      }
    return cokernel_type(rel, std::vector<Integer>(rank_, 0), ring_);
  }

 private:
  GModule(GroupPtr g, Coefficients ring, std::size_t rank, std::string label)
      : group_(std::move(g)), ring_(ring), rank_(rank), label_(std::move(label)) {}

  GroupPtr group_;
  Coefficients ring_;
  std::size_t rank_ = 0;
  std::string label_;
  std::vector<IntMatrix> action_;
};

// Checks f ∘ ρ_G(g) = ρ_H(φ(g)) ∘ f on generators.
inline void require_equivariant(const GModule& mg, const GModule& mh, const GroupHom& phi,
                                const IntMatrix& compat) {
  if (compat.rows != mh.rank() || compat.cols != mg.rank())
    throw InvalidInput("module map has shape " + std::to_string(compat.rows) + "x" +
                       std::to_string(compat.cols) + ", expected " + std::to_string(mh.rank()) + "x" +
                       std::to_string(mg.rank()));
  const std::uint32_t p = mh.ring().p;
  for (int s : mg.group().generator_indices()) {
    IntMatrix lhs = (compat * mg.rho(s)).reduced(p);
    IntMatrix rhs = (mh.rho(phi.images[s]) * compat).reduced(p);
    if (!(lhs == rhs))
      throw InvalidInput("module map is not equivariant at generator " +
                         mg.group().element(s).to_string());
  }
}

}  // namespace hstab
