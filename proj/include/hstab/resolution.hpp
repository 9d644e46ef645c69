#pragma once

// Free resolutions F_k = (ZG)^{r_k} → Z built degree by degree.
//
// F_1 has one generator per group generator s with ∂e_s = s − 1. Degree 2 is
// seeded with the fundamental cycles of the Cayley graph (a Z-basis of
// ker ∂_1). Higher degrees take a basis of the kernel and keep a candidate as
// a new ZG-generator whenever it is not already in the span of the |G|
// translates of earlier choices.

#include <hstab/chain_complex.hpp>
#include <hstab/errors.hpp>
#include <hstab/gmodule.hpp>
#include <hstab/linalg.hpp>

#include <algorithm>
#include <limits>
#include <type_traits>
#include <numeric>
#include <vector>

namespace hstab {

struct ResolutionTerm {
  std::uint32_t gen = 0;  // generator of F_{k−1}
  std::uint32_t g = 0;    // group element index: the basis element g·e_gen
  Integer coeff;
};

struct ResolutionDegreeLog {
  int degree = 0;
  std::size_t generators = 0;
  std::size_t free_rank = 0;      // |G|·r_k
  std::size_t kernel_rank = 0;    // rank of ker ∂_{k−1} covered by the image of ∂_k
  std::size_t candidates_tested = 0;
};

class FreeResolution {
 public:
  GModule::GroupPtr group;
  Coefficients ring;
  std::vector<std::size_t> ranks;                                // r_0 .. r_top
  std::vector<std::vector<std::vector<ResolutionTerm>>> images;  // images[k][j] = ∂e_j
  bool degree_two_unreduced = false;  // degree 2 uses every fundamental cycle
  std::vector<int> tree_parent;       // Cayley BFS tree: x = parent·s_{tree_gen}
  std::vector<int> tree_gen;
  std::vector<ResolutionDegreeLog> log;

  int top_degree() const { return static_cast<int>(ranks.size()) - 1; }
  // Homology of the tensored complex is determined through this degree.
  int exact_through() const { return top_degree() - 1; }

  // Σ y·e_t over the tree path from the identity to x.
  std::vector<ResolutionTerm> path(int x) const {
    std::vector<ResolutionTerm> out;
    while (tree_parent[x] >= 0) {
      out.push_back({static_cast<std::uint32_t>(tree_gen[x]), static_cast<std::uint32_t>(tree_parent[x]), 1});
      x = tree_parent[x];
    }
    return out;
  }

  // ∂∂ = 0 over the group ring (mod p over a field); returns the first failing degree or 0.
  int check_boundary_squares() const {
    const FiniteGroup& G = *group;
    const std::size_t N = G.order();
    for (int k = 2; k <= top_degree(); ++k)
      for (const auto& img : images[k]) {
        std::vector<Integer> acc(N * ranks[k - 2]);
        for (const auto& t : img)
          for (const auto& u : images[k - 1][t.gen])
            acc[u.gen * N + G.multiply(static_cast<int>(t.g), static_cast<int>(u.g))] += t.coeff * u.coeff;
        for (const auto& x : acc)
          if (ring.is_field() ? reduce_mod(x, ring.p) != 0 : x != 0) return k;
      }
    return 0;
  }
};

namespace detail {

struct ZBackend {
  using Vec = IntVec;
  using Echelon = LatticeEchelon;
  static constexpr bool saturation_matters = true;
  Coefficients ring;
  Vec zero(std::size_t n) const { return IntVec(n); }
  void add(Vec& v, std::size_t i, const Integer& c) const { v[i] += c; }
  Integer get(const Vec& v, std::size_t i) const { return v[i]; }
  Echelon echelon(std::size_t n) const { return LatticeEchelon(n); }
  std::vector<Vec> kernel(const SparseIntMatrix& m) const { return kernel_z(m); }
  std::size_t support(const Vec& v) const {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; }));
  }
};

struct FpBackend {
  using Vec = FpVec;
  using Echelon = SpanFp;
  static constexpr bool saturation_matters = false;
  Coefficients ring;
  Vec zero(std::size_t n) const { return FpVec(n, 0); }
  void add(Vec& v, std::size_t i, const Integer& c) const {
    v[i] = static_cast<std::uint32_t>((v[i] + reduce_mod(c, ring.p)) % ring.p);
  }
  Integer get(const Vec& v, std::size_t i) const { return v[i]; }
  Echelon echelon(std::size_t n) const { return SpanFp(n, ring.p); }
  std::vector<Vec> kernel(const SparseIntMatrix& m) const { return kernel_fp(m, ring.p); }
  std::size_t support(const Vec& v) const {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](auto x) { return x != 0; }));
  }
};

struct F2Backend {
  using Vec = BitVec;
  using Echelon = SpanF2;
  static constexpr bool saturation_matters = false;
  Coefficients ring;
  Vec zero(std::size_t n) const { return BitVec(n); }
  void add(Vec& v, std::size_t i, const Integer& c) const {
    if (reduce_mod(c, 2)) v.flip(i);
  }
  Integer get(const Vec& v, std::size_t i) const { return v.get(i) ? 1 : 0; }
  Echelon echelon(std::size_t n) const { return SpanF2(n); }
  std::vector<Vec> kernel(const SparseIntMatrix& m) const {
    std::vector<BitVec> rows(m.rows(), BitVec(m.cols()));
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (const auto& [i, x] : m.column(j))
        if (reduce_mod(x, 2)) rows[i].flip(j);
    return kernel_f2(std::move(rows), m.cols());
  }
  std::size_t support(const Vec& v) const {
    std::size_t c = 0;
    for (std::size_t i = v.next(0); i < v.size(); i = v.next(i + 1)) ++c;
    return c;
  }
};

template <class B>
typename B::Vec to_vec(const B& be, const std::vector<ResolutionTerm>& terms, std::size_t N, std::size_t blocks) {
  auto v = be.zero(N * blocks);
  for (const auto& t : terms) be.add(v, t.gen * N + t.g, t.coeff);
  return v;
}

template <class B>
std::vector<ResolutionTerm> to_terms(const B& be, const typename B::Vec& v, std::size_t N, std::size_t blocks) {
  std::vector<ResolutionTerm> out;
  for (std::size_t i = 0; i < N * blocks; ++i) {
    Integer c = be.get(v, i);
    if (c != 0) out.push_back({static_cast<std::uint32_t>(i / N), static_cast<std::uint32_t>(i % N), c});
  }
  return out;
}

// g·v on (ZG)^blocks, using the left multiplication table row of g.
template <class B>
typename B::Vec translate(const B& be, const typename B::Vec& v, const std::vector<int>& left_mult,
                          std::size_t N, std::size_t blocks) {
  auto out = be.zero(N * blocks);
  for (std::size_t j = 0; j < blocks; ++j)
    for (std::size_t h = 0; h < N; ++h) {
      Integer c = be.get(v, j * N + h);
      if (c != 0) be.add(out, j * N + left_mult[h], c);
    }
  return out;
}

template <class B>
std::vector<typename B::Vec> select_generators(const B& be, const FiniteGroup& G, std::size_t blocks,
                                               std::vector<typename B::Vec> candidates,
                                               std::size_t kernel_rank, std::size_t budget,
                                               ResolutionDegreeLog& log) {
  const std::size_t N = G.order();
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> weight(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) weight[i] = be.support(candidates[i]);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return weight[a] < weight[b]; });
  std::vector<std::vector<int>> mult(N, std::vector<int>(N));
  for (std::size_t g = 0; g < N; ++g)
    for (std::size_t h = 0; h < N; ++h) mult[g][h] = G.multiply(static_cast<int>(g), static_cast<int>(h));
  auto span = be.echelon(N * blocks);
  std::vector<typename B::Vec> chosen;
  for (auto idx : order) {
    if (!B::saturation_matters && span.rank() == kernel_rank) break;
    ++log.candidates_tested;
    const auto& c = candidates[idx];
    if (span.contains(c)) continue;
    if (chosen.size() >= budget)
      throw ResourceError("resolution generator search exceeded its budget in degree " +
                              std::to_string(log.degree),
                          chosen.size());
    chosen.push_back(c);
    for (std::size_t g = 0; g < N; ++g) span.insert(translate(be, c, mult[g], N, blocks));
  }
  if (span.rank() != kernel_rank)
    throw IntegrityError("resolution not exact in degree " + std::to_string(log.degree - 1) + ": image rank " +
                         std::to_string(span.rank()) + ", kernel rank " + std::to_string(kernel_rank));
  log.kernel_rank = kernel_rank;
  return chosen;
}

// Over Z a dense lattice echelon suffers coefficient growth. Instead: grow
// the chosen set until its translates have full rank mod every prime in a
// working set, then test saturation with a Smith form. Any prime dividing
// an invariant factor joins the set and the search resumes. Since the
// candidates span the (saturated) kernel, this ends with image = kernel.
inline std::vector<IntVec> select_generators_z(const FiniteGroup& G, std::size_t blocks,
                                               const std::vector<IntVec>& candidates, std::size_t kernel_rank,
                                               std::size_t budget, ResolutionDegreeLog& log) {
  const std::size_t N = G.order(), n = N * blocks;
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> weight(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    weight[i] = static_cast<std::size_t>(
        std::count_if(candidates[i].begin(), candidates[i].end(), [](const Integer& x) { return x != 0; }));
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return weight[a] < weight[b]; });
  std::vector<std::vector<int>> mult(N, std::vector<int>(N));
  for (std::size_t g = 0; g < N; ++g)
    for (std::size_t h = 0; h < N; ++h) mult[g][h] = G.multiply(static_cast<int>(g), static_cast<int>(h));

  auto reduce = [&](const IntVec& v, std::uint32_t p) {
    FpVec out(n);
    for (std::size_t i = 0; i < n; ++i)
      if (v[i] != 0) out[i] = reduce_mod(v[i], p);
    return out;
  };
  auto translate_fp = [&](const FpVec& v, std::size_t g) {
    FpVec out(n);
    for (std::size_t j = 0; j < blocks; ++j)
      for (std::size_t h = 0; h < N; ++h) out[j * N + mult[g][h]] = v[j * N + h];
    return out;
  };
  std::vector<SpanFp> spans;
  std::vector<IntVec> chosen;
  std::vector<char> used(candidates.size(), 0);
  auto add_translates = [&](SpanFp& s, const IntVec& c) {
    FpVec base = reduce(c, s.prime());
    for (std::size_t g = 0; g < N; ++g) s.insert(translate_fp(base, g));
  };
  auto add_prime = [&](std::uint32_t p) {
    for (const auto& s : spans)
      if (s.prime() == p) return false;
    spans.emplace_back(n, p);
    for (const auto& c : chosen) add_translates(spans.back(), c);
    return true;
  };
  auto full = [&] {
    for (const auto& s : spans)
      if (s.rank() < kernel_rank) return false;
    return true;
  };
  add_prime(2147483647u);
  for (;;) {
    for (auto idx : order) {
      if (full()) break;
      if (used[idx]) continue;
      ++log.candidates_tested;
      bool needed = false;
      for (const auto& s : spans)
        if (s.rank() < kernel_rank && !s.contains(reduce(candidates[idx], s.prime()))) needed = true;
      if (!needed) continue;
      if (chosen.size() >= budget)
        throw ResourceError("resolution generator search exceeded its budget in degree " +
                                std::to_string(log.degree),
                            chosen.size());
      used[idx] = 1;
      chosen.push_back(candidates[idx]);
      for (auto& s : spans) add_translates(s, chosen.back());
    }
    if (!full())
      throw IntegrityError("resolution not exact in degree " + std::to_string(log.degree - 1) +
                           ": image rank below kernel rank " + std::to_string(kernel_rank));
    std::vector<Triplet> trip;
    for (std::size_t j = 0; j < chosen.size(); ++j)
      for (std::size_t g = 0; g < N; ++g)
        for (std::size_t b = 0; b < blocks; ++b)
          for (std::size_t h = 0; h < N; ++h) {
            const Integer& x = chosen[j][b * N + h];
            if (x != 0) trip.push_back({b * N + mult[g][h], j * N + g, x});
          }
    auto snf = smith_normal_form(SparseIntMatrix::from_triplets(n, N * chosen.size(), std::move(trip)));
    if (snf.rank != kernel_rank)
      throw IntegrityError("resolution not exact in degree " + std::to_string(log.degree - 1) + ": image rank " +
                           std::to_string(snf.rank) + ", kernel rank " + std::to_string(kernel_rank));
    bool grew = false;
    for (const auto& d : snf.torsion()) {
      if (d > std::numeric_limits<std::uint32_t>::max())
        throw ResourceError("saturation index too large to factor", chosen.size());
      auto r = static_cast<std::uint64_t>(d);
      for (std::uint64_t q = 2; q * q <= r; ++q)
        if (r % q == 0) {
          grew |= add_prime(static_cast<std::uint32_t>(q));
          while (r % q == 0) r /= q;
        }
      if (r > 1) grew |= add_prime(static_cast<std::uint32_t>(r));
    }
    if (snf.torsion().empty()) break;
    if (!grew) throw IntegrityError("saturation search made no progress in degree " + std::to_string(log.degree));
  }
  log.kernel_rank = kernel_rank;
  return chosen;
}

// Z-matrix of ∂_k: column (j, g) is g·∂e_j.
inline SparseIntMatrix boundary_matrix(const FreeResolution& res, int k) {
  const FiniteGroup& G = *res.group;
  const std::size_t N = G.order();
  std::vector<Triplet> trip;
  for (std::size_t j = 0; j < res.images[k].size(); ++j)
    for (std::size_t g = 0; g < N; ++g)
      for (const auto& t : res.images[k][j])
        trip.push_back({t.gen * N + G.multiply(static_cast<int>(g), static_cast<int>(t.g)), j * N + g, t.coeff});
  return SparseIntMatrix::from_triplets(N * res.ranks[k - 1], N * res.ranks[k], std::move(trip));
}

template <class B>
void extend_resolution(const B& be, FreeResolution& res, int top, const HomologyCaps& caps) {
  const FiniteGroup& G = *res.group;
  const std::size_t N = G.order();
  for (int k = 2; k <= top; ++k) {
    ResolutionDegreeLog log;
    log.degree = k;
    std::vector<typename B::Vec> candidates;
    std::size_t kernel_rank = 0;
    if (k == 2) {
      // fundamental cycles: path(g) + g·e_t − path(g·t) for non-tree edges
      const auto& gens = G.generator_indices();
      for (std::size_t g = 0; g < N; ++g)
        for (std::size_t t = 0; t < gens.size(); ++t) {
          int gt = G.multiply(static_cast<int>(g), gens[t]);
          if (res.tree_parent[gt] == static_cast<int>(g) && res.tree_gen[gt] == static_cast<int>(t)) continue;
          auto terms = res.path(static_cast<int>(g));
          terms.push_back({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(g), 1});
          for (auto u : res.path(gt)) {
            u.coeff = -1;
            terms.push_back(u);
          }
          candidates.push_back(to_vec(be, terms, N, gens.size()));
        }
      kernel_rank = N * gens.size() - (N - 1);
    } else {
      candidates = be.kernel(boundary_matrix(res, k - 1));
      kernel_rank = candidates.size();
    }
    std::vector<typename B::Vec> chosen;
    if (k == 2 && res.degree_two_unreduced) {
      chosen = std::move(candidates);
      log.kernel_rank = kernel_rank;
      log.candidates_tested = chosen.size();
    } else if constexpr (std::is_same_v<B, ZBackend>) {
      chosen = select_generators_z(G, res.ranks[k - 1], candidates, kernel_rank, caps.generator_budget, log);
    } else {
      chosen = select_generators(be, G, res.ranks[k - 1], std::move(candidates), kernel_rank,
                                 caps.generator_budget, log);
    }
    res.images.emplace_back();
    for (const auto& c : chosen) res.images[k].push_back(to_terms(be, c, N, res.ranks[k - 1]));
    res.ranks.push_back(chosen.size());
    log.generators = chosen.size();
    log.free_rank = N * chosen.size();
    res.log.push_back(log);
  }
}

}  // namespace detail

// Resolution through degree `top` (homology then determined through top−1).
// With `low_degree_only`, degree 2 keeps every fundamental cycle; this is
// enough for H_1 and avoids any search.
inline FreeResolution build_resolution(GModule::GroupPtr group, Coefficients ring, int top,
                                       bool low_degree_only = false, const HomologyCaps& caps = {}) {
  const FiniteGroup& G = *group;
  if (G.order() > caps.resolution_group_order && !(low_degree_only && top <= 2))
    throw ResourceError("resolution tier limited to groups of order " +
                            std::to_string(caps.resolution_group_order),
                        G.order());
  if (top < 0) throw InvalidInput("degree cap must be non-negative");
  FreeResolution res;
  res.group = group;
  res.ring = ring;
  res.degree_two_unreduced = low_degree_only;
  res.ranks = {1};
  res.images.emplace_back();
  const auto& gens = G.generator_indices();
  if (top >= 1) {
    res.ranks.push_back(gens.size());
    res.images.emplace_back();
    for (int s : gens)
      res.images[1].push_back({{0, static_cast<std::uint32_t>(s), 1},
                               {0, static_cast<std::uint32_t>(G.identity_index()), -1}});
    ResolutionDegreeLog l1;
    l1.degree = 1;
    l1.generators = gens.size();
    l1.free_rank = G.order() * gens.size();
    l1.kernel_rank = G.order() - 1;
    res.log.push_back(l1);
  }
  // BFS tree of the right Cayley graph
  res.tree_parent.assign(G.order(), -2);
  res.tree_gen.assign(G.order(), -1);
  res.tree_parent[G.identity_index()] = -1;
  std::vector<int> queue{G.identity_index()};
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (std::size_t t = 0; t < gens.size(); ++t) {
      int y = G.multiply(queue[q], gens[t]);
      if (res.tree_parent[y] != -2) continue;
      res.tree_parent[y] = queue[q];
      res.tree_gen[y] = static_cast<int>(t);
      queue.push_back(y);
    }
  if (queue.size() != G.order()) throw IntegrityError("generators do not generate the group");
  if (top >= 2) {
    if (ring.p == 2)
      detail::extend_resolution(detail::F2Backend{ring}, res, top, caps);
    else if (ring.is_field())
      detail::extend_resolution(detail::FpBackend{ring}, res, top, caps);
    else
      detail::extend_resolution(detail::ZBackend{ring}, res, top, caps);
  }
  return res;
}

// M ⊗_G F: block (i, j) of ∂_k is Σ_g a_{j,i,g} ρ(g^{-1}).
inline ChainComplex tensor_resolution(const FreeResolution& res, const GModule& m) {
  if (m.group_ptr() != res.group && &m.group() != res.group.get())
    throw InvalidInput("module and resolution are over different groups");
  if (!(m.ring() == res.ring) && res.ring.is_field())
    throw InvalidInput("a resolution over " + res.ring.tag() + " tensors only with " + res.ring.tag() + "-modules");
  const FiniteGroup& G = *res.group;
  const std::size_t r = m.rank();
  std::vector<std::size_t> ranks;
  for (auto x : res.ranks) ranks.push_back(x * r);
  std::vector<SparseIntMatrix> bd;
  for (int k = 1; k <= res.top_degree(); ++k) {
    std::vector<Triplet> trip;
    for (std::size_t j = 0; j < res.images[k].size(); ++j)
      for (const auto& t : res.images[k][j]) {
        const IntMatrix& a = m.rho(G.inverse(static_cast<int>(t.g)));
        for (std::size_t c = 0; c < r; ++c)
          for (std::size_t row = 0; row < r; ++row)
            if (a(row, c)) trip.push_back({t.gen * r + row, j * r + c, t.coeff * a(row, c)});
      }
    bd.push_back(SparseIntMatrix::from_triplets(ranks[k - 1], ranks[k], std::move(trip)));
  }
  return ChainComplex(0, std::move(ranks), std::move(bd), m.ring(), res.exact_through());
}

// Degree-1 part of the chain map between tensored resolutions over φ: the
// generator e_s goes to the tree path to φ(s) in the target Cayley graph.
inline SparseIntMatrix resolution_degree_one_map(const FreeResolution& src, const FreeResolution& tgt,
                                                 const GModule& mg, const GModule& mh, const GroupHom& phi,
                                                 const IntMatrix& compat) {
  require_equivariant(mg, mh, phi, compat);
  const FiniteGroup& G = *src.group;
  const FiniteGroup& H = *tgt.group;
  const std::size_t rg = mg.rank(), rh = mh.rank();
  std::vector<Triplet> trip;
  const auto& gens = G.generator_indices();
  for (std::size_t s = 0; s < gens.size(); ++s)
    for (const auto& e : tgt.path(phi.images[gens[s]])) {
      IntMatrix a = mh.rho(H.inverse(static_cast<int>(e.g))) * compat;
      for (std::size_t c = 0; c < rg; ++c)
        for (std::size_t row = 0; row < rh; ++row)
          if (a(row, c)) trip.push_back({e.gen * rh + row, s * rg + c, a(row, c)});
    }
  return SparseIntMatrix::from_triplets(tgt.ranks.at(1) * rh, src.ranks.at(1) * rg, std::move(trip));
}

}  // namespace hstab
