#pragma once

// Semi-simplicial sets of destabilizations W_n and their simplicial shadows S_n.

#include <hstab/chain_complex.hpp>
#include <hstab/errors.hpp>
#include <hstab/families.hpp>
#include <hstab/finite_group.hpp>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace hstab {

// Simplices of dimension p are 0..count(p)-1; face(p, i)[s] is d_i of s.
class SemiSimplicialSet {
 public:
  SemiSimplicialSet() = default;
  explicit SemiSimplicialSet(std::vector<std::size_t> counts,
                             std::vector<std::vector<std::vector<std::uint32_t>>> faces,
                             std::optional<int> complete_through = std::nullopt)
      : counts_(std::move(counts)), faces_(std::move(faces)) {
    if (faces_.size() != counts_.size())
      throw InvalidInput("face table must have one entry per dimension");
    for (std::size_t p = 0; p < counts_.size(); ++p) {
      if (p == 0) {
        if (!faces_[0].empty()) throw InvalidInput("vertices have no faces");
        continue;
      }
      if (faces_[p].size() != p + 1)
        throw InvalidInput("dimension " + std::to_string(p) + " needs " + std::to_string(p + 1) +
                           " face maps");
      for (std::size_t i = 0; i <= p; ++i) {
        if (faces_[p][i].size() != counts_[p])
          throw InvalidInput("face map d_" + std::to_string(i) + " in dimension " +
                             std::to_string(p) + " is not total");
        for (auto t : faces_[p][i])
          if (t >= counts_[p - 1]) throw InvalidInput("face index out of range");
      }
    }
    complete_through_ = complete_through.value_or(dim());
  }

  // Highest stored dimension (−1 when empty).
  int dim() const {
    for (int p = static_cast<int>(counts_.size()) - 1; p >= 0; --p)
      if (counts_[p] > 0) return p;
    return -1;
  }
  int levels() const { return static_cast<int>(counts_.size()); }
  // All simplices of dimension ≤ complete_through are stored and no higher
  // ones are missing below that bound.
  int complete_through() const { return complete_through_; }
  std::size_t count(int p) const {
    return p >= 0 && p < static_cast<int>(counts_.size()) ? counts_[p] : 0;
  }
  std::vector<std::size_t> counts() const { return counts_; }
  std::uint32_t face(int p, int i, std::uint32_t s) const { return faces_[p][i][s]; }
  const std::vector<std::uint32_t>& face_map(int p, int i) const { return faces_[p][i]; }

  // First violation of d_i d_j = d_{j−1} d_i (i < j), or empty.
  std::string check_identities() const {
    for (int p = 2; p < levels(); ++p)
      for (int j = 1; j <= p; ++j)
        for (int i = 0; i < j; ++i)
          for (std::uint32_t s = 0; s < count(p); ++s)
            if (face(p - 1, i, face(p, j, s)) != face(p - 1, j - 1, face(p, i, s)))
              return "d_" + std::to_string(i) + " d_" + std::to_string(j) + " != d_" +
                     std::to_string(j - 1) + " d_" + std::to_string(i) + " on simplex " +
                     std::to_string(s) + " of dimension " + std::to_string(p);
    return {};
  }

  // Vertex j of a p-simplex: d_0^j d_{j+1}^{p−j}.
  std::uint32_t vertex(int p, std::uint32_t s, int j) const {
    std::uint32_t x = s;
    int q = p;
    for (int k = 0; k < p - j; ++k, --q) x = face(q, q, x);
    for (int k = 0; k < j; ++k, --q) x = face(q, 0, x);
    return x;
  }

  // Plain-text incidence: "dim id : face_0 ... face_dim" per simplex.
  void write_incidence(std::ostream& os) const {
    for (int p = 0; p < levels(); ++p)
      for (std::uint32_t s = 0; s < count(p); ++s) {
        os << p << ' ' << s << " :";
        if (p > 0)
          for (int i = 0; i <= p; ++i) os << ' ' << face(p, i, s);
        os << '\n';
      }
  }

  nlohmann::json summary() const {
    return {{"dimension", dim()}, {"counts", counts_}, {"complete_through", complete_through_}};
  }

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::vector<std::vector<std::uint32_t>>> faces_;
  int complete_through_ = -1;
};

// Simplicial complex on vertices 0..v−1, stored as all simplices (sorted
// vertex lists) per dimension.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  SimplicialComplex(std::size_t vertices, std::vector<std::vector<std::uint32_t>> simplices)
      : vertices_(vertices) {
    std::set<std::vector<std::uint32_t>> all;
    for (auto s : simplices) {
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw InvalidInput("simplex with repeated vertex");
      for (auto v : s)
        if (v >= vertices) throw InvalidInput("vertex out of range");
      if (!s.empty()) all.insert(std::move(s));
    }
    for (std::uint32_t v = 0; v < vertices; ++v) all.insert({v});
    for (const auto& s : all) {
      std::size_t p = s.size() - 1;
      if (simplices_.size() <= p) simplices_.resize(p + 1);
      simplices_[p].push_back(s);
    }
    for (auto& level : simplices_) std::sort(level.begin(), level.end());
  }

  std::size_t vertex_count() const { return vertices_; }
  int dim() const { return static_cast<int>(simplices_.size()) - 1; }
  const std::vector<std::vector<std::uint32_t>>& simplices(int p) const { return simplices_.at(p); }
  std::size_t count(int p) const {
    return p >= 0 && p <= dim() ? simplices_[p].size() : 0;
  }

  // True when every face of every simplex is present.
  bool is_downward_closed() const {
    for (int p = 1; p <= dim(); ++p)
      for (const auto& s : simplices_[p])
        for (std::size_t i = 0; i < s.size(); ++i) {
          auto f = s;
          f.erase(f.begin() + i);
          if (!std::binary_search(simplices_[p - 1].begin(), simplices_[p - 1].end(), f))
            return false;
        }
    return true;
  }

  bool is_full_simplex() const {
    return vertices_ > 0 && dim() == static_cast<int>(vertices_) - 1;
  }

  // Ordered semi-simplicial model: d_i removes the i-th smallest vertex.
  SemiSimplicialSet as_semi_simplicial() const {
    std::vector<std::size_t> counts;
    std::vector<std::vector<std::vector<std::uint32_t>>> faces;
    for (int p = 0; p <= dim(); ++p) {
      counts.push_back(simplices_[p].size());
      faces.emplace_back();
      if (p == 0) continue;
      faces[p].assign(p + 1, std::vector<std::uint32_t>(simplices_[p].size()));
      for (std::size_t s = 0; s < simplices_[p].size(); ++s)
        for (int i = 0; i <= p; ++i) {
          auto f = simplices_[p][s];
          f.erase(f.begin() + i);
          auto it = std::lower_bound(simplices_[p - 1].begin(), simplices_[p - 1].end(), f);
          faces[p][i][s] = static_cast<std::uint32_t>(it - simplices_[p - 1].begin());
        }
    }
    return SemiSimplicialSet(std::move(counts), std::move(faces));
  }

  nlohmann::json summary() const {
    std::vector<std::size_t> c;
    for (int p = 0; p <= dim(); ++p) c.push_back(count(p));
    return {{"vertices", vertices_}, {"dimension", dim()}, {"counts", c}};
  }

 private:
  std::size_t vertices_ = 0;
  std::vector<std::vector<std::vector<std::uint32_t>>> simplices_;
};

// Cellular chains: ∂ = Σ (−1)^i d_i; an augmented complex adds degree −1.
inline ChainComplex chain_complex(const SemiSimplicialSet& x, bool reduced,
                                  Coefficients ring = Coefficients::integers()) {
  std::vector<std::size_t> ranks;
  std::vector<SparseIntMatrix> bd;
  const int top = x.levels() - 1;
  if (reduced) ranks.push_back(1);
  for (int p = 0; p <= top; ++p) ranks.push_back(x.count(p));
  if (reduced) {
    std::vector<Triplet> t;
    for (std::size_t s = 0; s < x.count(0); ++s) t.push_back({0, s, 1});
    bd.push_back(SparseIntMatrix::from_triplets(1, x.count(0), std::move(t)));
  }
  for (int p = 1; p <= top; ++p) {
    std::vector<Triplet> t;
    for (std::uint32_t s = 0; s < x.count(p); ++s)
      for (int i = 0; i <= p; ++i) t.push_back({x.face(p, i, s), s, (i % 2 == 0) ? 1 : -1});
    bd.push_back(SparseIntMatrix::from_triplets(x.count(p - 1), x.count(p), std::move(t)));
  }
  return ChainComplex(reduced ? -1 : 0, std::move(ranks), std::move(bd), ring,
                      x.complete_through());
}

inline ChainComplex chain_complex(const SimplicialComplex& k, bool reduced,
                                  Coefficients ring = Coefficients::integers()) {
  return chain_complex(k.as_semi_simplicial(), reduced, ring);
}

// Injective words on {1..n}: p-simplices are injective (p+1)-tuples in
// lexicographic order; d_i forgets the (i+1)-st letter.
struct InjectiveWords {
  SemiSimplicialSet space;
  std::vector<std::vector<std::vector<int>>> words;  // words[p][s]
};

inline InjectiveWords injective_words_with_labels(int n, std::optional<int> dim_cap = std::nullopt) {
  if (n < 0) throw InvalidInput("n must be non-negative");
  const int top = std::min(dim_cap.value_or(n - 1), n - 1);
  InjectiveWords out;
  std::vector<std::map<std::vector<int>, std::uint32_t>> index(std::max(top + 1, 0));
  out.words.resize(std::max(top + 1, 0));
  for (int p = 0; p <= top; ++p) {
    std::vector<int> w;
    std::vector<char> used(n + 1, 0);
    auto rec = [&](auto&& self) -> void {
      if (static_cast<int>(w.size()) == p + 1) {
        index[p].emplace(w, static_cast<std::uint32_t>(out.words[p].size()));
        out.words[p].push_back(w);
        return;
      }
      for (int a = 1; a <= n; ++a) {
        if (used[a]) continue;
        used[a] = 1;
        w.push_back(a);
        self(self);
        w.pop_back();
        used[a] = 0;
      }
    };
    rec(rec);
  }
  std::vector<std::size_t> counts;
  std::vector<std::vector<std::vector<std::uint32_t>>> faces;
  for (int p = 0; p <= top; ++p) {
    counts.push_back(out.words[p].size());
    faces.emplace_back();
    if (p == 0) continue;
    faces[p].assign(p + 1, std::vector<std::uint32_t>(out.words[p].size()));
    for (std::size_t s = 0; s < out.words[p].size(); ++s)
      for (int i = 0; i <= p; ++i) {
        auto w = out.words[p][s];
        w.erase(w.begin() + i);
        faces[p][i][s] = index[p - 1].at(w);
      }
  }
  out.space = SemiSimplicialSet(std::move(counts), std::move(faces));
  return out;
}

inline SemiSimplicialSet injective_words(int n, std::optional<int> dim_cap = std::nullopt) {
  return injective_words_with_labels(n, dim_cap).space;
}

// G_n / im(G_{n−p−1}) with the subgroup acting on the first n−p−1 slots.
struct CosetTable {
  int n = 0;
  int p = 0;
  int subgroup_rank = 0;
  std::vector<std::uint32_t> coset_of;        // by element index of G_n
  std::vector<int> representatives;           // least element of each coset
  std::vector<int> subgroup;                  // element indices of the image
};

// The elements id_{n−p−1} ⊕ b_{i,1}^{-1} ⊕ id_{p−i} realizing d_i.
inline GroupElement face_multiplier(const Family& f, int n, int p, int i) {
  return block_sum(block_sum(identity(f, n - p - 1), inverse(braiding(f, i, 1))),
                   identity(f, p - i));
}

inline CosetTable coset_table(const FiniteGroup& g, int p) {
  const int n = g.rank();
  CosetTable t;
  t.n = n;
  t.p = p;
  t.subgroup_rank = n - p - 1;
  const Family& f = g.family();
  const GroupElement tail = identity(f, p + 1);
  for (const auto& h : enumerate(f, t.subgroup_rank)) t.subgroup.push_back(g.index_of(block_sum(h, tail)));
  std::sort(t.subgroup.begin(), t.subgroup.end());
  t.subgroup.erase(std::unique(t.subgroup.begin(), t.subgroup.end()), t.subgroup.end());
  constexpr std::uint32_t kUnset = ~0u;
  t.coset_of.assign(g.order(), kUnset);
  // elements are sorted by payload, so the first unvisited one is the least
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (t.coset_of[x] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(t.representatives.size());
    t.representatives.push_back(static_cast<int>(x));
    for (int h : t.subgroup) t.coset_of[g.multiply(static_cast<int>(x), h)] = id;
  }
  return t;
}

struct HypothesisReport {
  bool passed = true;
  struct Level {
    int p = 0;
    std::size_t simplices = 0;
    std::size_t orbit_size = 0;
    std::size_t stabilizer_order = 0;
    std::size_t subgroup_order = 0;  // |G_{n−p−1}|
    bool transitive = false;
    bool stabilizer_matches = false;
    bool stabilization_injective = false;
  };
  std::vector<Level> levels;
  std::string failure;
};

inline nlohmann::json to_json(const HypothesisReport& r) {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : r.levels)
    lv.push_back({{"p", l.p},
                  {"simplices", l.simplices},
                  {"orbit_size", l.orbit_size},
                  {"stabilizer_order", l.stabilizer_order},
                  {"subgroup_order", l.subgroup_order},
                  {"transitive", l.transitive},
                  {"stabilizer_matches", l.stabilizer_matches},
                  {"stabilization_injective", l.stabilization_injective}});
  return {{"passed", r.passed}, {"levels", lv}, {"failure", r.failure}};
}

namespace detail {

inline HypothesisReport check_levels(const FiniteGroup& g, const std::vector<CosetTable>& tables) {
  HypothesisReport rep;
  const Family& f = g.family();
  const int n = g.rank();
  for (const auto& t : tables) {
    HypothesisReport::Level lv;
    lv.p = t.p;
    lv.simplices = t.representatives.size();
    // orbit of the base simplex under the generators
    const std::uint32_t base = t.coset_of[g.identity_index()];
    std::vector<char> seen(t.representatives.size(), 0);
    std::vector<std::uint32_t> queue{base};
    seen[base] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int s : g.generator_indices()) {
        auto y = t.coset_of[g.multiply(s, t.representatives[queue[q]])];
        if (!seen[y]) {
          seen[y] = 1;
          queue.push_back(y);
        }
      }
    lv.orbit_size = queue.size();
    lv.transitive = lv.orbit_size == lv.simplices;
    // stabilizer of the base simplex versus the (p+1)-fold stabilized image
    std::vector<int> stab;
    for (std::size_t x = 0; x < g.order(); ++x)
      if (t.coset_of[x] == base) stab.push_back(static_cast<int>(x));
    std::vector<int> image;
    const auto small = enumerate(f, n - t.p - 1);
    for (const auto& h : small) {
      GroupElement x = h;
      for (int k = 0; k <= t.p; ++k) x = stabilize(x);
      image.push_back(g.index_of(x));
    }
    std::sort(image.begin(), image.end());
    lv.subgroup_order = small.size();
    lv.stabilization_injective =
        std::adjacent_find(image.begin(), image.end()) == image.end();
    image.erase(std::unique(image.begin(), image.end()), image.end());
    lv.stabilizer_order = stab.size();
    lv.stabilizer_matches = stab == image;
    if (rep.passed && !lv.transitive) {
      rep.passed = false;
      rep.failure = "transitivity fails at p=" + std::to_string(t.p) + ": orbit " +
                    std::to_string(lv.orbit_size) + " of " + std::to_string(lv.simplices);
    }
    if (rep.passed && !(lv.stabilizer_matches && lv.stabilization_injective)) {
      rep.passed = false;
      rep.failure = "stabilizer condition fails at p=" + std::to_string(t.p) + ": stabilizer order " +
                    std::to_string(lv.stabilizer_order) + ", |G_" + std::to_string(n - t.p - 1) +
                    "| = " + std::to_string(lv.subgroup_order);
    }
    rep.levels.push_back(lv);
  }
  return rep;
}

}  // namespace detail

inline int default_dim_cap(int n) { return n - 1; }

inline HypothesisReport check_hypotheses(const Family& f, int n, std::optional<int> dim_cap = std::nullopt,
                                         std::uint64_t cap = kDefaultEnumerationCap) {
  FiniteGroup g = FiniteGroup::from_family(f, n, cap);
  const int top = std::min(dim_cap.value_or(n - 1), n - 1);
  std::vector<CosetTable> tables;
  for (int p = 0; p <= top; ++p) tables.push_back(coset_table(g, p));
  return detail::check_levels(g, tables);
}

struct DestabilizationSpace {
  Family family;
  int n = 0;
  SemiSimplicialSet space;
  std::vector<std::vector<GroupElement>> representatives;  // per p, canonical (least) coset members
  HypothesisReport hypotheses;
};

// W_n with p-simplices g·im(G_{n−p−1}) for p ≤ min(dim_cap, n−1), and
// d_i(gH) = g·β_{i,p}·H.
inline DestabilizationSpace build_wn_full(const Family& f, int n, std::optional<int> dim_cap = std::nullopt,
                                          std::uint64_t cap = kDefaultEnumerationCap) {
  if (n < 0) throw InvalidInput("rank must be non-negative");
  const int top = std::min(dim_cap.value_or(n - 1), n - 1);
  FiniteGroup g = FiniteGroup::from_family(f, n, cap);
  std::vector<CosetTable> tables;
  for (int p = 0; p <= top; ++p) tables.push_back(coset_table(g, p));
  DestabilizationSpace out;
  out.family = f;
  out.n = n;
  out.hypotheses = detail::check_levels(g, tables);
  if (!out.hypotheses.passed) throw HypothesisError(out.hypotheses.failure);

  std::vector<std::size_t> counts;
  std::vector<std::vector<std::vector<std::uint32_t>>> faces;
  for (int p = 0; p <= top; ++p) {
    const auto& t = tables[p];
    counts.push_back(t.representatives.size());
    out.representatives.emplace_back();
    for (int r : t.representatives) out.representatives.back().push_back(g.element(r));
    faces.emplace_back();
    if (p == 0) continue;
    faces[p].assign(p + 1, std::vector<std::uint32_t>(t.representatives.size()));
    for (int i = 0; i <= p; ++i) {
      const int beta = g.index_of(face_multiplier(f, n, p, i));
      for (std::size_t s = 0; s < t.representatives.size(); ++s)
        faces[p][i][s] = tables[p - 1].coset_of[g.multiply(t.representatives[s], beta)];
    }
  }
  // levels above n−1 are empty, so the stored data is complete iff top = n−1
  const int complete = top == n - 1 ? top : top - 1;
  out.space = SemiSimplicialSet(std::move(counts), std::move(faces), complete);
  return out;
}

inline SemiSimplicialSet build_wn(const Family& f, int n, std::optional<int> dim_cap = std::nullopt,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
  return build_wn_full(f, n, dim_cap, cap).space;
}

// S_n: vertex sets of W_n simplices.
inline SimplicialComplex simplicial_shadow(const SemiSimplicialSet& w) {
  std::vector<std::vector<std::uint32_t>> simplices;
  for (int p = 0; p < w.levels(); ++p)
    for (std::uint32_t s = 0; s < w.count(p); ++s) {
      std::vector<std::uint32_t> v;
      for (int j = 0; j <= p; ++j) v.push_back(w.vertex(p, s, j));
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      simplices.push_back(std::move(v));
    }
  return SimplicialComplex(w.count(0), std::move(simplices));
}

inline SimplicialComplex build_sn(const Family& f, int n, std::uint64_t cap = kDefaultEnumerationCap) {
  return simplicial_shadow(build_wn(f, n, std::nullopt, cap));
}

// Checks that `map[p][s]` is a dimensionwise bijection a → b commuting with
// every face map. Returns the first problem, or empty.
inline std::string check_isomorphism(const SemiSimplicialSet& a, const SemiSimplicialSet& b,
                                     const std::vector<std::vector<std::uint32_t>>& map) {
  if (a.counts() != b.counts()) return "simplex counts differ";
  if (static_cast<int>(map.size()) != a.levels()) return "map has wrong number of levels";
  for (int p = 0; p < a.levels(); ++p) {
    if (map[p].size() != a.count(p)) return "map not total in dimension " + std::to_string(p);
    std::vector<char> hit(b.count(p), 0);
    for (auto y : map[p]) {
      if (y >= b.count(p) || hit[y]) return "map not bijective in dimension " + std::to_string(p);
      hit[y] = 1;
    }
    if (p == 0) continue;
    for (int i = 0; i <= p; ++i)
      for (std::uint32_t s = 0; s < a.count(p); ++s)
        if (map[p - 1][a.face(p, i, s)] != b.face(p, i, map[p][s]))
          return "face d_" + std::to_string(i) + " not preserved on simplex " + std::to_string(s) +
                 " of dimension " + std::to_string(p);
  }
  return {};
}

// For permutations, the coset g·im(Σ_{n−p−1}) is determined by the word
// (g(n−p), ..., g(n)); this gives the comparison with injective words.
inline std::string compare_with_injective_words(const DestabilizationSpace& w) {
  if (w.family.kind != FamilyKind::Symmetric) return "only defined for the symmetric family";
  auto iw = injective_words_with_labels(w.n, w.space.levels() - 1);
  std::vector<std::vector<std::uint32_t>> map(w.space.levels());
  for (int p = 0; p < w.space.levels(); ++p) {
    std::map<std::vector<int>, std::uint32_t> idx;
    for (std::size_t s = 0; s < iw.words[p].size(); ++s)
      idx.emplace(iw.words[p][s], static_cast<std::uint32_t>(s));
    for (const auto& rep : w.representatives[p]) {
      const auto& pl = rep.payload();
      std::vector<int> word(pl.end() - (p + 1), pl.end());
      auto it = idx.find(word);
      if (it == idx.end()) return "representative yields a non-injective word";
      map[p].push_back(it->second);
    }
  }
  return check_isomorphism(w.space, iw.space, map);
}

// G_n-equivariance of faces: d_i(x·σ) = x·d_i(σ) for generators x.
inline std::string check_equivariance(const DestabilizationSpace& w) {
  FiniteGroup g = FiniteGroup::from_family(w.family, w.n);
  std::vector<CosetTable> tables;
  for (int p = 0; p < w.space.levels(); ++p) tables.push_back(coset_table(g, p));
  for (int p = 1; p < w.space.levels(); ++p)
    for (int x : g.generator_indices())
      for (std::uint32_t s = 0; s < w.space.count(p); ++s) {
        auto moved = tables[p].coset_of[g.multiply(x, tables[p].representatives[s])];
        for (int i = 0; i <= p; ++i) {
          auto lhs = w.space.face(p, i, moved);
          auto rhs = tables[p - 1].coset_of[g.multiply(
              x, tables[p - 1].representatives[w.space.face(p, i, s)])];
          if (lhs != rhs)
            return "equivariance fails for d_" + std::to_string(i) + " in dimension " +
                   std::to_string(p);
        }
      }
  return {};
}

}  // namespace hstab
