#pragma once

// The bracket category UG at finite truncation. A morphism m → n is a class
// of pairs (X, f) with f: X ⊕ m → n, i.e. a coset f·(G_{n−m} ⊕ id_m) in G_n;
// the complement X sits in the first n − m slots.
//
//   [g] ∘ [f]  = [g ∘ (id_{p−n} ⊕ f)]
//   [f] ⊕ [g]  = [(f ⊕ g) ∘ (id_{n−m} ⊕ b_{n'−m', m} ⊕ id_{m'})]

#include <hstab/coeffs.hpp>
#include <hstab/errors.hpp>
#include <hstab/families.hpp>
#include <hstab/finite_group.hpp>
#include <hstab/spaces.hpp>

#include <json.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hstab {

struct BracketMorphism {
  int m = 0, n = 0;
  GroupElement rep;  // least member of the class
  friend bool operator==(const BracketMorphism& a, const BracketMorphism& b) {
    return a.m == b.m && a.n == b.n && a.rep == b.rep;
  }
};

class BracketCategory {
 public:
  BracketCategory(Family f, int N, std::uint64_t cap = kDefaultEnumerationCap) : family_(f), N_(N) {
    if (N < 0) throw InvalidInput("truncation must be non-negative");
    for (int n = 0; n <= N; ++n)
      groups_.push_back(std::make_shared<const FiniteGroup>(FiniteGroup::from_family(f, n, cap)));
    homs_.resize(N + 1);
    for (int m = 0; m <= N; ++m)
      for (int n = m; n <= N; ++n) homs_[m].push_back(build(m, n));
  }

  const Family& family() const { return family_; }
  int truncation() const { return N_; }
  const FiniteGroup& group(int n) const { return *groups_.at(n); }

  std::size_t hom_size(int m, int n) const { return table(m, n).representatives.size(); }
  std::vector<BracketMorphism> homset(int m, int n) const {
    std::vector<BracketMorphism> out;
    for (int r : table(m, n).representatives) out.push_back({m, n, group(n).element(r)});
    return out;
  }
  // class of any f ∈ G_n viewed as X ⊕ m → n
  BracketMorphism canonical(int m, const GroupElement& f) const {
    const int n = f.rank();
    const auto& t = table(m, n);
    return {m, n, group(n).element(t.representatives[t.class_of[group(n).index_of(f)]])};
  }
  std::uint32_t class_index(const BracketMorphism& a) const {
    return table(a.m, a.n).class_of[group(a.n).index_of(a.rep)];
  }
  BracketMorphism identity_morphism(int n) const { return {n, n, hstab::identity(family_, n)}; }

  // g ∘ f, computed from whatever representatives are stored in g and f
  BracketMorphism compose(const BracketMorphism& g, const BracketMorphism& f) const {
    if (g.m != f.n) throw InvalidInput("morphisms are not composable");
    const int p = g.n, n = g.m;
    return canonical(f.m, hstab::compose(g.rep, block_sum(hstab::identity(family_, p - n), f.rep)));
  }

  BracketMorphism sum(const BracketMorphism& f, const BracketMorphism& g) const {
    const int x = f.n - f.m, y = g.n - g.m;
    const GroupElement swap = block_sum(block_sum(hstab::identity(family_, x), braiding(family_, y, f.m)),
                                        hstab::identity(family_, g.m));
    return canonical(f.m + g.m, hstab::compose(block_sum(f.rep, g.rep), swap));
  }

  nlohmann::json to_json(int m, int n) const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& h : homset(m, n)) list.push_back(h.rep.to_string());
    return {{"family", family_.name()}, {"m", m}, {"n", n}, {"count", hom_size(m, n)}, {"representatives", list}};
  }

 private:
  struct Table {
    std::vector<int> representatives;
    std::vector<std::uint32_t> class_of;
  };
  const Table& table(int m, int n) const {
    if (m < 0 || n > N_ || m > n) throw InvalidInput("no morphisms " + std::to_string(m) + " -> " + std::to_string(n));
    return homs_[m][n - m];
  }
  Table build(int m, int n) const {
    const FiniteGroup& g = group(n);
    std::vector<int> sub;
    const GroupElement tail = hstab::identity(family_, m);
    for (const auto& h : enumerate(family_, n - m)) sub.push_back(g.index_of(block_sum(h, tail)));
    Table t;
    constexpr std::uint32_t kUnset = ~0u;
    t.class_of.assign(g.order(), kUnset);
    // elements are sorted, so the first unassigned member is the least
    for (std::size_t x = 0; x < g.order(); ++x) {
      if (t.class_of[x] != kUnset) continue;
      const auto c = static_cast<std::uint32_t>(t.representatives.size());
      t.representatives.push_back(static_cast<int>(x));
      for (int k : sub) t.class_of[g.multiply(static_cast<int>(x), k)] = c;
    }
    return t;
  }

  Family family_;
  int N_;
  std::vector<std::shared_ptr<const FiniteGroup>> groups_;
  std::vector<std::vector<Table>> homs_;
};

inline std::vector<BracketMorphism> bracket_homset(const BracketCategory& c, int m, int n) { return c.homset(m, n); }
inline BracketMorphism bracket_compose(const BracketCategory& c, const BracketMorphism& g, const BracketMorphism& f) {
  return c.compose(g, f);
}
inline BracketMorphism bracket_sum(const BracketCategory& c, const BracketMorphism& f, const BracketMorphism& g) {
  return c.sum(f, g);
}

// ---------------------------------------------------------------------------
// Checks

struct UcatReport {
  bool passed = true;
  std::size_t checks = 0;
  std::string failure;
  nlohmann::json details = nlohmann::json::object();

  void require(bool ok, const std::string& what) {
    ++checks;
    if (!ok && passed) {
      passed = false;
      failure = what;
    }
  }
};

inline nlohmann::json to_json(const UcatReport& r) {
  nlohmann::json j = {{"passed", r.passed}, {"checks", r.checks}, {"details", r.details}};
  if (!r.passed) j["failure"] = r.failure;
  return j;
}

// Injection {1..m} → {1..n} of a symmetric-family morphism: i ↦ f(n − m + i).
inline std::vector<int> as_injection(const BracketMorphism& a) {
  if (a.rep.family().kind != FamilyKind::Symmetric) throw InvalidInput("injections need the symmetric family");
  std::vector<int> out;
  for (int i = 1; i <= a.m; ++i) out.push_back(a.rep.payload()[a.n - a.m + i - 1]);
  return out;
}

// Σ case: hom-set sizes n!/(n−m)!, bijection with injections, composition and
// sum agree with injections; units, associativity and class independence.
inline UcatReport check_fi(int N) {
  BracketCategory c(Family::symmetric(), N);
  UcatReport r;
  auto fact = [](int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  };
  nlohmann::json counts = nlohmann::json::array();
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= n; ++m) {
      const auto hs = c.homset(m, n);
      counts.push_back({{"m", m}, {"n", n}, {"count", hs.size()}});
      r.require(hs.size() == fact(n) / fact(n - m), "hom-set size (" + std::to_string(m) + "," + std::to_string(n) + ")");
      std::map<std::vector<int>, int> seen;
      for (const auto& h : hs) ++seen[as_injection(h)];
      r.require(seen.size() == hs.size(), "injection map not injective at (" + std::to_string(m) + "," + std::to_string(n) + ")");
      for (const auto& h : hs) {
        r.require(c.compose(c.identity_morphism(n), h) == h, "left unit");
        r.require(c.compose(h, c.identity_morphism(m)) == h, "right unit");
      }
    }
  r.details["hom_sets"] = counts;
  for (int p = 0; p <= N; ++p)
    for (int n = 0; n <= p; ++n)
      for (int m = 0; m <= n; ++m)
        for (const auto& g : c.homset(n, p))
          for (const auto& f : c.homset(m, n)) {
            const auto gf = c.compose(g, f);
            const auto ig = as_injection(g), iff = as_injection(f);
            std::vector<int> expect;
            for (int x : iff) expect.push_back(ig[x - 1]);
            r.require(as_injection(gf) == expect, "composition differs from injection composition");
          }
  // class independence: every member of a class composes to the same answer
  for (int p = 0; p <= std::min(N, 4); ++p)
    for (int n = 0; n <= p; ++n)
      for (int m = 0; m <= n; ++m)
        for (const auto& gx : c.group(p).elements())
          for (const auto& fx : c.group(n).elements()) {
            BracketMorphism g{n, p, gx}, f{m, n, fx};
            r.require(c.compose(g, f) == c.compose(c.canonical(n, gx), c.canonical(m, fx)), "composition depends on representatives");
          }
  // associativity
  for (int q = 0; q <= std::min(N, 4); ++q)
    for (int p = 0; p <= q; ++p)
      for (int n = 0; n <= p; ++n)
        for (int m = 0; m <= n; ++m)
          for (const auto& h : c.homset(p, q))
            for (const auto& g : c.homset(n, p))
              for (const auto& f : c.homset(m, n))
                r.require(c.compose(h, c.compose(g, f)) == c.compose(c.compose(h, g), f), "associativity");
  // monoidal sum
  for (int n1 = 0; n1 <= N; ++n1)
    for (int n2 = 0; n1 + n2 <= N; ++n2) {
      r.require(c.sum(c.identity_morphism(n1), c.identity_morphism(n2)) == c.identity_morphism(n1 + n2), "sum of identities");
      for (int m1 = 0; m1 <= n1; ++m1)
        for (int m2 = 0; m2 <= n2; ++m2)
          for (const auto& f : c.homset(m1, n1))
            for (const auto& g : c.homset(m2, n2)) {
              auto s = as_injection(c.sum(f, g));
              std::vector<int> expect = as_injection(f);
              for (int x : as_injection(g)) expect.push_back(n1 + x);
              r.require(s == expect, "sum differs from disjoint union of injections");
            }
    }
  return r;
}

// The hom-sets of the truncated category C_{A,X} (complement last) agree with
// the bracket hom-sets (complement first) under [f] ↦ [f ∘ b_{n−m,m}],
// as sets and for composition.
inline UcatReport verify_cax_quotient(const Family& f, int N) {
  TruncatedCAX cax(f, N);
  BracketCategory br(f, N);
  UcatReport r;
  auto to_bracket = [&](int m, int n, std::uint32_t cls) {
    const GroupElement x = cax.group(n).element(cax.hom(m, n).representatives[cls]);
    return br.canonical(m, compose(x, braiding(f, n - m, m)));
  };
  nlohmann::json counts = nlohmann::json::array();
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= n; ++m) {
      const std::size_t expect = cax.group(n).order() / cax.group(n - m).order();
      counts.push_back({{"m", m}, {"n", n}, {"cax", cax.hom(m, n).size()}, {"bracket", br.hom_size(m, n)}});
      r.require(cax.hom(m, n).size() == expect && br.hom_size(m, n) == expect,
                "counts differ from |G_n|/|G_{n-m}| at (" + std::to_string(m) + "," + std::to_string(n) + ")");
      // well defined and bijective
      std::vector<char> hit(br.hom_size(m, n), 0);
      for (std::size_t x = 0; x < cax.group(n).order(); ++x) {
        const auto cls = cax.hom(m, n).class_of[x];
        const auto via_member = br.canonical(m, compose(cax.group(n).element(static_cast<int>(x)), braiding(f, n - m, m)));
        r.require(via_member == to_bracket(m, n, cls), "identification depends on representatives");
        hit[br.class_index(via_member)] = 1;
      }
      for (char h : hit) r.require(h, "identification is not onto");
    }
  r.details["hom_sets"] = counts;
  for (int p = 0; p <= N; ++p)
    for (int n = 0; n <= p; ++n)
      for (int m = 0; m <= n; ++m)
        for (std::uint32_t g = 0; g < cax.hom(n, p).size(); ++g)
          for (std::uint32_t h = 0; h < cax.hom(m, n).size(); ++h)
            r.require(to_bracket(m, p, cax.compose(m, n, p, g, h)) ==
                          br.compose(to_bracket(n, p, g), to_bracket(m, n, h)),
                      "identification does not respect composition");
  return r;
}

// p-simplices of W_n are the morphisms p+1 → n and d_i is precomposition
// with ε_i = [b_{i,1}^{-1} ⊕ id_{p−i}]: p → p+1. Compared with the spaces module.
inline UcatReport cross_check_wn(const Family& f, int n) {
  auto w = build_wn_full(f, n);
  BracketCategory br(f, n);
  UcatReport r;
  for (int p = 0; p < w.space.levels(); ++p) {
    r.require(w.space.count(p) == br.hom_size(p + 1, n), "level size at p = " + std::to_string(p));
    for (std::uint32_t s = 0; s < w.space.count(p); ++s) {
      const GroupElement& g = w.representatives[p][s];
      r.require(br.canonical(p + 1, g).rep == g, "representative choice at p = " + std::to_string(p));
      if (p == 0) continue;
      for (int i = 0; i <= p; ++i) {
        const BracketMorphism eps{p, p + 1, block_sum(inverse(braiding(f, i, 1)), identity(f, p - i))};
        const auto face = br.compose({p + 1, n, g}, eps);
        r.require(face.rep == w.representatives[p - 1][w.space.face(p, i, s)],
                  "face d_" + std::to_string(i) + " at p = " + std::to_string(p));
      }
    }
  }
  return r;
}

}  // namespace hstab
