#pragma once

// Coefficient systems on the truncated category C_N of a family: objects
// 0..N, morphisms m → n the classes f·(id_m ⊕ G_{n−m}) with f ∈ G_n.
// Composition: [g] ∘ [f] = [g ∘ (f ⊕ id)].
//
// A system assigns M_n = Z^{r_n}/L_n with a G_n-action on Z^{r_n} preserving
// L_n, and structure maps ι_n: M_n → M_{n+1}. The class [g]: m → n acts by
// ρ_n(g) ∘ ι_{m,n}; this is well defined exactly when id_m ⊕ G_{n−m} fixes the
// image of ι_{m,n}.

#include <hstab/errors.hpp>
#include <hstab/families.hpp>
#include <hstab/finite_group.hpp>
#include <hstab/gmodule.hpp>
#include <hstab/grouphom.hpp>
#include <hstab/linalg.hpp>
#include <hstab/smith.hpp>

#include <json.hpp>

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hstab {

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// ---------------------------------------------------------------------------
// The category

struct CaxHomSet {
  int m = 0, n = 0;
  std::vector<int> representatives;   // least element of each class
  std::vector<std::uint32_t> class_of;  // by element index of G_n
  std::vector<int> complement;        // indices of id_m ⊕ G_{n−m}
  std::size_t size() const { return representatives.size(); }
};

class TruncatedCAX {
 public:
  TruncatedCAX(Family f, int N, std::uint64_t cap = kDefaultEnumerationCap) : family_(f), N_(N) {
    if (N < 0) throw InvalidInput("truncation must be non-negative");
    for (int n = 0; n <= N; ++n) groups_.push_back(std::make_shared<const FiniteGroup>(FiniteGroup::from_family(f, n, cap)));
    homs_.resize(N + 1);
    for (int m = 0; m <= N; ++m)
      for (int n = m; n <= N; ++n) homs_[m].push_back(build(m, n));
  }

  const Family& family() const { return family_; }
  int truncation() const { return N_; }
  const FiniteGroup& group(int n) const { return *groups_.at(n); }
  const GroupPtr& group_ptr(int n) const { return groups_.at(n); }
  const CaxHomSet& hom(int m, int n) const {
    if (m < 0 || n > N_ || m > n) throw InvalidInput("no morphisms " + std::to_string(m) + " -> " + std::to_string(n));
    return homs_[m][n - m];
  }
  std::uint32_t classify(int m, int n, int g) const { return hom(m, n).class_of.at(g); }

  // class index of [g] ∘ [f] for f: m → n, g: n → p given by element indices
  std::uint32_t compose_elements(int m, int n, int p, int g, int f) const {
    const GroupElement fe = block_sum(group(n).element(f), identity(family_, p - n));
    return classify(m, p, group(p).multiply(g, group(p).index_of(fe)));
  }
  std::uint32_t compose(int m, int n, int p, std::uint32_t g_class, std::uint32_t f_class) const {
    return compose_elements(m, n, p, hom(n, p).representatives.at(g_class), hom(m, n).representatives.at(f_class));
  }

  // Composition computed from every member of each class agrees with the
  // canonical answer; exhaustive for p ≤ limit.
  struct WellDefinedReport {
    bool passed = true;
    std::size_t checks = 0;
    std::string failure;
  };
  WellDefinedReport check_composition(int limit) const {
    WellDefinedReport r;
    limit = std::min(limit, N_);
    for (int p = 0; p <= limit; ++p)
      for (int n = 0; n <= p; ++n)
        for (int m = 0; m <= n; ++m) {
          const auto& fs = hom(m, n);
          const auto& gs = hom(n, p);
          for (std::size_t gi = 0; gi < group(p).order(); ++gi)
            for (std::size_t fi = 0; fi < group(n).order(); ++fi) {
              ++r.checks;
              const auto expect = compose(m, n, p, gs.class_of[gi], fs.class_of[fi]);
              if (compose_elements(m, n, p, static_cast<int>(gi), static_cast<int>(fi)) != expect) {
                r.passed = false;
                r.failure = "composition depends on representatives at (" + std::to_string(m) + "," +
                            std::to_string(n) + "," + std::to_string(p) + ")";
                return r;
              }
            }
        }
    return r;
  }

  nlohmann::json summary() const {
    nlohmann::json counts = nlohmann::json::array();
    for (int m = 0; m <= N_; ++m)
      for (int n = m; n <= N_; ++n) counts.push_back({{"m", m}, {"n", n}, {"morphisms", hom(m, n).size()}});
    return {{"family", family_.name()}, {"truncation", N_}, {"hom_sets", counts}};
  }

 private:
  CaxHomSet build(int m, int n) const {
    const FiniteGroup& g = group(n);
    CaxHomSet h;
    h.m = m;
    h.n = n;
    const GroupElement head = identity(family_, m);
    for (const auto& x : enumerate(family_, n - m)) h.complement.push_back(g.index_of(block_sum(head, x)));
    constexpr std::uint32_t kUnset = ~0u;
    h.class_of.assign(g.order(), kUnset);
    for (std::size_t x = 0; x < g.order(); ++x) {
      if (h.class_of[x] != kUnset) continue;
      const auto c = static_cast<std::uint32_t>(h.representatives.size());
      h.representatives.push_back(static_cast<int>(x));
      for (int k : h.complement) h.class_of[g.multiply(static_cast<int>(x), k)] = c;
    }
    return h;
  }

  Family family_;
  int N_;
  std::vector<GroupPtr> groups_;
  std::vector<std::vector<CaxHomSet>> homs_;
};

inline TruncatedCAX build_cax(const Family& f, int N, std::uint64_t cap = kDefaultEnumerationCap) {
  return TruncatedCAX(f, N, cap);
}

// ---------------------------------------------------------------------------
// Lattice helpers for Z^r / L

namespace detail {

inline IntVec column(const IntMatrix& a, std::size_t j) {
  IntVec v(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) v[i] = a(i, j);
  return v;
}

inline IntVec apply(const IntMatrix& a, const IntVec& v) {
  IntVec out(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      if (a(i, j)) out[i] += a(i, j) * v[j];
  return out;
}

inline LatticeEchelon lattice(std::size_t r, const std::vector<IntVec>& gens) {
  LatticeEchelon e(r);
  for (const auto& v : gens) e.insert(v);
  return e;
}

inline bool is_zero_vec(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline std::string vec_string(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + ")";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Coefficient systems

class CoefficientSystem {
 public:
  struct Object {
    std::size_t rank = 0;
    std::vector<IntMatrix> action;  // one per generator of G_n, on Z^rank
    std::vector<IntVec> relations;  // generators of L_n
  };

  CoefficientSystem(Family f, int N, Coefficients ring, std::string label, std::vector<Object> objects,
                    std::vector<IntMatrix> structure, std::uint64_t cap = kDefaultEnumerationCap)
      : family_(f), N_(N), ring_(ring), label_(std::move(label)), objects_(std::move(objects)),
        structure_(std::move(structure)) {
    if (static_cast<int>(objects_.size()) != N + 1) throw InvalidInput("need one object per rank 0..N");
    if (static_cast<int>(structure_.size()) != N) throw InvalidInput("need one structure map per rank 0..N-1");
    for (int n = 0; n <= N; ++n) {
      groups_.push_back(std::make_shared<const FiniteGroup>(FiniteGroup::from_family(f, n, cap)));
      auto& o = objects_[n];
      if (o.action.size() != groups_[n]->generator_indices().size())
        throw InvalidInput("rank " + std::to_string(n) + ": need one action matrix per generator (" +
                           std::to_string(groups_[n]->generator_indices().size()) + ")");
      for (auto& r : o.relations)
        if (r.size() != o.rank) throw InvalidInput("rank " + std::to_string(n) + ": relation of wrong length");
      if (ring_.is_field())
        for (std::size_t i = 0; i < o.rank; ++i) {
          IntVec v(o.rank);
          v[i] = ring_.p;
          o.relations.push_back(std::move(v));
        }
      modules_.push_back(GModule::from_generators(groups_[n], Coefficients::integers(), o.rank, o.action,
                                                  label_ + " rank " + std::to_string(n)));
    }
    for (int n = 0; n < N; ++n)
      if (structure_[n].rows != objects_[n + 1].rank || structure_[n].cols != objects_[n].rank)
        throw InvalidInput("structure map " + std::to_string(n) + " -> " + std::to_string(n + 1) +
                           " has the wrong shape");
  }

  const Family& family() const { return family_; }
  int truncation() const { return N_; }
  const Coefficients& ring() const { return ring_; }
  const std::string& label() const { return label_; }
  const Object& object(int n) const { return objects_.at(n); }
  std::size_t rank(int n) const { return objects_.at(n).rank; }
  const GModule& module(int n) const { return modules_.at(n); }
  const GroupPtr& group_ptr(int n) const { return groups_.at(n); }
  const IntMatrix& structure(int n) const { return structure_.at(n); }

  // ι_{m,n}
  IntMatrix inclusion(int m, int n) const {
    IntMatrix a = IntMatrix::identity(rank(m));
    for (int k = m; k < n; ++k) a = structure_[k] * a;
    return a;
  }
  // M([g]) for g an element index of G_n, as a map M_m → M_n on ambients
  IntMatrix morphism(int m, int n, int g) const { return modules_.at(n).rho(g) * inclusion(m, n); }

  bool equal_maps(int n, const IntMatrix& a, const IntMatrix& b) const {
    auto lat = detail::lattice(rank(n), objects_[n].relations);
    for (std::size_t j = 0; j < a.cols; ++j) {
      IntVec d(a.rows);
      for (std::size_t i = 0; i < a.rows; ++i) d[i] = Integer(a(i, j)) - b(i, j);
      if (!detail::is_zero_vec(d) && !lat.contains(d)) return false;
    }
    return true;
  }

  bool is_zero_object(int n) const {
    const auto& o = objects_.at(n);
    if (o.rank == 0) return true;
    auto lat = detail::lattice(o.rank, o.relations);
    for (std::size_t i = 0; i < o.rank; ++i) {
      IntVec e(o.rank);
      e[i] = 1;
      if (!lat.contains(e)) return false;
    }
    return true;
  }
  bool is_zero() const {
    for (int n = 0; n <= N_; ++n)
      if (!is_zero_object(n)) return false;
    return true;
  }

  // Quotient by extra relations, same actions and structure maps.
  CoefficientSystem with_relations(const std::vector<std::vector<IntVec>>& extra, std::string label) const {
    auto objs = objects_;
    for (int n = 0; n <= N_; ++n)
      for (const auto& v : extra.at(n)) objs[n].relations.push_back(v);
    return CoefficientSystem(family_, N_, ring_, std::move(label), std::move(objs), structure_);
  }

  // The free module M_n as a GModule over the system's ring (requires L_n = 0
  // over Z, L_n = pZ^r over F_p).
  GModule free_module(GroupPtr g) const {
    const int n = g->rank();
    if (n > N_) throw InvalidInput("rank " + std::to_string(n) + " beyond truncation " + std::to_string(N_));
    for (const auto& r : objects_[n].relations) {
      bool ok = true;
      for (const auto& x : r)
        if (ring_.is_field() ? reduce_mod(x, ring_.p) != 0 : x != 0) ok = false;
      if (!ok) throw InvalidInput("coefficient system " + label_ + " is not free at rank " + std::to_string(n));
    }
    return GModule::from_generators(std::move(g), ring_, rank(n), objects_[n].action, label_);
  }

  nlohmann::json to_json() const {
    nlohmann::json ranks = nlohmann::json::array();
    for (int n = 0; n <= N_; ++n) {
      const auto& o = objects_[n];
      nlohmann::json gens = nlohmann::json::array();
      for (const auto& a : o.action) gens.push_back(matrix_json(a));
      nlohmann::json rel = nlohmann::json::array();
      for (const auto& v : o.relations) {
        if (ring_.is_field() && is_field_relation(v)) continue;
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : v) row.push_back(static_cast<long long>(x));
        rel.push_back(row);
      }
      nlohmann::json r = {{"rank", o.rank}, {"generators", gens}, {"relations", rel}};
      if (n < N_) r["structure"] = matrix_json(structure_[n]);
      ranks.push_back(r);
    }
    return {{"family", family_.name()}, {"truncation", N_}, {"ring", ring_.tag()}, {"label", label_}, {"ranks", ranks}};
  }

  static nlohmann::json matrix_json(const IntMatrix& a) {
    nlohmann::json m = nlohmann::json::array();
    for (std::size_t i = 0; i < a.rows; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < a.cols; ++j) row.push_back(a(i, j));
      m.push_back(row);
    }
    return m;
  }

 private:
  bool is_field_relation(const IntVec& v) const {
    int nz = 0;
    for (const auto& x : v) {
      if (x == 0) continue;
      if (x != ring_.p) return false;
      ++nz;
    }
    return nz == 1;
  }

  Family family_;
  int N_;
  Coefficients ring_;
  std::string label_;
  std::vector<Object> objects_;
  std::vector<IntMatrix> structure_;
  std::vector<GroupPtr> groups_;
  std::vector<GModule> modules_;
};

// ---------------------------------------------------------------------------
// Built-in systems

inline CoefficientSystem constant_system(const Family& f, int N, Coefficients ring = Coefficients::integers()) {
  std::vector<CoefficientSystem::Object> objs;
  for (int n = 0; n <= N; ++n)
    objs.push_back({1, std::vector<IntMatrix>(generators(f, n).size(), IntMatrix::identity(1)), {}});
  return CoefficientSystem(f, N, ring, "constant", std::move(objs), std::vector<IntMatrix>(N, IntMatrix::identity(1)));
}

inline CoefficientSystem zero_system(const Family& f, int N) {
  std::vector<CoefficientSystem::Object> objs;
  for (int n = 0; n <= N; ++n) objs.push_back({0, std::vector<IntMatrix>(generators(f, n).size(), IntMatrix(0, 0)), {}});
  return CoefficientSystem(f, N, Coefficients::integers(), "zero", std::move(objs), std::vector<IntMatrix>(N, IntMatrix(0, 0)));
}

// Z^n with the (signed) permutation action and inclusion of the first n coordinates.
inline CoefficientSystem standard_system(const Family& f, int N, Coefficients ring = Coefficients::integers()) {
  if (f.kind == FamilyKind::GeneralLinear) throw InvalidInput("standard system is defined for permutation families");
  std::vector<CoefficientSystem::Object> objs;
  std::vector<IntMatrix> structure;
  for (int n = 0; n <= N; ++n) {
    CoefficientSystem::Object o;
    o.rank = n;
    for (const auto& s : generators(f, n)) o.action.push_back(GModule::permutation_matrix(s));
    objs.push_back(std::move(o));
    if (n < N) {
      IntMatrix m(n + 1, n);
      for (int i = 0; i < n; ++i) m(i, i) = 1;
      structure.push_back(m);
    }
  }
  return CoefficientSystem(f, N, ring, "standard", std::move(objs), std::move(structure));
}

// Z with the sign action and identity structure maps: equivariant, but the
// added copy of G_m acts by −1 on the image, so the axiom fails.
inline CoefficientSystem sign_violator(const Family& f, int N) {
  std::vector<CoefficientSystem::Object> objs;
  for (int n = 0; n <= N; ++n) {
    CoefficientSystem::Object o;
    o.rank = 1;
    for (const auto& s : generators(f, n)) {
      IntMatrix m(1, 1);
      m(0, 0) = GModule::permutation_sign(s);
      o.action.push_back(m);
    }
    objs.push_back(std::move(o));
  }
  return CoefficientSystem(f, N, Coefficients::integers(), "sign-twisted", std::move(objs),
                           std::vector<IntMatrix>(N, IntMatrix::identity(1)));
}

// ---------------------------------------------------------------------------
// Axiom check

struct AxiomReport {
  bool passed = true;
  std::size_t checks = 0;
  std::string failure;
  nlohmann::json witness;
};

inline nlohmann::json to_json(const AxiomReport& r) {
  nlohmann::json j = {{"passed", r.passed}, {"checks", r.checks}};
  if (!r.passed) {
    j["failure"] = r.failure;
    j["witness"] = r.witness;
  }
  return j;
}

// Exhaustive at the truncation: relations preserved, structure maps
// equivariant, id_m ⊕ G_{n−m} fixes the image of ι_{m,n} (checked on
// generators of G_{n−m}, which suffices), and with `functoriality_limit`
// ≥ 0, M([g]∘[f]) = M([g])M([f]) on every composable pair up to that rank.
inline AxiomReport check_coefficient_axiom(const CoefficientSystem& M, int functoriality_limit = 3) {
  AxiomReport r;
  const Family& f = M.family();
  const int N = M.truncation();
  auto fail = [&](std::string why, nlohmann::json w) {
    r.passed = false;
    r.failure = std::move(why);
    r.witness = std::move(w);
  };
  for (int n = 0; n <= N && r.passed; ++n) {
    const auto& o = M.object(n);
    auto lat = detail::lattice(o.rank, o.relations);
    const auto& gens = M.group_ptr(n)->generator_elements();
    for (std::size_t k = 0; k < o.action.size() && r.passed; ++k)
      for (const auto& v : o.relations) {
        ++r.checks;
        IntVec w = detail::apply(o.action[k], v);
        if (!detail::is_zero_vec(w) && !lat.contains(w)) {
          fail("action does not preserve the relations", {{"rank", n}, {"generator", gens[k].to_string()}});
          break;
        }
      }
    if (n == N) break;
    auto next = detail::lattice(M.rank(n + 1), M.object(n + 1).relations);
    for (const auto& v : o.relations) {
      ++r.checks;
      IntVec w = detail::apply(M.structure(n), v);
      if (!detail::is_zero_vec(w) && !next.contains(w)) {
        fail("structure map does not preserve the relations", {{"rank", n}});
        break;
      }
    }
    const auto& G1 = M.module(n + 1).group();
    for (std::size_t k = 0; k < gens.size() && r.passed; ++k) {
      ++r.checks;
      const int s1 = G1.index_of(stabilize(gens[k]));
      if (!M.equal_maps(n + 1, M.structure(n) * M.module(n).rho(M.module(n).group().generator_indices()[k]),
                        M.module(n + 1).rho(s1) * M.structure(n)))
        fail("structure map is not equivariant", {{"rank", n}, {"generator", gens[k].to_string()}});
    }
  }
  for (int n = 1; n <= N && r.passed; ++n)
    for (int m = 0; m < n && r.passed; ++m) {
      const IntMatrix inc = M.inclusion(m, n);
      for (const auto& h : generators(f, n - m)) {
        ++r.checks;
        const GroupElement x = block_sum(identity(f, m), h);
        const int xi = M.module(n).group().index_of(x);
        if (!M.equal_maps(n, M.module(n).rho(xi) * inc, inc)) {
          // first image vector moved
          nlohmann::json moved;
          for (std::size_t j = 0; j < inc.cols; ++j) {
            IntVec before = detail::column(inc, j);
            IntVec after = detail::apply(M.module(n).rho(xi), before);
            if (after != before) {
              moved = {{"vector", detail::vec_string(before)}, {"image", detail::vec_string(after)}};
              break;
            }
          }
          fail("stabilized G_" + std::to_string(n - m) + " acts nontrivially on the image of M_" +
                   std::to_string(m) + " -> M_" + std::to_string(n),
               {{"m", m}, {"n", n}, {"element", x.to_string()}, {"moved", moved}});
          break;
        }
      }
    }
  if (!r.passed || functoriality_limit < 0) return r;
  TruncatedCAX cax(f, std::min(N, functoriality_limit));
  const int L = cax.truncation();
  for (int p = 0; p <= L && r.passed; ++p)
    for (int n = 0; n <= p && r.passed; ++n)
      for (int m = 0; m <= n && r.passed; ++m) {
        const auto& fs = cax.hom(m, n);
        const auto& gs = cax.hom(n, p);
        for (std::size_t gi = 0; gi < gs.size() && r.passed; ++gi)
          for (std::size_t fi = 0; fi < fs.size(); ++fi) {
            ++r.checks;
            const int g = gs.representatives[gi], fr = fs.representatives[fi];
            const auto c = cax.compose(m, n, p, static_cast<std::uint32_t>(gi), static_cast<std::uint32_t>(fi));
            const IntMatrix lhs = M.morphism(m, p, cax.hom(m, p).representatives[c]);
            const IntMatrix rhs = M.morphism(n, p, g) * M.morphism(m, n, fr);
            if (!M.equal_maps(p, lhs, rhs)) {
              fail("not functorial",
                   {{"m", m}, {"n", n}, {"p", p}, {"g", cax.group(p).element(g).to_string()},
                    {"f", cax.group(n).element(fr).to_string()}});
              break;
            }
          }
      }
  return r;
}

// ---------------------------------------------------------------------------
// Suspension

struct Suspension {
  CoefficientSystem system;        // (ΣM)_n = M_{n+1}, truncation N − 1
  std::vector<IntMatrix> natural;  // σ_n: M_n → M_{n+1}
  bool natural_ok = true;
  std::size_t checks = 0;
};

// Σg = b (g ⊕ id_1) b^{-1} with b = b_{n,1}; σ_n = ρ_{n+1}(b_{n,1}) ∘ ι_n.
inline Suspension suspension(const CoefficientSystem& M) {
  const int N = M.truncation();
  if (N < 1) throw InvalidInput("suspension needs truncation >= 1");
  const Family& f = M.family();
  std::vector<CoefficientSystem::Object> objs;
  std::vector<IntMatrix> structure, natural;
  for (int n = 0; n + 1 <= N; ++n) {
    const GModule& up = M.module(n + 1);
    const GroupElement b = braiding(f, n, 1);
    const GroupElement binv = inverse(b);
    CoefficientSystem::Object o;
    o.rank = M.rank(n + 1);
    o.relations = M.object(n + 1).relations;
    for (const auto& s : generators(f, n))
      o.action.push_back(up.rho(up.group().index_of(compose(b, compose(stabilize(s), binv)))));
    objs.push_back(std::move(o));
    if (n + 1 < N) structure.push_back(M.structure(n + 1));
    natural.push_back(up.rho(up.group().index_of(b)) * M.structure(n));
  }
  Suspension out{CoefficientSystem(f, N - 1, M.ring(), "S(" + M.label() + ")", std::move(objs),
                                   std::move(structure)),
                 std::move(natural)};
  // naturality: σ is equivariant and commutes with the structure maps
  for (int n = 0; n + 1 <= N; ++n) {
    const GModule& mn = M.module(n);
    const GModule& sn = out.system.module(n);
    for (int s : mn.group().generator_indices()) {
      ++out.checks;
      if (!M.equal_maps(n + 1, out.natural[n] * mn.rho(s), sn.rho(s) * out.natural[n])) out.natural_ok = false;
    }
    if (n + 2 <= N) {
      ++out.checks;
      if (!M.equal_maps(n + 2, out.natural[n + 1] * M.structure(n), M.structure(n + 1) * out.natural[n]))
        out.natural_ok = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Degree

struct DegreeReport {
  std::optional<int> degree;
  std::string status;  // determined | infinite within truncation | not determined
  int truncation = 0;
  std::vector<std::string> trail;
  nlohmann::json witness;
};

inline nlohmann::json to_json(const DegreeReport& d) {
  nlohmann::json j = {{"status", d.status}, {"truncation", d.truncation}, {"trail", d.trail}};
  j["degree"] = d.degree ? nlohmann::json(*d.degree) : nlohmann::json(nullptr);
  if (!d.witness.is_null()) j["witness"] = d.witness;
  return j;
}

namespace detail {

// x with σx ∈ L' but x ∉ L, if any.
inline std::optional<IntVec> kernel_witness(const CoefficientSystem& M, int n, const IntMatrix& sigma,
                                            const std::vector<IntVec>& target_relations) {
  const std::size_t r = M.rank(n), r1 = sigma.rows;
  if (r == 0) return std::nullopt;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (sigma(i, j)) t.push_back({i, j, sigma(i, j)});
  for (std::size_t k = 0; k < target_relations.size(); ++k)
    for (std::size_t i = 0; i < r1; ++i)
      if (target_relations[k][i] != 0) t.push_back({i, r + k, -target_relations[k][i]});
  auto ker = kernel_z(SparseIntMatrix::from_triplets(r1, r + target_relations.size(), std::move(t)));
  auto lat = lattice(r, M.object(n).relations);
  for (const auto& v : ker) {
    IntVec x(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r));
    if (!is_zero_vec(x) && !lat.contains(x)) return x;
  }
  return std::nullopt;
}

inline void degree_step(const CoefficientSystem& M, int depth, int cap, DegreeReport& out, int& offset) {
  out.trail.push_back(M.label() + " (truncation " + std::to_string(M.truncation()) + ")");
  if (M.is_zero()) {
    out.degree = -1 + offset;
    out.status = "determined";
    return;
  }
  if (M.truncation() < 1 || depth >= cap) {
    out.status = "not determined";
    return;
  }
  auto S = suspension(M);
  if (!S.natural_ok) throw IntegrityError("suspension map failed naturality for " + M.label());
  std::vector<std::vector<IntVec>> extra(S.system.truncation() + 1);
  for (int n = 0; n <= S.system.truncation(); ++n) {
    if (auto w = kernel_witness(M, n, S.natural[n], S.system.object(n).relations)) {
      out.status = "infinite within truncation";
      out.witness = {{"system", M.label()}, {"rank", n}, {"kernel_vector", vec_string(*w)}};
      return;
    }
    for (std::size_t j = 0; j < S.natural[n].cols; ++j) extra[n].push_back(column(S.natural[n], j));
  }
  ++offset;
  degree_step(S.system.with_relations(extra, "coker(" + M.label() + ")"), depth + 1, cap, out, offset);
}

}  // namespace detail

// Recursive degree relative to the truncation: −1 for the zero system,
// otherwise σ: M → ΣM must be injective at every available rank and the
// answer is degree(coker σ) + 1.
inline DegreeReport degree(const CoefficientSystem& M, int cap = 8) {
  DegreeReport out;
  out.truncation = M.truncation();
  int offset = 0;
  detail::degree_step(M, 0, cap, out, offset);
  if (out.status != "determined") out.degree.reset();
  return out;
}

// ---------------------------------------------------------------------------
// Loading

inline IntMatrix matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  IntMatrix m(rows, cols);
  if (!j.is_array() || j.size() != rows) throw InvalidInput(what + ": expected " + std::to_string(rows) + " rows");
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw InvalidInput(what + ": row " + std::to_string(i) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<long long>();
  }
  return m;
}

inline Coefficients parse_ring(const std::string& s) {
  if (s == "Z") return Coefficients::integers();
  if (s.size() > 1 && s[0] == 'F') return Coefficients::prime_field(static_cast<std::uint32_t>(std::stoul(s.substr(1))));
  throw InvalidInput("unknown coefficient ring `" + s + "` (Z or Fp)");
}

// {"family", "truncation", "ring", "label", "ranks": [{"rank", "generators",
// "relations", "structure"}]}, validated by the axiom check unless told not to.
inline CoefficientSystem coefficient_system_from_json(const nlohmann::json& j, bool validate = true) {
  try {
    const Family f = parse_family(j.at("family").get<std::string>());
    const int N = j.at("truncation").get<int>();
    const Coefficients ring = parse_ring(j.value("ring", std::string("Z")));
    const auto& ranks = j.at("ranks");
    if (!ranks.is_array() || static_cast<int>(ranks.size()) != N + 1)
      throw InvalidInput("ranks: expected " + std::to_string(N + 1) + " entries");
    std::vector<CoefficientSystem::Object> objs;
    std::vector<IntMatrix> structure;
    for (int n = 0; n <= N; ++n) {
      const auto& e = ranks[n];
      CoefficientSystem::Object o;
      o.rank = e.at("rank").get<std::size_t>();
      const std::size_t ng = generators(f, n).size();
      const auto& gj = e.at("generators");
      if (gj.size() != ng)
        throw InvalidInput("ranks[" + std::to_string(n) + "].generators: expected " + std::to_string(ng) + " matrices");
      for (std::size_t k = 0; k < ng; ++k)
        o.action.push_back(matrix_from_json(gj[k], o.rank, o.rank, "ranks[" + std::to_string(n) + "].generators"));
      if (e.contains("relations"))
        for (const auto& row : e["relations"]) {
          IntVec v;
          for (const auto& x : row) v.push_back(x.get<long long>());
          o.relations.push_back(std::move(v));
        }
      objs.push_back(std::move(o));
    }
    for (int n = 0; n < N; ++n)
      structure.push_back(matrix_from_json(ranks[n].at("structure"), objs[n + 1].rank, objs[n].rank,
                                           "ranks[" + std::to_string(n) + "].structure"));
    CoefficientSystem M(f, N, ring, j.value("label", std::string("loaded")), std::move(objs), std::move(structure));
    if (validate) {
      auto rep = check_coefficient_axiom(M);
      if (!rep.passed) throw InvalidInput("coefficient system fails the axiom check: " + rep.failure);
    }
    return M;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("coefficient system file: ") + e.what());
  }
}

inline CoefficientSystem load_coefficient_system(const std::string& path, bool validate = true) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  return coefficient_system_from_json(j, validate);
}

// ---------------------------------------------------------------------------
// Twisted sweeps

inline StabilityTable twisted_sweep(const CoefficientSystem& M, int i_max, int n_min, int n_max, int r, int k,
                                    const HomologyCaps& caps = {}, unsigned jobs = 1) {
  if (n_max + 1 > M.truncation())
    throw InvalidInput("twisted sweep to n = " + std::to_string(n_max) + " needs truncation >= " +
                       std::to_string(n_max + 1));
  SweepSpec spec;
  spec.family = M.family();
  spec.ring = M.ring();
  spec.i_max = i_max;
  spec.n_min = n_min;
  spec.n_max = n_max;
  spec.range = r <= 0 ? PredictedRange::untwisted(k) : PredictedRange::twisted(k, r);
  if (M.family().kind == FamilyKind::GeneralLinear) spec.range = PredictedRange{0, 0, 0, false};
  spec.caps = caps;
  spec.jobs = jobs;
  spec.coefficient_label = M.label();
  spec.module_fn = [&M](GroupPtr g) { return M.free_module(std::move(g)); };
  spec.structure_fn = [&M](int n) { return M.structure(n); };
  return stability_sweep(spec);
}

}  // namespace hstab
