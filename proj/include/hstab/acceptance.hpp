#pragma once

// The acceptance suite: twelve numbered criteria, each producing a verdict,
// a one-line summary and a JSON payload. Timing is kept apart from results so
// two runs with the same seed can be compared byte for byte.

#include <hstab/cantor.hpp>
#include <hstab/chain_complex.hpp>
#include <hstab/coeffs.hpp>
#include <hstab/errors.hpp>
#include <hstab/grouphom.hpp>
#include <hstab/presentation.hpp>
#include <hstab/spaces.hpp>
#include <hstab/ucat.hpp>

#include <json.hpp>

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace hstab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  nlohmann::json data = nlohmann::json::object();
  double seconds = 0;
};

struct AcceptanceReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  bool passed() const {
    for (const auto& c : criteria)
      if (!c.passed) return false;
    return !criteria.empty();
  }
  // deterministic part
  nlohmann::json results() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : criteria)
      list.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"summary", c.summary}, {"data", c.data}});
    return {{"seed", seed}, {"passed", passed()}, {"criteria", list}};
  }
  nlohmann::json timing() const {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& c : criteria) t[std::to_string(c.id)] = c.seconds;
    return t;
  }
};

namespace acceptance {

// Collects named checks; the first failure becomes the summary.
struct Verdict {
  bool ok = true;
  std::size_t checks = 0;
  std::string first_failure;
  void require(bool cond, const std::string& what) {
    ++checks;
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
};

inline long long derangements(int n) {
  // inclusion–exclusion: Σ (−1)^k C(n,k) (n−k)!
  long long total = 0;
  for (int k = 0; k <= n; ++k) {
    long long c = 1, f = 1;
    for (int j = 0; j < k; ++j) c = c * (n - j) / (j + 1);
    for (int j = 2; j <= n - k; ++j) f *= j;
    total += (k % 2 ? -1 : 1) * c * f;
  }
  return total;
}

inline std::shared_ptr<const FiniteGroup> shared(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

inline std::shared_ptr<const FiniteGroup> from_presentation(const Presentation& p) {
  return shared(FiniteGroup::generated_by(p.family, p.rank, p.images, p.name));
}

inline CriterionResult injective_connectivity() {
  CriterionResult r{1, "injective words connectivity"};
  Verdict v;
  for (int n = 2; n <= 6; ++n) {
    auto rep = connectivity_report(chain_complex(injective_words(n), true), n - 2);
    r.data[std::to_string(n)] = rep.connectivity;
    v.require(rep.connectivity >= n - 2, "n = " + std::to_string(n) + " connectivity " + std::to_string(rep.connectivity));
  }
  r.passed = v.ok;
  r.summary = v.ok ? "reduced H_i = 0 for i <= n-2, n = 2..6" : v.first_failure;
  return r;
}

inline CriterionResult injective_top() {
  CriterionResult r{2, "injective words top homology"};
  Verdict v;
  for (int n = 3; n <= 6; ++n) {
    auto h = homology(chain_complex(injective_words(n), true)).at(n - 1);
    r.data[std::to_string(n)] = {{"rank", h.betti}, {"derangements", derangements(n)}};
    v.require(h.torsion.empty() && static_cast<long long>(h.betti) == derangements(n),
              "n = " + std::to_string(n) + ": rank " + std::to_string(h.betti) + " vs D_n " + std::to_string(derangements(n)));
  }
  r.passed = v.ok;
  r.summary = v.ok ? "rank H_{n-1} = D_n = 2, 9, 44, 265" : v.first_failure;
  return r;
}

inline CriterionResult wn_structure() {
  CriterionResult r{3, "destabilization complexes"};
  Verdict v;
  for (int n = 1; n <= 6; ++n) {
    const auto tag = "n = " + std::to_string(n);
    auto w = build_wn_full(Family::symmetric(), n);
    v.require(compare_with_injective_words(w).empty(), tag + ": W_n differs from injective words");
    auto s = build_sn(Family::symmetric(), n);
    v.require(s.is_full_simplex(), tag + ": S_n is not a simplex");
    bool acyclic = true;
    for (const auto& g : homology(chain_complex(s, true)).groups) acyclic = acyclic && g.is_zero();
    v.require(acyclic, tag + ": S_n has reduced homology");
  }
  nlohmann::json counts = nlohmann::json::object();
  for (auto [f, nmax] : {std::pair{Family::symmetric(), 6}, std::pair{Family::general_linear(2), 3}}) {
    for (int n = 1; n <= nmax; ++n) {
      auto w = build_wn(f, n);
      std::vector<std::size_t> c;
      for (int p = 0; p < n; ++p) {
        c.push_back(w.count(p));
        v.require(w.count(p) == group_order(f, n) / group_order(f, n - p - 1),
                  f.name() + " n = " + std::to_string(n) + " p = " + std::to_string(p) + ": simplex count");
      }
      counts[f.name()][std::to_string(n)] = c;
    }
  }
  r.data["counts"] = counts;
  r.passed = v.ok;
  r.summary = v.ok ? "W_n = injective words, S_n = simplex (n <= 6); coset counts exact" : v.first_failure;
  return r;
}

inline CriterionResult hypotheses() {
  CriterionResult r{4, "transitivity and stabilizers"};
  Verdict v;
  for (auto [f, nmax] : {std::pair{Family::symmetric(), 5}, std::pair{Family::general_linear(2), 3}})
    for (int n = 1; n <= nmax; ++n) {
      auto h = check_hypotheses(f, n);
      r.data[f.name()][std::to_string(n)] = h.passed;
      v.require(h.passed, f.name() + " n = " + std::to_string(n) + ": " + h.failure);
    }
  r.passed = v.ok;
  r.summary = v.ok ? "symmetric n <= 5 and gl(2) n <= 3 pass" : v.first_failure;
  return r;
}

inline CriterionResult bar_vs_resolution() {
  CriterionResult r{5, "group homology cross-validation"};
  Verdict v;
  struct Case {
    Presentation p;
    int top;  // degrees compared
  };
  std::vector<Case> cases = {{cyclic(2), 3}, {cyclic(3), 3}, {cyclic(4), 3}, {coxeter_symmetric(3), 3},
                             {klein_four(), 3}, {coxeter_symmetric(4), 2}};
  for (const auto& c : cases) {
    auto g = from_presentation(c.p);
    auto M = GModule::trivial(g);
    auto bar = group_homology(M, c.top, Method::Bar);
    auto res = group_homology(M, c.top, Method::Resolution);
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i <= c.top; ++i) {
      row.push_back(bar.result.at(i).to_string());
      v.require(bar.result.at(i) == res.result.at(i),
                c.p.name + " H_" + std::to_string(i) + ": bar " + bar.result.at(i).to_string() + " vs resolution " +
                    res.result.at(i).to_string());
    }
    const std::string ab = describe(abelianization(c.p), Coefficients::integers());
    v.require(verify_presentation(c.p, *g).passed(), c.p.name + ": presentation does not define the group");
    v.require(res.result.at(1).to_string() == ab, c.p.name + ": H_1 " + res.result.at(1).to_string() + " vs abelianization " + ab);
    r.data[c.p.name] = {{"homology", row}, {"abelianization", ab}};
  }
  r.passed = v.ok;
  r.summary = v.ok ? "bar = resolution through H_3 (H_2 for the order-24 group); H_1 = abelianization" : v.first_failure;
  return r;
}

inline CriterionResult symmetric_sweep(unsigned jobs) {
  CriterionResult r{6, "symmetric stability sweep"};
  Verdict v;
  SweepSpec z;
  z.i_max = 1;
  z.n_min = 2;
  z.n_max = 5;  // maps Σ_n → Σ_{n+1} up to Σ6
  z.jobs = jobs;
  z.range = PredictedRange::untwisted(2);
  auto tz = stability_sweep(z);
  v.require(tz.violations() == 0 && tz.skipped() == 0, "integral sweep has violations or skipped cells");
  for (int n = 2; n <= 5; ++n) v.require(tz.cell(n, 1).value.to_string() == "Z/2", "H_1 of S" + std::to_string(n));
  for (int n = 3; n <= 5; ++n)
    v.require(tz.cell(n, 1).map_status == "iso", "H_1 stabilization S" + std::to_string(n) + " -> S" + std::to_string(n + 1));
  auto s6 = shared(FiniteGroup::from_family(Family::symmetric(), 6));
  auto h6 = group_homology(GModule::trivial(s6), 1, Method::Resolution);
  v.require(h6.result.at(1).to_string() == "Z/2", "H_1 of S6");

  SweepSpec f2 = z;
  f2.ring = Coefficients::prime_field(2);
  f2.i_max = 2;
  f2.n_min = 4;
  f2.n_max = 5;
  auto t2 = stability_sweep(f2);
  v.require(t2.violations() == 0 && t2.skipped() == 0, "mod 2 sweep has violations or skipped cells");
  auto d6 = group_homology(GModule::trivial(s6, Coefficients::prime_field(2)), 2, Method::Resolution).result.at(2).betti;
  std::vector<std::size_t> dims = {t2.cell(4, 2).value.betti, t2.cell(5, 2).value.betti, d6};
  v.require(dims[0] == dims[1] && dims[1] == dims[2], "mod 2 H_2 dimensions not constant for n = 4..6");
  r.data = {{"integral", to_json(tz)}, {"mod2", to_json(t2)}, {"H1_S6", h6.result.at(1).to_string()}, {"mod2_H2_dims", dims}};
  r.passed = v.ok;
  r.summary = v.ok ? "H_1 = Z/2 (n = 2..6), iso from n = 3; mod 2 H_2 dim " + std::to_string(dims[0]) + " for n = 4..6"
                   : v.first_failure;
  return r;
}

inline CriterionResult alternating() {
  CriterionResult r{7, "alternating groups H_1"};
  Verdict v;
  const std::vector<std::string> expected = {"Z/3", "Z/3", "0", "0"};
  for (int n = 3; n <= 6; ++n) {
    auto g = shared(FiniteGroup::from_family(Family::symmetric(), n).derived_subgroup());
    auto h = group_homology(GModule::trivial(g), 1, Method::Resolution).result.at(1).to_string();
    r.data[std::to_string(n)] = h;
    v.require(g->order() * 2 == group_order(Family::symmetric(), n), "A" + std::to_string(n) + " has the wrong order");
    v.require(h == expected[n - 3], "H_1(A" + std::to_string(n) + ") = " + h);
  }
  r.passed = v.ok;
  r.summary = v.ok ? "H_1(A_n) = Z/3, Z/3, 0, 0 for n = 3..6" : v.first_failure;
  return r;
}

inline CriterionResult gl_vanishing() {
  CriterionResult r{8, "GL_n(F_2) vanishing"};
  Verdict v;
  for (int n = 3; n <= 4; ++n) {
    const auto tag = "n = " + std::to_string(n);
    try {
      auto g = shared(FiniteGroup::from_family(Family::general_linear(2), n));
      auto h = group_homology(GModule::trivial(g, Coefficients::prime_field(2)), 1, Method::Resolution).result.at(1);
      r.data[std::to_string(n)] = h.betti;
      v.require(h.is_zero(), tag + ": H_1 has dimension " + std::to_string(h.betti));
    } catch (const ResourceError& e) {
      r.data[std::to_string(n)] = "skipped";
      v.require(n == 4, tag + ": " + e.what());  // n = 4 is conditional on reach
    }
  }
  r.passed = v.ok;
  r.summary = v.ok ? "H_1(GL_n(F_2); F_2) = 0 for n = 3, 4" : v.first_failure;
  return r;
}

inline CriterionResult coefficient_degrees() {
  CriterionResult r{9, "coefficient systems"};
  Verdict v;
  const Family s = Family::symmetric();
  auto dz = degree(zero_system(s, 6));
  auto dc = degree(constant_system(s, 6));
  auto ds = degree(standard_system(s, 6));
  auto deg = [](const DegreeReport& d) { return d.degree ? std::to_string(*d.degree) : d.status; };
  v.require(dz.degree == -1, "degree(zero) = " + deg(dz));
  v.require(dc.degree == 0, "degree(constant) = " + deg(dc));
  v.require(ds.degree == 1, "degree(standard) = " + deg(ds));
  auto ac = check_coefficient_axiom(constant_system(s, 6));
  auto as = check_coefficient_axiom(standard_system(s, 6));
  auto bad = check_coefficient_axiom(sign_violator(s, 4));
  v.require(ac.passed, "constant system fails the axiom: " + ac.failure);
  v.require(as.passed, "standard system fails the axiom: " + as.failure);
  v.require(!bad.passed && !bad.witness.is_null(), "violator passes the axiom check");
  r.data = {{"degrees", {{"zero", deg(dz)}, {"constant", deg(dc)}, {"standard", deg(ds)}}},
            {"axiom", {{"constant", to_json(ac)}, {"standard", to_json(as)}, {"violator", to_json(bad)}}}};
  r.passed = v.ok;
  r.summary = v.ok ? "degrees -1, 0, 1 at N = 6; axiom passes, violator caught with witness" : v.first_failure;
  return r;
}

inline CriterionResult bracket() {
  CriterionResult r{10, "bracket category"};
  auto fi = check_fi(5);
  auto s = verify_cax_quotient(Family::symmetric(), 4);
  auto g = verify_cax_quotient(Family::general_linear(2), 3);
  r.data = {{"fi", to_json(fi)}, {"cax_symmetric_4", to_json(s)}, {"cax_gl2_3", to_json(g)}};
  r.passed = fi.passed && s.passed && g.passed;
  r.summary = r.passed ? "|Hom(m,n)| = n!/(n-m)! with injection composition (n <= 5); C_{A,X} quotients match"
                       : (!fi.passed ? "FI: " + fi.failure : !s.passed ? "symmetric: " + s.failure : "gl(2): " + g.failure);
  return r;
}

inline CriterionResult thompson(std::uint64_t seed, const std::vector<int>& ks = {2, 3, 4},
                                const std::vector<int>& ns = {1, 2, 3}, int samples = 1000) {
  CriterionResult r{11, "Thompson group suite"};
  Verdict v;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> carets(0, 5);
  for (int k : ks)
    for (int n : ns) {
      const auto tag = "k = " + std::to_string(k) + ", n = " + std::to_string(n);
      auto sample = [&](int roots) { return random_tree_pair(k, roots, carets(rng), rng); };
      const auto e = TreePair::identity(k, n);
      std::size_t before = v.checks;
      for (int s = 0; s < samples; ++s) {
        auto a = sample(n), b = sample(n), c = sample(n);
        // group laws
        v.require(compose(a, inverse(a)) == e && compose(inverse(a), a) == e, tag + ": inverse");
        v.require(compose(e, a) == a && compose(a, e) == a, tag + ": identity");
        v.require(compose(a, compose(b, c)) == compose(compose(a, b), c), tag + ": associativity");
        // confluence: random expansions reduce back, in any order
        auto x = a;
        for (int t = 0; t < 3; ++t) {
          std::uniform_int_distribution<std::size_t> pick(0, x.perm().size() - 1);
          x.expand_source(pick(rng));
        }
        v.require(reduce(x) == a && reduce_random(x, rng) == a, tag + ": reduction confluence");
        // homomorphisms
        v.require(stabilize_v(compose(a, b)) == compose(stabilize_v(a), stabilize_v(b)), tag + ": stabilization hom");
        auto sa = subdivision_iso(a);
        v.require(subdivision_iso(compose(a, b)) == compose(sa, subdivision_iso(b)), tag + ": subdivision hom");
        v.require(subdivision_inverse(sa) == a, tag + ": subdivision inverse");
        // compatibility square
        v.require(subdivision_iso(stabilize_v(a)) == stabilize_v(sa), tag + ": compatibility square");
      }
      r.data[std::to_string(k) + "," + std::to_string(n)] = v.checks - before;
    }
  r.passed = v.ok;
  r.summary = v.ok ? std::to_string(samples) + " samples per (k, n): all properties hold" : v.first_failure;
  return r;
}

}  // namespace acceptance

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  unsigned jobs = 1;
  std::set<int> only;  // empty: all of 1..11
};

// Criteria 1..11. Criterion 12 compares two of these reports.
inline AcceptanceReport run_acceptance(const AcceptanceOptions& opt,
                                       const std::function<void(const CriterionResult&)>& on_result = {}) {
  using namespace acceptance;
  std::vector<std::pair<int, std::function<CriterionResult()>>> suite = {
      {1, injective_connectivity},
      {2, injective_top},
      {3, wn_structure},
      {4, hypotheses},
      {5, bar_vs_resolution},
      {6, [&] { return symmetric_sweep(opt.jobs); }},
      {7, alternating},
      {8, gl_vanishing},
      {9, coefficient_degrees},
      {10, bracket},
      {11, [&] { return thompson(opt.seed); }},
  };
  AcceptanceReport rep;
  rep.seed = opt.seed;
  for (auto& [id, fn] : suite) {
    if (!opt.only.empty() && !opt.only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.id = id;
      c.name = "criterion " + std::to_string(id);
      c.passed = false;
      c.summary = std::string("error: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(c);
    rep.criteria.push_back(std::move(c));
  }
  return rep;
}

inline CriterionResult determinism(const AcceptanceReport& a, const AcceptanceReport& b) {
  CriterionResult r{12, "determinism"};
  const std::string x = a.results().dump(), y = b.results().dump();
  r.passed = x == y;
  r.data = {{"bytes", x.size()}, {"criteria", a.criteria.size()}};
  if (r.passed) {
    r.summary = "two runs with seed " + std::to_string(a.seed) + " give identical reports (" + std::to_string(x.size()) + " bytes)";
  } else {
    std::size_t k = 0;
    while (k < x.size() && k < y.size() && x[k] == y[k]) ++k;
    r.summary = "reports differ at byte " + std::to_string(k);
  }
  return r;
}

inline std::string format_line(const CriterionResult& c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", c.seconds);
  return std::string(c.passed ? "PASS" : "FAIL") + " [" + std::to_string(c.id) + "] " + c.name + ": " + c.summary + " (" +
         buf + ")";
}

}  // namespace hstab
