#include <catch_amalgamated.hpp>

#include <hstab/grouphom.hpp>
#include <hstab/presentation.hpp>

using namespace hstab;

namespace {

std::shared_ptr<const FiniteGroup> presented(const Presentation& p) {
  return std::make_shared<const FiniteGroup>(FiniteGroup::generated_by(p.family, p.rank, p.images, p.name));
}

std::shared_ptr<const FiniteGroup> sym(int n) {
  return std::make_shared<const FiniteGroup>(FiniteGroup::from_family(Family::symmetric(), n));
}

std::string h(const GroupHomology& g, int i) { return g.result.at(i).to_string(); }

}  // namespace

TEST_CASE("cyclic groups: H_odd = Z/m, H_even = 0") {
  for (int m : {2, 3, 4, 5}) {
    auto g = presented(cyclic(m));
    auto M = GModule::trivial(g);
    for (Method method : {Method::Bar, Method::Resolution}) {
      auto r = group_homology(M, 4, method);
      CHECK(h(r, 0) == "Z");
      for (int i = 1; i <= 4; ++i) CHECK(h(r, i) == (i % 2 ? "Z/" + std::to_string(m) : "0"));
    }
  }
}

TEST_CASE("bar and resolution agree on small groups") {
  std::vector<std::shared_ptr<const FiniteGroup>> groups = {presented(cyclic(2)), presented(cyclic(4)),
                                                            presented(klein_four()), sym(3)};
  for (const auto& g : groups) {
    for (Coefficients ring : {Coefficients::integers(), Coefficients::prime_field(2), Coefficients::prime_field(3)}) {
      auto M = GModule::trivial(g, ring);
      auto a = group_homology(M, 3, Method::Bar);
      auto b = group_homology(M, 3, Method::Resolution);
      for (int i = 0; i <= 3; ++i) CHECK(a.result.at(i) == b.result.at(i));
    }
    if (g->family() == Family::symmetric() && g->order() == 6) {
      auto P = GModule::permutation(g);
      auto a = group_homology(P, 2, Method::Bar);
      auto b = group_homology(P, 2, Method::Resolution);
      for (int i = 0; i <= 2; ++i) CHECK(a.result.at(i) == b.result.at(i));
    }
  }
}

TEST_CASE("Klein four: Kunneth values") {
  auto r = group_homology(GModule::trivial(presented(klein_four())), 3, Method::Bar);
  CHECK(h(r, 1) == "Z/2+Z/2");
  CHECK(h(r, 2) == "Z/2");
  CHECK(h(r, 3) == "Z/2+Z/2+Z/2");
}

TEST_CASE("bar complex ranks for S3") {
  auto c = bar_complex(GModule::trivial(sym(3)), 3);
  CHECK(c.rank(0) == 1);
  CHECK(c.rank(1) == 5);
  CHECK(c.rank(2) == 25);
  CHECK(c.rank(3) == 125);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(homology(c, 3), InvalidInput);
}

TEST_CASE("bar tier refuses large groups") {
  CHECK_THROWS_AS(bar_complex(GModule::trivial(sym(5)), 2), ResourceError);
}

TEST_CASE("symmetric groups") {
  for (int n = 2; n <= 6; ++n) {
    auto r = group_homology(GModule::trivial(sym(n)), 1, n <= 4 ? Method::Bar : Method::Resolution);
    CHECK(h(r, 1) == "Z/2");
  }
  auto s4 = group_homology(GModule::trivial(sym(4)), 2, Method::Resolution);
  CHECK(h(s4, 2) == "Z/2");
  for (int n = 4; n <= 6; ++n) {
    auto r = group_homology(GModule::trivial(sym(n), Coefficients::prime_field(2)), 2, Method::Resolution);
    CHECK(r.result.at(2).betti == 2);
    CHECK(r.resolution->check_boundary_squares() == 0);
  }
}

TEST_CASE("alternating and linear groups: H_1") {
  const std::vector<std::string> expected = {"Z/3", "Z/3", "0", "0"};
  for (int n = 3; n <= 6; ++n) {
    auto g = std::make_shared<const FiniteGroup>(FiniteGroup::from_family(Family::symmetric(), n).derived_subgroup());
    auto r = group_homology(GModule::trivial(g), 1, Method::Resolution);
    CHECK(h(r, 1) == expected[n - 3]);
  }
  for (int n = 3; n <= 4; ++n) {
    auto g = std::make_shared<const FiniteGroup>(FiniteGroup::from_family(Family::general_linear(2), n));
    auto r = group_homology(GModule::trivial(g, Coefficients::prime_field(2)), 1, Method::Resolution);
    CHECK(r.result.at(1).is_zero());
  }
}

TEST_CASE("presentations are faithful and abelianize correctly") {
  struct Case {
    Presentation p;
    std::string ab;
  };
  std::vector<Case> cases = {{coxeter_symmetric(3), "Z/2"},      {coxeter_symmetric(5), "Z/2"},
                             {carmichael_alternating(4), "Z/3"}, {carmichael_alternating(5), "0"},
                             {cyclic(6), "Z/6"},                 {klein_four(), "Z/2+Z/2"},
                             {steinberg_gl2(2), "Z/2"},          {steinberg_gl2(3), "0"}};
  for (const auto& c : cases) {
    INFO(c.p.name);
    FiniteGroup g = c.p.family == Family::symmetric() && c.p.name.rfind("carmichael", 0) == 0
                        ? FiniteGroup::from_family(c.p.family, c.p.rank).derived_subgroup()
                        : FiniteGroup::generated_by(c.p.family, c.p.rank, c.p.images, c.p.name);
    auto check = verify_presentation(c.p, g);
    CHECK(check.passed());
    CHECK(describe(abelianization(c.p), Coefficients::integers()) == c.ab);
  }
  // abelianization agrees with H_1 computed independently
  auto a5 = std::make_shared<const FiniteGroup>(FiniteGroup::from_family(Family::symmetric(), 5).derived_subgroup());
  CHECK(h(group_homology(GModule::trivial(a5), 1, Method::Resolution), 1) == "0");
}

TEST_CASE("a wrong relator set is detected") {
  auto p = coxeter_symmetric(4);
  p.relators.push_back({1, -2});
  auto g = FiniteGroup::from_family(Family::symmetric(), 4);
  CHECK_FALSE(verify_presentation(p, g).passed());
}

TEST_CASE("induced maps") {
  auto s2 = sym(2), s3 = sym(3);
  auto M2 = GModule::trivial(s2), M3 = GModule::trivial(s3);
  auto id = IntMatrix::identity(1);
  SECTION("identity is an isomorphism") {
    GroupHom phi = GroupHom::from_function(*s3, *s3, [](const GroupElement& g) { return g; });
    for (int i = 0; i <= 3; ++i) CHECK(induced_map(phi, M3, M3, id, i).status == "iso");
  }
  SECTION("S2 -> S3") {
    GroupHom phi = stabilization_hom(*s2, *s3);
    CHECK(induced_map(phi, M2, M3, id, 1).status == "iso");
    // H_3(Σ2) = Z/2 → H_3(Σ3) = Z/6 is injective, not onto
    CHECK(induced_map(phi, M2, M3, id, 3).status == "neither");
  }
  SECTION("A3 -> S3 is zero on H_1") {
    auto a3 = std::make_shared<const FiniteGroup>(s3->derived_subgroup());
    GroupHom phi = GroupHom::from_function(*a3, *s3, [](const GroupElement& g) { return g; });
    auto m = induced_map(phi, GModule::trivial(a3), M3, id, 1);
    CHECK(m.status == "neither");
    CHECK(m.zero);
  }
  SECTION("resolution tier agrees with bar in degree 1") {
    auto s4 = sym(4);
    GroupHom phi = stabilization_hom(*s3, *s4);
    auto M4 = GModule::trivial(s4);
    auto a = group_homology(M3, 1, Method::Resolution);
    auto b = group_homology(M4, 1, Method::Resolution);
    for (int i = 0; i <= 1; ++i)
      CHECK(induced_map_low_degree(a, b, phi, M3, M4, id, i).status == induced_map(phi, M3, M4, id, i).status);
  }
  SECTION("non-equivariant compatibility map is rejected") {
    auto P3 = GModule::permutation(s3);
    IntMatrix bad(3, 1);
    bad(0, 0) = 1;
    auto id3 = GroupHom::from_function(*s3, *s3, [](const GroupElement& g) { return g; });
    CHECK_THROWS_AS(induced_map(id3, M3, P3, bad, 1), InvalidInput);
  }
}

TEST_CASE("coinvariants and universal coefficients") {
  auto s3 = sym(3);
  CHECK(describe(GModule::permutation(s3).coinvariants(), Coefficients::integers()) == "Z");
  CHECK(describe(GModule::sign(s3).coinvariants(), Coefficients::integers()) == "Z/2");
  auto hz = group_homology(GModule::trivial(s3), 4, Method::Bar);
  auto h3 = group_homology(GModule::trivial(s3, Coefficients::prime_field(3)), 3, Method::Bar);
  for (int i = 0; i <= 3; ++i) {
    auto count3 = [](const HomologyGroup& g) {
      std::size_t c = 0;
      for (const auto& t : g.torsion) c += (t % 3 == 0);
      return c;
    };
    std::size_t expect = hz.result.at(i).betti + count3(hz.result.at(i)) + (i ? count3(hz.result.at(i - 1)) : 0);
    CHECK(h3.result.at(i).betti == expect);
  }
}

TEST_CASE("stability sweep over symmetric groups") {
  SweepSpec spec;
  spec.i_max = 1;
  spec.n_min = 1;
  spec.n_max = 5;
  spec.range = PredictedRange::untwisted(2);
  auto t = stability_sweep(spec);
  CHECK(t.violations() == 0);
  CHECK(t.skipped() == 0);
  for (int n = 2; n <= 5; ++n) CHECK(t.cell(n, 1).value.to_string() == "Z/2");
  for (int n = 3; n <= 5; ++n) CHECK(t.cell(n, 1).map_status == "iso");
  CHECK(t.cell(5, 1).method == "resolution");
  CHECK(t.cell(1, 1).predicted == "none");
  CHECK(t.cell(2, 1).predicted == "surjective");
  CHECK(t.cell(3, 1).predicted == "iso");
  auto j = to_json(t);
  CHECK(j["cells"].size() == 10);
  CHECK(to_csv(t).find("n,i,betti,torsion,map_status,method,coefficient,within_predicted_range") == 0);
  spec.jobs = 3;
  CHECK(to_json(stability_sweep(spec)) == j);
}

TEST_CASE("mod 2 sweep in degree 2") {
  SweepSpec spec;
  spec.ring = Coefficients::prime_field(2);
  spec.i_max = 2;
  spec.n_min = 3;
  spec.n_max = 5;
  auto t = stability_sweep(spec);
  CHECK(t.violations() == 0);
  for (int n = 4; n <= 6 && n <= 5; ++n) CHECK(t.cell(n, 2).value.betti == 2);
  CHECK(t.cell(4, 2).map_status != "skipped");
}

TEST_CASE("a corrupted prediction is flagged") {
  SweepSpec spec;
  spec.i_max = 1;
  spec.n_min = 1;
  spec.n_max = 3;
  spec.range = PredictedRange{1, 0, 0, false};  // claims iso from n = i
  auto t = stability_sweep(spec);
  CHECK(t.cell(1, 1).violation);
}

TEST_CASE("commutator family") {
  auto c = commutator_family(Family::symmetric(), 5);
  CHECK(c.groups[5]->order() == 60);
  CHECK(c.stabilization(4).is_injective());
}
