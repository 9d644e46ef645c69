#include <catch_amalgamated.hpp>

#include <hstab/coeffs.hpp>

using namespace hstab;

TEST_CASE("hom-set sizes of the truncated category") {
  auto c = build_cax(Family::symmetric(), 4);
  CHECK(c.hom(2, 4).size() == 12);
  for (int n = 0; n <= 4; ++n) {
    CHECK(c.hom(n, n).size() == c.group(n).order());
    CHECK(c.hom(0, n).size() == 1);
    for (int m = 0; m <= n; ++m) CHECK(c.hom(m, n).size() * c.group(n - m).order() == c.group(n).order());
  }
  auto gl = build_cax(Family::general_linear(2), 3);
  CHECK(gl.hom(1, 3).size() == 168 / 6);
  CHECK(gl.hom(1, 3).size() * gl.group(2).order() == gl.group(3).order());
}

TEST_CASE("composition is well defined on classes") {
  CHECK(build_cax(Family::symmetric(), 4).check_composition(4).passed);
  CHECK(build_cax(Family::general_linear(2), 3).check_composition(3).passed);
  CHECK(build_cax(Family::hyperoctahedral(), 3).check_composition(3).passed);
}

TEST_CASE("composition is associative") {
  auto c = build_cax(Family::symmetric(), 4);
  for (int m = 0; m <= 4; ++m)
    for (int n = m; n <= 4; ++n)
      for (int p = n; p <= 4; ++p)
        for (int q = p; q <= 4; ++q) {
          const auto& A = c.hom(m, n);
          const auto& B = c.hom(n, p);
          const auto& C = c.hom(p, q);
          for (std::uint32_t a = 0; a < A.size(); a += 3)
            for (std::uint32_t b = 0; b < B.size(); b += 5)
              for (std::uint32_t d = 0; d < C.size(); d += 7)
                CHECK(c.compose(m, p, q, d, c.compose(m, n, p, b, a)) == c.compose(m, n, q, c.compose(n, p, q, d, b), a));
        }
}

TEST_CASE("axiom check") {
  for (const auto& f : {Family::symmetric(), Family::hyperoctahedral()}) {
    CHECK(check_coefficient_axiom(constant_system(f, 4)).passed);
    CHECK(check_coefficient_axiom(standard_system(f, 4)).passed);
    CHECK(check_coefficient_axiom(zero_system(f, 3)).passed);
  }
  CHECK(check_coefficient_axiom(constant_system(Family::general_linear(2), 3)).passed);
  auto bad = check_coefficient_axiom(sign_violator(Family::symmetric(), 4));
  CHECK_FALSE(bad.passed);
  CHECK(bad.witness.contains("element"));
  CHECK(bad.witness["moved"]["image"] == "(-1)");
}

TEST_CASE("suspension") {
  SECTION("constant") {
    auto s = suspension(constant_system(Family::symmetric(), 4));
    CHECK(s.natural_ok);
    for (const auto& m : s.natural) CHECK(m == IntMatrix::identity(1));
    CHECK(check_coefficient_axiom(s.system).passed);
  }
  SECTION("standard: inclusion with constant cokernel") {
    auto M = standard_system(Family::symmetric(), 5);
    auto s = suspension(M);
    CHECK(s.natural_ok);
    CHECK(s.system.truncation() == 4);
    for (int n = 0; n <= 4; ++n) {
      CHECK(s.system.rank(n) == static_cast<std::size_t>(n + 1));
      // σ_n sends e_i to e_{i+1}
      for (int i = 0; i < n; ++i) CHECK(s.natural[n](i + 1, i) == 1);
      CHECK(s.system.module(n).rank() == static_cast<std::size_t>(n + 1));
    }
    CHECK(check_coefficient_axiom(s.system).passed);
    auto d = degree(suspension(M).system);
    CHECK(d.status == "determined");
  }
  SECTION("zero") {
    auto s = suspension(zero_system(Family::symmetric(), 3));
    CHECK(s.system.is_zero());
  }
  SECTION("too small") { CHECK_THROWS_AS(suspension(constant_system(Family::symmetric(), 0)), InvalidInput); }
}

TEST_CASE("degrees") {
  CHECK(degree(zero_system(Family::symmetric(), 6)).degree == -1);
  CHECK(degree(constant_system(Family::symmetric(), 6)).degree == 0);
  auto st = degree(standard_system(Family::symmetric(), 6));
  CHECK(st.degree == 1);
  CHECK(st.status == "determined");
  CHECK(degree(constant_system(Family::general_linear(2), 3)).degree == 0);
  CHECK(degree(standard_system(Family::hyperoctahedral(), 4)).degree == 1);
  CHECK(degree(constant_system(Family::symmetric(), 0)).status == "not determined");
  // monotone in the truncation
  std::optional<int> last;
  for (int N = 1; N <= 6; ++N) {
    auto d = degree(standard_system(Family::symmetric(), N));
    if (last) {
      REQUIRE(d.degree);
      CHECK(*d.degree >= *last);
    }
    if (d.degree) last = d.degree;
  }
  CHECK(last == 1);
}

TEST_CASE("a system with kernel is not of finite degree") {
  // M_n = Z for n = 0, zero above: σ_0 kills everything
  std::vector<CoefficientSystem::Object> objs;
  const Family f = Family::symmetric();
  for (int n = 0; n <= 3; ++n) {
    std::size_t r = n == 0 ? 1 : 0;
    objs.push_back({r, std::vector<IntMatrix>(generators(f, n).size(), IntMatrix::identity(r)), {}});
  }
  std::vector<IntMatrix> st = {IntMatrix(0, 1), IntMatrix(0, 0), IntMatrix(0, 0)};
  CoefficientSystem M(f, 3, Coefficients::integers(), "point", objs, st);
  CHECK(check_coefficient_axiom(M).passed);
  auto d = degree(M);
  CHECK(d.status == "infinite within truncation");
  CHECK_FALSE(d.degree);
  CHECK(d.witness["rank"] == 0);
}

TEST_CASE("json round trip and validation on load") {
  auto M = standard_system(Family::symmetric(), 3);
  auto j = M.to_json();
  auto back = coefficient_system_from_json(j);
  CHECK(back.to_json() == j);
  auto bad = sign_violator(Family::symmetric(), 3).to_json();
  CHECK_THROWS_AS(coefficient_system_from_json(bad), InvalidInput);
  CHECK_NOTHROW(coefficient_system_from_json(bad, false));
  j["ranks"][2]["generators"].erase(0);
  CHECK_THROWS_AS(coefficient_system_from_json(j), InvalidInput);
  auto p = standard_system(Family::symmetric(), 3, Coefficients::prime_field(3));
  CHECK(coefficient_system_from_json(p.to_json()).to_json() == p.to_json());
}

TEST_CASE("twisted sweeps") {
  SECTION("constant coefficients reduce to the untwisted sweep") {
    auto t = twisted_sweep(constant_system(Family::symmetric(), 5), 1, 1, 4, 0, 2);
    SweepSpec spec;
    spec.n_max = 4;
    auto u = stability_sweep(spec);
    for (int n = 1; n <= 4; ++n)
      for (int i = 0; i <= 1; ++i) {
        CHECK(t.cell(n, i).value == u.cell(n, i).value);
        CHECK(t.cell(n, i).map_status == u.cell(n, i).map_status);
      }
  }
  SECTION("standard coefficients") {
    auto t = twisted_sweep(standard_system(Family::symmetric(), 6), 1, 1, 5, 1, 2);
    for (int n = 1; n <= 5; ++n) CHECK(t.cell(n, 0).value.to_string() == "Z");
    CHECK(t.violations() == 0);
    CHECK(t.skipped() == 0);
  }
  CHECK_THROWS_AS(twisted_sweep(standard_system(Family::symmetric(), 3), 1, 1, 3, 1, 2), InvalidInput);
}
