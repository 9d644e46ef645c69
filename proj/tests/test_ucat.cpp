#include <catch_amalgamated.hpp>

#include <hstab/ucat.hpp>

#include <random>

using namespace hstab;

TEST_CASE("bracket hom-set sizes") {
  BracketCategory c(Family::symmetric(), 5);
  CHECK(c.hom_size(0, 5) == 1);
  CHECK(c.hom_size(2, 5) == 20);
  CHECK(c.hom_size(5, 5) == 120);
  BracketCategory gl(Family::general_linear(2), 3);
  CHECK(gl.hom_size(1, 3) == 168 / 6);
  CHECK(gl.hom_size(2, 3) == 168);
}

TEST_CASE("symmetric family recovers FI") {
  auto r = check_fi(4);
  INFO(r.failure);
  CHECK(r.passed);
  CHECK(r.checks > 1000);
}

TEST_CASE("composition ignores the choice of representative") {
  BracketCategory c(Family::hyperoctahedral(), 3);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> pick(0, 3);
    int a = pick(rng), b = pick(rng), d = pick(rng);
    int m = std::min({a, b, d}), p = std::max({a, b, d}), n = a + b + d - m - p;
    auto pick_el = [&](int r) {
      std::uniform_int_distribution<int> e(0, static_cast<int>(c.group(r).order()) - 1);
      return c.group(r).element(e(rng));
    };
    const BracketMorphism g{n, p, pick_el(p)}, f{m, n, pick_el(n)};
    CHECK(c.compose(g, f) == c.compose(c.canonical(n, g.rep), c.canonical(m, f.rep)));
  }
}

TEST_CASE("associativity outside the symmetric family") {
  BracketCategory c(Family::general_linear(2), 3);
  for (const auto& h : c.homset(2, 3))
    for (const auto& g : c.homset(1, 2))
      for (const auto& f : c.homset(0, 1))
        REQUIRE(c.compose(h, c.compose(g, f)) == c.compose(c.compose(h, g), f));
}

TEST_CASE("C_{A,X} hom-sets match the bracket construction") {
  auto s = verify_cax_quotient(Family::symmetric(), 4);
  INFO(s.failure);
  CHECK(s.passed);
  auto g = verify_cax_quotient(Family::general_linear(2), 3);
  INFO(g.failure);
  CHECK(g.passed);
  auto b = verify_cax_quotient(Family::hyperoctahedral(), 3);
  CHECK(b.passed);
}

TEST_CASE("destabilization simplices are bracket morphisms") {
  for (int n = 1; n <= 4; ++n) {
    auto r = cross_check_wn(Family::symmetric(), n);
    INFO("n = " << n << ": " << r.failure);
    CHECK(r.passed);
  }
  auto g = cross_check_wn(Family::general_linear(2), 3);
  INFO(g.failure);
  CHECK(g.passed);
}

TEST_CASE("hom-set dump") {
  BracketCategory c(Family::symmetric(), 3);
  auto j = c.to_json(1, 3);
  CHECK(j["count"] == 3);
  CHECK(j["representatives"].size() == 3);
  CHECK_THROWS_AS(c.homset(3, 1), InvalidInput);
}
