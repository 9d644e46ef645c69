#include <catch_amalgamated.hpp>

#include <hstab/spaces.hpp>

#include <set>
#include <sstream>

using namespace hstab;

namespace {

std::uint64_t order(const Family& f, int n) { return group_order(f, n); }

}  // namespace

TEST_CASE("W_n level sizes are coset counts") {
  CHECK(build_wn(Family::symmetric(), 3).counts() == std::vector<std::size_t>{3, 6, 6});
  CHECK(build_wn(Family::symmetric(), 1).counts() == std::vector<std::size_t>{1});
  CHECK(build_wn(Family::general_linear(2), 2, 1).counts() == std::vector<std::size_t>{6, 6});
  for (auto [f, nmax] : {std::pair{Family::symmetric(), 6}, std::pair{Family::general_linear(2), 3},
                         std::pair{Family::hyperoctahedral(), 3}}) {
    for (int n = 1; n <= nmax; ++n) {
      auto w = build_wn(f, n);
      for (int p = 0; p < n; ++p) CHECK(w.count(p) == order(f, n) / order(f, n - p - 1));
      CHECK(w.check_identities().empty());
    }
  }
}

TEST_CASE("W_n for permutations is the complex of injective words") {
  for (int n = 1; n <= 6; ++n) {
    auto w = build_wn_full(Family::symmetric(), n);
    INFO("n = " << n);
    CHECK(compare_with_injective_words(w).empty());
  }
}

TEST_CASE("face maps commute with the group action") {
  CHECK(check_equivariance(build_wn_full(Family::symmetric(), 4)).empty());
  CHECK(check_equivariance(build_wn_full(Family::general_linear(2), 3)).empty());
  CHECK(check_equivariance(build_wn_full(Family::hyperoctahedral(), 3)).empty());
}

TEST_CASE("S_n for permutations is a full simplex") {
  for (int n = 1; n <= 6; ++n) {
    auto s = build_sn(Family::symmetric(), n);
    CHECK(s.is_full_simplex());
    CHECK(s.is_downward_closed());
    auto h = homology(chain_complex(s, true));
    for (const auto& g : h.groups) CHECK(g.is_zero());
  }
  auto pt = build_sn(Family::symmetric(), 1);
  CHECK(pt.vertex_count() == 1);
  CHECK(pt.dim() == 0);
}

TEST_CASE("S_2 for GL_2(F_2) against brute-force splittings") {
  auto s = build_sn(Family::general_linear(2), 2);
  CHECK(s.vertex_count() == 6);
  // A vertex is (v, C): a nonzero vector and a complementary line. An
  // ordered basis (a, b) spans the edge {(b, <a>), (a, <b>)}.
  std::set<std::set<std::pair<int, int>>> edges;
  for (int a = 1; a < 4; ++a)
    for (int b = 1; b < 4; ++b)
      if (a != b) edges.insert(std::set<std::pair<int, int>>{{b, a}, {a, b}});
  CHECK(s.count(1) == edges.size());
  CHECK(s.is_downward_closed());
}

TEST_CASE("hypotheses: transitivity and stabilizers") {
  auto r = check_hypotheses(Family::symmetric(), 4, 3);
  CHECK(r.passed);
  CHECK(r.levels[0].stabilizer_order == 6);
  CHECK(r.levels[2].stabilizer_order == 1);
  auto g = check_hypotheses(Family::general_linear(2), 3, 1);
  CHECK(g.passed);
  CHECK(g.levels[0].stabilizer_order == 6);
  for (int n = 1; n <= 5; ++n) CHECK(check_hypotheses(Family::symmetric(), n).passed);
  for (int n = 1; n <= 3; ++n) CHECK(check_hypotheses(Family::general_linear(2), n).passed);
}

TEST_CASE("GL W_n connectivity is measured") {
  for (int n = 2; n <= 3; ++n) {
    auto c = chain_complex(build_wn(Family::general_linear(2), n), true);
    auto rep = connectivity_report(c, n - 1);
    CHECK(rep.connectivity >= -1);
  }
}

TEST_CASE("incidence export") {
  std::ostringstream os;
  injective_words(2).write_incidence(os);
  CHECK(os.str() == "0 0 :\n0 1 :\n1 0 : 1 0\n1 1 : 0 1\n");
  CHECK(build_wn(Family::symmetric(), 3).summary()["counts"] == nlohmann::json({3, 6, 6}));
}

TEST_CASE("truncated W_n restricts the computable degrees") {
  auto w = build_wn(Family::symmetric(), 4, 1);
  CHECK(w.complete_through() == 0);
  auto c = chain_complex(w, true);
  CHECK(c.exact_through() == 0);
  CHECK_THROWS_AS(homology(c, 1), InvalidInput);
}
