#include <catch_amalgamated.hpp>

#include <hstab/chain_complex.hpp>
#include <hstab/spaces.hpp>

#include <random>

using namespace hstab;

namespace {

// D_n = Σ_k (−1)^k C(n,k) (n−k)!
long long derangements(int n) {
  long long total = 0;
  for (int k = 0; k <= n; ++k) {
    long long c = 1;
    for (int j = 0; j < k; ++j) c = c * (n - j) / (j + 1);
    long long f = 1;
    for (int j = 2; j <= n - k; ++j) f *= j;
    total += (k % 2 ? -1 : 1) * c * f;
  }
  return total;
}

SemiSimplicialSet circle() {
  // vertices 0,1,2; edge s joins s and s+1 mod 3
  std::vector<std::vector<std::vector<std::uint32_t>>> faces(2);
  faces[1] = {{1, 2, 0}, {0, 1, 2}};
  return SemiSimplicialSet({3, 3}, faces);
}

}  // namespace

TEST_CASE("point and circle") {
  SemiSimplicialSet pt({1}, {{}});
  auto h = homology(chain_complex(pt, true));
  for (const auto& g : h.groups) CHECK(g.is_zero());
  auto c = homology(chain_complex(circle(), false));
  CHECK(c.at(0).betti == 1);
  CHECK(c.at(1).betti == 1);
  CHECK(c.at(1).torsion.empty());
}

TEST_CASE("nonzero square of boundaries is rejected") {
  auto d1 = SparseIntMatrix::from_triplets(1, 1, {{0, 0, 1}});
  auto d2 = SparseIntMatrix::from_triplets(1, 1, {{0, 0, 1}});
  ChainComplex c(0, {1, 1, 1}, {d1, d2}, Coefficients::integers());
  CHECK_THROWS_AS(homology(c), IntegrityError);
}

TEST_CASE("injective words on two letters") {
  auto c = chain_complex(injective_words(2), false);
  auto d1 = c.boundary(1);
  CHECK(d1.rows() == 2);
  CHECK(d1.cols() == 2);
  for (const auto& t : d1.triplets()) CHECK((t.value == 1 || t.value == -1));
  CHECK(d1.nonzeros() == 4);
}

TEST_CASE("injective words: connectivity and top homology") {
  CHECK(injective_words(3).counts() == std::vector<std::size_t>{3, 6, 6});
  CHECK(injective_words(0).levels() == 0);
  for (int n = 2; n <= 6; ++n) {
    auto c = chain_complex(injective_words(n), true);
    auto h = homology(c);
    for (int i = -1; i <= n - 2; ++i) CHECK(h.at(i).is_zero());
    CHECK(h.at(n - 1).torsion.empty());
    if (n >= 3) CHECK(static_cast<long long>(h.at(n - 1).betti) == derangements(n));
    auto rep = connectivity_report(c, n - 2);
    CHECK(rep.connectivity >= n - 2);
    CHECK(rep.kind == "homological");
  }
  CHECK(derangements(4) == 9);
}

TEST_CASE("Euler characteristic and universal coefficients") {
  std::vector<SemiSimplicialSet> spaces = {injective_words(4), circle(),
                                           build_wn(Family::general_linear(2), 3)};
  // a complex with torsion: the real projective plane as a cellular model
  for (const auto& x : spaces) {
    auto c = chain_complex(x, false);
    auto hz = homology(c);
    long long chi_cells = 0, chi_h = 0;
    for (int p = 0; p < x.levels(); ++p) chi_cells += (p % 2 ? -1 : 1) * static_cast<long long>(x.count(p));
    for (const auto& g : hz.groups) chi_h += (g.degree % 2 ? -1 : 1) * static_cast<long long>(g.betti);
    CHECK(chi_cells == chi_h);
    for (std::uint32_t p : {2u, 3u, 5u}) {
      auto hp = homology(chain_complex(x, false, Coefficients::prime_field(p)));
      for (const auto& g : hp.groups) {
        std::size_t expect = hz.at(g.degree).betti;
        for (const auto& t : hz.at(g.degree).torsion) expect += (t % p == 0);
        if (g.degree > 0)
          for (const auto& t : hz.at(g.degree - 1).torsion) expect += (t % p == 0);
        CHECK(g.betti == expect);
      }
    }
  }
}

TEST_CASE("torsion from a two-cell model of the projective plane") {
  // one cell in each degree: ∂_1 = 0, ∂_2 = 2
  ChainComplex c(0, {1, 1, 1},
                 {SparseIntMatrix(1, 1), SparseIntMatrix::from_triplets(1, 1, {{0, 0, 2}})},
                 Coefficients::integers());
  auto h = homology(c);
  CHECK(h.at(0).betti == 1);
  CHECK(h.at(1).torsion == std::vector<Integer>{2});
  CHECK(h.at(2).is_zero());
  auto h2 = homology(ChainComplex(0, {1, 1, 1},
                                  {SparseIntMatrix(1, 1), SparseIntMatrix::from_triplets(1, 1, {{0, 0, 2}})},
                                  Coefficients::prime_field(2)));
  CHECK(h2.at(1).betti == 1);
  CHECK(h2.at(2).betti == 1);
}

TEST_CASE("SNF invariant under row and column permutations") {
  auto c = chain_complex(injective_words(4), false);
  std::mt19937 rng(99);
  for (int d = 1; d <= 3; ++d) {
    auto m = c.boundary(d);
    auto base = smith_normal_form(m);
    std::vector<std::size_t> rp(m.rows()), cp(m.cols());
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    std::vector<Triplet> t;
    for (auto x : m.triplets()) t.push_back({rp[x.row], cp[x.col], x.value});
    auto shuffled = smith_normal_form(SparseIntMatrix::from_triplets(m.rows(), m.cols(), t));
    CHECK(shuffled.divisors == base.divisors);
  }
}
