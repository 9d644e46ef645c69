#include <catch_amalgamated.hpp>

#include <hstab/smith.hpp>

#include <random>
#include <sstream>

using namespace hstab;

namespace {

using Dense = std::vector<std::vector<Integer>>;

Integer det(Dense a) {
  // cofactor expansion; only used on tiny minors
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  Integer s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0) continue;
    Dense m;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      m.push_back(row);
    }
    Integer c = a[0][j] * det(m);
    s += (j % 2 == 0) ? c : Integer(-c);
  }
  return s;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Invariant factors from determinantal divisors: d_k = gcd of k-minors,
// factor_k = d_k / d_{k-1}.
std::vector<Integer> oracle_factors(const Dense& a) {
  const std::size_t R = a.size(), C = R ? a[0].size() : 0;
  std::vector<Integer> out;
  Integer prev = 1;
  for (std::size_t k = 1; k <= std::min(R, C); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(R, k, 0, cur, rs);
    subsets(C, k, 0, cur, cs);
    Integer g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        Dense m(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = a[r[i]][c[j]];
        g = gcd(g, det(m));
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

SparseIntMatrix to_sparse(const Dense& a) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != 0) t.push_back({i, j, a[i][j]});
  return SparseIntMatrix::from_triplets(a.size(), a.empty() ? 0 : a[0].size(), t);
}

}  // namespace

TEST_CASE("diagonal examples normalize to a divisibility chain") {
  auto r = smith_normal_form(SparseIntMatrix::diagonal({2, 3}, 2, 2));
  CHECK(r.divisors == std::vector<Integer>{1, 6});
  CHECK(r.rank == 2);
  auto z = smith_normal_form(SparseIntMatrix(3, 4));
  CHECK(z.rank == 0);
  CHECK(z.divisors.empty());
  auto t = smith_normal_form(SparseIntMatrix::diagonal({4, 6, 0}, 3, 3));
  CHECK(t.divisors == std::vector<Integer>{2, 12});
  CHECK(t.torsion() == std::vector<Integer>{2, 12});
}

TEST_CASE("random small matrices agree with determinantal divisors") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t R = 1 + rng() % 4, C = 1 + rng() % 4;
    Dense a(R, std::vector<Integer>(C));
    for (auto& row : a)
      for (auto& x : row) {
        int v = static_cast<int>(rng() % 11) - 5;
        x = (rng() % 3 == 0) ? 0 : v;
      }
    auto got = smith_normal_form(to_sparse(a));
    auto want = oracle_factors(a);
    INFO("trial " << trial);
    CHECK(got.divisors == want);
    CHECK(got.rank == want.size());
  }
}

TEST_CASE("rank mod p") {
  // [[2,0],[0,3]]: rank 1 mod 2 and mod 3, 2 mod 5
  auto m = SparseIntMatrix::diagonal({2, 3}, 2, 2);
  CHECK(rank_mod_p(m, 2) == 1);
  CHECK(rank_mod_p(m, 3) == 1);
  CHECK(rank_mod_p(m, 5) == 2);
}

TEST_CASE("left transform diagonalizes rows") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t R = 2 + rng() % 5, C = 1 + rng() % 5;
    Dense a(R, std::vector<Integer>(C));
    for (auto& row : a)
      for (auto& x : row) x = (rng() % 2) ? Integer(static_cast<int>(rng() % 9) - 4) : Integer(0);
    auto m = to_sparse(a);
    auto d = diagonalize_left(m);
    CHECK(d.pivots.size() + d.zero_rows.size() == R);
    // P·M: zero rows give zero, pivot rows are divisible by their divisor
    auto row_times = [&](const SparseVec<Integer>& p) {
      std::vector<Integer> out(C);
      for (const auto& [i, v] : p)
        for (std::size_t j = 0; j < C; ++j) out[j] += v * a[i][j];
      return out;
    };
    for (const auto& z : d.zero_rows)
      for (const auto& x : row_times(z)) CHECK(x == 0);
    for (const auto& pv : d.pivots) {
      auto row = row_times(pv.transform);
      bool nonzero = false;
      for (const auto& x : row) {
        CHECK(x % pv.divisor == 0);
        nonzero = nonzero || x != 0;
      }
      CHECK(nonzero);
    }
  }
}

TEST_CASE("triplet text round trip") {
  auto m = SparseIntMatrix::from_triplets(3, 2, {{0, 0, 5}, {2, 1, -7}, {2, 1, 7}, {1, 1, 3}});
  std::stringstream ss;
  m.write(ss);
  CHECK(ss.str() == "3 2 2\n0 0 5\n1 1 3\n");
  CHECK(SparseIntMatrix::read(ss) == m);
  std::stringstream bad("2 2 1\n0 5 1\n");
  CHECK_THROWS_AS(SparseIntMatrix::read(bad), InvalidInput);
}
