#include <catch_amalgamated.hpp>

#include <hstab/cantor.hpp>

#include <random>

using namespace hstab;

namespace {

constexpr std::uint64_t kSeed = 20240611;

TreePair sample(int k, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> carets(0, 5);
  return random_tree_pair(k, n, carets(rng), rng);
}

}  // namespace

TEST_CASE("forest parsing and printing") {
  auto f = Forest::parse(2, "((..).),.");
  CHECK(f.roots() == 2);
  CHECK(f.leaf_count() == 4);
  CHECK(f.carets() == 2);
  CHECK(f.to_string() == "((..).),.");
  CHECK(Forest::parse(3, "(.(...).)").leaf_count() == 5);
  CHECK_THROWS_AS(Forest::parse(2, "(...)"), InvalidInput);
  CHECK_THROWS_AS(Forest::parse(2, "(."), InvalidInput);
  CHECK_THROWS_AS(Forest(2, 1, {{0, 0}}), InvalidInput);
  CHECK_THROWS_AS(Forest(2, 1, {{0}, {0, 1}}), InvalidInput);
}

TEST_CASE("tree pair serialization round trip") {
  std::mt19937_64 rng(kSeed);
  for (int k : {2, 3, 4})
    for (int n : {1, 2, 3})
      for (int s = 0; s < 50; ++s) {
        auto a = sample(k, n, rng);
        CHECK(TreePair::parse(a.to_string()) == a);
      }
  CHECK_THROWS_AS(TreePair::parse("2:(..)|(..)|1,1"), InvalidInput);
  CHECK_THROWS_AS(TreePair::parse("2:(..)|.|1"), InvalidInput);
  CHECK_THROWS_AS(TreePair::parse("nonsense"), InvalidInput);
}

TEST_CASE("reduction") {
  auto trivial = TreePair::parse("2:((..).)|((..).)|1,2,3");
  CHECK(reduce(trivial) == TreePair::identity(2, 1));
  // a standard element of V: leaves 0, 10, 11 go to 00, 01, 1 with a swap
  auto x = TreePair::parse("2:(.(..))|((..).)|2,1,3");
  CHECK(is_reduced(x));
  CHECK(reduce(x) == x);
  std::mt19937_64 rng(kSeed);
  for (int s = 0; s < 1000; ++s) {
    const int k = 2 + s % 3, n = 1 + (s / 3) % 3;
    // unreduced pair: expand a reduced one at random leaves
    auto a = sample(k, n, rng);
    auto b = a;
    for (int e = 0; e < 3; ++e) {
      std::uniform_int_distribution<std::size_t> pick(0, b.perm().size() - 1);
      b.expand_source(pick(rng));
    }
    CHECK(b.leaf_count_consistent());
    auto r = reduce(b);
    CHECK(r == a);
    CHECK(reduce(r) == r);
    CHECK(reduce_random(b, rng) == r);
  }
}

TEST_CASE("group laws") {
  std::mt19937_64 rng(kSeed + 1);
  for (int k : {2, 3, 4})
    for (int n : {1, 2, 3}) {
      const auto e = TreePair::identity(k, n);
      for (int s = 0; s < 112; ++s) {
        auto a = sample(k, n, rng), b = sample(k, n, rng), c = sample(k, n, rng);
        CHECK(compose(a, inverse(a)) == e);
        CHECK(compose(inverse(a), a) == e);
        CHECK(compose(e, a) == a);
        CHECK(compose(a, e) == a);
        if (s < 34) CHECK(compose(a, compose(b, c)) == compose(compose(a, b), c));
        CHECK(compose(a, b).leaf_count_consistent());
      }
    }
  CHECK_THROWS_AS(compose(TreePair::identity(2, 1), TreePair::identity(2, 2)), InvalidInput);
  CHECK_THROWS_AS(compose(TreePair::identity(2, 1), TreePair::identity(3, 1)), InvalidInput);
}

TEST_CASE("composition acts on points") {
  auto x = TreePair::parse("2:(.(..))|((..).)|2,1,3");
  auto x2 = compose(x, x);
  CHECK(x2 == TreePair::parse(compose(x, x).to_string()));
  CHECK_FALSE(x2 == TreePair::identity(2, 1));
  // the first powers are distinct
  std::vector<TreePair> powers{TreePair::identity(2, 1)};
  for (int i = 1; i <= 6; ++i) powers.push_back(compose(x, powers.back()));
  for (std::size_t i = 0; i < powers.size(); ++i)
    for (std::size_t j = i + 1; j < powers.size(); ++j) CHECK_FALSE(powers[i] == powers[j]);
}

TEST_CASE("stabilization") {
  CHECK(stabilize_v(TreePair::identity(2, 1)) == TreePair::identity(2, 2));
  std::mt19937_64 rng(kSeed + 2);
  for (int k : {2, 3, 4})
    for (int n : {1, 2, 3})
      for (int s = 0; s < 56; ++s) {
        auto a = sample(k, n, rng), b = sample(k, n, rng);
        CHECK(stabilize_v(compose(a, b)) == compose(stabilize_v(a), stabilize_v(b)));
        CHECK(is_reduced(stabilize_v(a)));
        CHECK((stabilize_v(a) == stabilize_v(b)) == (a == b));
      }
}

TEST_CASE("subdivision isomorphism") {
  CHECK(subdivision_iso(TreePair::identity(2, 1)) == TreePair::identity(2, 2));
  CHECK(subdivision_iso(TreePair::identity(3, 2)) == TreePair::identity(3, 4));
  std::mt19937_64 rng(kSeed + 3);
  for (int k : {2, 3, 4})
    for (int n : {1, 2, 3})
      for (int s = 0; s < 56; ++s) {
        auto a = sample(k, n, rng), b = sample(k, n, rng);
        auto sa = subdivision_iso(a);
        CHECK(sa.roots() == n + k - 1);
        CHECK(subdivision_inverse(sa) == a);
        CHECK(subdivision_iso(compose(a, b)) == compose(sa, subdivision_iso(b)));
        CHECK(subdivision_iso(stabilize_v(a)) == stabilize_v(sa));
        auto c = sample(k, n + k - 1, rng);
        CHECK(subdivision_iso(subdivision_inverse(c)) == c);
        // every root gives an isomorphism
        CHECK(subdivide_root(compose(a, b), n - 1) == compose(subdivide_root(a, n - 1), subdivide_root(b, n - 1)));
      }
}

TEST_CASE("subdividing the last interval breaks the stabilization square") {
  std::mt19937_64 rng(kSeed + 4);
  int failures = 0;
  for (int s = 0; s < 50; ++s) {
    auto a = sample(2, 2, rng);
    if (subdivide_root(stabilize_v(a), 2) != stabilize_v(subdivide_root(a, 1))) ++failures;
  }
  CHECK(failures > 0);
}
