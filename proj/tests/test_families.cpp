#include <catch_amalgamated.hpp>

#include <hstab/families.hpp>
#include <hstab/finite_group.hpp>

using namespace hstab;

namespace {

// n! computed naively; group orders are compared against it.
std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

GroupElement perm(std::vector<int> images) {
  int n = static_cast<int>(images.size());
  return GroupElement(Family::symmetric(), n, std::move(images));
}

}  // namespace

TEST_CASE("enumeration sizes agree with closed-form orders") {
  for (int n = 0; n <= 6; ++n) {
    CHECK(enumerate(Family::symmetric(), n).size() == factorial(n));
    CHECK(group_order(Family::symmetric(), n) == factorial(n));
  }
  for (int n = 0; n <= 4; ++n)
    CHECK(enumerate(Family::hyperoctahedral(), n).size() == (factorial(n) << n));
  // |GL_n(F_2)| = 1, 1, 6, 168, 20160
  const std::uint64_t gl2[] = {1, 1, 6, 168, 20160};
  for (int n = 0; n <= 4; ++n) {
    CHECK(group_order(Family::general_linear(2), n) == gl2[n]);
    CHECK(enumerate(Family::general_linear(2), n).size() == gl2[n]);
  }
  CHECK(enumerate(Family::general_linear(3), 2).size() == 48);
  CHECK(enumerate(Family::general_linear(4), 2).size() == 96);
}

TEST_CASE("enumeration cap raises a resource error naming the order") {
  try {
    enumerate(Family::symmetric(), 8, 1000);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(e.size() == 40320);
  }
}

TEST_CASE("block braid on permutations") {
  // b_{2,1}: 1->2, 2->3, 3->1
  CHECK(braiding(Family::symmetric(), 2, 1) == perm({2, 3, 1}));
  CHECK(braiding(Family::symmetric(), 1, 2) == perm({3, 1, 2}));
  CHECK(stabilize(perm({2, 1})) == perm({2, 1, 3}));
  CHECK(block_sum(perm({2, 1}), perm({2, 1})) == perm({2, 1, 4, 3}));
}

TEST_CASE("group laws hold on enumerated elements") {
  for (Family f : {Family::symmetric(), Family::hyperoctahedral(), Family::general_linear(2),
                   Family::general_linear(3)}) {
    const int n = 3;
    auto all = enumerate(f, n);
    auto e = identity(f, n);
    for (std::size_t i = 0; i < all.size(); i += 7) {
      const auto& g = all[i];
      CHECK(is_valid(g));
      CHECK(compose(g, inverse(g)) == e);
      CHECK(compose(inverse(g), g) == e);
      for (std::size_t j = 0; j < all.size(); j += 11) {
        const auto& h = all[j];
        CHECK(inverse(compose(g, h)) == compose(inverse(h), inverse(g)));
      }
    }
  }
}

TEST_CASE("braid axioms hold for the standard families") {
  for (Family f : {Family::symmetric(), Family::hyperoctahedral(), Family::general_linear(2),
                   Family::general_linear(3)}) {
    auto rep = check_braid_axioms(f, 4);
    INFO(f.name() << ": " << rep.failure);
    CHECK(rep.passed);
    CHECK(rep.symmetric);
    CHECK(rep.checks > 0);
  }
}

TEST_CASE("a corrupted braiding is caught with a witness") {
  const Family f = Family::symmetric();
  auto bad = [f](int n, int m) {
    if (n == 2 && m == 1) return identity(f, 3);
    return braiding(f, n, m);
  };
  auto rep = check_braid_axioms(f, 4, bad);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(rep.failure.empty());
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("finite group wrapper") {
  auto s4 = FiniteGroup::from_family(Family::symmetric(), 4);
  CHECK(s4.order() == 24);
  auto a4 = s4.derived_subgroup();
  CHECK(a4.order() == 12);
  CHECK(a4.derived_subgroup().order() == 4);
  auto s3 = FiniteGroup::from_family(Family::symmetric(), 3);
  auto st = stabilization_hom(s3, s4);
  CHECK(st.is_homomorphism());
  CHECK(st.is_injective());
  for (std::size_t a = 0; a < s4.order(); ++a)
    CHECK(s4.multiply(static_cast<int>(a), s4.inverse(static_cast<int>(a))) ==
          s4.identity_index());
}
