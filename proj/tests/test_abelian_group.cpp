#include <algorithm>
#include <set>

#include "biprod/abelian_group.hpp"
#include "biprod/errors.hpp"
#include "doctest.h"

using namespace biprod;

namespace {

GroupElem el(std::initializer_list<long> c) { return GroupElem{c}; }

} // namespace

TEST_CASE("group construction and validation") {
  FiniteAbelianGroup g({2, 4});
  CHECK(g.order() == 8);
  CHECK(g.rank() == 2);
  CHECK(g.moduli() == std::vector<long>{2, 4});

  CHECK_THROWS_AS(FiniteAbelianGroup({}), invalid_input_error);
  CHECK_THROWS_AS(FiniteAbelianGroup({0}), invalid_input_error);
  CHECK_THROWS_AS(FiniteAbelianGroup({-3}), invalid_input_error);

  // Modulus 1 summands are legal and contribute nothing.
  FiniteAbelianGroup t({1});
  CHECK(t.order() == 1);
  CHECK(t.element(0) == t.zero());
}

TEST_CASE("indexing is a lexicographic bijection") {
  FiniteAbelianGroup g({2, 4});
  for (Idx i = 0; i < g.order(); ++i) CHECK(g.index_of(g.element(i)) == i);
  CHECK(g.element(0) == g.zero());
  // First coordinate is most significant.
  CHECK(g.element(1) == el({0, 1}));
  CHECK(g.element(4) == el({1, 0}));
  CHECK(g.index_of(el({1, 3})) == 7);
}

TEST_CASE("arithmetic and element orders") {
  FiniteAbelianGroup g({2, 4});
  CHECK(g.add(el({1, 3}), el({1, 2})) == el({0, 1}));
  CHECK(g.neg(el({1, 1})) == el({1, 3}));
  CHECK(g.sub(el({0, 1}), el({1, 3})) == el({1, 2}));
  CHECK(g.scalar_mul(3, el({1, 1})) == el({1, 3}));
  CHECK(g.reduce({-1, 7}) == el({1, 3}));

  CHECK(g.element_order(g.zero()) == 1);
  CHECK(g.element_order(el({0, 1})) == 4);
  CHECK(g.element_order(el({1, 2})) == 2);

  // Order oracle by direct powering, over a second group as well.
  for (const FiniteAbelianGroup& h :
       {FiniteAbelianGroup({2, 4}), FiniteAbelianGroup({3, 3})}) {
    for (Idx i = 0; i < h.order(); ++i) {
      GroupElem x = h.element(i);
      long d = h.element_order(x);
      CHECK(h.scalar_mul(d, x) == h.zero());
      for (long p = 2; p <= d; ++p)
        if (d % p == 0) CHECK(h.scalar_mul(d / p, x) != h.zero());
    }
  }
}

TEST_CASE("maps from generator images") {
  FiniteAbelianGroup g({2, 4});
  // Sending the order-2 generator to an order-4 element breaks a relation.
  CHECK_THROWS_AS(GroupMap::from_images(g, {el({0, 1}), el({0, 1})}),
                  invalid_hom_error);

  GroupMap id = GroupMap::identity(g);
  CHECK(id.is_auto());
  CHECK(id.map_order() == 1);

  // An involution without non-trivial kernel.
  GroupMap s = GroupMap::from_images(g, {el({1, 0}), el({1, 3})});
  CHECK(s.is_auto());
  CHECK(s.map_order() == 2);
  CHECK(s.compose(s) == id);
  CHECK(s.inverse() == s);
  CHECK(s.apply(el({0, 1})) == el({1, 3}));
  CHECK(s.apply_index(g.index_of(el({0, 1}))) == g.index_of(el({1, 3})));

  // Doubling on Z_5 has order 4; doubling on Z_4 is not injective.
  FiniteAbelianGroup z5({5});
  GroupMap dbl = GroupMap::from_images(z5, {el({2})});
  CHECK(dbl.is_auto());
  CHECK(dbl.map_order() == 4);
  FiniteAbelianGroup z4({4});
  CHECK_FALSE(GroupMap::from_images(z4, {el({2})}).is_auto());
}

TEST_CASE("subgroups, orbits, fixed points, cosets") {
  FiniteAbelianGroup g({2, 4});
  Subgroup s = Subgroup::from_generators(g, {el({1, 0}), el({0, 2})});
  CHECK(s.order() == 4);
  CHECK(s.contains(g.index_of(el({1, 2}))));
  CHECK_FALSE(s.contains(g.index_of(el({0, 1}))));

  // from_members insists on actual closure.
  CHECK_THROWS_AS(
      Subgroup::from_members(g, {g.index_of(g.zero()), g.index_of(el({0, 1}))}),
      invalid_input_error);

  GroupMap sigma = GroupMap::from_images(g, {el({1, 0}), el({1, 3})});
  std::vector<GroupElem> orb = orbit(sigma, el({0, 1}));
  CHECK(orb == std::vector<GroupElem>{el({0, 1}), el({1, 3})});
  CHECK(orbit_length(sigma, el({0, 1})) == 2);
  CHECK(orbit_length(sigma, el({1, 0})) == 1);

  // The fixed subgroup of this involution is exactly s.
  Subgroup f = fixed_subgroup(sigma);
  CHECK(f.members() == s.members());

  std::vector<std::vector<Idx>> cs = cosets(g, s);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0][0] == 0);
  CHECK(cs[0].size() == 4);
  CHECK(cs[1].size() == 4);
  std::set<Idx> all;
  for (const auto& c : cs) all.insert(c.begin(), c.end());
  CHECK(all.size() == 8);
}

TEST_CASE("smith normal form diagonals") {
  auto diag_of = [](std::vector<std::vector<long long>> a) {
    return smith_normal_form(std::move(a)).diag;
  };
  CHECK(diag_of({{2, 0}, {0, 4}}) == std::vector<long long>{2, 4});
  // Divisibility fix-up: diag(2,3) ~ diag(1,6).
  CHECK(diag_of({{2, 0}, {0, 3}}) == std::vector<long long>{1, 6});
  CHECK(diag_of({{4, 0}, {0, 6}}) == std::vector<long long>{2, 12});
  CHECK(diag_of({{2, 1}, {1, 2}}) == std::vector<long long>{1, 3});
}

TEST_CASE("quotients with known invariant factors") {
  // (Z4 + Z6) / <(1,1)> has order 24/12 = 2.
  {
    FiniteAbelianGroup g({4, 6});
    Subgroup s = Subgroup::from_generators(g, {el({1, 1})});
    CHECK(s.order() == 12);
    Quotient q = quotient(g, s);
    CHECK(q.group.moduli() == std::vector<long>{2});
  }
  // (Z4 + Z2) / <(2,1)> is cyclic of order 4.
  {
    FiniteAbelianGroup g({4, 2});
    Subgroup s = Subgroup::from_generators(g, {el({2, 1})});
    CHECK(s.order() == 2);
    Quotient q = quotient(g, s);
    CHECK(q.group.moduli() == std::vector<long>{4});
    // section is a one-sided inverse of proj.
    for (Idx i = 0; i < q.group.order(); ++i) CHECK(q.proj[q.section[i]] == i);
  }
  // Quotient by the whole group is trivial.
  {
    FiniteAbelianGroup g({2, 2});
    Subgroup s = Subgroup::from_generators(g, {el({1, 0}), el({0, 1})});
    Quotient q = quotient(g, s);
    CHECK(q.group.order() == 1);
  }
}
