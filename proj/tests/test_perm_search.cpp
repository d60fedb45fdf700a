#include <algorithm>
#include <numeric>
#include <set>

#include "biprod/errors.hpp"
#include "biprod/perm_search.hpp"
#include "doctest.h"

using namespace biprod;

namespace {

GroupElem el(std::initializer_list<long> c) { return GroupElem{c}; }

// Test-local oracle: scan every permutation fixing 0 and keep those the
// membership checker accepts. Independent of the library's search code.
template <typename Pred>
std::vector<Perm> scan_oracle(const FiniteAbelianGroup& g, Pred&& keep) {
  long n = g.order();
  std::vector<Idx> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<Perm> out;
  Perm tau;
  tau.tab.resize(n);
  tau.tab[0] = 0;
  do {
    std::copy(rest.begin(), rest.end(), tau.tab.begin() + 1);
    if (keep(tau)) out.push_back(tau);
  } while (std::next_permutation(rest.begin(), rest.end()));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Perm> taus_of(const std::vector<GammaWitness>& ws) {
  std::vector<Perm> out;
  for (const GammaWitness& w : ws) out.push_back(w.tau);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("permutation basics") {
  Perm id = Perm::identity(4);
  CHECK(id.is_identity());
  CHECK(id.order() == 1);
  Perm c{std::vector<Idx>{1, 2, 0, 3}};
  CHECK(c.order() == 3);
  CHECK(c.compose(c.inverse()) == id);
  CHECK(c.inverse().compose(c) == id);
  Perm bad{std::vector<Idx>{0, 0, 1, 2}};
  CHECK_THROWS_AS(bad.inverse(), precondition_error);

  FiniteAbelianGroup g({2, 4});
  GroupMap sigma = GroupMap::from_images(g, {el({1, 0}), el({1, 3})});
  Perm p = perm_from_map(sigma);
  CHECK(p.order() == 2);
  FiniteAbelianGroup z4({4});
  CHECK_THROWS_AS(perm_from_map(GroupMap::from_images(z4, {el({2})})),
                  precondition_error);
}

TEST_CASE("commuting automorphisms against a scan oracle") {
  FiniteAbelianGroup g({2, 4});
  GroupMap sigma = GroupMap::from_images(g, {el({1, 0}), el({1, 3})});
  std::vector<Perm> fast = aut_sigma(g, sigma);
  std::vector<Perm> slow = scan_oracle(
      g, [&](const Perm& t) { return is_aut_sigma_member(g, sigma, t); });
  CHECK(fast == slow);

  // sigma = id recovers the full automorphism group; |Aut(Z2+Z4)| = 8.
  std::vector<Perm> all = aut_sigma(g, GroupMap::identity(g));
  CHECK(all.size() == 8);

  FiniteAbelianGroup z22({2, 2});
  CHECK(aut_sigma(z22, GroupMap::identity(z22)).size() == 6);
  FiniteAbelianGroup z5({5});
  CHECK(aut_sigma(z5, GroupMap::identity(z5)).size() == 4);
}

TEST_CASE("witness search: brute equals constrained equals oracle") {
  struct Inst {
    std::vector<long> moduli;
    std::vector<GroupElem> images;
  };
  std::vector<Inst> instances = {
      {{2, 4}, {el({1, 0}), el({1, 3})}}, // involution, fixed kernel
      {{2, 2}, {el({0, 1}), el({1, 0})}}, // swap
      {{5}, {el({2})}},                   // order 4, one fixed point
      {{8}, {el({3})}},                   // involution on a cyclic group
      {{6}, {el({5})}},                   // negation
  };
  for (const Inst& inst : instances) {
    CAPTURE(inst.moduli);
    FiniteAbelianGroup g(inst.moduli);
    GroupMap sigma = GroupMap::from_images(g, inst.images);
    std::vector<GammaWitness> brute =
        gamma_group(g, sigma, SearchMode::Brute);
    std::vector<GammaWitness> constr =
        gamma_group(g, sigma, SearchMode::Constrained);
    REQUIRE(brute.size() == constr.size());
    for (size_t i = 0; i < brute.size(); ++i) {
      CHECK(brute[i].tau == constr[i].tau);
      CHECK(brute[i].alpha == constr[i].alpha);
    }
    // Cross-check the tau sets against a direct scan over all invariant
    // characters.
    std::vector<Character> chars = sigma_invariant_characters(g, sigma);
    std::vector<Perm> slow = scan_oracle(g, [&](const Perm& t) {
      for (const Character& a : chars)
        if (is_gamma_witness(g, sigma, t, a)) return true;
      return false;
    });
    CHECK(taus_of(brute) == slow);
    // Every commuting automorphism is a witness for some character.
    std::set<std::vector<Idx>> pool;
    for (const Perm& t : slow) pool.insert(t.tab);
    for (const Perm& t : aut_sigma(g, sigma)) CHECK(pool.count(t.tab));
  }
}

TEST_CASE("witness search honors the brute cap") {
  FiniteAbelianGroup g({2, 4, 2});
  GroupMap id = GroupMap::identity(g);
  CHECK_THROWS_AS(gamma_group(g, id, SearchMode::Brute),
                  resource_cap_error);
  // Constrained search has no such cap; with sigma = id the witnesses are
  // exactly the automorphisms paired with the trivial character.
  std::vector<GammaWitness> ws = gamma_group(g, id, SearchMode::Constrained);
  std::vector<Perm> auts = aut_sigma(g, id);
  CHECK(taus_of(ws) == auts);
  for (const GammaWitness& w : ws) CHECK(w.alpha.is_trivial());

  // The nine-element override admits |G| = 9 brute runs.
  FiniteAbelianGroup z9({9});
  GroupMap dbl = GroupMap::from_images(z9, {el({2})});
  CHECK_THROWS_AS(gamma_group(z9, dbl, SearchMode::Brute),
                  resource_cap_error);
  SearchOptions nine;
  nine.allow_nine = true;
  std::vector<GammaWitness> b9 = gamma_group(z9, dbl, SearchMode::Brute, nine);
  CHECK(taus_of(b9) == taus_of(gamma_group(z9, dbl, SearchMode::Constrained)));
  // Doubling on Z9 admits only the trivial invariant character, so the
  // witnesses are exactly the commuting automorphisms: the powers of 2.
  CHECK(b9.size() == 6);
  CHECK(taus_of(b9) == aut_sigma(z9, dbl));
}

TEST_CASE("symmetry searches: brute equals constrained, minus equals plus") {
  struct Inst {
    std::vector<long> moduli;
    std::vector<GroupElem> images;
  };
  std::vector<Inst> instances = {
      {{2, 4}, {el({1, 0}), el({1, 3})}},
      {{2, 2}, {el({0, 1}), el({1, 0})}},
      {{7}, {el({2})}}, // order 3
      {{6}, {el({5})}},
      {{8}, {el({5})}},
  };
  for (const Inst& inst : instances) {
    CAPTURE(inst.moduli);
    FiniteAbelianGroup g(inst.moduli);
    GroupMap sigma = GroupMap::from_images(g, inst.images);
    std::vector<Perm> bm = sym_sigma_minus(g, sigma, SearchMode::Brute);
    std::vector<Perm> cm = sym_sigma_minus(g, sigma, SearchMode::Constrained);
    std::vector<Perm> bp = sym_sigma_plus(g, sigma, SearchMode::Brute);
    std::vector<Perm> cp = sym_sigma_plus(g, sigma, SearchMode::Constrained);
    CHECK(bm == cm);
    CHECK(bp == cp);
    CHECK(bm == bp);
    std::vector<Perm> oracle = scan_oracle(
        g, [&](const Perm& t) { return is_sym_member(g, sigma, t, -1); });
    CHECK(bm == oracle);
    // Symmetries contain all witnesses.
    std::set<std::vector<Idx>> pool;
    for (const Perm& t : bm) pool.insert(t.tab);
    for (const GammaWitness& w : gamma_group(g, sigma, SearchMode::Brute))
      CHECK(pool.count(w.tau.tab));
  }
}

TEST_CASE("character fiber of a permutation") {
  FiniteAbelianGroup g({2, 4});
  GroupMap sigma = GroupMap::from_images(g, {el({1, 0}), el({1, 3})});
  std::vector<GammaWitness> ws = gamma_group(g, sigma, SearchMode::Brute);
  REQUIRE(!ws.empty());
  for (const GammaWitness& w : ws) {
    std::vector<Character> fiber = nu_fiber(g, sigma, w.tau);
    REQUIRE(fiber.size() == 1);
    CHECK(fiber[0] == w.alpha);
  }
  // A permutation that is no witness has an empty fiber: swap two elements
  // inside the kernel coset while keeping 0 fixed, then repair commuting by
  // brute search over non-witnesses.
  std::set<std::vector<Idx>> pool;
  for (const GammaWitness& w : ws) pool.insert(w.tau.tab);
  bool found = false;
  std::vector<Idx> rest(g.order() - 1);
  std::iota(rest.begin(), rest.end(), 1);
  Perm t;
  t.tab.resize(g.order());
  t.tab[0] = 0;
  do {
    std::copy(rest.begin(), rest.end(), t.tab.begin() + 1);
    if (!pool.count(t.tab)) {
      CHECK(nu_fiber(g, sigma, t).empty());
      found = true;
      break;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  CHECK(found);
}

TEST_CASE("witness pairs are validated on construction") {
  FiniteAbelianGroup g({2, 4});
  GroupMap sigma = GroupMap::from_images(g, {el({1, 0}), el({1, 3})});
  std::vector<Character> chars = sigma_invariant_characters(g, sigma);
  // The identity permutation with a nontrivial character is not a witness.
  CHECK_THROWS_AS(GammaWitness(g, sigma, Perm::identity(8), chars[1]),
                  precondition_error);
  CHECK_NOTHROW(GammaWitness(g, sigma, Perm::identity(8), chars[0]));
}

TEST_CASE("closure certificates") {
  FiniteAbelianGroup z5({5});
  std::vector<Perm> auts = aut_sigma(z5, GroupMap::identity(z5));
  CHECK_FALSE(check_group_closure(auts).has_value());
  // Remove a non-identity element: either closure or inverses must break.
  std::vector<Perm> broken(auts.begin(), auts.end() - 1);
  auto cert = check_group_closure(broken);
  REQUIRE(cert.has_value());
  CHECK((cert->reason == "not-closed" || cert->reason == "missing-inverse"));
  CHECK(check_group_closure({})->reason == "missing-identity");
}

TEST_CASE("abelian isomorphism labels") {
  // Powers of a 4-cycle.
  Perm c4{std::vector<Idx>{1, 2, 3, 0}};
  std::vector<Perm> cyc = {Perm::identity(4), c4, c4.compose(c4),
                           c4.compose(c4).compose(c4)};
  CHECK(abelian_iso_label(cyc) == "Z4");
  // Klein four group from disjoint transpositions.
  Perm a{std::vector<Idx>{1, 0, 2, 3}};
  Perm b{std::vector<Idx>{0, 1, 3, 2}};
  std::vector<Perm> klein = {Perm::identity(4), a, b, a.compose(b)};
  CHECK(abelian_iso_label(klein) == "Z2 x Z2");
  CHECK(abelian_iso_label({Perm::identity(3)}) == "Z1");
}

TEST_CASE("group reports") {
  FiniteAbelianGroup z9({9});
  GroupMap dbl = GroupMap::from_images(z9, {el({2})});
  std::vector<Perm> auts = aut_sigma(z9, dbl);
  PermGroupReport r = make_report(z9, dbl, "aut-sigma", auts);
  CHECK(r.order == 6);
  CHECK(r.is_closed);
  CHECK(r.contains_aut_sigma);
  CHECK(r.abelian);
  CHECK(r.iso_label == "Z6");
  CHECK(r.target == "aut-sigma");
  REQUIRE(!r.generators.empty());
  CHECK(r.generators.size() <= 2);

  FiniteAbelianGroup z22({2, 2});
  PermGroupReport r2 = make_report(z22, GroupMap::identity(z22), "aut-sigma",
                                   aut_sigma(z22, GroupMap::identity(z22)));
  CHECK(r2.order == 6);
  CHECK_FALSE(r2.abelian);
  CHECK(r2.iso_label.empty());
}
