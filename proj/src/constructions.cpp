#include "biprod/constructions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "biprod/errors.hpp"

namespace biprod {
namespace {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Everything derived from a validated coset-shift spec that both the
// quadratic-weight builder and the free-pattern classifier need.
struct CosetCarrier {
  FiniteAbelianGroup g;
  Subgroup g0;
  GroupMap sigma;
  long p;
  std::vector<long> cos_i;   // coset level of each element, in [0, p)
  std::vector<Idx> tau0_val; // value table of tau0 on g0 members, -1 off
  Character alpha;           // coset-index character
};

// Extends generator images to a value table on the subgroup by linearity,
// rejecting inconsistent or non-injective data.
std::vector<Idx> close_subgroup_map(const FiniteAbelianGroup& g,
                                    const Subgroup& s,
                                    const std::vector<GroupElem>& gens,
                                    const std::vector<GroupElem>& images) {
  if (gens.size() != images.size())
    throw spec_invalid_error("subgroup map: generator/image count mismatch");
  std::vector<Idx> val(g.order(), -1);
  std::vector<char> used(g.order(), 0);
  val[g.index_of(g.zero())] = g.index_of(g.zero());
  used[g.index_of(g.zero())] = 1;
  std::vector<Idx> span{g.index_of(g.zero())};
  for (std::size_t t = 0; t < gens.size(); ++t) {
    GroupElem kg = gens[t], ky = images[t];
    std::size_t old_span = span.size();
    while (!(kg == g.zero())) {
      for (std::size_t i = 0; i < old_span; ++i) {
        Idx e = g.index_of(g.add(g.element(span[i]), kg));
        Idx v = g.index_of(g.add(g.element(val[span[i]]), ky));
        if (val[e] >= 0) {
          if (val[e] != v)
            throw spec_invalid_error("subgroup map: images are inconsistent");
        } else if (used[v]) {
          throw spec_invalid_error("subgroup map: images collide");
        } else {
          val[e] = v;
          used[v] = 1;
          span.push_back(e);
        }
      }
      kg = g.add(kg, gens[t]);
      ky = g.add(ky, images[t]);
    }
  }
  for (Idx m : s.members())
    if (val[m] < 0)
      throw spec_invalid_error(
          "subgroup map: generators do not span the subgroup");
  return val;
}

CosetCarrier make_carrier(const CosetShiftSpec& spec) {
  if (!is_prime(spec.p)) throw spec_invalid_error("coset level p not prime");
  FiniteAbelianGroup g(spec.moduli);
  Subgroup g0 = Subgroup::from_generators(g, spec.g0_gens);
  if (g0.order() * spec.p != g.order())
    throw spec_invalid_error("subgroup does not have index p");
  GroupElem s = g.reduce(spec.s.c);
  if (g0.contains(g.index_of(s)))
    throw spec_invalid_error("coset unit lies in the subgroup");
  GroupElem m = g.reduce(spec.m.c);
  if (!g0.contains(g.index_of(m)) || g.element_order(m) != spec.p)
    throw spec_invalid_error("shift m must lie in the subgroup with order p");
  if (!g0.contains(g.index_of(g.reduce(spec.n.c))))
    throw spec_invalid_error("shift n must lie in the subgroup");

  // Coset level of every element: the unique i with x - i*s in G0. Since the
  // index is prime, s generates the quotient, so levels exhaust [0, p).
  std::vector<long> cos_i(g.order(), -1);
  for (Idx x = 0; x < g.order(); ++x) {
    GroupElem e = g.element(x);
    for (long i = 0; i < spec.p; ++i)
      if (g0.contains(g.index_of(g.sub(e, g.scalar_mul(i, s))))) {
        if (cos_i[x] >= 0)
          throw internal_error("coset level not unique");
        cos_i[x] = i;
      }
    if (cos_i[x] < 0) throw internal_error("element has no coset level");
  }

  // tau0 as a table on G0; images must stay inside G0 and fix m.
  for (const GroupElem& im : spec.tau0_images)
    if (!g0.contains(g.index_of(g.reduce(im.c))))
      throw spec_invalid_error("tau0 image leaves the subgroup");
  std::vector<Idx> tau0_val =
      close_subgroup_map(g, g0, spec.g0_gens, spec.tau0_images);
  if (tau0_val[g.index_of(m)] != g.index_of(m))
    throw spec_invalid_error("tau0 must fix the shift m");

  // Compatibility at p*s: tau0(p s) - p s - p n must be a multiple of m.
  // (The builders sharpen this where their formulas demand it.)
  GroupElem ps = g.scalar_mul(spec.p, s);
  if (!g0.contains(g.index_of(ps)))
    throw internal_error("p*s escaped the subgroup");
  GroupElem diff = g.sub(g.element(tau0_val[g.index_of(ps)]),
                         g.add(ps, g.scalar_mul(spec.p, g.reduce(spec.n.c))));
  bool multiple = false;
  for (long k = 0; k < spec.p && !multiple; ++k)
    multiple = diff == g.scalar_mul(k, m);
  if (!multiple)
    throw spec_invalid_error(
        "tau0(p s) - p s - p n is not a multiple of m");

  // sigma via generator images: x -> x + level(x) * m.
  std::vector<GroupElem> sig_images;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    GroupElem gen = g.generator(j);
    sig_images.push_back(
        g.add(gen, g.scalar_mul(cos_i[g.index_of(gen)], m)));
  }
  GroupMap sigma = GroupMap::from_images(g, sig_images);
  if (!sigma.is_auto() || sigma.map_order() != spec.p)
    throw internal_error("coset shift sigma is not an order-p automorphism");
  for (Idx x : g0.members())
    if (sigma.apply_index(x) != x)
      throw internal_error("coset shift sigma moves a subgroup element");
  if (!(sigma.apply(s) == g.add(s, m)))
    throw internal_error("coset shift sigma misses its defining value");

  // Coset-index character, modulus p; levels form a homomorphism to Z_p.
  std::vector<long> exps;
  for (std::size_t j = 0; j < g.rank(); ++j)
    exps.push_back(cos_i[g.index_of(g.generator(j))]);
  Character alpha(g, spec.p, exps);
  for (Idx x = 0; x < g.order(); ++x)
    if (alpha.exponent_at(g.element(x)) != cos_i[x])
      throw internal_error("coset-index character disagrees with levels");

  return CosetCarrier{g,      g0,        sigma, spec.p,
                      cos_i,  tau0_val,  alpha};
}

// tau(i s + x) = i (s + n) + w(i) m + tau0(x) as a value table.
Perm build_weighted_tau(const CosetCarrier& c, const CosetShiftSpec& spec,
                        const std::vector<long>& w) {
  const FiniteAbelianGroup& g = c.g;
  GroupElem s = g.reduce(spec.s.c);
  GroupElem m = g.reduce(spec.m.c);
  GroupElem n = g.reduce(spec.n.c);
  Perm tau;
  tau.tab.assign(g.order(), -1);
  std::vector<char> used(g.order(), 0);
  for (Idx x = 0; x < g.order(); ++x) {
    long i = c.cos_i[x];
    GroupElem x0 = g.sub(g.element(x), g.scalar_mul(i, s));
    GroupElem img = g.add(
        g.add(g.scalar_mul(i, g.add(s, n)), g.scalar_mul(w[i], m)),
        g.element(c.tau0_val[g.index_of(x0)]));
    Idx v = g.index_of(img);
    if (used[v]) throw internal_error("weighted tau is not injective");
    used[v] = 1;
    tau.tab[x] = v;
  }
  return tau;
}

std::optional<std::pair<GroupElem, GroupElem>> find_non_additive_pair(
    const FiniteAbelianGroup& g, const Perm& tau) {
  for (Idx a = 0; a < g.order(); ++a)
    for (Idx b = a; b < g.order(); ++b) {
      GroupElem ea = g.element(a), eb = g.element(b);
      if (!(g.element(tau(g.index_of(g.add(ea, eb)))) ==
            g.add(g.element(tau(a)), g.element(tau(b)))))
        return std::make_pair(ea, eb);
    }
  return std::nullopt;
}

} // namespace

CosetShiftFamily build_coset_shift(const CosetShiftSpec& spec) {
  CosetCarrier c = make_carrier(spec);
  // The witness family needs the sharp compatibility at p*s:
  // tau0(2s) = 2s + 2n + m when p = 2, tau0(ps) = ps + pn when p > 2.
  {
    const FiniteAbelianGroup& g = c.g;
    GroupElem ps = g.scalar_mul(spec.p, g.reduce(spec.s.c));
    GroupElem want = g.add(ps, g.scalar_mul(spec.p, g.reduce(spec.n.c)));
    if (spec.p == 2) want = g.add(want, g.reduce(spec.m.c));
    if (c.tau0_val[g.index_of(ps)] != g.index_of(want))
      throw spec_invalid_error("tau0 is incompatible with the shifts at p*s");
  }
  std::vector<long> w(spec.p);
  for (long i = 0; i < spec.p; ++i) w[i] = i * (i - 1) / 2;
  Perm tau = build_weighted_tau(c, spec, w);
  // The quadratic weight makes (tau, alpha) a witness; certify with the
  // public validator.
  std::string why;
  if (!is_gamma_witness(c.g, c.sigma, tau, c.alpha, &why))
    throw internal_error("coset shift witness check failed: " + why);
  std::optional<std::pair<GroupElem, GroupElem>> pair =
      find_non_additive_pair(c.g, tau);
  return CosetShiftFamily{c.g,     c.g0,  c.sigma,
                          std::move(tau), c.alpha, std::move(pair)};
}

MembershipProfile classify_twist_pattern(const TwistPatternSpec& spec) {
  if (static_cast<long>(spec.ell.size()) != spec.base.p - 2)
    throw spec_invalid_error("twist pattern needs p-2 increments");
  for (long e : spec.ell)
    if (e < 0 || e >= spec.base.p)
      throw invalid_input_error("twist increment out of [0, p)");
  CosetCarrier c = make_carrier(spec.base);
  std::vector<long> w(spec.base.p, 0);
  for (long i = 2; i < spec.base.p; ++i) w[i] = w[i - 1] + spec.ell[i - 2];
  MembershipProfile out;
  out.tau = build_weighted_tau(c, spec.base, w);
  out.sigma = perm_from_map(c.sigma);
  out.in_aut_sigma = is_aut_sigma_member(c.g, c.sigma, out.tau);
  std::vector<Character> fiber = nu_fiber(c.g, c.sigma, out.tau);
  out.in_gamma = !fiber.empty();
  if (out.in_gamma) out.gamma_character = fiber.front();
  out.in_sym_minus = is_sym_member(c.g, c.sigma, out.tau, -1);
  return out;
}

namespace {

long ring_unit_order(const std::function<GroupElem(const GroupElem&,
                                                   const GroupElem&)>& mul,
                     const GroupElem& one, const GroupElem& u, long cap) {
  GroupElem acc = u;
  for (long k = 1; k <= cap; ++k) {
    if (acc == one) return k;
    acc = mul(acc, u);
  }
  throw internal_error("unit order exceeds the ring's unit count");
}

} // namespace

LocalRingReport build_local_ring(long p, LocalRingKind kind) {
  if (!is_prime(p)) throw spec_invalid_error("local ring: p must be prime");
  FiniteAbelianGroup g = kind == LocalRingKind::PrimeSquare
                             ? FiniteAbelianGroup({p * p})
                             : FiniteAbelianGroup({p, p});
  std::function<GroupElem(const GroupElem&, const GroupElem&)> mul;
  GroupElem one;
  GroupElem unit;
  std::vector<char> in_ideal(g.order(), 0);
  if (kind == LocalRingKind::PrimeSquare) {
    mul = [g](const GroupElem& a, const GroupElem& b) {
      return g.ring_mul(a, b);
    };
    one = GroupElem{{1}};
    for (long k = 0; k < p; ++k) in_ideal[g.index_of(GroupElem{{k * p}})] = 1;
    // Smallest unit generating the full unit group of order p(p-1).
    for (long c = 2; c < p * p && unit.c.empty(); ++c) {
      if (c % p == 0) continue;
      GroupElem cand{{c}};
      if (ring_unit_order(mul, one, cand, p * (p - 1)) == p * (p - 1))
        unit = cand;
    }
  } else {
    // F_p[x]/(x^2), elements a + b x stored as (a, b).
    mul = [g](const GroupElem& a, const GroupElem& b) {
      return g.reduce({a.c[0] * b.c[0], a.c[0] * b.c[1] + a.c[1] * b.c[0]});
    };
    one = GroupElem{{1, 0}};
    for (long b = 0; b < p; ++b) in_ideal[g.index_of(GroupElem{{0, b}})] = 1;
    // v generates F_p^x; u = v(1 + x) generates the unit group.
    long v = 1;
    for (long c = 1; c < p; ++c) {
      GroupElem cand{{c, 0}};
      if (ring_unit_order(mul, one, cand, p - 1) == p - 1) {
        v = c;
        break;
      }
    }
    unit = GroupElem{{v, v}};
  }
  if (unit.c.empty()) throw internal_error("no unit generator found");
  long unit_order = ring_unit_order(mul, one, unit, p * (p - 1) + 1);
  if (unit_order != p * (p - 1))
    throw internal_error("unit generator has unexpected order");

  // sigma = multiplication by u, an additive automorphism.
  std::vector<GroupElem> images;
  for (std::size_t j = 0; j < g.rank(); ++j)
    images.push_back(mul(unit, g.generator(j)));
  GroupMap sigma = GroupMap::from_images(g, images);
  if (!sigma.is_auto() || sigma.map_order() != unit_order)
    throw internal_error("unit multiplication is not an automorphism of "
                         "matching order");

  LocalRingReport r{g,  sigma, unit, p, unit_order, {}, {}, {},
                    {}, {},    {},   {}};
  r.aut = aut_sigma(r.g, r.sigma);
  r.sym = sym_sigma_minus(r.g, r.sigma, SearchMode::Constrained);

  // Ideal twists: identity on units and zero, sigma^s on the punctured
  // maximal ideal. Well defined because sigma preserves the ideal; the
  // restriction of sigma to the punctured ideal has order p-1, so s ranges
  // over [0, p-1).
  const std::vector<Idx>& st = r.sigma.table();
  for (long s = 0; s < p - 1; ++s) {
    Perm t = Perm::identity(r.g.order());
    for (Idx x = 0; x < r.g.order(); ++x) {
      if (!in_ideal[x] || x == 0) continue;
      Idx y = x;
      for (long k = 0; k < s; ++k) y = st[y];
      t.tab[x] = y;
    }
    std::string why;
    if (!is_sym_member(r.g, r.sigma, t, -1, &why))
      throw internal_error("ideal twist fails the symmetry check: " + why);
    r.ideal_twists.push_back(std::move(t));
  }

  // Internal direct product certificate: the twists meet the commuting
  // automorphisms only in the identity, commute with them elementwise, and
  // the products exhaust the symmetries without repetition.
  std::set<std::vector<Idx>> sym_pool;
  for (const Perm& t : r.sym) sym_pool.insert(t.tab);
  std::set<std::vector<Idx>> products;
  bool ok = true;
  for (const Perm& a : r.aut)
    for (const Perm& t : r.ideal_twists) {
      if (!(a.compose(t) == t.compose(a))) ok = false;
      Perm prod = a.compose(t);
      if (!products.insert(prod.tab).second) ok = false; // repetition
      if (!sym_pool.count(prod.tab)) ok = false;
    }
  if (products.size() != sym_pool.size()) ok = false;
  for (const Perm& t : r.ideal_twists)
    if (!t.is_identity()) {
      std::set<std::vector<Idx>> aut_pool;
      for (const Perm& a : r.aut) aut_pool.insert(a.tab);
      if (aut_pool.count(t.tab)) ok = false; // nontrivial intersection
    }
  r.product_decomposition = ok;

  r.strict = r.sym.size() > r.aut.size();
  PermGroupReport ar = make_report(r.g, r.sigma, "aut-sigma", r.aut);
  PermGroupReport sr = make_report(r.g, r.sigma, "sym-minus", r.sym);
  r.aut_label = ar.abelian ? ar.iso_label : std::string();
  r.sym_label = sr.abelian ? sr.iso_label : std::string();
  return r;
}

InvolutionCheck check_involution(const FiniteAbelianGroup& g) {
  if (g.order() % 2 == 0)
    throw precondition_error("involution check requires odd group order");
  InvolutionCheck out;
  for (const Perm& p : aut_sigma(g, GroupMap::identity(g))) {
    if (p.order() != 2) continue;
    ++out.involution_count;
    GroupMap sigma = map_from_perm(g, p);
    std::vector<Perm> aut = aut_sigma(g, sigma);
    std::vector<Perm> sym = sym_sigma_minus(g, sigma, SearchMode::Constrained);
    if (aut != sym) out.all_equal = false;
  }
  return out;
}

ReductionCheck check_reduction(const FiniteAbelianGroup& g,
                               const GroupMap& sigma) {
  ReductionCheck out;
  out.hypothesis_coprime = std::gcd(sigma.map_order(), g.order()) == 1;
  Subgroup fix = fixed_subgroup(sigma);
  Quotient q = quotient(g, fix);
  out.quotient_order = q.group.order();

  // Induced map on the quotient, checked for consistency everywhere.
  std::vector<GroupElem> images;
  for (std::size_t j = 0; j < q.group.rank(); ++j) {
    Idx lift = q.section[q.group.index_of(q.group.generator(j))];
    images.push_back(q.group.element(q.proj[sigma.apply_index(lift)]));
  }
  GroupMap sigma_bar = GroupMap::from_images(q.group, images);
  for (Idx x = 0; x < g.order(); ++x)
    if (q.proj[sigma.apply_index(x)] != sigma_bar.apply_index(q.proj[x]))
      throw internal_error("induced quotient map is inconsistent");

  long fixed = 0;
  for (Idx y = 0; y < q.group.order(); ++y)
    if (sigma_bar.apply_index(y) == y) ++fixed;
  out.quotient_fixed_point_unique = fixed == 1;

  std::vector<Perm> sym = sym_sigma_minus(g, sigma, SearchMode::Constrained);
  std::vector<Perm> aut = aut_sigma(g, sigma);
  out.sym_order = static_cast<long>(sym.size());
  out.aut_order = static_cast<long>(aut.size());
  std::set<std::vector<Idx>> aut_pool;
  for (const Perm& a : aut) aut_pool.insert(a.tab);

  out.projections_well_defined = true;
  out.implication_holds = true;
  for (const Perm& tau : sym) {
    // tau descends because it is additive against the fixed subgroup.
    Perm tau_bar;
    tau_bar.tab.resize(q.group.order());
    for (Idx y = 0; y < q.group.order(); ++y)
      tau_bar.tab[y] = q.proj[tau(q.section[y])];
    bool well = true;
    for (Idx x = 0; x < g.order() && well; ++x)
      well = q.proj[tau(x)] == tau_bar.tab[q.proj[x]];
    if (!well) {
      out.projections_well_defined = false;
      continue;
    }
    if (is_aut_sigma_member(q.group, sigma_bar, tau_bar) &&
        !aut_pool.count(tau.tab))
      out.implication_holds = false;
  }
  return out;
}

NoFixCheck check_sigma_nofix(const FiniteAbelianGroup& g,
                             const GroupMap& sigma,
                             const std::string& case_label) {
  NoFixCheck out;
  out.case_label = case_label;
  long big_n = sigma.map_order();
  if (case_label == "unique-fixed-point") {
    out.hypothesis_holds = fixed_subgroup(sigma).order() == 1;
  } else if (case_label == "coprime-order") {
    out.hypothesis_holds = std::gcd(big_n, g.order()) == 1;
  } else if (case_label == "prime-order") {
    bool prime = big_n >= 2;
    for (long d = 2; d * d <= big_n; ++d)
      if (big_n % d == 0) prime = false;
    out.hypothesis_holds = prime && g.order() % (big_n * big_n) != 0;
  } else if (case_label == "none") {
    out.hypothesis_holds = true; // nothing claimed
  } else {
    throw invalid_input_error("unknown case label: " + case_label);
  }
  std::vector<GammaWitness> ws =
      gamma_group(g, sigma, SearchMode::Constrained);
  std::vector<Perm> aut = aut_sigma(g, sigma);
  out.gamma_order = static_cast<long>(ws.size());
  out.aut_order = static_cast<long>(aut.size());
  std::vector<Perm> taus;
  for (const GammaWitness& w : ws) taus.push_back(w.tau);
  std::sort(taus.begin(), taus.end());
  out.gamma_equals_aut = taus == aut;
  return out;
}

} // namespace biprod
