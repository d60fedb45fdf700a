#include "biprod/perm_search.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "biprod/errors.hpp"

namespace biprod {
namespace {

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

// Index-level arithmetic over a group, table-backed for small orders.
struct IndexArith {
  const FiniteAbelianGroup& g;
  long n;
  std::vector<Idx> neg_tab;
  std::vector<Idx> add_tab; // row-major n*n, empty when n is large

  explicit IndexArith(const FiniteAbelianGroup& gg) : g(gg), n(gg.order()) {
    neg_tab.resize(n);
    for (Idx i = 0; i < n; ++i) neg_tab[i] = g.index_of(g.neg(g.element(i)));
    if (n <= 512) {
      add_tab.resize(static_cast<size_t>(n) * n);
      for (Idx i = 0; i < n; ++i) {
        GroupElem a = g.element(i);
        for (Idx j = 0; j < n; ++j)
          add_tab[static_cast<size_t>(i) * n + j] =
              g.index_of(g.add(a, g.element(j)));
      }
    }
  }

  Idx add(Idx i, Idx j) const {
    if (!add_tab.empty()) return add_tab[static_cast<size_t>(i) * n + j];
    return g.index_of(g.add(g.element(i), g.element(j)));
  }
  Idx sub(Idx i, Idx j) const { return add(i, neg_tab[j]); }
};

std::vector<long> element_orders(const FiniteAbelianGroup& g) {
  std::vector<long> ord(g.order());
  for (Idx i = 0; i < g.order(); ++i) ord[i] = g.element_order(g.element(i));
  return ord;
}

// sp[k] is the value table of sigma^k, k = 0..big_n-1.
std::vector<std::vector<Idx>> sigma_power_tables(const GroupMap& sigma,
                                                 long big_n) {
  std::vector<std::vector<Idx>> sp(big_n);
  sp[0] = Perm::identity(sigma.group().order()).tab;
  const std::vector<Idx>& st = sigma.table();
  for (long k = 1; k < big_n; ++k) {
    sp[k].resize(st.size());
    for (size_t i = 0; i < st.size(); ++i) sp[k][i] = st[sp[k - 1][i]];
  }
  return sp;
}

std::vector<long> sigma_orbit_lengths(const FiniteAbelianGroup& g,
                                      const GroupMap& sigma) {
  std::vector<long> len(g.order());
  for (Idx i = 0; i < g.order(); ++i)
    len[i] = orbit_length(sigma, g.element(i));
  return len;
}

bool set_why(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

void require_same_order(const FiniteAbelianGroup& g, const Perm& tau,
                        const char* what) {
  if (tau.size() != g.order())
    throw precondition_error(std::string(what) +
                             ": permutation size does not match group order");
}

// Enumerates additive injective maps from a subgroup into the group by
// choosing an image for each generator and extending linearly, checking
// consistency and image collisions along the way. Candidate images must
// already be restricted to elements of the same order as their generator (a
// sound necessary condition: an injective homomorphism preserves element
// orders exactly). The sink receives a value table defined on the subgroup
// members (-1 elsewhere) plus the mask of occupied image values.
class SubgroupHomSearch {
 public:
  using Sink = std::function<void(const std::vector<Idx>& val,
                                  const std::vector<char>& used)>;

  SubgroupHomSearch(const FiniteAbelianGroup& g, const IndexArith& ar,
                    const Subgroup& s,
                    std::vector<std::vector<Idx>> candidates)
      : ar_(ar),
        candidates_(std::move(candidates)),
        val_(g.order(), -1),
        used_(g.order(), 0) {
    for (const GroupElem& ge : s.generators()) gens_.push_back(g.index_of(ge));
    if (candidates_.size() != gens_.size())
      throw internal_error("hom search: candidate list count mismatch");
    Idx z = g.index_of(g.zero());
    val_[z] = z;
    used_[z] = 1;
    span_.push_back(z);
    zero_ = z;
  }

  void run(const Sink& sink) { descend(0, sink); }

 private:
  void descend(size_t depth, const Sink& sink) {
    if (depth == gens_.size()) {
      sink(val_, used_);
      return;
    }
    Idx gen = gens_[depth];
    for (Idx y : candidates_[depth]) {
      std::vector<Idx> added;
      size_t old_span = span_.size();
      if (extend(gen, y, old_span, &added)) descend(depth + 1, sink);
      for (Idx e : added) {
        used_[val_[e]] = 0;
        val_[e] = -1;
      }
      span_.resize(old_span);
    }
  }

  // Extends the map from the current span H to H + <gen> via
  // val[e + k*gen] = val[e] + k*y. Repeated visits of one element check
  // consistency instead of reassigning, which makes the extension additive
  // whenever it succeeds.
  bool extend(Idx gen, Idx y, size_t old_span, std::vector<Idx>* added) {
    Idx kg = gen, ky = y;
    while (kg != zero_) {
      for (size_t i = 0; i < old_span; ++i) {
        Idx e = ar_.add(span_[i], kg);
        Idx v = ar_.add(val_[span_[i]], ky);
        if (val_[e] >= 0) {
          if (val_[e] != v) return false;
        } else if (used_[v]) {
          return false;
        } else {
          val_[e] = v;
          used_[v] = 1;
          added->push_back(e);
          span_.push_back(e);
        }
      }
      kg = ar_.add(kg, gen);
      ky = ar_.add(ky, y);
    }
    return true;
  }

  const IndexArith& ar_;
  std::vector<Idx> gens_;
  std::vector<std::vector<Idx>> candidates_;
  std::vector<Idx> val_;
  std::vector<char> used_;
  std::vector<Idx> span_;
  Idx zero_ = 0;
};

} // namespace

Perm Perm::identity(long n) {
  Perm p;
  p.tab.resize(n);
  std::iota(p.tab.begin(), p.tab.end(), 0);
  return p;
}

Perm Perm::compose(const Perm& inner) const {
  if (size() != inner.size())
    throw precondition_error("perm compose: size mismatch");
  Perm r;
  r.tab.resize(tab.size());
  for (size_t i = 0; i < tab.size(); ++i) r.tab[i] = tab[inner.tab[i]];
  return r;
}

Perm Perm::inverse() const {
  Perm r;
  r.tab.assign(tab.size(), -1);
  for (size_t i = 0; i < tab.size(); ++i) {
    if (tab[i] < 0 || tab[i] >= static_cast<Idx>(tab.size()) ||
        r.tab[tab[i]] >= 0)
      throw precondition_error("perm inverse: table is not a permutation");
    r.tab[tab[i]] = static_cast<Idx>(i);
  }
  return r;
}

long Perm::order() const {
  std::vector<char> seen(tab.size(), 0);
  long ord = 1;
  for (size_t i = 0; i < tab.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    Idx j = static_cast<Idx>(i);
    do {
      seen[j] = 1;
      j = tab[j];
      ++len;
    } while (j != static_cast<Idx>(i));
    ord = lcm_long(ord, len);
  }
  return ord;
}

bool Perm::is_identity() const {
  for (size_t i = 0; i < tab.size(); ++i)
    if (tab[i] != static_cast<Idx>(i)) return false;
  return true;
}

Perm perm_from_map(const GroupMap& f) {
  if (!f.is_auto())
    throw precondition_error("perm_from_map: map is not an automorphism");
  Perm p;
  p.tab = f.table();
  return p;
}

GroupMap map_from_perm(const FiniteAbelianGroup& g, const Perm& tau) {
  require_same_order(g, tau, "map_from_perm");
  std::vector<GroupElem> images;
  for (std::size_t j = 0; j < g.rank(); ++j)
    images.push_back(g.element(tau(g.index_of(g.generator(j)))));
  GroupMap f = GroupMap::from_images(g, images);
  if (f.table() != tau.tab)
    throw invalid_hom_error("map_from_perm: permutation is not additive");
  return f;
}

bool is_aut_sigma_member(const FiniteAbelianGroup& g, const GroupMap& sigma,
                         const Perm& tau, std::string* why) {
  require_same_order(g, tau, "is_aut_sigma_member");
  const std::vector<Idx>& st = sigma.table();
  for (Idx x = 0; x < g.order(); ++x)
    if (tau(st[x]) != st[tau(x)])
      return set_why(why, "does not commute with sigma");
  IndexArith ar(g);
  for (Idx a = 0; a < g.order(); ++a)
    for (Idx b = a; b < g.order(); ++b)
      if (tau(ar.add(a, b)) != ar.add(tau(a), tau(b)))
        return set_why(why, "not additive");
  return true;
}

bool is_gamma_witness(const FiniteAbelianGroup& g, const GroupMap& sigma,
                      const Perm& tau, const Character& alpha,
                      std::string* why) {
  require_same_order(g, tau, "is_gamma_witness");
  long big_n = sigma.map_order();
  if (alpha.modulus() != big_n)
    throw precondition_error(
        "is_gamma_witness: character modulus must equal the order of sigma");
  const std::vector<Idx>& st = sigma.table();
  for (Idx x = 0; x < g.order(); ++x)
    if (tau(st[x]) != st[tau(x)])
      return set_why(why, "does not commute with sigma");
  for (Idx x = 0; x < g.order(); ++x)
    if (alpha.exponent_at(g.element(st[x])) !=
        alpha.exponent_at(g.element(x)))
      return set_why(why, "character is not sigma-invariant");
  IndexArith ar(g);
  std::vector<std::vector<Idx>> sp = sigma_power_tables(sigma, big_n);
  for (Idx s = 0; s < g.order(); ++s) {
    GroupElem es = g.element(s);
    for (Idx m = 0; m < g.order(); ++m) {
      long ell = ell_alpha(alpha, sigma, es, g.element(m));
      if (tau(ar.sub(s, m)) != ar.sub(tau(s), tau(sp[ell][m])))
        return set_why(why, "twisted difference condition fails");
    }
  }
  return true;
}

bool is_sym_member(const FiniteAbelianGroup& g, const GroupMap& sigma,
                   const Perm& tau, int sign, std::string* why) {
  require_same_order(g, tau, "is_sym_member");
  if (sign != 1 && sign != -1)
    throw precondition_error("is_sym_member: sign must be +1 or -1");
  if (g.order() > 63)
    throw resource_cap_error("is_sym_member: orbit-set masks need |G| <= 63");
  const std::vector<Idx>& st = sigma.table();
  for (Idx x = 0; x < g.order(); ++x)
    if (tau(st[x]) != st[tau(x)])
      return set_why(why, "does not commute with sigma");
  IndexArith ar(g);
  auto comb = [&](Idx a, Idx b) {
    return sign > 0 ? ar.add(a, b) : ar.sub(a, b);
  };
  // One pass per sigma-orbit, comparing image sets at every base point.
  std::vector<char> seen(g.order(), 0);
  for (Idx r = 0; r < g.order(); ++r) {
    if (seen[r]) continue;
    std::vector<Idx> orbit;
    Idx j = r;
    do {
      seen[j] = 1;
      orbit.push_back(j);
      j = st[j];
    } while (j != r);
    for (Idx a = 0; a < g.order(); ++a) {
      unsigned long long lhs = 0, rhs = 0;
      for (Idx o : orbit) {
        lhs |= 1ULL << tau(comb(a, o));
        rhs |= 1ULL << comb(tau(a), tau(o));
      }
      if (lhs != rhs)
        return set_why(why, sign > 0 ? "orbit sum-set condition fails"
                                     : "orbit difference-set condition fails");
    }
  }
  return true;
}

GammaWitness::GammaWitness(const FiniteAbelianGroup& g, const GroupMap& sigma,
                           Perm t, Character a)
    : tau(std::move(t)), alpha(std::move(a)) {
  std::string why;
  if (!is_gamma_witness(g, sigma, tau, alpha, &why))
    throw precondition_error("invalid witness pair: " + why);
}

std::vector<Perm> aut_sigma(const FiniteAbelianGroup& g,
                            const GroupMap& sigma) {
  if (!sigma.is_auto())
    throw precondition_error("aut_sigma: sigma must be an automorphism");
  std::vector<long> ord = element_orders(g);
  // Candidate images per generator: elements of exactly matching order.
  std::vector<std::vector<GroupElem>> cands(g.rank());
  for (std::size_t j = 0; j < g.rank(); ++j) {
    for (Idx x = 0; x < g.order(); ++x)
      if (ord[x] == g.moduli()[j]) cands[j].push_back(g.element(x));
  }
  std::vector<GroupElem> images(g.rank());
  std::vector<Perm> out;
  std::function<void(std::size_t)> descend = [&](std::size_t j) {
    if (j == g.rank()) {
      GroupMap tau = GroupMap::from_images(g, images);
      // Commuting is a hom identity, so generators suffice.
      for (std::size_t k = 0; k < g.rank(); ++k)
        if (tau.apply(sigma.images()[k]) != sigma.apply(images[k])) return;
      if (!tau.is_auto()) return;
      out.push_back(perm_from_map(tau));
      return;
    }
    for (const GroupElem& y : cands[j]) {
      images[j] = y;
      descend(j + 1);
    }
  };
  descend(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void check_brute_cap(const FiniteAbelianGroup& g, const SearchOptions& opt,
                     const char* what) {
  if (g.order() > opt.effective_brute_cap())
    throw resource_cap_error(std::string(what) +
                             ": group order exceeds the brute-force cap");
}

// Scans all permutations fixing 0 and feeds those commuting with sigma to
// the visitor. Fixing 0 is sound for every family searched here: the
// twisted difference condition at s = m (twist exponent 0) forces
// tau(0) = 0, and so do the orbit set conditions at a = 0 against the
// singleton orbit of 0.
void scan_commuting_perms(const FiniteAbelianGroup& g, const GroupMap& sigma,
                          const std::function<void(const Perm&)>& visit) {
  long n = g.order();
  const std::vector<Idx>& st = sigma.table();
  std::vector<Idx> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);
  Perm tau;
  tau.tab.resize(n);
  tau.tab[0] = 0;
  do {
    std::copy(rest.begin(), rest.end(), tau.tab.begin() + 1);
    bool commutes = true;
    for (Idx x = 0; x < n && commutes; ++x)
      commutes = tau.tab[st[x]] == st[tau.tab[x]];
    if (commutes) visit(tau);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

std::vector<GammaWitness> gamma_brute(const FiniteAbelianGroup& g,
                                      const GroupMap& sigma,
                                      const SearchOptions& opt) {
  check_brute_cap(g, opt, "gamma_group[brute]");
  long n = g.order();
  long big_n = sigma.map_order();
  IndexArith ar(g);
  std::vector<std::vector<Idx>> sp = sigma_power_tables(sigma, big_n);
  std::vector<long> olen = sigma_orbit_lengths(g, sigma);
  std::vector<GammaWitness> out;
  for (const Character& alpha : sigma_invariant_characters(g, sigma)) {
    std::vector<long> a(n);
    for (Idx x = 0; x < n; ++x) a[x] = alpha.exponent_at(g.element(x));
    // twisted[s*n + m] = sigma^l(m) with l the twist exponent for (s, m).
    std::vector<Idx> twisted(static_cast<size_t>(n) * n);
    for (Idx s = 0; s < n; ++s)
      for (Idx m = 0; m < n; ++m) {
        long ell = (((a[s] - a[m]) % big_n + big_n) % big_n) % olen[m];
        twisted[static_cast<size_t>(s) * n + m] = sp[ell][m];
      }
    scan_commuting_perms(g, sigma, [&](const Perm& tau) {
      for (Idx s = 0; s < n; ++s)
        for (Idx m = 0; m < n; ++m)
          if (tau.tab[ar.sub(s, m)] !=
              ar.sub(tau.tab[s],
                     tau.tab[twisted[static_cast<size_t>(s) * n + m]]))
            return;
      out.emplace_back(g, sigma, tau, alpha);
    });
  }
  return out;
}

std::vector<Perm> sym_brute(const FiniteAbelianGroup& g, const GroupMap& sigma,
                            int sign, const SearchOptions& opt) {
  check_brute_cap(g, opt, "sym_sigma[brute]");
  std::vector<Perm> out;
  scan_commuting_perms(g, sigma, [&](const Perm& tau) {
    if (is_sym_member(g, sigma, tau, sign)) out.push_back(tau);
  });
  return out;
}

// Shared constrained skeleton. Everything searched here is additive against
// a sigma-stable subgroup S in the twisted sense
//
//   tau(r + f) = tau(r) + tau0(sigma^{e(r) mod |f|}(f)),   f in S,
//
// where tau0 = tau|S, |f| is the sigma-orbit length of f and e(r) is a
// per-coset exponent supplied by the caller (the character exponent for the
// witness search, identically 0 for the symmetry searches, where |f| = 1
// anyway). Derivation for witnesses: the twisted difference condition at
// (s, m) = (r + f, f) has twist exponent e(r) mod |f| because the character
// vanishes on S. The skeleton enumerates tau0 by generator images, then
// assigns representative values along sigma-orbits of cosets using
// tau(sigma(r)) = sigma(tau(r)), and hands every completed table to the
// final validator, so its output is exactly the validated family as long as
// every true member is reached; the twisted fill rule above and the orbit
// propagation are identities on true members, which gives that.
std::vector<Perm> constrained_search(
    const FiniteAbelianGroup& g, const GroupMap& sigma, const Subgroup& s,
    const std::vector<char>& image_allowed,
    const std::vector<long>& elem_exp, // per-element exponent, constant on
                                       // S-cosets, 0 on S itself
    const std::function<bool(const Perm&)>& validate) {
  long n = g.order();
  IndexArith ar(g);
  std::vector<long> ord = element_orders(g);
  const std::vector<Idx>& st = sigma.table();
  long big_n = sigma.map_order();
  std::vector<std::vector<Idx>> sp = sigma_power_tables(sigma, big_n);
  std::vector<long> olen = sigma_orbit_lengths(g, sigma);

  std::vector<std::vector<Idx>> tau0_cands;
  for (const GroupElem& gen : s.generators()) {
    long go = g.element_order(gen);
    std::vector<Idx> c;
    for (Idx y = 0; y < n; ++y)
      if (image_allowed[y] && ord[y] == go) c.push_back(y);
    tau0_cands.push_back(std::move(c));
  }

  std::vector<std::vector<Idx>> coset_list = cosets(g, s);
  long nc = static_cast<long>(coset_list.size());
  std::vector<long> cos_of(n, -1);
  std::vector<Idx> rep(nc);
  for (long c = 0; c < nc; ++c) {
    rep[c] = coset_list[c][0];
    for (Idx x : coset_list[c]) cos_of[x] = c;
  }
  if (rep[0] != g.index_of(g.zero()))
    throw internal_error("constrained search: subgroup coset must come first");
  for (long c = 0; c < nc; ++c)
    for (Idx x : coset_list[c])
      if (elem_exp[x] != elem_exp[rep[c]])
        throw internal_error(
            "constrained search: exponent not constant on a coset");
  // sigma on cosets, with the in-subgroup offset of each representative:
  // sigma(rep[c]) = rep[cbar[c]] + off[c].
  std::vector<long> cbar(nc);
  std::vector<Idx> off(nc);
  for (long c = 0; c < nc; ++c) {
    Idx im = st[rep[c]];
    cbar[c] = cos_of[im];
    off[c] = ar.sub(im, rep[cbar[c]]);
    if (!s.contains(off[c]))
      throw internal_error("constrained search: coset offset left subgroup");
  }
  // The twisted offset tau0(sigma^{e mod |f|}(f)) only depends on the coset
  // through e mod N, so precompute the element twist per (exponent, f).
  auto twist = [&](long e, Idx f) { return sp[e % olen[f]][f]; };

  std::vector<Perm> out;
  std::set<std::vector<Idx>> dedup;

  SubgroupHomSearch homs(g, ar, s, tau0_cands);
  homs.run([&](const std::vector<Idx>& tau0, const std::vector<char>& used0) {
    // tau restricted to S commutes with sigma (sigma is stable on S), so
    // reject tau0 violating that before touching cosets.
    for (Idx m : s.members())
      if (tau0[st[m]] != st[tau0[m]]) return;

    std::vector<Idx> rep_val(nc, -1);
    rep_val[0] = 0;
    std::vector<char> used = used0; // values consumed by tau0 stay reserved

    std::function<void(long)> place = [&](long c0) {
      while (c0 < nc && rep_val[c0] >= 0) ++c0;
      if (c0 == nc) {
        Perm tau;
        tau.tab.assign(n, -1);
        for (long c = 0; c < nc; ++c)
          for (Idx f : s.members())
            tau.tab[ar.add(rep[c], f)] =
                ar.add(rep_val[c], tau0[twist(elem_exp[rep[c]], f)]);
        if (validate(tau) && dedup.insert(tau.tab).second) out.push_back(tau);
        return;
      }
      // The orbit of c0 under the induced coset permutation.
      std::vector<long> orbit;
      for (long c = c0; orbit.empty() || c != c0; c = cbar[c])
        orbit.push_back(c);
      for (Idx v = 0; v < n; ++v) {
        if (used[v]) continue;
        // Each coset consumes the value set tau(rep) + tau0(S); the twist
        // permutes S, so marking the untwisted set is equivalent.
        std::vector<long> placed;
        std::vector<Idx> marked;
        bool ok = true;
        Idx cur = v;
        for (size_t k = 0; k < orbit.size() && ok; ++k) {
          long c = orbit[k];
          rep_val[c] = cur;
          placed.push_back(c);
          for (Idx f : s.members()) {
            Idx w = ar.add(cur, tau0[f]);
            if (used[w]) {
              ok = false;
              break;
            }
            used[w] = 1;
            marked.push_back(w);
          }
          // tau(sigma(rep_c)) = sigma(tau(rep_c)) together with the fill
          // rule at the target coset:
          long tgt = cbar[c];
          cur = ar.sub(st[cur], tau0[twist(elem_exp[rep[tgt]], off[c])]);
        }
        // Cycle closure: propagating around the orbit must reproduce v.
        if (ok && cur != v) ok = false;
        if (ok) place(c0 + 1);
        for (long c : placed) rep_val[c] = -1;
        for (Idx w : marked) used[w] = 0;
      }
    };
    place(1);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GammaWitness> gamma_constrained(const FiniteAbelianGroup& g,
                                            const GroupMap& sigma) {
  std::vector<GammaWitness> out;
  for (const Character& alpha : sigma_invariant_characters(g, sigma)) {
    // Additivity subgroup: the kernel of alpha. Restricted to it the twist
    // exponent vanishes, so tau0 = tau|ker is an injective homomorphism.
    std::vector<long> a(g.order());
    std::vector<Idx> ker;
    for (Idx x = 0; x < g.order(); ++x) {
      a[x] = alpha.exponent_at(g.element(x));
      if (a[x] == 0) ker.push_back(x);
    }
    Subgroup s = Subgroup::from_members(g, ker);
    std::vector<char> allowed(g.order(), 1); // images may land anywhere
    std::vector<Perm> taus = constrained_search(
        g, sigma, s, allowed, a,
        [&](const Perm& t) { return is_gamma_witness(g, sigma, t, alpha); });
    for (Perm& t : taus) out.emplace_back(g, sigma, std::move(t), alpha);
  }
  return out;
}

std::vector<Perm> sym_constrained(const FiniteAbelianGroup& g,
                                  const GroupMap& sigma, int sign) {
  // Additivity subgroup: the fixed points of sigma. Their orbits are
  // singletons, so the set conditions against them are equations, and tau
  // maps fixed points to fixed points because it commutes with sigma.
  Subgroup s = fixed_subgroup(sigma);
  std::vector<char> allowed(g.order(), 0);
  for (Idx m : s.members()) allowed[m] = 1;
  std::vector<long> zero_exp(g.order(), 0);
  return constrained_search(g, sigma, s, allowed, zero_exp,
                            [&](const Perm& t) {
                              return is_sym_member(g, sigma, t, sign);
                            });
}

} // namespace

std::vector<GammaWitness> gamma_group(const FiniteAbelianGroup& g,
                                      const GroupMap& sigma, SearchMode mode,
                                      const SearchOptions& opt) {
  if (!sigma.is_auto())
    throw precondition_error("gamma_group: sigma must be an automorphism");
  std::vector<GammaWitness> out = mode == SearchMode::Brute
                                      ? gamma_brute(g, sigma, opt)
                                      : gamma_constrained(g, sigma);
  std::sort(out.begin(), out.end(),
            [](const GammaWitness& x, const GammaWitness& y) {
              if (x.tau.tab != y.tau.tab) return x.tau.tab < y.tau.tab;
              return x.alpha < y.alpha;
            });
  for (size_t i = 1; i < out.size(); ++i)
    if (out[i].tau == out[i - 1].tau)
      throw internal_error(
          "gamma_group: one permutation matched two characters");
  return out;
}

std::vector<Perm> sym_sigma_minus(const FiniteAbelianGroup& g,
                                  const GroupMap& sigma, SearchMode mode,
                                  const SearchOptions& opt) {
  if (!sigma.is_auto())
    throw precondition_error("sym_sigma_minus: sigma must be an automorphism");
  return mode == SearchMode::Brute ? sym_brute(g, sigma, -1, opt)
                                   : sym_constrained(g, sigma, -1);
}

std::vector<Perm> sym_sigma_plus(const FiniteAbelianGroup& g,
                                 const GroupMap& sigma, SearchMode mode,
                                 const SearchOptions& opt) {
  if (!sigma.is_auto())
    throw precondition_error("sym_sigma_plus: sigma must be an automorphism");
  return mode == SearchMode::Brute ? sym_brute(g, sigma, 1, opt)
                                   : sym_constrained(g, sigma, 1);
}

std::vector<Character> nu_fiber(const FiniteAbelianGroup& g,
                                const GroupMap& sigma, const Perm& tau) {
  std::vector<Character> hits;
  for (const Character& alpha : sigma_invariant_characters(g, sigma))
    if (is_gamma_witness(g, sigma, tau, alpha)) hits.push_back(alpha);
  if (hits.size() > 1)
    throw internal_error("nu_fiber: permutation admits two characters");
  return hits;
}

std::optional<ClosureCertificate> check_group_closure(
    const std::vector<Perm>& elems) {
  if (elems.empty())
    return ClosureCertificate{"missing-identity", std::nullopt};
  std::set<std::vector<Idx>> pool;
  for (const Perm& p : elems) pool.insert(p.tab);
  long n = elems[0].size();
  if (!pool.count(Perm::identity(n).tab))
    return ClosureCertificate{"missing-identity", std::nullopt};
  for (const Perm& p : elems) {
    if (!pool.count(p.inverse().tab))
      return ClosureCertificate{"missing-inverse", std::make_pair(p, p)};
    for (const Perm& q : elems)
      if (!pool.count(p.compose(q).tab))
        return ClosureCertificate{"not-closed", std::make_pair(p, q)};
  }
  return std::nullopt;
}

std::string abelian_iso_label(const std::vector<Perm>& elements) {
  long n = static_cast<long>(elements.size());
  if (n == 0) throw precondition_error("abelian_iso_label: empty set");
  if (n == 1) return "Z1";
  std::vector<long> ord;
  ord.reserve(n);
  for (const Perm& p : elements) ord.push_back(p.order());
  // Per prime p: with m_i = #{x : ord(x) divides p^i} = p^{s_i}, the jumps
  // s_i - s_{i-1} count summands of exponent >= i, which recovers the
  // partition of p-exponents.
  std::map<long, std::vector<long>> partitions; // prime -> exponents desc
  long rest = n;
  for (long p = 2; rest > 1; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    std::vector<long> cnt_ge; // index i-1 holds #{exponent >= i}
    long pi = 1, prev_s = 0;
    for (;;) {
      pi *= p;
      long m = 0;
      for (long o : ord)
        if (pi % o == 0) ++m;
      long s = 0;
      for (long t = m; t > 1; t /= p, ++s)
        if (t % p) throw internal_error("iso label: order counts not a power");
      if (s == prev_s) break;
      cnt_ge.push_back(s - prev_s);
      prev_s = s;
    }
    std::vector<long> part;
    long top = static_cast<long>(cnt_ge.size());
    for (long e = top; e >= 1; --e) {
      long exactly = cnt_ge[e - 1] - (e == top ? 0 : cnt_ge[e]);
      for (long k = 0; k < exactly; ++k) part.push_back(e);
    }
    partitions[p] = part;
  }
  // Assemble invariant factors, largest exponents together.
  size_t slots = 0;
  for (auto& [p, part] : partitions) slots = std::max(slots, part.size());
  std::vector<long> factors(slots, 1);
  for (auto& [p, part] : partitions)
    for (size_t i = 0; i < part.size(); ++i) {
      long q = 1;
      for (long k = 0; k < part[i]; ++k) q *= p;
      factors[i] *= q;
    }
  long prod = 1;
  for (long f : factors) prod *= f;
  if (prod != n)
    throw internal_error("iso label: invariant factors do not multiply up");
  std::string label;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) label += " x ";
    label += "Z" + std::to_string(factors[i]);
  }
  return label;
}

PermGroupReport make_report(const FiniteAbelianGroup& g, const GroupMap& sigma,
                            std::string target, std::vector<Perm> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()),
                 elements.end());
  PermGroupReport r;
  r.group_moduli = g.moduli();
  r.target = std::move(target);
  r.order = static_cast<long>(elements.size());
  r.is_closed = !check_group_closure(elements).has_value();
  std::set<std::vector<Idx>> pool;
  for (const Perm& p : elements) pool.insert(p.tab);
  r.contains_aut_sigma = true;
  for (const Perm& p : aut_sigma(g, sigma))
    if (!pool.count(p.tab)) {
      r.contains_aut_sigma = false;
      break;
    }
  r.abelian = true;
  for (size_t i = 0; i < elements.size() && r.abelian; ++i)
    for (size_t j = i + 1; j < elements.size() && r.abelian; ++j)
      r.abelian = elements[i].compose(elements[j]) ==
                  elements[j].compose(elements[i]);
  if (r.abelian && r.is_closed && !elements.empty())
    r.iso_label = abelian_iso_label(elements);
  // Greedy generators: take each element that enlarges the span so far.
  if (r.is_closed && !elements.empty()) {
    std::set<std::vector<Idx>> span;
    span.insert(Perm::identity(elements[0].size()).tab);
    for (const Perm& p : elements) {
      if (span.count(p.tab)) continue;
      r.generators.push_back(p);
      std::vector<Perm> frontier{p};
      while (!frontier.empty()) {
        Perm cur = frontier.back();
        frontier.pop_back();
        if (!span.insert(cur.tab).second) continue;
        std::vector<std::vector<Idx>> snapshot(span.begin(), span.end());
        for (const std::vector<Idx>& q : snapshot) {
          Perm qq{q};
          frontier.push_back(cur.compose(qq));
          frontier.push_back(qq.compose(cur));
        }
      }
      if (span.size() == elements.size()) break;
    }
  }
  r.elements = std::move(elements);
  return r;
}

} // namespace biprod
