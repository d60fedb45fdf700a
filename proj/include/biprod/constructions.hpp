#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biprod/abelian_group.hpp"
#include "biprod/characters.hpp"
#include "biprod/perm_search.hpp"

namespace biprod {

// ---------------------------------------------------------------------------
// Coset-shift families. G is split along an index-p subgroup G0 with coset
// unit s, every element written uniquely as i*s + x with i in [0,p) and x in
// G0. The automorphism sigma(i s + x) = i s + i m + x (m in G0 of order p)
// fixes G0 pointwise and has order p. The companion permutation is
//
//   tau(i s + x) = i (s + n) + w(i) m + tau0(x)
//
// with tau0 an automorphism of G0 and w an integer weight per coset level.
// The quadratic weight w(i) = i(i-1)/2 makes tau a witness for the
// coset-index character; other weights realize the strict membership chain
// (commuting automorphisms < witnesses < symmetries).
// ---------------------------------------------------------------------------

struct CosetShiftSpec {
  std::vector<long> moduli;
  std::vector<GroupElem> g0_gens; // generate the index-p subgroup
  GroupElem s;                    // coset unit
  GroupElem m;                    // sigma shift, in G0, order p
  GroupElem n;                    // tau shift, in G0
  std::vector<GroupElem> tau0_images; // images of g0_gens under tau0
  long p = 0;
};

struct CosetShiftFamily {
  FiniteAbelianGroup g;
  Subgroup g0;
  GroupMap sigma;
  Perm tau;
  Character alpha; // coset-index character, modulus p
  // Empty when tau happens to be additive; the shipped instances all carry
  // a counterexample pair.
  std::optional<std::pair<GroupElem, GroupElem>> non_additive_pair;
};

// Builds the family with the quadratic weight and certifies that
// (tau, alpha) passes the witness validator. Throws spec_invalid_error on
// malformed specs.
CosetShiftFamily build_coset_shift(const CosetShiftSpec& spec);

// Same carrier, free weight pattern: w(i) = ell[0] + ... + ell[i-2] for
// i >= 2 (w(0) = w(1) = 0). ell has p-2 entries; entry ell[u-2] is the
// increment picked up between levels u-1 and u.
struct TwistPatternSpec {
  CosetShiftSpec base;
  std::vector<long> ell;
};

struct MembershipProfile {
  Perm tau;
  Perm sigma; // the carrier automorphism, for cross-pattern comparisons
  bool in_aut_sigma = false;
  bool in_gamma = false;
  bool in_sym_minus = false;
  std::optional<Character> gamma_character; // set when in_gamma
};

// Builds tau for the pattern and tests it against the three membership
// checkers; no enumeration is involved.
MembershipProfile classify_twist_pattern(const TwistPatternSpec& spec);

// ---------------------------------------------------------------------------
// Local rings of order p^2: Z_{p^2} and F_p[x]/(x^2). sigma is
// multiplication by the canonical generator u of the unit group; the
// symmetry group splits as the commuting automorphisms times the family of
// ideal twists (identity off the maximal ideal, a power of sigma on it).
// ---------------------------------------------------------------------------

enum class LocalRingKind { PrimeSquare, DualNumbers };

struct LocalRingReport {
  FiniteAbelianGroup g;
  GroupMap sigma;
  GroupElem unit;
  long p = 0;
  long unit_order = 0; // multiplicative order of u; equals the order of sigma
  std::vector<Perm> aut;          // commuting automorphisms
  std::vector<Perm> sym;          // symmetries, difference form
  std::vector<Perm> ideal_twists; // the tau_s family, s in [0, p-1)
  bool product_decomposition = false; // every sym element factors uniquely
  bool strict = false;                // |sym| > |aut|
  std::string aut_label;
  std::string sym_label;
};

LocalRingReport build_local_ring(long p, LocalRingKind kind);

// ---------------------------------------------------------------------------
// Theorem checkers over concrete instances.
// ---------------------------------------------------------------------------

// Odd-order groups: every involutive sigma has Sym_sigma = Aut_sigma.
struct InvolutionCheck {
  long involution_count = 0; // automorphisms with sigma^2 = id != sigma
  bool all_equal = true;     // Sym == Aut for each of them
};
InvolutionCheck check_involution(const FiniteAbelianGroup& g);

// Coprime case: on the quotient by the fixed subgroup the induced map has
// no nonzero fixed point, and a symmetry whose induced map is a commuting
// automorphism of the quotient is itself a commuting automorphism. The
// conclusions are checked on any input; hypothesis_coprime records whether
// the coprimality assumption gcd(|sigma|, |G|) = 1 actually held.
struct ReductionCheck {
  bool hypothesis_coprime = false;
  long quotient_order = 0;
  long sym_order = 0;
  long aut_order = 0;
  bool quotient_fixed_point_unique = false;
  bool projections_well_defined = false; // every symmetry descends
  bool implication_holds = false;
};
ReductionCheck check_reduction(const FiniteAbelianGroup& g,
                               const GroupMap& sigma);

// Sufficient conditions under which every witness permutation is already a
// commuting automorphism. case_label picks the hypothesis to verify:
// "unique-fixed-point", "coprime-order", "prime-order" (|sigma| prime, its
// square not dividing |G|), or "none" (no hypothesis claimed; the equality
// is still tested).
struct NoFixCheck {
  std::string case_label;
  bool hypothesis_holds = false;
  long gamma_order = 0;
  long aut_order = 0;
  bool gamma_equals_aut = false;
};
NoFixCheck check_sigma_nofix(const FiniteAbelianGroup& g,
                             const GroupMap& sigma,
                             const std::string& case_label);

} // namespace biprod
