#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biprod/abelian_group.hpp"
#include "biprod/characters.hpp"

namespace biprod {

// Permutation of {0..n-1} as a value table over group-element indices.
struct Perm {
  std::vector<Idx> tab;

  static Perm identity(long n);
  long size() const { return static_cast<long>(tab.size()); }
  Idx operator()(Idx i) const { return tab[i]; }
  Perm compose(const Perm& inner) const; // this after inner
  Perm inverse() const;
  long order() const;
  bool is_identity() const;

  bool operator==(const Perm&) const = default;
  bool operator<(const Perm& o) const { return tab < o.tab; }
};

Perm perm_from_map(const GroupMap& f); // requires is_auto

// Inverse direction: rebuilds the generator-image form of an additive
// permutation. Throws invalid_hom_error when the table is not additive.
GroupMap map_from_perm(const FiniteAbelianGroup& g, const Perm& tau);

enum class SearchMode { Brute, Constrained };

struct SearchOptions {
  long brute_cap = 8;
  bool allow_nine = false;

  long effective_brute_cap() const {
    return allow_nine && brute_cap < 9 ? 9 : brute_cap;
  }
};

// Ground-truth membership checkers, used to validate everything the
// enumerations produce. `why` (if given) receives a failure description.

// tau additive and bijective, commuting with sigma.
bool is_aut_sigma_member(const FiniteAbelianGroup& g, const GroupMap& sigma,
                         const Perm& tau, std::string* why = nullptr);

// The compatibility conditions linking tau to the invariant character alpha:
// tau commutes with sigma; alpha is sigma-invariant with modulus |sigma|;
// and for all s, m: tau(s - m) = tau(s) - tau(sigma^l(m)) with l the
// twist exponent of (alpha, s, m).
bool is_gamma_witness(const FiniteAbelianGroup& g, const GroupMap& sigma,
                      const Perm& tau, const Character& alpha,
                      std::string* why = nullptr);

// tau commutes with sigma and tau(a -/+ O) = tau(a) -/+ tau(O) as sets for
// every element a and sigma-orbit O. sign is -1 or +1.
bool is_sym_member(const FiniteAbelianGroup& g, const GroupMap& sigma,
                   const Perm& tau, int sign, std::string* why = nullptr);

// A (tau, alpha) pair that passed is_gamma_witness on construction.
struct GammaWitness {
  GammaWitness(const FiniteAbelianGroup& g, const GroupMap& sigma, Perm tau,
               Character alpha);
  Perm tau;
  Character alpha;
};

// Automorphisms commuting with sigma, by generator-image backtracking.
std::vector<Perm> aut_sigma(const FiniteAbelianGroup& g, const GroupMap& sigma);

// All witnesses over all sigma-invariant characters, sorted by (tau, alpha).
// Distinct characters never produce the same tau; a duplicate is reported as
// an internal error.
std::vector<GammaWitness> gamma_group(const FiniteAbelianGroup& g,
                                      const GroupMap& sigma, SearchMode mode,
                                      const SearchOptions& opt = {});

std::vector<Perm> sym_sigma_minus(const FiniteAbelianGroup& g,
                                  const GroupMap& sigma, SearchMode mode,
                                  const SearchOptions& opt = {});
std::vector<Perm> sym_sigma_plus(const FiniteAbelianGroup& g,
                                 const GroupMap& sigma, SearchMode mode,
                                 const SearchOptions& opt = {});

// The characters alpha making (tau, alpha) a witness: at most one exists;
// finding two is an internal error.
std::vector<Character> nu_fiber(const FiniteAbelianGroup& g,
                                const GroupMap& sigma, const Perm& tau);

struct ClosureCertificate {
  std::string reason; // "missing-identity" | "not-closed" | "missing-inverse"
  std::optional<std::pair<Perm, Perm>> pair;
};

// nullopt when the element set is a group under composition.
std::optional<ClosureCertificate> check_group_closure(
    const std::vector<Perm>& elems);

struct PermGroupReport {
  std::vector<long> group_moduli;
  std::string target;
  std::vector<Perm> elements; // sorted
  long order = 0;
  std::vector<Perm> generators;
  bool is_closed = false;
  bool contains_aut_sigma = false;
  bool abelian = false;
  std::string iso_label; // empty unless abelian
};

PermGroupReport make_report(const FiniteAbelianGroup& g, const GroupMap& sigma,
                            std::string target, std::vector<Perm> elements);

// Isomorphism type of an abelian permutation group from element-order
// statistics, as descending invariant factors ("Z6 x Z2").
std::string abelian_iso_label(const std::vector<Perm>& elements);

} // namespace biprod
