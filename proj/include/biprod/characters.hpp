#pragma once

#include <vector>

#include "biprod/abelian_group.hpp"

namespace biprod {

// Character of G valued in M-th roots of unity, kept in exponent form:
// alpha(x) = zeta_M ^ (sum_j exps[j] * x_j). The root of unity itself is
// never materialized here; cyclotomic evaluation lives with the callers.
class Character {
public:
  Character(const FiniteAbelianGroup& g, long modulus, std::vector<long> exps);

  const FiniteAbelianGroup& group() const { return group_; }
  long modulus() const { return modulus_; }
  const std::vector<long>& exps() const { return exps_; }

  long exponent_at(const GroupElem& x) const;
  bool is_trivial() const;
  long order() const;

  bool operator==(const Character& o) const {
    return modulus_ == o.modulus_ && exps_ == o.exps_;
  }
  bool operator<(const Character& o) const {
    if (modulus_ != o.modulus_) return modulus_ < o.modulus_;
    return exps_ < o.exps_;
  }

private:
  FiniteAbelianGroup group_;
  long modulus_;
  std::vector<long> exps_;
};

// Exponent of the duality pairing: <m, r> = sum_j (n/n_j) m_j r_j mod n.
long pairing_exponent(const FiniteAbelianGroup& g, const GroupElem& m,
                      const GroupElem& r);

// The character r -> zeta_n ^ (-<m, r>), modulus n = |G|. m -> result is the
// canonical isomorphism of G with its character group.
Character char_from_element(const FiniteAbelianGroup& g, const GroupElem& m);

// All characters of modulus N = |sigma| with alpha o sigma = alpha, in
// lexicographic exponent order; the trivial character comes first.
std::vector<Character> sigma_invariant_characters(const FiniteAbelianGroup& g,
                                                  const GroupMap& sigma);

// The unique l in [0, L) with (alpha(s)/alpha(m))^{N/L} = lambda_m^l, where
// L is the sigma-orbit length of m and lambda_m the canonical primitive L-th
// root. In exponent form this is (a(s) - a(m)) mod L; the cyclotomic
// definitional form is cross-validated in the tests.
long ell_alpha(const Character& alpha, const GroupMap& sigma,
               const GroupElem& s, const GroupElem& m);

} // namespace biprod
