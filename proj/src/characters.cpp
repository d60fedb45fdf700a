#include "biprod/characters.hpp"

#include <numeric>
#include <string>

namespace biprod {

Character::Character(const FiniteAbelianGroup& g, long modulus,
                     std::vector<long> exps)
    : group_(g), modulus_(modulus), exps_(std::move(exps)) {
  if (modulus_ < 1)
    throw invalid_input_error("character modulus must be >= 1");
  if (exps_.size() != g.rank())
    throw invalid_input_error("character exponent tuple has wrong rank");
  for (std::size_t j = 0; j < exps_.size(); ++j) {
    if (exps_[j] < 0 || exps_[j] >= modulus_)
      throw invalid_input_error("character exponent out of range");
    // alpha must respect the relation n_j * x_j = 0.
    if ((g.moduli()[j] * exps_[j]) % modulus_ != 0)
      throw invalid_input_error(
          "character exponent " + std::to_string(exps_[j]) + " at position " +
          std::to_string(j) + " incompatible with modulus " +
          std::to_string(g.moduli()[j]));
  }
}

long Character::exponent_at(const GroupElem& x) const {
  if (x.c.size() != group_.rank())
    throw invalid_input_error("character argument has wrong rank");
  long long e = 0;
  for (std::size_t j = 0; j < exps_.size(); ++j)
    e = (e + static_cast<long long>(exps_[j]) * x.c[j]) % modulus_;
  return static_cast<long>(e);
}

bool Character::is_trivial() const {
  for (long e : exps_)
    if (e != 0) return false;
  return true;
}

long Character::order() const {
  long g = modulus_;
  for (long e : exps_) g = std::gcd(g, e);
  return modulus_ / g;
}

long pairing_exponent(const FiniteAbelianGroup& g, const GroupElem& m,
                      const GroupElem& r) {
  const long n = g.order();
  long long e = 0;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    long long w = (n / g.moduli()[j]) % n;
    e = (e + w * m.c[j] % n * r.c[j]) % n;
  }
  return static_cast<long>(e);
}

Character char_from_element(const FiniteAbelianGroup& g, const GroupElem& m) {
  const long n = g.order();
  std::vector<long> exps(g.rank());
  for (std::size_t j = 0; j < g.rank(); ++j) {
    long e = (n / g.moduli()[j]) % n * m.c[j] % n;
    exps[j] = e == 0 ? 0 : n - e;
  }
  return Character(g, n, std::move(exps));
}

std::vector<Character> sigma_invariant_characters(const FiniteAbelianGroup& g,
                                                  const GroupMap& sigma) {
  if (!sigma.is_auto())
    throw precondition_error("sigma must be an automorphism");
  const long n_mod = sigma.map_order();
  std::vector<Character> out;
  std::vector<long> exps(g.rank(), 0);
  for (;;) {
    bool ok = true;
    for (std::size_t j = 0; j < g.rank() && ok; ++j)
      if ((g.moduli()[j] * exps[j]) % n_mod != 0) ok = false;
    if (ok) {
      Character alpha(g, n_mod, exps);
      // Invariance of homomorphisms can be checked on generators.
      for (std::size_t j = 0; j < g.rank() && ok; ++j)
        if (alpha.exponent_at(sigma.images()[j]) != exps[j]) ok = false;
      if (ok) out.push_back(std::move(alpha));
    }
    // lexicographic odometer, most significant coordinate first
    std::size_t j = g.rank();
    while (j-- > 0) {
      if (++exps[j] < n_mod) break;
      exps[j] = 0;
      if (j == 0) return out;
    }
  }
}

long ell_alpha(const Character& alpha, const GroupMap& sigma,
               const GroupElem& s, const GroupElem& m) {
  const long n_mod = alpha.modulus();
  if (sigma.map_order() != n_mod)
    throw precondition_error("ell_alpha: character modulus must equal |sigma|");
  const long len = orbit_length(sigma, m);
  if (n_mod % len != 0)
    throw internal_error("ell_alpha: orbit length does not divide |sigma|");
  long diff = (alpha.exponent_at(s) - alpha.exponent_at(m)) % n_mod;
  if (diff < 0) diff += n_mod;
  return diff % len;
}

} // namespace biprod
