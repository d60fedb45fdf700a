#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "biprod/errors.hpp"

namespace biprod {

using Rat = mpq_class;

long euler_phi(long m);

// Coefficients of the m-th cyclotomic polynomial, ascending degree, monic of
// degree phi(m). Computed by exact division of x^m - 1 by the proper-divisor
// cyclotomic polynomials; cached, race-safe.
const std::vector<long long>& cyclotomic_poly(long m);

// Element of Q(zeta_m) in the power basis 1, zeta, ..., zeta^{phi(m)-1},
// i.e. a rational polynomial reduced mod Phi_m, coefficients in lowest terms.
// Binary operations require equal conductors; lifting between compatible
// conductors is explicit.
class CycloNum {
public:
  CycloNum() : CycloNum(zero(1)) {}

  static CycloNum zero(long m);
  static CycloNum one(long m);
  static CycloNum from_rational(long m, const Rat& r);
  static CycloNum zeta_pow(long m, long k);

  long conductor() const { return conductor_; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_one() const;
  // True when the value lies in Q; the value is written through out if given.
  bool is_rational(Rat* out = nullptr) const;

  CycloNum operator-() const;
  friend CycloNum operator+(const CycloNum& a, const CycloNum& b);
  friend CycloNum operator-(const CycloNum& a, const CycloNum& b);
  friend CycloNum operator*(const CycloNum& a, const CycloNum& b);
  CycloNum scaled(const Rat& r) const;

  CycloNum inverse() const;
  CycloNum pow(long e) const; // negative e inverts first

  // Image under the canonical embedding zeta_m -> zeta_m2 ^ (m2/m).
  // Requires m | m2.
  CycloNum lifted(long m2) const;

  bool operator==(const CycloNum& o) const;
  bool operator!=(const CycloNum& o) const { return !(*this == o); }

  std::string to_string() const;

private:
  CycloNum(long m, std::vector<Rat> coeffs)
      : conductor_(m), coeffs_(std::move(coeffs)) {}

  long conductor_;
  std::vector<Rat> coeffs_;
};

} // namespace biprod
