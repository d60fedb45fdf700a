#include "biprod/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace biprod {

namespace {

constexpr long kConductorCap = 4096;

void check_conductor(long m) {
  if (m < 1)
    throw invalid_input_error("conductor must be >= 1, got " +
                              std::to_string(m));
  if (m > kConductorCap)
    throw resource_cap_error("conductor cap " + std::to_string(kConductorCap) +
                             " exceeded by " + std::to_string(m));
}

// Exact division of p by a monic q over the integers; remainder must vanish.
std::vector<long long> exact_div(std::vector<long long> p,
                                 const std::vector<long long>& q) {
  const long dq = static_cast<long>(q.size()) - 1;
  const long dp = static_cast<long>(p.size()) - 1;
  std::vector<long long> out(dp - dq + 1, 0);
  for (long d = dp; d >= dq; --d) {
    long long c = p[d];
    if (c == 0) continue;
    out[d - dq] = c;
    for (long j = 0; j <= dq; ++j) p[d - dq + j] -= c * q[j];
  }
  for (long long c : p)
    if (c != 0) throw internal_error("cyclotomic division left a remainder");
  return out;
}

} // namespace

long euler_phi(long m) {
  check_conductor(m);
  long phi = m;
  long rest = m;
  for (long p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    phi -= phi / p;
    while (rest % p == 0) rest /= p;
  }
  if (rest > 1) phi -= phi / rest;
  return phi;
}

const std::vector<long long>& cyclotomic_poly(long m) {
  check_conductor(m);
  static std::mutex mu;
  static std::map<long, std::vector<long long>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  // Work bottom-up over divisors so recursion never re-enters the lock.
  for (long d = 1; d <= m; ++d) {
    if (m % d || cache.count(d)) continue;
    std::vector<long long> poly(d + 1, 0); // x^d - 1
    poly[0] = -1;
    poly[d] = 1;
    for (long e = 1; e < d; ++e)
      if (d % e == 0) poly = exact_div(std::move(poly), cache.at(e));
    cache.emplace(d, std::move(poly));
  }
  return cache.at(m);
}

namespace {

// Remainder of p mod Phi_m (monic with integer coefficients), in place.
void reduce_mod_phi(std::vector<Rat>& p, long m) {
  const auto& phi = cyclotomic_poly(m);
  const long deg = static_cast<long>(phi.size()) - 1;
  for (long d = static_cast<long>(p.size()) - 1; d >= deg; --d) {
    if (p[d] == 0) continue;
    Rat c = p[d];
    for (long j = 0; j <= deg; ++j)
      p[d - deg + j] -= c * static_cast<long>(phi[j]);
  }
  p.resize(deg);
  for (Rat& c : p) c.canonicalize();
}

std::vector<Rat> poly_mul(const std::vector<Rat>& a,
                          const std::vector<Rat>& b) {
  std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

long poly_deg(const std::vector<Rat>& p) {
  for (long d = static_cast<long>(p.size()) - 1; d >= 0; --d)
    if (p[d] != 0) return d;
  return -1;
}

} // namespace

CycloNum CycloNum::zero(long m) {
  check_conductor(m);
  return CycloNum(m, std::vector<Rat>(euler_phi(m), Rat(0)));
}

CycloNum CycloNum::one(long m) { return from_rational(m, Rat(1)); }

CycloNum CycloNum::from_rational(long m, const Rat& r) {
  CycloNum out = zero(m);
  std::vector<Rat> p{r};
  p.resize(std::max<std::size_t>(1, out.coeffs_.size()), Rat(0));
  reduce_mod_phi(p, m);
  out.coeffs_ = std::move(p);
  return out;
}

CycloNum CycloNum::zeta_pow(long m, long k) {
  check_conductor(m);
  k %= m;
  if (k < 0) k += m;
  std::vector<Rat> p(k + 1, Rat(0));
  p[k] = 1;
  reduce_mod_phi(p, m);
  return CycloNum(m, std::move(p));
}

bool CycloNum::is_zero() const {
  for (const Rat& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CycloNum::is_one() const {
  Rat v;
  return is_rational(&v) && v == 1;
}

bool CycloNum::is_rational(Rat* out) const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  if (out) *out = coeffs_.empty() ? Rat(0) : coeffs_[0];
  return true;
}

CycloNum CycloNum::operator-() const {
  CycloNum out = *this;
  for (Rat& c : out.coeffs_) c = -c;
  return out;
}

namespace {

void require_same_conductor(const CycloNum& a, const CycloNum& b,
                            const char* op) {
  if (a.conductor() != b.conductor())
    throw conductor_mismatch_error(
        std::string(op) + " on conductors " + std::to_string(a.conductor()) +
        " and " + std::to_string(b.conductor()) + "; lift explicitly");
}

} // namespace

CycloNum operator+(const CycloNum& a, const CycloNum& b) {
  require_same_conductor(a, b, "addition");
  CycloNum out = a;
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    out.coeffs_[i] += b.coeffs_[i];
    out.coeffs_[i].canonicalize();
  }
  return out;
}

CycloNum operator-(const CycloNum& a, const CycloNum& b) {
  require_same_conductor(a, b, "subtraction");
  CycloNum out = a;
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    out.coeffs_[i] -= b.coeffs_[i];
    out.coeffs_[i].canonicalize();
  }
  return out;
}

CycloNum operator*(const CycloNum& a, const CycloNum& b) {
  require_same_conductor(a, b, "multiplication");
  std::vector<Rat> p = poly_mul(a.coeffs_, b.coeffs_);
  reduce_mod_phi(p, a.conductor_);
  return CycloNum(a.conductor_, std::move(p));
}

CycloNum CycloNum::scaled(const Rat& r) const {
  CycloNum out = *this;
  for (Rat& c : out.coeffs_) {
    c *= r;
    c.canonicalize();
  }
  return out;
}

CycloNum CycloNum::inverse() const {
  if (is_zero()) throw division_error("inverse of zero cyclotomic number");
  // Extended Euclid in Q[x] against Phi_m: maintain s with s*f = r (mod Phi).
  const auto& phi_int = cyclotomic_poly(conductor_);
  std::vector<Rat> r0;
  r0.reserve(phi_int.size());
  for (long long c : phi_int) r0.emplace_back(static_cast<long>(c));
  std::vector<Rat> r1 = coeffs_;
  std::vector<Rat> s0{Rat(0)}, s1{Rat(1)};
  while (poly_deg(r1) > 0) {
    // r0 = q*r1 + r2
    std::vector<Rat> q(poly_deg(r0) - poly_deg(r1) + 1, Rat(0));
    std::vector<Rat> r2 = r0;
    const long db = poly_deg(r1);
    for (long da = poly_deg(r2); da >= db; da = poly_deg(r2)) {
      Rat c = r2[da] / r1[db];
      q[da - db] = c;
      for (long j = 0; j <= db; ++j) r2[da - db + j] -= c * r1[j];
      r2[da] = 0;
    }
    std::vector<Rat> s2 = s0;
    std::vector<Rat> qs = poly_mul(q, s1);
    s2.resize(std::max(s2.size(), qs.size()), Rat(0));
    for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  const long d = poly_deg(r1);
  if (d != 0)
    throw internal_error("cyclotomic inverse: gcd with Phi_m not a unit");
  Rat lead = r1[0];
  for (Rat& c : s1) {
    c /= lead;
    c.canonicalize();
  }
  reduce_mod_phi(s1, conductor_);
  return CycloNum(conductor_, std::move(s1));
}

CycloNum CycloNum::pow(long e) const {
  CycloNum base = e < 0 ? inverse() : *this;
  if (e < 0) e = -e;
  CycloNum acc = one(conductor_);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

CycloNum CycloNum::lifted(long m2) const {
  check_conductor(m2);
  if (m2 % conductor_ != 0)
    throw conductor_mismatch_error("cannot lift conductor " +
                                   std::to_string(conductor_) + " into " +
                                   std::to_string(m2));
  const long c = m2 / conductor_;
  std::vector<Rat> p((coeffs_.size() - 1) * c + 1, Rat(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) p[i * c] = coeffs_[i];
  reduce_mod_phi(p, m2);
  return CycloNum(m2, std::move(p));
}

bool CycloNum::operator==(const CycloNum& o) const {
  require_same_conductor(*this, o, "equality");
  return coeffs_ == o.coeffs_;
}

std::string CycloNum::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) s += ", ";
    s += coeffs_[i].get_str();
  }
  return s + "]@" + std::to_string(conductor_);
}

} // namespace biprod
