// Exact arithmetic in cyclotomic fields Q(zeta_m), power basis mod Phi_m.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace grlab {

using Rat = mpq_class;

long euler_phi(long m);
long lcm_long(long a, long b);

// Basis data for Q(zeta_m): ored[k] is zeta^k in the power basis, 0 <= k < m.
struct CycField {
  int m = 1;
  int phi = 1;
  std::vector<long> poly;  // Phi_m, low degree first, monic
  std::vector<std::vector<long>> ored;
};

const CycField& cyc_field(int m);

class CycNum {
 public:
  CycNum();
  CycNum(long v);  // NOLINT
  CycNum(const Rat& v);  // NOLINT
  CycNum(int m, std::vector<Rat> coeffs);

  static CycNum zeta(int m, long k = 1);

  int conductor() const { return m_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  CycNum embed(int M) const;
  CycNum conj() const;
  CycNum inverse() const;
  // Galois automorphism zeta -> zeta^k, gcd(k, m) = 1.
  CycNum galois(long k) const;

  bool is_zero() const;
  bool is_rational() const;
  Rat rational_value() const;
  long rational_integer_value() const;

  CycNum& operator+=(const CycNum& o);
  CycNum& operator-=(const CycNum& o);
  CycNum& operator*=(const CycNum& o);
  CycNum& operator/=(const CycNum& o);
  CycNum operator-() const;

  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
  friend CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }
  friend bool operator==(const CycNum& a, const CycNum& b);
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  // Total order on values of the same conductor; used for canonical sorting only.
  int compare(const CycNum& o) const;

  std::string str() const;
  static CycNum parse(const std::string& s);

  // Expand sum_k e[k] zeta_m^k (k mod m) into the power basis.
  static CycNum from_exponents(int m, const std::vector<Rat>& e);

 private:
  int m_ = 1;
  std::vector<Rat> c_;
  void lift_pair(CycNum& o);
};

inline bool is_zero(const CycNum& a) { return a.is_zero(); }
inline bool is_zero(const Rat& a) { return sgn(a) == 0; }

}  // namespace grlab
