#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace linex {

/// Exact element of the cyclotomic field Q(zeta_p), zeta_p = exp(2 pi i / p).
///
/// Stored in the basis 1, zeta, ..., zeta^{p-2}; internally the coefficient
/// vector has length p with the last slot pinned to zero, so that
/// multiplication by a power of zeta is a rotation followed by one
/// renormalisation.
class Cyclo {
 public:
  explicit Cyclo(unsigned p = 2);
  Cyclo(unsigned p, const mpq_class& rational);

  /// zeta^j.
  static Cyclo root(unsigned p, long j);
  /// sum c[i] zeta^i for a coefficient list of length at most p.
  static Cyclo from_coeffs(unsigned p, std::vector<mpq_class> c);

  unsigned prime() const { return p_; }
  /// Coefficient of zeta^i, 0 <= i < p - 1.
  const mpq_class& coeff(unsigned i) const { return c_[i]; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Throws NotRational unless every non-constant coefficient vanishes.
  mpq_class to_rational() const;

  Cyclo conj() const;
  /// Multiply by zeta^j in place.
  void rotate(long j);
  /// this += r * zeta^j
  void add_rotated(const mpq_class& r, long j);

  Cyclo& operator+=(const Cyclo& o);
  Cyclo& operator-=(const Cyclo& o);
  Cyclo& operator*=(const Cyclo& o);
  Cyclo& operator*=(const mpq_class& r);
  Cyclo operator-() const;

  friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
  friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
  friend Cyclo operator*(Cyclo a, const Cyclo& b) { return a *= b; }
  friend Cyclo operator*(Cyclo a, const mpq_class& r) { return a *= r; }
  friend Cyclo operator*(const mpq_class& r, Cyclo a) { return a *= r; }

  bool operator==(const Cyclo& o) const;
  bool operator!=(const Cyclo& o) const { return !(*this == o); }

  /// |z|^2 = z * conj(z).
  Cyclo norm2() const;

  std::complex<double> to_complex() const;
  std::string to_string() const;

 private:
  void normalize();
  void check_prime(const Cyclo& o) const;

  unsigned p_;
  std::vector<mpq_class> c_;
};

inline std::ostream& operator<<(std::ostream& os, const Cyclo& c) { return os << c.to_string(); }

}  // namespace linex
