#pragma once

#include <compare>
#include <string>

#include <gmpxx.h>

namespace linex {

/// Nonnegative real of the form radicand^(1/index), radicand rational.
/// Enough to compare thresholds such as q^(-3r + r^2/4) exactly.
class Surd {
 public:
  Surd() : rad_(0), idx_(1) {}
  Surd(const mpq_class& r);  // NOLINT: implicit from rationals is intended
  Surd(const mpq_class& radicand, unsigned long index);

  /// base^(num/den) for base > 0.
  static Surd power(const mpq_class& base, long num, unsigned long den);

  const mpq_class& radicand() const { return rad_; }
  unsigned long index() const { return idx_; }
  bool is_rational() const;
  /// Throws NotRational unless the value is rational.
  mpq_class to_rational() const;

  Surd operator*(const Surd& o) const;
  friend std::strong_ordering operator<=>(const Surd& a, const Surd& b);
  friend bool operator==(const Surd& a, const Surd& b) { return (a <=> b) == 0; }

  double to_double() const;
  std::string to_string() const;

 private:
  void reduce();
  mpq_class rad_;
  unsigned long idx_;
};

/// x^e for rational x and e >= 0.
mpq_class qpow(const mpq_class& x, unsigned long e);
mpz_class zpow(long base, unsigned long e);

}  // namespace linex
