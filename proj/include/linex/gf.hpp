#pragma once

// Finite fields F_q, q = p^s, as flyweight table-driven objects.
//
// An element is encoded as the integer sum_k c_k p^k where c_0 + c_1 x + ...
// is its residue modulo the field's monic irreducible modulus. The encoding
// fixes both storage (`Elem`) and the enumeration order used everywhere else.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linex/cyclo.hpp"

namespace linex {

using Elem = std::uint16_t;

struct FieldSpec {
  int p = 2;
  int s = 1;
  std::vector<int> modulus{1, 1};  // constant term first, monic, length s + 1

  long q() const;
  bool operator==(const FieldSpec&) const = default;
};

/// Modulus table: Conway polynomials for q <= 64, otherwise the smallest
/// irreducible monic polynomial in encoding order.
FieldSpec default_field_spec(long q);

/// True iff `poly` (constant term first) is irreducible over F_p.
/// Trial division by every monic polynomial of degree <= deg/2.
bool is_irreducible_mod_p(std::span<const int> poly, int p);

bool is_prime(long n);

class Field {
 public:
  /// Interned field for q with the default modulus. Lifetime is the process.
  static const Field& get(long q);
  /// Interned field for a validated spec.
  static const Field& get(const FieldSpec& spec);

  const FieldSpec& spec() const { return spec_; }
  int p() const { return spec_.p; }
  int s() const { return spec_.s; }
  int q() const { return q_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  Elem add(Elem a, Elem b) const {
    if (p2_) return static_cast<Elem>(a ^ b);
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
    return add_slow(a, b);
  }
  Elem neg(Elem a) const { return neg_table_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg_table_[b]); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    int e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }
  /// Throws DivisionByZero for a == 0.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t e) const;

  /// Absolute trace F_q -> F_p: x + x^p + ... + x^{p^{s-1}}, returned in [0, p).
  int trace(Elem a) const { return trace_[a]; }

  /// Image of the integer k under Z -> F_p -> F_q.
  Elem from_int(long k) const;
  std::vector<int> coeffs(Elem a) const;
  Elem from_coeffs(std::span<const int> coeffs) const;
  /// Smallest-encoded generator of the multiplicative group.
  Elem primitive() const { return exp_.size() > 1 ? exp_[1] : 1; }

  bool operator==(const Field& other) const { return this == &other; }

 private:
  explicit Field(FieldSpec spec);
  Elem add_slow(Elem a, Elem b) const;

  FieldSpec spec_;
  int q_;
  bool p2_;
  std::vector<Elem> add_table_;
  std::vector<Elem> neg_table_;
  std::vector<int> log_;
  std::vector<Elem> exp_;
  std::vector<int> trace_;
};

/// A field element bound to its field. Arithmetic across different fields
/// throws FieldMismatch.
class Fq {
 public:
  Fq(const Field& field, Elem value);
  static Fq from_coeffs(const Field& field, std::span<const int> coeffs);

  const Field& field() const { return *field_; }
  Elem value() const { return value_; }
  std::vector<int> coeffs() const { return field_->coeffs(value_); }
  bool is_zero() const { return value_ == 0; }

  Fq operator+(const Fq& o) const;
  Fq operator-(const Fq& o) const;
  Fq operator*(const Fq& o) const;
  Fq operator/(const Fq& o) const;
  Fq operator-() const { return Fq(*field_, field_->neg(value_)); }
  Fq inverse() const;

  bool operator==(const Fq& o) const { return field_ == o.field_ && value_ == o.value_; }

 private:
  const Field* field_;
  Elem value_;
};

enum class ArithOp { add, sub, mul, div };

Fq fq_arith(const Fq& a, const Fq& b, ArithOp op);

/// tau(x) as an element of the prime field, in [0, p).
int trace_map(const Fq& x);

/// omega^j, omega = exp(2 pi i / p), as an exact cyclotomic number.
Cyclo char_root(int p, int j);

std::string to_json(const FieldSpec& spec);
FieldSpec field_spec_from_json(const std::string& text);

}  // namespace linex
