#include "linex/cyclo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "linex/errors.hpp"

namespace linex {

Cyclo::Cyclo(unsigned p) : p_(p), c_(p) {
  if (p < 2) throw DomainError("Cyclo: p must be >= 2");
}

Cyclo::Cyclo(unsigned p, const mpq_class& rational) : Cyclo(p) { c_[0] = rational; }

Cyclo Cyclo::root(unsigned p, long j) {
  Cyclo z(p);
  z.add_rotated(1, j);
  return z;
}

Cyclo Cyclo::from_coeffs(unsigned p, std::vector<mpq_class> c) {
  if (c.size() > p) throw DomainError("Cyclo: too many coefficients");
  Cyclo z(p);
  for (std::size_t i = 0; i < c.size(); ++i) z.c_[i] = std::move(c[i]);
  z.normalize();
  return z;
}

// Sum of all p-th roots of unity is zero; use it to clear the top slot.
void Cyclo::normalize() {
  if (sgn(c_[p_ - 1]) == 0) return;
  mpq_class top = c_[p_ - 1];
  for (auto& c : c_) c -= top;
}

void Cyclo::check_prime(const Cyclo& o) const {
  if (o.p_ != p_) throw FieldMismatch("Cyclo: different cyclotomic fields");
}

bool Cyclo::is_zero() const {
  for (const auto& c : c_)
    if (sgn(c) != 0) return false;
  return true;
}

bool Cyclo::is_rational() const {
  for (unsigned i = 1; i < p_; ++i)
    if (sgn(c_[i]) != 0) return false;
  return true;
}

mpq_class Cyclo::to_rational() const {
  if (!is_rational()) throw NotRational("cyclotomic value is not rational: " + to_string());
  return c_[0];
}

Cyclo Cyclo::conj() const {
  Cyclo r(p_);
  r.c_[0] = c_[0];
  for (unsigned i = 1; i < p_; ++i) r.c_[p_ - i] = c_[i];
  r.normalize();
  return r;
}

void Cyclo::rotate(long j) {
  long jj = ((j % static_cast<long>(p_)) + p_) % p_;
  if (jj == 0) return;
  std::vector<mpq_class> out(p_);
  for (unsigned i = 0; i < p_; ++i) out[(i + jj) % p_] = std::move(c_[i]);
  c_ = std::move(out);
  normalize();
}

void Cyclo::add_rotated(const mpq_class& r, long j) {
  long jj = ((j % static_cast<long>(p_)) + p_) % p_;
  if (jj == static_cast<long>(p_) - 1) {
    for (unsigned i = 0; i + 1 < p_; ++i) c_[i] -= r;
  } else {
    c_[jj] += r;
  }
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
  check_prime(o);
  for (unsigned i = 0; i < p_; ++i) c_[i] += o.c_[i];
  return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) {
  check_prime(o);
  for (unsigned i = 0; i < p_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Cyclo& Cyclo::operator*=(const Cyclo& o) {
  check_prime(o);
  std::vector<mpq_class> out(p_);
  for (unsigned i = 0; i + 1 < p_; ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (unsigned j = 0; j + 1 < p_; ++j) {
      if (sgn(o.c_[j]) == 0) continue;
      out[(i + j) % p_] += c_[i] * o.c_[j];
    }
  }
  c_ = std::move(out);
  normalize();
  return *this;
}

Cyclo& Cyclo::operator*=(const mpq_class& r) {
  for (auto& c : c_) c *= r;
  return *this;
}

Cyclo Cyclo::operator-() const {
  Cyclo r(*this);
  for (auto& c : r.c_) c = -c;
  return r;
}

bool Cyclo::operator==(const Cyclo& o) const { return p_ == o.p_ && c_ == o.c_; }

Cyclo Cyclo::norm2() const { return *this * conj(); }

std::complex<double> Cyclo::to_complex() const {
  std::complex<double> z = 0;
  for (unsigned i = 0; i + 1 < p_; ++i) {
    double a = 2 * std::numbers::pi * i / p_;
    z += c_[i].get_d() * std::complex<double>(std::cos(a), std::sin(a));
  }
  return z;
}

std::string Cyclo::to_string() const {
  if (is_rational()) return c_[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (unsigned i = 0; i + 1 < p_; ++i) {
    if (sgn(c_[i]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].get_str();
    if (i > 0) os << "*z^" << i;
  }
  return os.str();
}

}  // namespace linex
