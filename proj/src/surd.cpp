#include "linex/surd.hpp"

#include <cmath>
#include <numeric>

#include "linex/errors.hpp"

namespace linex {

mpq_class qpow(const mpq_class& x, unsigned long e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), x.get_den_mpz_t(), e);
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

mpz_class zpow(long base, unsigned long e) {
  mpz_class r;
  mpz_class b(base);
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

namespace {

// Exact integer k-th root of a nonnegative integer, if there is one.
bool exact_root(const mpz_class& x, unsigned long k, mpz_class& out) {
  return mpz_root(out.get_mpz_t(), x.get_mpz_t(), k) != 0;
}

}  // namespace

Surd::Surd(const mpq_class& r) : rad_(r), idx_(1) {
  if (sgn(rad_) < 0) throw DomainError("Surd: negative value");
}

Surd::Surd(const mpq_class& radicand, unsigned long index) : rad_(radicand), idx_(index) {
  if (index == 0) throw DomainError("Surd: zero root index");
  if (sgn(rad_) < 0) throw DomainError("Surd: negative radicand");
  reduce();
}

Surd Surd::power(const mpq_class& base, long num, unsigned long den) {
  if (sgn(base) <= 0) throw DomainError("Surd::power: base must be positive");
  mpq_class b = num >= 0 ? base : mpq_class(1) / base;
  unsigned long e = static_cast<unsigned long>(num >= 0 ? num : -num);
  unsigned long g = std::gcd(e, den);
  if (g > 1) {
    e /= g;
    den /= g;
  }
  return Surd(qpow(b, e), den);
}

// Pull out the largest perfect power so equal values share a representation.
void Surd::reduce() {
  if (sgn(rad_) == 0) {
    idx_ = 1;
    return;
  }
  for (unsigned long k = idx_; k > 1; --k) {
    if (idx_ % k) continue;
    mpz_class n, d;
    if (exact_root(rad_.get_num(), k, n) && exact_root(rad_.get_den(), k, d)) {
      rad_ = mpq_class(n, d);
      rad_.canonicalize();
      idx_ /= k;
      reduce();
      return;
    }
  }
}

bool Surd::is_rational() const { return idx_ == 1; }

mpq_class Surd::to_rational() const {
  if (idx_ != 1) throw NotRational("surd is irrational: " + to_string());
  return rad_;
}

Surd Surd::operator*(const Surd& o) const {
  unsigned long l = std::lcm(idx_, o.idx_);
  return Surd(qpow(rad_, l / idx_) * qpow(o.rad_, l / o.idx_), l);
}

std::strong_ordering operator<=>(const Surd& a, const Surd& b) {
  unsigned long l = std::lcm(a.idx_, b.idx_);
  mpq_class x = qpow(a.rad_, l / a.idx_);
  mpq_class y = qpow(b.rad_, l / b.idx_);
  int c = cmp(x, y);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

double Surd::to_double() const {
  return std::pow(rad_.get_d(), 1.0 / static_cast<double>(idx_));
}

std::string Surd::to_string() const {
  if (idx_ == 1) return rad_.get_str();
  return "(" + rad_.get_str() + ")^(1/" + std::to_string(idx_) + ")";
}

}  // namespace linex
