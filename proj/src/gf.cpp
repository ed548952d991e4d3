#include "linex/gf.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "json.hpp"

#include "linex/errors.hpp"

namespace linex {

long FieldSpec::q() const {
  long r = 1;
  for (int i = 0; i < s; ++i) r *= p;
  return r;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

using Poly = std::vector<int>;  // constant term first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  throw DivisionByZero("inverse of zero mod p");
}

// Remainder of a modulo b over F_p, b nonzero.
Poly poly_mod(Poly a, const Poly& b, int p) {
  trim(a);
  int db = static_cast<int>(b.size()) - 1;
  int lead_inv = inv_mod(b.back(), p);
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    int shift = static_cast<int>(a.size()) - 1 - db;
    int f = a.back() * lead_inv % p;
    for (int i = 0; i <= db; ++i) a[shift + i] = ((a[shift + i] - f * b[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

std::vector<int> digits(long code, int p, int len) {
  std::vector<int> d(len);
  for (int i = 0; i < len; ++i) {
    d[i] = static_cast<int>(code % p);
    code /= p;
  }
  return d;
}

// Smallest monic degree-s irreducible polynomial, in base-p encoding order of
// the non-leading coefficients.
Poly smallest_irreducible(int p, int s) {
  long count = 1;
  for (int i = 0; i < s; ++i) count *= p;
  for (long code = 0; code < count; ++code) {
    Poly f = digits(code, p, s);
    f.push_back(1);
    if (is_irreducible_mod_p(f, p)) return f;
  }
  throw DomainError("no irreducible polynomial found");
}

int smallest_primitive_root(int p) {
  if (p == 2) return 1;
  for (int g = 2; g < p; ++g) {
    int x = 1;
    int order = 0;
    do {
      x = x * g % p;
      ++order;
    } while (x != 1);
    if (order == p - 1) return g;
  }
  throw DomainError("no primitive root");
}

}  // namespace

bool is_irreducible_mod_p(std::span<const int> poly_in, int p) {
  Poly f(poly_in.begin(), poly_in.end());
  for (auto& c : f) c = ((c % p) + p) % p;
  trim(f);
  int deg = static_cast<int>(f.size()) - 1;
  if (deg < 1) return false;
  for (int d = 1; d <= deg / 2; ++d) {
    long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long code = 0; code < count; ++code) {
      Poly g = digits(code, p, d);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

FieldSpec default_field_spec(long q) {
  if (q < 2 || q > 4096) throw DomainError("field size out of range: " + std::to_string(q));
  int p = 0, s = 0;
  for (int cand = 2; cand <= q; ++cand) {
    if (q % cand == 0) {
      p = cand;
      break;
    }
  }
  long r = q;
  while (r % p == 0) {
    r /= p;
    ++s;
  }
  if (r != 1 || !is_prime(p)) throw DomainError("not a prime power: " + std::to_string(q));
  static const std::map<long, Poly> conway = {
      {4, {1, 1, 1}},          {8, {1, 1, 0, 1}},        {16, {1, 1, 0, 0, 1}},
      {32, {1, 0, 1, 0, 0, 1}}, {64, {1, 1, 0, 1, 1, 0, 1}}, {9, {2, 2, 1}},
      {27, {1, 2, 0, 1}},       {25, {2, 4, 1}},          {49, {3, 6, 1}},
  };
  FieldSpec spec;
  spec.p = p;
  spec.s = s;
  if (s == 1) {
    spec.modulus = {(p - smallest_primitive_root(p)) % p, 1};
  } else if (auto it = conway.find(q); it != conway.end()) {
    spec.modulus = it->second;
  } else {
    spec.modulus = smallest_irreducible(p, s);
  }
  return spec;
}

const Field& Field::get(long q) { return get(default_field_spec(q)); }

const Field& Field::get(const FieldSpec& spec) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, std::vector<int>>, std::unique_ptr<Field>> registry;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(spec.p, spec.s, spec.modulus);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  auto f = std::unique_ptr<Field>(new Field(spec));
  auto& ref = *f;
  registry.emplace(key, std::move(f));
  return ref;
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  const int p = spec_.p;
  const int s = spec_.s;
  if (!is_prime(p)) throw DomainError("characteristic is not prime");
  if (s < 1) throw DomainError("field exponent must be positive");
  if (static_cast<int>(spec_.modulus.size()) != s + 1 || spec_.modulus.back() != 1)
    throw DomainError("modulus must be monic of degree s");
  for (int c : spec_.modulus)
    if (c < 0 || c >= p) throw DomainError("modulus coefficients must lie in [0, p)");
  if (!is_irreducible_mod_p(spec_.modulus, p)) throw DomainError("modulus is reducible");
  long q = spec_.q();
  if (q > 4096) throw DomainError("field too large");
  q_ = static_cast<int>(q);
  p2_ = p == 2;

  neg_table_.resize(q_);
  for (int a = 0; a < q_; ++a) {
    auto d = digits(a, p, s);
    for (auto& c : d) c = (p - c) % p;
    neg_table_[a] = from_coeffs(d);
  }
  if (!p2_ && q_ <= 256) {
    add_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b) add_table_[static_cast<std::size_t>(a) * q_ + b] = add_slow(a, b);
  }

  // Schoolbook product modulo the modulus, used only while building tables.
  auto slow_mul = [&](Elem a, Elem b) {
    auto x = digits(a, p, s);
    auto y = digits(b, p, s);
    Poly prod(2 * s, 0);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
    Poly r = poly_mod(prod, spec_.modulus, p);
    r.resize(s, 0);
    return from_coeffs(r);
  };

  log_.assign(q_, -1);
  exp_.assign(q_ - 1, 0);
  bool found = false;
  for (int g = 1; g < q_ && !found; ++g) {
    Elem x = 1;
    int k = 0;
    std::vector<int> lg(q_, -1);
    bool ok = true;
    while (true) {
      if (lg[x] != -1) {
        ok = false;
        break;
      }
      lg[x] = k;
      exp_[k] = x;
      ++k;
      x = slow_mul(x, static_cast<Elem>(g));
      if (x == 1) break;
      if (k >= q_ - 1) {
        ok = false;
        break;
      }
    }
    if (ok && k == q_ - 1) {
      log_ = std::move(lg);
      found = true;
    }
  }
  if (!found) throw DomainError("no multiplicative generator found");

  trace_.resize(q_);
  for (int a = 0; a < q_; ++a) {
    Elem t = 0;
    Elem y = static_cast<Elem>(a);
    for (int k = 0; k < s; ++k) {
      t = add(t, y);
      y = pow(y, static_cast<std::uint64_t>(p));
    }
    if (t >= p) throw DomainError("internal: trace escaped the prime field");
    trace_[a] = t;
  }
}

Elem Field::add_slow(Elem a, Elem b) const {
  int p = spec_.p;
  Elem r = 0;
  Elem place = 1;
  for (int i = 0; i < spec_.s; ++i) {
    r = static_cast<Elem>(r + ((a % p + b % p) % p) * place);
    a = static_cast<Elem>(a / p);
    b = static_cast<Elem>(b / p);
    place = static_cast<Elem>(place * p);
  }
  return r;
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw DivisionByZero("inverse of zero");
  int e = log_[a];
  return exp_[e == 0 ? 0 : q_ - 1 - e];
}

Elem Field::div(Elem a, Elem b) const { return mul(a, inv(b)); }

Elem Field::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  std::uint64_t k = (static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
  return exp_[k];
}

Elem Field::from_int(long k) const {
  long r = ((k % spec_.p) + spec_.p) % spec_.p;
  return static_cast<Elem>(r);
}

std::vector<int> Field::coeffs(Elem a) const { return digits(a, spec_.p, spec_.s); }

Elem Field::from_coeffs(std::span<const int> c) const {
  if (static_cast<int>(c.size()) > spec_.s) throw DomainError("too many coefficients");
  long r = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    int v = ((c[i] % spec_.p) + spec_.p) % spec_.p;
    r = r * spec_.p + v;
  }
  return static_cast<Elem>(r);
}

Fq::Fq(const Field& field, Elem value) : field_(&field), value_(value) {
  if (value >= field.q()) throw DomainError("element code out of range");
}

Fq Fq::from_coeffs(const Field& field, std::span<const int> coeffs) {
  return Fq(field, field.from_coeffs(coeffs));
}

namespace {
void same_field(const Fq& a, const Fq& b) {
  if (!(a.field() == b.field())) throw FieldMismatch("elements from different fields");
}
}  // namespace

Fq Fq::operator+(const Fq& o) const {
  same_field(*this, o);
  return Fq(*field_, field_->add(value_, o.value_));
}
Fq Fq::operator-(const Fq& o) const {
  same_field(*this, o);
  return Fq(*field_, field_->sub(value_, o.value_));
}
Fq Fq::operator*(const Fq& o) const {
  same_field(*this, o);
  return Fq(*field_, field_->mul(value_, o.value_));
}
Fq Fq::operator/(const Fq& o) const {
  same_field(*this, o);
  return Fq(*field_, field_->div(value_, o.value_));
}
Fq Fq::inverse() const { return Fq(*field_, field_->inv(value_)); }

Fq fq_arith(const Fq& a, const Fq& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
  }
  throw DomainError("unknown arithmetic op");
}

int trace_map(const Fq& x) { return x.field().trace(x.value()); }

Cyclo char_root(int p, int j) {
  if (j < 0 || j >= p) throw DomainError("char_root: exponent outside [0, p)");
  return Cyclo::root(static_cast<unsigned>(p), j);
}

std::string to_json(const FieldSpec& spec) {
  nlohmann::json j = {{"p", spec.p}, {"s", spec.s}, {"modulus", spec.modulus}};
  return j.dump();
}

FieldSpec field_spec_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    FieldSpec spec;
    spec.p = j.at("p").get<int>();
    spec.s = j.at("s").get<int>();
    spec.modulus = j.at("modulus").get<std::vector<int>>();
    Field::get(spec);  // validates
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("FieldSpec JSON: ") + e.what());
  }
}

}  // namespace linex
