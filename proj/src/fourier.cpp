#include "linex/fourier.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "json.hpp"
#include "linex/families.hpp"

namespace linex {

using nlohmann::json;

// ------------------------------------------------------------ DenseFunction

DenseFunction::DenseFunction(const Field& f, int n, int m)
    : DenseFunction(f, n, m, std::vector<Cyclo>(upow(f.q(), static_cast<unsigned>(n * m)), Cyclo(f.p()))) {}

DenseFunction::DenseFunction(const Field& f, int n, int m, std::vector<Cyclo> values)
    : f_(&f), n_(n), m_(m), v_(std::move(values)) {
  if (v_.size() != upow(f.q(), static_cast<unsigned>(n * m)))
    throw ShapeMismatch("function table must have q^{nm} entries");
  for (const auto& c : v_)
    if (c.prime() != static_cast<unsigned>(f.p())) throw FieldMismatch("value in the wrong cyclotomic field");
}

DenseFunction::DenseFunction(const Restriction& context, std::vector<Cyclo> values)
    : f_(&context.field()), n_(context.n()), m_(context.m()), ctx_(context), v_(std::move(values)) {
  if (mpz_class(static_cast<unsigned long>(v_.size())) != context.coset_cardinality())
    throw ShapeMismatch("function table must match the coset size");
  for (const auto& c : v_)
    if (c.prime() != static_cast<unsigned>(f_->p())) throw FieldMismatch("value in the wrong cyclotomic field");
}

DenseFunction DenseFunction::from_rational(const Field& f, int n, int m, const std::vector<mpq_class>& v) {
  std::vector<Cyclo> c;
  c.reserve(v.size());
  for (const auto& x : v) c.emplace_back(f.p(), x);
  return DenseFunction(f, n, m, std::move(c));
}

DenseFunction DenseFunction::indicator(const Family& fam) {
  const Field& f = fam.field();
  Cyclo one(f.p(), 1), zero(f.p());
  if (fam.context().is_empty()) {
    std::vector<Cyclo> v(upow(f.q(), static_cast<unsigned>(fam.n() * fam.m())), zero);
    for (const auto& a : fam.members()) v[a.index()] = one;
    return DenseFunction(f, fam.n(), fam.m(), std::move(v));
  }
  std::vector<Cyclo> v;
  for (const auto& a : fam.context().enumerate()) v.push_back(fam.contains(a) ? one : zero);
  return DenseFunction(fam.context(), std::move(v));
}

DenseFunction DenseFunction::character(const Mat& X, int n, int m) {
  if (X.rows() != m || X.cols() != n) throw ShapeMismatch("dual matrix must be m x n");
  const Field& f = X.field();
  std::vector<Cyclo> v;
  for_each_matrix(f, n, m, [&](const Mat& a) {
    v.push_back(Cyclo::root(f.p(), trace_pairing(X, a)));
    return true;
  });
  return DenseFunction(f, n, m, std::move(v));
}

std::vector<Mat> DenseFunction::domain() const {
  if (ctx_) return ctx_->enumerate();
  return enumerate_all(*f_, n_, m_);
}

bool DenseFunction::is_rational() const {
  return std::all_of(v_.begin(), v_.end(), [](const Cyclo& c) { return c.is_rational(); });
}

std::vector<mpq_class> DenseFunction::rational_values() const {
  std::vector<mpq_class> out;
  out.reserve(v_.size());
  for (const auto& c : v_) out.push_back(c.to_rational());
  return out;
}

bool DenseFunction::is_indicator() const {
  for (const auto& c : v_) {
    if (!c.is_rational()) return false;
    const mpq_class& x = c.coeff(0);
    if (x != 0 && x != 1) return false;
  }
  return true;
}

bool DenseFunction::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](const Cyclo& c) { return c.is_zero(); });
}

Cyclo DenseFunction::mean() const {
  Cyclo s(f_->p());
  for (const auto& c : v_) s += c;
  s *= mpq_class(1, static_cast<unsigned long>(v_.size()));
  return s;
}

void DenseFunction::check_same(const DenseFunction& o) const {
  if (!(*f_ == *o.f_) || n_ != o.n_ || m_ != o.m_ || ctx_.has_value() != o.ctx_.has_value() ||
      (ctx_ && !(*ctx_ == *o.ctx_)))
    throw ShapeMismatch("functions live on different domains");
}

Cyclo DenseFunction::inner(const DenseFunction& g) const {
  check_same(g);
  Cyclo s(f_->p());
  for (std::size_t i = 0; i < v_.size(); ++i) s += v_[i] * g.v_[i].conj();
  s *= mpq_class(1, static_cast<unsigned long>(v_.size()));
  return s;
}

mpq_class DenseFunction::norm2() const {
  if (is_rational()) {
    mpq_class s = 0;
    for (const auto& c : v_) s += c.coeff(0) * c.coeff(0);
    return s / static_cast<unsigned long>(v_.size());
  }
  return inner(*this).to_rational();
}

DenseFunction DenseFunction::to_chart() const {
  if (!ctx_) return *this;
  CosetChart ch = ctx_->chart();
  std::vector<std::uint64_t> order;
  for (const auto& a : ctx_->enumerate()) order.push_back(a.index());
  int n2 = ch.Q.cols(), m2 = ch.P.rows();
  std::vector<Cyclo> out;
  out.reserve(v_.size());
  for_each_matrix(*f_, n2, m2, [&](const Mat& y) {
    std::uint64_t idx = ch.embed(y).index();
    auto it = std::lower_bound(order.begin(), order.end(), idx);
    out.push_back(v_[static_cast<std::size_t>(it - order.begin())]);
    return true;
  });
  return DenseFunction(*f_, n2, m2, std::move(out));
}

DenseFunction DenseFunction::operator+(const DenseFunction& o) const {
  check_same(o);
  DenseFunction r(*this);
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] += o.v_[i];
  return r;
}

DenseFunction DenseFunction::operator-(const DenseFunction& o) const {
  check_same(o);
  DenseFunction r(*this);
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] -= o.v_[i];
  return r;
}

DenseFunction DenseFunction::scaled(const Cyclo& c) const {
  DenseFunction r(*this);
  for (auto& x : r.v_) x *= c;
  return r;
}

bool DenseFunction::operator==(const DenseFunction& o) const {
  return *f_ == *o.f_ && n_ == o.n_ && m_ == o.m_ && ctx_.has_value() == o.ctx_.has_value() &&
         (!ctx_ || *ctx_ == *o.ctx_) && v_ == o.v_;
}

// ----------------------------------------------------------------- Spectrum

Spectrum::Spectrum(const Field& f, int n, int m, std::vector<Cyclo> coeffs)
    : f_(&f), n_(n), m_(m), c_(std::move(coeffs)) {
  if (c_.size() != upow(f.q(), static_cast<unsigned>(n * m)))
    throw ShapeMismatch("spectrum must have q^{nm} coefficients");
}

const Cyclo& Spectrum::at(const Mat& X) const {
  if (X.rows() != m_ || X.cols() != n_) throw ShapeMismatch("dual matrix must be m x n");
  return c_[X.index()];
}

mpq_class Spectrum::parseval_sum() const {
  Cyclo s(f_->p());
  for (const auto& c : c_) s += c.norm2();
  return s.to_rational();
}

std::string Spectrum::to_json() const {
  json j = json::array();
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    json coeffs = json::array();
    for (unsigned k = 0; k + 1 < static_cast<unsigned>(f_->p()); ++k) coeffs.push_back(c_[i].coeff(k).get_str());
    j.push_back({{"X", Mat::from_index(*f_, m_, n_, i).literal()}, {"re", coeffs}});
  }
  return j.dump();
}

// ---------------------------------------------------------------- characters

int trace_pairing(const Mat& X, const Mat& A) {
  if (X.rows() != A.cols() || X.cols() != A.rows()) throw ShapeMismatch("X must be m x n for A n x m");
  if (!(X.field() == A.field())) throw FieldMismatch("character: different fields");
  const Field& f = A.field();
  Elem tr = 0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) tr = f.add(tr, f.mul(X.at(j, i), A.at(i, j)));
  return f.trace(tr);
}

Cyclo character(const Mat& X, const Mat& A) { return Cyclo::root(X.field().p(), trace_pairing(X, A)); }

namespace {

// Values as integer vectors of length p over a common denominator, in the
// unreduced basis 1, zeta, ..., zeta^{p-1}.
struct Grid {
  unsigned p;
  mpz_class den = 1;
  std::vector<mpz_class> a;  // size N * p
};

Grid to_grid(const std::vector<Cyclo>& vals, unsigned p) {
  Grid g{p};
  for (const auto& c : vals)
    for (unsigned i = 0; i + 1 < p; ++i)
      if (sgn(c.coeff(i)) != 0) mpz_lcm(g.den.get_mpz_t(), g.den.get_mpz_t(), c.coeff(i).get_den_mpz_t());
  g.a.assign(vals.size() * p, 0);
  for (std::size_t k = 0; k < vals.size(); ++k)
    for (unsigned i = 0; i + 1 < p; ++i) {
      const mpq_class& c = vals[k].coeff(i);
      if (sgn(c) != 0) g.a[k * p + i] = c.get_num() * (g.den / c.get_den());
    }
  return g;
}

Cyclo grid_value(const Grid& g, std::size_t k, const mpz_class& extra_den) {
  std::vector<mpq_class> c(g.p);
  const mpz_class& top = g.a[k * g.p + g.p - 1];
  mpz_class d = g.den * extra_den;
  for (unsigned i = 0; i < g.p; ++i) {
    c[i] = mpq_class(g.a[k * g.p + i] - top, d);
    c[i].canonicalize();
  }
  return Cyclo::from_coeffs(g.p, std::move(c));
}

// In-place transform over F_p^D: out[y] = sum_c in[c] zeta^{sign <c,y>}.
void walsh(Grid& g, int digits, int sign) {
  unsigned p = g.p;
  std::size_t N = g.a.size() / p;
  std::vector<mpz_class> tmp(p * p);
  std::size_t stride = 1;
  for (int t = 0; t < digits; ++t, stride *= p) {
    for (std::size_t base = 0; base < N; ++base) {
      if ((base / stride) % p != 0) continue;
      for (auto& x : tmp) x = 0;
      for (unsigned y = 0; y < p; ++y)
        for (unsigned c = 0; c < p; ++c) {
          long r = (static_cast<long>(sign) * c * y) % static_cast<long>(p);
          if (r < 0) r += p;
          const mpz_class* src = &g.a[(base + c * stride) * p];
          mpz_class* dst = &tmp[y * p];
          for (unsigned i = 0; i < p; ++i) dst[(i + r) % p] += src[i];
        }
      for (unsigned y = 0; y < p; ++y)
        for (unsigned i = 0; i < p; ++i) g.a[(base + y * stride) * p + i] = tmp[y * p + i];
    }
  }
}

// y(X): the F_p-coordinates dual to the digits of A's index.
std::vector<std::uint64_t> dual_code(const Field& f, int n, int m) {
  int p = f.p(), s = f.s();
  int nm = n * m;
  std::uint64_t N = upow(f.q(), static_cast<unsigned>(nm));
  std::vector<Elem> beta(s);
  for (int k = 0; k < s; ++k) {
    std::vector<int> c(s, 0);
    c[k] = 1;
    beta[k] = f.from_coeffs(c);
  }
  std::vector<std::uint64_t> pw(s * nm);
  for (int i = 0; i < s * nm; ++i) pw[i] = upow(p, i);
  std::vector<std::uint64_t> out(N);
  for (std::uint64_t x = 0; x < N; ++x) {
    Mat X = Mat::from_index(f, m, n, x);
    std::uint64_t y = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        int e = i * m + j;
        Elem xe = X.at(j, i);
        if (!xe) continue;
        for (int k = 0; k < s; ++k) y += static_cast<std::uint64_t>(f.trace(f.mul(xe, beta[k]))) * pw[s * (nm - 1 - e) + k];
      }
    out[x] = y;
  }
  return out;
}

const std::vector<std::uint64_t>& cached_dual_code(const Field& f, int n, int m) {
  static std::mutex mu;
  static std::map<std::tuple<const Field*, int, int>, std::vector<std::uint64_t>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(&f, n, m);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, dual_code(f, n, m)).first;
  return it->second;
}

void require_full(const DenseFunction& f, const char* what) {
  if (f.context()) throw DomainError(std::string(what) + " needs a full-space function; use to_chart()");
}

}  // namespace

Spectrum transform(const DenseFunction& fn, const Budget& budget) {
  require_full(fn, "transform");
  const Field& f = fn.field();
  int n = fn.n(), m = fn.m(), nm = n * m;
  unsigned p = static_cast<unsigned>(f.p());
  std::uint64_t N = fn.size();
  budget.require_dense(static_cast<long double>(N), "transform table");
  budget.require_items(static_cast<long double>(N) * N, "naive transform");
  Grid g = to_grid(fn.values(), p);
  std::vector<int> tau(f.q() * f.q());
  for (int x = 0; x < f.q(); ++x)
    for (int a = 0; a < f.q(); ++a) tau[x * f.q() + a] = f.trace(f.mul(static_cast<Elem>(x), static_cast<Elem>(a)));
  std::vector<Elem> As(N * nm), Xs(N * nm);
  for (std::uint64_t k = 0; k < N; ++k) {
    Mat A = Mat::from_index(f, n, m, k);
    Mat X = Mat::from_index(f, m, n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        As[k * nm + i * m + j] = A.at(i, j);
        Xs[k * nm + i * m + j] = X.at(j, i);
      }
  }
  mpz_class scale = zpow(f.q(), nm);
  std::vector<Cyclo> out;
  out.reserve(N);
  std::vector<mpz_class> bins(p);
  Grid acc{p, g.den, std::vector<mpz_class>(p)};
  for (std::uint64_t x = 0; x < N; ++x) {
    if ((x & 0xff) == 0) budget.check_deadline("naive transform");
    for (auto& b : acc.a) b = 0;
    const Elem* xe = &Xs[x * nm];
    for (std::uint64_t k = 0; k < N; ++k) {
      const Elem* ae = &As[k * nm];
      int t = 0;
      for (int e = 0; e < nm; ++e) t += tau[xe[e] * f.q() + ae[e]];
      unsigned shift = static_cast<unsigned>((p - t % p) % p);  // conj: zeta^{-t}
      const mpz_class* src = &g.a[k * p];
      for (unsigned i = 0; i < p; ++i)
        if (sgn(src[i]) != 0) acc.a[(i + shift) % p] += src[i];
    }
    out.push_back(grid_value(acc, 0, scale));
  }
  return Spectrum(f, n, m, std::move(out));
}

Spectrum fast_transform(const DenseFunction& fn, const Budget& budget) {
  require_full(fn, "fast_transform");
  const Field& f = fn.field();
  int n = fn.n(), m = fn.m();
  budget.require_dense(static_cast<long double>(fn.size()), "transform table");
  Grid g = to_grid(fn.values(), static_cast<unsigned>(f.p()));
  walsh(g, f.s() * n * m, -1);
  const auto& code = cached_dual_code(f, n, m);
  mpz_class scale = zpow(f.q(), n * m);
  std::vector<Cyclo> out;
  out.reserve(fn.size());
  for (std::uint64_t x = 0; x < fn.size(); ++x) out.push_back(grid_value(g, code[x], scale));
  return Spectrum(f, n, m, std::move(out));
}

DenseFunction inverse_transform(const Spectrum& s, const Budget& budget) {
  const Field& f = s.field();
  int n = s.n(), m = s.m();
  budget.require_dense(static_cast<long double>(s.coeffs().size()), "transform table");
  const auto& code = cached_dual_code(f, n, m);
  std::vector<Cyclo> perm(s.coeffs().size(), Cyclo(f.p()));
  for (std::size_t x = 0; x < perm.size(); ++x) perm[code[x]] = s.coeffs()[x];
  Grid g = to_grid(perm, static_cast<unsigned>(f.p()));
  walsh(g, f.s() * n * m, +1);
  std::vector<Cyclo> out;
  out.reserve(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out.push_back(grid_value(g, k, 1));
  return DenseFunction(f, n, m, std::move(out));
}

std::vector<int> dual_ranks(const Field& f, int n, int m) {
  static std::mutex mu;
  static std::map<std::tuple<const Field*, int, int>, std::vector<int>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(&f, n, m);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::vector<int> r;
  for_each_matrix(f, m, n, [&](const Mat& X) {
    r.push_back(rank(X));
    return true;
  });
  cache.emplace(key, r);
  return r;
}

namespace {

DenseFunction keep_coeffs(const DenseFunction& fn, const std::function<bool(std::uint64_t)>& keep) {
  Spectrum s = fast_transform(fn);
  std::vector<Cyclo> c = s.coeffs();
  for (std::size_t x = 0; x < c.size(); ++x)
    if (!keep(x)) c[x] = Cyclo(fn.field().p());
  return inverse_transform(Spectrum(fn.field(), fn.n(), fn.m(), std::move(c)));
}

}  // namespace

DenseFunction rank_component(const DenseFunction& fn, int d) {
  require_full(fn, "rank_component");
  if (d < 0 || d > std::min(fn.n(), fn.m())) throw DomainError("rank component out of range");
  auto ranks = dual_ranks(fn.field(), fn.n(), fn.m());
  return keep_coeffs(fn, [&](std::uint64_t x) { return ranks[x] == d; });
}

int degree(const DenseFunction& fn) {
  require_full(fn, "degree");
  if (fn.is_zero()) throw ZeroFunction("degree of the zero function");
  Spectrum s = fast_transform(fn);
  auto ranks = dual_ranks(fn.field(), fn.n(), fn.m());
  int d = 0;
  for (std::size_t x = 0; x < ranks.size(); ++x)
    if (!s.coeffs()[x].is_zero()) d = std::max(d, ranks[x]);
  return d;
}

DenseFunction project_image(const DenseFunction& fn, const Subspace& Vp) {
  require_full(fn, "project_image");
  if (Vp.ambient() != fn.m() || !(Vp.field() == fn.field())) throw DomainError("V' must be a subspace of F^m");
  int n = fn.n(), m = fn.m();
  return keep_coeffs(fn, [&](std::uint64_t x) { return image(Mat::from_index(fn.field(), m, n, x)) == Vp; });
}

DenseFunction project_kernel(const DenseFunction& fn, const Subspace& Wp) {
  require_full(fn, "project_kernel");
  if (Wp.ambient() != fn.n() || !(Wp.field() == fn.field())) throw DomainError("W' must be a subspace of F^n");
  int n = fn.n(), m = fn.m();
  return keep_coeffs(fn, [&](std::uint64_t x) { return kernel(Mat::from_index(fn.field(), m, n, x)) == Wp; });
}

ProjectionNorms projection_norms(const Spectrum& s, int d) {
  const Field& f = s.field();
  auto ranks = dual_ranks(f, s.n(), s.m());
  std::map<std::vector<std::uint64_t>, Cyclo> im, ker;
  for (const auto& V : all_subspaces(f, s.m(), d)) im.emplace(V.key(), Cyclo(f.p()));
  if (d <= s.n())
    for (const auto& W : all_subspaces(f, s.n(), s.n() - d)) ker.emplace(W.key(), Cyclo(f.p()));
  for (std::size_t x = 0; x < ranks.size(); ++x) {
    if (ranks[x] != d || s.coeffs()[x].is_zero()) continue;
    Mat X = Mat::from_index(f, s.m(), s.n(), x);
    Cyclo w = s.coeffs()[x].norm2();
    im.at(image(X).key()) += w;
    ker.at(kernel(X).key()) += w;
  }
  ProjectionNorms out;
  for (auto& [k, v] : im) out.image.emplace_back(k, v.to_rational());
  for (auto& [k, v] : ker) out.kernel.emplace_back(k, v.to_rational());
  return out;
}

// ----------------------------------------------------------- hypercontractive

namespace {

mpq_class kth_moment(const DenseFunction& g, int k) {
  if (g.is_rational()) {
    mpq_class s = 0;
    for (const auto& c : g.values()) {
      mpq_class a = abs(c.coeff(0));
      s += qpow(a, static_cast<unsigned long>(k));
    }
    return s / static_cast<unsigned long>(g.size());
  }
  Cyclo s(g.field().p());
  for (const auto& c : g.values()) {
    Cyclo a = c.norm2(), pw(g.field().p(), 1);
    for (int i = 0; i < k / 2; ++i) pw *= a;
    s += pw;
  }
  return s.to_rational() / static_cast<unsigned long>(g.size());
}

// q^{k^3 d^2 / 2} q^{(3k-4) d max(m,n) / 4} k^7 d^6
Surd hyper_prefactor(long q, int m, int n, int d, int k) {
  mpz_class c = zpow(k, 7) * zpow(d, 6) * zpow(q, static_cast<unsigned long>(k) * k * k * d * d / 2);
  return Surd(mpq_class(c)) * Surd::power(mpq_class(q), static_cast<long>(3 * k - 4) * d * std::max(m, n), 4);
}

void check_k_d(const DenseFunction& f, int d, int k) {
  if (k < 4 || k % 2) throw DomainError("k must be an even integer >= 4");
  if (d < 1 || d > std::min(f.n(), f.m())) throw DomainError("d must lie in [1, min(m,n)]");
}

}  // namespace

std::string HypercontractiveReport::to_json() const {
  json j;
  j["d"] = d;
  j["k"] = k;
  j["lhs"] = lhs.get_str();
  j["proj_sum"] = proj_sum.get_str();
  j["rhs"] = rhs.to_string();
  j["holds"] = holds;
  return j.dump();
}

HypercontractiveReport verify_hypercontractive(const DenseFunction& f, int d, int k) {
  require_full(f, "verify_hypercontractive");
  check_k_d(f, d, k);
  HypercontractiveReport rep;
  rep.d = d;
  rep.k = k;
  Spectrum s = fast_transform(f);
  auto ranks = dual_ranks(f.field(), f.n(), f.m());
  std::vector<Cyclo> c = s.coeffs();
  for (std::size_t x = 0; x < c.size(); ++x)
    if (ranks[x] != d) c[x] = Cyclo(f.field().p());
  Spectrum sd(f.field(), f.n(), f.m(), c);
  DenseFunction g = inverse_transform(sd);
  rep.lhs = kth_moment(g, k);
  ProjectionNorms pn = projection_norms(sd, d);
  rep.proj_sum = 0;
  for (const auto& [key, v] : pn.image) rep.proj_sum += qpow(v, static_cast<unsigned long>(k / 2));
  for (const auto& [key, v] : pn.kernel) rep.proj_sum += qpow(v, static_cast<unsigned long>(k / 2));
  rep.rhs = Surd(rep.proj_sum) * hyper_prefactor(f.field().q(), f.m(), f.n(), d, k);
  rep.holds = Surd(rep.lhs) <= rep.rhs;
  return rep;
}

std::string SumRankNullityReport::to_json() const {
  json j;
  j["r"] = r;
  j["image_dim"] = image_dim;
  j["kernel_codim"] = kernel_codim;
  j["holds"] = holds;
  return j.dump();
}

SumRankNullityReport check_sum_rank_nullity(const std::vector<Elem>& lambdas, const std::vector<Mat>& Xs) {
  if (lambdas.size() != Xs.size()) throw ShapeMismatch("one coefficient per matrix");
  SumRankNullityReport rep;
  rep.r = static_cast<int>(Xs.size());
  if (Xs.empty()) {
    rep.holds = true;
    return rep;
  }
  const Field& f = Xs[0].field();
  int rows = Xs[0].rows(), cols = Xs[0].cols();
  Mat sum(f, rows, cols);
  for (std::size_t i = 0; i < Xs.size(); ++i) {
    if (!(Xs[i].field() == f) || Xs[i].rows() != rows || Xs[i].cols() != cols)
      throw ShapeMismatch("matrices must share shape and field");
    if (lambdas[i] == 0 || lambdas[i] >= f.q()) throw DomainError("coefficients must be nonzero field elements");
    if (rank(Xs[i]) != 1) throw RankNotOne("matrix " + std::to_string(i) + " does not have rank 1");
    sum = sum + Xs[i].scaled(lambdas[i]);
  }
  if (rank(sum) != 0) throw NotInKernelRelation("sum lambda_i X_i is not zero");
  std::vector<Vec> colv, rowv;
  for (const auto& X : Xs) {
    for (int j = 0; j < cols; ++j) colv.push_back(X.col(j));
    for (int i = 0; i < rows; ++i) rowv.push_back(X.row(i));
  }
  rep.image_dim = Subspace::span(f, rows, colv).dim();
  rep.kernel_codim = Subspace::span(f, cols, rowv).dim();
  rep.holds = rep.image_dim + rep.kernel_codim <= rep.r;
  return rep;
}

// ------------------------------------------------------- quasiregular chain

namespace {

void require_quasiregular(const DenseFunction& f, int s, const mpq_class& C) {
  auto vals = f.rational_values();
  std::vector<Mat> support;
  std::vector<mpq_class> w;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0) throw DomainError("function must be nonnegative");
    if (vals[i] != 0) {
      support.push_back(Mat::from_index(f.field(), f.n(), f.m(), i));
      w.push_back(vals[i]);
    }
  }
  if (function_quasiregular_witness(Restriction(f.field(), f.n(), f.m()), support, w, s, C))
    throw NotQuasiregular("function is not (s, C)-quasiregular");
}

}  // namespace

std::string ProjectionLemmaReport::to_json() const {
  json j;
  j["s"] = s;
  j["C"] = C.get_str();
  j["mean"] = mean.get_str();
  j["max_norm"] = max_norm.get_str();
  j["checked"] = checked;
  j["holds"] = holds;
  return j.dump();
}

ProjectionLemmaReport projection_norm_lemma_check(const DenseFunction& f, int s, const mpq_class& C) {
  require_full(f, "projection_norm_lemma_check");
  if (C < 1) throw DomainError("C must be at least 1");
  if (s < 0) throw DomainError("s must be nonnegative");
  require_quasiregular(f, s, C);
  ProjectionLemmaReport rep;
  rep.s = s;
  rep.C = C;
  rep.mean = f.mean().to_rational();
  rep.max_norm = 0;
  mpq_class cap = C * C * rep.mean * rep.mean;
  Spectrum sp = fast_transform(f);
  rep.holds = true;
  for (int d = 0; d <= std::min({s, f.m(), f.n()}); ++d) {
    ProjectionNorms pn = projection_norms(sp, d);
    for (const auto* side : {&pn.image, &pn.kernel})
      for (const auto& [key, v] : *side) {
        ++rep.checked;
        if (v > rep.max_norm) rep.max_norm = v;
        if (v > cap) rep.holds = false;
      }
  }
  return rep;
}

std::string LevelDReport::to_json() const {
  json j;
  j["d"] = d;
  j["k"] = k;
  j["s"] = s;
  j["C"] = C.get_str();
  j["mean"] = mean.get_str();
  j["level"] = level.get_str();
  j["level_pow"] = level_pow.get_str();
  j["moment"] = moment.get_str();
  j["hyper_rhs"] = hyper_rhs.to_string();
  j["constant_k"] = constant_k.to_string();
  j["final_rhs"] = final_rhs.to_string();
  j["holder_ok"] = holder_ok;
  j["hyper_ok"] = hyper_ok;
  j["lemma_ok"] = lemma_ok;
  j["holds"] = holds;
  return j.dump();
}

LevelDReport level_d_bound_check(const DenseFunction& f, int d, int k, int s, const mpq_class& C) {
  require_full(f, "level_d_bound_check");
  if (!f.is_indicator()) throw NotIndicator("level-d bound needs a 0/1-valued function");
  check_k_d(f, d, k);
  if (d > s) throw DomainError("need d <= s");
  if (C < 1) throw DomainError("C must be at least 1");
  require_quasiregular(f, s, C);
  LevelDReport rep;
  rep.d = d;
  rep.k = k;
  rep.s = s;
  rep.C = C;
  rep.mean = f.mean().to_rational();
  auto ku = static_cast<unsigned long>(k);

  Spectrum sp = fast_transform(f);
  auto ranks = dual_ranks(f.field(), f.n(), f.m());
  std::vector<Cyclo> c = sp.coeffs();
  for (std::size_t x = 0; x < c.size(); ++x)
    if (ranks[x] != d) c[x] = Cyclo(f.field().p());
  Spectrum sd(f.field(), f.n(), f.m(), c);
  DenseFunction g = inverse_transform(sd);
  rep.level = g.norm2();
  rep.level_pow = qpow(rep.level, ku);
  rep.moment = kth_moment(g, k);
  rep.holder_ok = rep.level_pow <= qpow(rep.mean, ku - 1) * rep.moment;

  ProjectionNorms pn = projection_norms(sd, d);
  mpq_class proj_sum = 0;
  mpq_class cap = C * C * rep.mean * rep.mean;
  rep.lemma_ok = true;
  for (const auto* side : {&pn.image, &pn.kernel})
    for (const auto& [key, v] : *side) {
      proj_sum += qpow(v, ku / 2);
      if (v > cap) rep.lemma_ok = false;
    }
  long q = f.field().q();
  Surd pre = hyper_prefactor(q, f.m(), f.n(), d, k);
  rep.hyper_rhs = Surd(proj_sum) * pre;
  rep.hyper_ok = Surd(rep.moment) <= rep.hyper_rhs;
  mpz_class subspaces = gaussian_binomial(f.m(), d, q) + gaussian_binomial(f.n(), d, q);
  rep.constant_k = Surd(mpq_class(subspaces)) * pre;
  rep.final_rhs = rep.constant_k * Surd(qpow(C, ku) * qpow(rep.mean, 2 * ku - 1));
  rep.holds = rep.holder_ok && rep.hyper_ok && rep.lemma_ok && Surd(rep.level_pow) <= rep.final_rhs;
  return rep;
}

}  // namespace linex
