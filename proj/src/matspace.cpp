#include "linex/matspace.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "linex/errors.hpp"

namespace linex {

std::uint64_t upow(std::uint64_t q, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / q) throw DomainError("q^e does not fit in 63 bits");
    r *= q;
  }
  return r;
}

std::uint64_t vec_index(const Field& f, const Vec& v) {
  std::uint64_t r = 0;
  for (Elem x : v) r = r * f.q() + x;
  return r;
}

Vec vec_from_index(const Field& f, int len, std::uint64_t idx) {
  Vec v(len);
  for (int i = len - 1; i >= 0; --i) {
    v[i] = static_cast<Elem>(idx % f.q());
    idx /= f.q();
  }
  return v;
}

Elem dot(const Field& f, const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ShapeMismatch("dot: length mismatch");
  Elem s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = f.add(s, f.mul(a[i], b[i]));
  return s;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; });
}

// ---------------------------------------------------------------- Mat

Mat::Mat(const Field& f, int rows, int cols) : f_(&f), n_(rows), m_(cols) {
  if (rows < 0 || cols < 0) throw ShapeMismatch("negative matrix dimension");
  e_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

Mat Mat::identity(const Field& f, int n) {
  Mat a(f, n, n);
  for (int i = 0; i < n; ++i) a.set(i, i, 1);
  return a;
}

Mat Mat::from_index(const Field& f, int rows, int cols, std::uint64_t idx) {
  Mat a(f, rows, cols);
  for (std::size_t k = a.e_.size(); k-- > 0;) {
    a.e_[k] = static_cast<Elem>(idx % f.q());
    idx /= f.q();
  }
  return a;
}

Mat Mat::from_rows(const Field& f, const std::vector<Vec>& rows, int cols) {
  Mat a(f, static_cast<int>(rows.size()), cols);
  for (int i = 0; i < a.n_; ++i) {
    if (static_cast<int>(rows[i].size()) != cols) throw ShapeMismatch("from_rows: ragged rows");
    for (int j = 0; j < cols; ++j) a.set(i, j, rows[i][j]);
  }
  return a;
}

Mat Mat::from_ints(const Field& f, const std::vector<std::vector<int>>& rows) {
  int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  Mat a(f, static_cast<int>(rows.size()), cols);
  for (int i = 0; i < a.n_; ++i) {
    if (static_cast<int>(rows[i].size()) != cols) throw ShapeMismatch("from_ints: ragged rows");
    for (int j = 0; j < cols; ++j) {
      if (rows[i][j] < 0 || rows[i][j] >= f.q()) throw DomainError("entry code out of range");
      a.set(i, j, static_cast<Elem>(rows[i][j]));
    }
  }
  return a;
}

std::uint64_t Mat::index() const {
  std::uint64_t r = 0;
  for (Elem x : e_) r = r * f_->q() + x;
  return r;
}

Vec Mat::row(int i) const { return Vec(e_.begin() + static_cast<long>(i) * m_, e_.begin() + static_cast<long>(i + 1) * m_); }

Vec Mat::col(int j) const {
  Vec c(n_);
  for (int i = 0; i < n_; ++i) c[i] = at(i, j);
  return c;
}

Vec Mat::apply(const Vec& v) const {
  if (static_cast<int>(v.size()) != m_) throw ShapeMismatch("apply: vector length");
  Vec r(n_, 0);
  for (int i = 0; i < n_; ++i) {
    Elem s = 0;
    for (int j = 0; j < m_; ++j) s = f_->add(s, f_->mul(at(i, j), v[j]));
    r[i] = s;
  }
  return r;
}

Vec Mat::apply_left(const Vec& a) const {
  if (static_cast<int>(a.size()) != n_) throw ShapeMismatch("apply_left: vector length");
  Vec r(m_, 0);
  for (int i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < m_; ++j) r[j] = f_->add(r[j], f_->mul(a[i], at(i, j)));
  }
  return r;
}

Mat Mat::transpose() const {
  Mat t(*f_, m_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < m_; ++j) t.set(j, i, at(i, j));
  return t;
}

void Mat::check_same(const Mat& o) const {
  if (!(*f_ == *o.f_)) throw FieldMismatch("matrices over different fields");
  if (n_ != o.n_ || m_ != o.m_) throw ShapeMismatch("matrix shapes differ");
}

Mat Mat::operator+(const Mat& o) const {
  check_same(o);
  Mat r(*this);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = f_->add(e_[k], o.e_[k]);
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  check_same(o);
  Mat r(*this);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = f_->sub(e_[k], o.e_[k]);
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  if (!(*f_ == *o.f_)) throw FieldMismatch("matrices over different fields");
  if (m_ != o.n_) throw ShapeMismatch("product: inner dimensions differ");
  Mat r(*f_, n_, o.m_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < m_; ++k) {
      Elem a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.m_; ++j) r.set(i, j, f_->add(r.at(i, j), f_->mul(a, o.at(k, j))));
    }
  return r;
}

Mat Mat::scaled(Elem c) const {
  Mat r(*this);
  for (auto& x : r.e_) x = f_->mul(x, c);
  return r;
}

Mat Mat::block(int r0, int c0, int nr, int nc) const {
  if (r0 < 0 || c0 < 0 || nr < 0 || nc < 0 || r0 + nr > n_ || c0 + nc > m_)
    throw ShapeMismatch("block out of range");
  Mat b(*f_, nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b.set(i, j, at(r0 + i, c0 + j));
  return b;
}

bool Mat::operator==(const Mat& o) const {
  return *f_ == *o.f_ && n_ == o.n_ && m_ == o.m_ && e_ == o.e_;
}

std::string Mat::literal() const {
  std::ostringstream os;
  os << "q=" << f_->q() << ";n=" << n_ << ";m=" << m_ << ";rows=";
  for (int i = 0; i < n_; ++i) {
    if (i) os << ';';
    for (int j = 0; j < m_; ++j) {
      if (j) os << ',';
      os << at(i, j);
    }
  }
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t' && c != '\r' && c != '\n') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("matrix literal: bad integer for " + what + ": '" + s + "'");
  }
}

}  // namespace

Mat parse_literal(const std::string& text) {
  auto parts = split(text, ';');
  if (parts.size() < 4) throw ParseError("matrix literal: expected q=..;n=..;m=..;rows=..");
  auto kv = [&](const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0) throw ParseError("matrix literal: expected " + key + "=");
    return tok.substr(key.size() + 1);
  };
  long q = parse_int(kv(parts[0], "q"), "q");
  long n = parse_int(kv(parts[1], "n"), "n");
  long m = parse_int(kv(parts[2], "m"), "m");
  std::vector<std::string> rows;
  rows.push_back(kv(parts[3], "rows"));
  for (std::size_t i = 4; i < parts.size(); ++i) rows.push_back(parts[i]);
  const Field* f;
  try {
    f = &Field::get(q);
  } catch (const DomainError& e) {
    throw ParseError(std::string("matrix literal: ") + e.what());
  }
  if (n < 0 || m < 0) throw ParseError("matrix literal: negative shape");
  if (n == 0 || m == 0) {
    return Mat(*f, static_cast<int>(n), static_cast<int>(m));
  }
  if (static_cast<long>(rows.size()) != n) throw ParseError("matrix literal: row count != n");
  Mat a(*f, static_cast<int>(n), static_cast<int>(m));
  for (long i = 0; i < n; ++i) {
    auto cells = split(rows[i], ',');
    if (static_cast<long>(cells.size()) != m) throw ParseError("matrix literal: column count != m");
    for (long j = 0; j < m; ++j) {
      long v = parse_int(cells[j], "entry");
      if (v < 0 || v >= q) throw ParseError("matrix literal: entry out of range");
      a.set(static_cast<int>(i), static_cast<int>(j), static_cast<Elem>(v));
    }
  }
  return a;
}

// ---------------------------------------------------------------- elimination

std::vector<int> rref(const Field& f, std::vector<Vec>& rows, int ncols, bool reverse_cols) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (int step = 0; step < ncols && r < rows.size(); ++step) {
    int c = reverse_cols ? ncols - 1 - step : step;
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    Elem inv = f.inv(rows[r][c]);
    if (inv != 1)
      for (auto& x : rows[r]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Elem factor = rows[i][c];
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        if (rows[r][j]) rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(const Field& f, int ambient) : f_(&f), k_(ambient) {}

Subspace Subspace::span(const Field& f, int ambient, std::vector<Vec> vectors) {
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != ambient) throw ShapeMismatch("span: vector length");
  Subspace s(f, ambient);
  s.pivots_ = rref(f, vectors, ambient);
  s.basis_ = std::move(vectors);
  return s;
}

Subspace Subspace::full(const Field& f, int ambient) {
  std::vector<Vec> e;
  for (int i = 0; i < ambient; ++i) {
    Vec v(ambient, 0);
    v[i] = 1;
    e.push_back(v);
  }
  return span(f, ambient, e);
}

Vec Subspace::coords(const Vec& v_in) const {
  if (static_cast<int>(v_in.size()) != k_) throw ShapeMismatch("coords: vector length");
  Vec v = v_in;
  Vec c(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    Elem x = v[pivots_[i]];
    c[i] = x;
    if (x == 0) continue;
    for (int j = 0; j < k_; ++j) v[j] = f_->sub(v[j], f_->mul(x, basis_[i][j]));
  }
  if (!is_zero(v)) throw DomainError("vector not in subspace");
  return c;
}

bool Subspace::contains(const Vec& v_in) const {
  Vec v = v_in;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    Elem x = v[pivots_[i]];
    if (x == 0) continue;
    for (int j = 0; j < k_; ++j) v[j] = f_->sub(v[j], f_->mul(x, basis_[i][j]));
  }
  return is_zero(v);
}

Subspace Subspace::plus(const Subspace& o) const {
  auto vs = basis_;
  vs.insert(vs.end(), o.basis_.begin(), o.basis_.end());
  return span(*f_, k_, vs);
}

Subspace Subspace::annihilator() const {
  if (basis_.empty()) return full(*f_, k_);
  return kernel(Mat::from_rows(*f_, basis_, k_));
}

Subspace Subspace::intersect(const Subspace& o) const {
  return annihilator().plus(o.annihilator()).annihilator();
}

std::vector<Vec> Subspace::elements() const {
  std::uint64_t count = upow(f_->q(), dim());
  std::vector<Vec> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Vec c = vec_from_index(*f_, dim(), idx);
    Vec v(k_, 0);
    for (int i = 0; i < dim(); ++i)
      if (c[i])
        for (int j = 0; j < k_; ++j) v[j] = f_->add(v[j], f_->mul(c[i], basis_[i][j]));
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::uint64_t> Subspace::key() const {
  std::vector<std::uint64_t> k;
  for (const auto& b : basis_) k.push_back(vec_index(*f_, b));
  return k;
}

const std::vector<Subspace>& all_subspaces(const Field& f, int k, int d) {
  static std::mutex mu;
  static std::map<std::tuple<const Field*, int, int>, std::vector<Subspace>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(&f, k, d);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (d < 0 || d > k) throw DomainError("subspace dimension out of range");
  std::vector<Subspace> out;
  // Iterate pivot sets, then free entries of each RREF pattern.
  std::vector<int> piv(d);
  std::function<void(int, int)> choose = [&](int i, int start) {
    if (i == d) {
      std::vector<std::pair<int, int>> free_pos;
      std::vector<bool> is_piv(k, false);
      for (int p : piv) is_piv[p] = true;
      for (int r = 0; r < d; ++r)
        for (int c = piv[r] + 1; c < k; ++c)
          if (!is_piv[c]) free_pos.emplace_back(r, c);
      std::uint64_t count = upow(f.q(), static_cast<unsigned>(free_pos.size()));
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<Vec> rows(d, Vec(k, 0));
        for (int r = 0; r < d; ++r) rows[r][piv[r]] = 1;
        std::uint64_t x = idx;
        for (std::size_t t = free_pos.size(); t-- > 0;) {
          rows[free_pos[t].first][free_pos[t].second] = static_cast<Elem>(x % f.q());
          x /= f.q();
        }
        out.push_back(Subspace::span(f, k, rows));
      }
      return;
    }
    for (int c = start; c <= k - (d - i); ++c) {
      piv[i] = c;
      choose(i + 1, c + 1);
    }
  };
  choose(0, 0);
  std::sort(out.begin(), out.end());
  return cache.emplace(key, std::move(out)).first->second;
}

// ---------------------------------------------------------------- rank etc.

int rank_gf2(std::vector<std::uint64_t> rows) {
  int r = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::uint64_t x = rows[i];
    if (!x) continue;
    std::uint64_t low = x & (~x + 1);
    ++r;
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (rows[j] & low) rows[j] ^= x;
  }
  return r;
}

int rank(const Mat& a) {
  if (a.field().q() == 2 && a.cols() <= 64) {
    std::vector<std::uint64_t> rows(a.rows(), 0);
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        if (a.at(i, j)) rows[i] |= std::uint64_t{1} << j;
    return rank_gf2(std::move(rows));
  }
  std::vector<Vec> rows;
  for (int i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
  return static_cast<int>(rref(a.field(), rows, a.cols()).size());
}

Subspace kernel(const Mat& a) {
  const Field& f = a.field();
  std::vector<Vec> rows;
  for (int i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
  auto piv = rref(f, rows, a.cols());
  std::vector<bool> is_piv(a.cols(), false);
  for (int p : piv) is_piv[p] = true;
  std::vector<Vec> basis;
  for (int c = 0; c < a.cols(); ++c) {
    if (is_piv[c]) continue;
    Vec x(a.cols(), 0);
    x[c] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = f.neg(rows[r][c]);
    basis.push_back(std::move(x));
  }
  return Subspace::span(f, a.cols(), basis);
}

Subspace image(const Mat& a) {
  std::vector<Vec> cols;
  for (int j = 0; j < a.cols(); ++j) cols.push_back(a.col(j));
  return Subspace::span(a.field(), a.rows(), cols);
}

Subspace row_space(const Mat& a) {
  std::vector<Vec> rows;
  for (int i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
  return Subspace::span(a.field(), a.cols(), rows);
}

Subspace agreement(const Mat& a1, const Mat& a2) { return kernel(a1 - a2); }

int dual_agreement_dim(const Mat& a1, const Mat& a2) { return a1.rows() - rank(a1 - a2); }

int block_agreement_dim(const Mat& a1p, const Mat& a2p, const Mat& d0, const Mat& f0,
                        const Mat& d0p, const Mat& f0p) {
  const int zdim = a1p.cols();
  const int out = a1p.rows();
  if (a2p.rows() != out || a2p.cols() != zdim) throw ShapeMismatch("A1', A2' shapes differ");
  if (d0.cols() != zdim || d0p.cols() != zdim) throw ShapeMismatch("D0/D0' column count");
  if (f0.rows() != out || f0p.rows() != out) throw ShapeMismatch("F0/F0' row count");
  if (f0p.cols() != d0p.rows()) throw ShapeMismatch("F0' D0' inner dimension");
  if (rank(d0) != d0.rows()) throw PreconditionViolated("D0 rows are linearly dependent");
  if (rank(f0) != f0.cols()) throw PreconditionViolated("F0 columns are linearly dependent");
  const Field& f = a1p.field();
  Mat m = a1p - a2p + f0p * d0p;
  Subspace ker = kernel(d0);
  if (ker.dim() == 0) return 0;
  // z in ker(D0) qualifies iff every functional killing colspace(F0) kills Mz.
  Subspace ann = image(f0).annihilator();
  Mat k(f, zdim, ker.dim());
  for (int c = 0; c < ker.dim(); ++c)
    for (int i = 0; i < zdim; ++i) k.set(i, c, ker.basis()[c][i]);
  if (ann.dim() == 0) return ker.dim();
  Mat p = Mat::from_rows(f, ann.basis(), out);
  return ker.dim() - rank(p * m * k);
}

Mat delete_leading(const Mat& a, int d, int dp) {
  return a.block(dp, d, a.rows() - dp, a.cols() - d);
}

Elem determinant(const Mat& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("determinant of non-square matrix");
  const Field& f = a.field();
  int n = a.rows();
  std::vector<Vec> rows;
  for (int i = 0; i < n; ++i) rows.push_back(a.row(i));
  Elem det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && rows[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(rows[piv], rows[c]);
      det = f.neg(det);
    }
    det = f.mul(det, rows[c][c]);
    Elem inv = f.inv(rows[c][c]);
    for (int i = c + 1; i < n; ++i) {
      if (rows[i][c] == 0) continue;
      Elem factor = f.mul(rows[i][c], inv);
      for (int j = c; j < n; ++j) rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[c][j]));
    }
  }
  return det;
}

// ---------------------------------------------------------------- enumeration

void for_each_matrix(const Field& f, int n, int m, std::uint64_t begin, std::uint64_t end,
                     const MatVisitor& visit, const Budget& budget) {
  budget.require_items(static_cast<long double>(end - begin), "matrix enumeration");
  if (begin >= end) return;
  Mat a = Mat::from_index(f, n, m, begin);
  const int q = f.q();
  const int len = n * m;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    if ((idx & 0xFFFFF) == 0) budget.check_deadline("matrix enumeration");
    if (!visit(a)) return;
    // increment the base-q counter, last entry least significant
    for (int k = len - 1; k >= 0; --k) {
      int i = k / m, j = k % m;
      Elem x = a.at(i, j);
      if (x + 1 < q) {
        a.set(i, j, static_cast<Elem>(x + 1));
        break;
      }
      a.set(i, j, 0);
    }
  }
}

void for_each_matrix(const Field& f, int n, int m, const MatVisitor& visit, const Budget& budget) {
  long double total = std::pow(static_cast<long double>(f.q()), n * m);
  budget.require_items(total, "matrix enumeration");
  for_each_matrix(f, n, m, 0, upow(f.q(), n * m), visit, budget);
}

void for_each_rank(const Field& f, int n, int m, int d, const MatVisitor& visit,
                   const Budget& budget) {
  if (d < 0 || d > std::min(n, m)) throw DomainError("rank out of range");
  for_each_matrix(
      f, n, m, [&](const Mat& a) { return rank(a) != d || visit(a); }, budget);
}

void for_each_gl(const Field& f, int n, const MatVisitor& visit, const Budget& budget) {
  budget.require_items(std::pow(static_cast<long double>(f.q()), n * n), "GL enumeration");
  const std::uint64_t nv = upow(f.q(), n);
  std::vector<Vec> vecs;
  for (std::uint64_t i = 0; i < nv; ++i) vecs.push_back(vec_from_index(f, n, i));
  std::vector<Vec> chosen;
  std::uint64_t visited = 0;
  bool stop = false;
  std::function<void()> rec = [&]() {
    if (stop) return;
    if (static_cast<int>(chosen.size()) == n) {
      if ((++visited & 0xFFFF) == 0) budget.check_deadline("GL enumeration");
      if (!visit(Mat::from_rows(f, chosen, n))) stop = true;
      return;
    }
    Subspace sp = Subspace::span(f, n, chosen);
    for (const auto& v : vecs) {
      if (stop) return;
      if (sp.contains(v)) continue;
      chosen.push_back(v);
      rec();
      chosen.pop_back();
    }
  };
  rec();
}

void for_each_sl(const Field& f, int n, const MatVisitor& visit, const Budget& budget) {
  for_each_gl(
      f, n, [&](const Mat& a) { return determinant(a) != 1 || visit(a); }, budget);
}

namespace {
std::vector<Mat> collect(const std::function<void(const MatVisitor&)>& run) {
  std::vector<Mat> out;
  run([&](const Mat& a) {
    out.push_back(a);
    return true;
  });
  return out;
}
}  // namespace

std::vector<Mat> enumerate_all(const Field& f, int n, int m, const Budget& budget) {
  return collect([&](const MatVisitor& v) { for_each_matrix(f, n, m, v, budget); });
}
std::vector<Mat> enumerate_rank(const Field& f, int n, int m, int d, const Budget& budget) {
  return collect([&](const MatVisitor& v) { for_each_rank(f, n, m, d, v, budget); });
}
std::vector<Mat> enumerate_gl(const Field& f, int n, const Budget& budget) {
  return collect([&](const MatVisitor& v) { for_each_gl(f, n, v, budget); });
}
std::vector<Mat> enumerate_sl(const Field& f, int n, const Budget& budget) {
  return collect([&](const MatVisitor& v) { for_each_sl(f, n, v, budget); });
}

// ---------------------------------------------------------------- affine solver

AffineSolutions::AffineSolutions(const Field& f, int nvars, std::vector<Vec> equations, Vec rhs)
    : f_(&f), nvars_(nvars) {
  if (equations.size() != rhs.size()) throw ShapeMismatch("affine system: rhs length");
  for (std::size_t i = 0; i < equations.size(); ++i) {
    if (static_cast<int>(equations[i].size()) != nvars) throw ShapeMismatch("affine system: row length");
    equations[i].push_back(rhs[i]);
  }
  auto piv = rref(f, equations, nvars, /*reverse_cols=*/true);
  for (const auto& row : equations) {
    bool zero_lhs = true;
    for (int j = 0; j < nvars; ++j)
      if (row[j]) zero_lhs = false;
    if (zero_lhs && row[nvars] != 0) empty_ = true;
  }
  if (empty_) return;
  std::vector<int> pos(nvars, -1);
  std::vector<bool> is_piv(nvars, false);
  for (int p : piv) is_piv[p] = true;
  for (int j = 0; j < nvars; ++j)
    if (!is_piv[j]) {
      pos[j] = static_cast<int>(free_.size());
      free_.push_back(j);
    }
  for (std::size_t r = 0; r < piv.size(); ++r) {
    PivotRow pr{piv[r], equations[r][nvars], {}};
    for (int j = 0; j < nvars; ++j)
      if (!is_piv[j] && equations[r][j]) pr.terms.emplace_back(pos[j], equations[r][j]);
    pivots_.push_back(std::move(pr));
  }
}

void AffineSolutions::solution_into(std::uint64_t idx, Vec& x) const {
  if (empty_) throw DomainError("affine system has no solutions");
  x.assign(nvars_, 0);
  Vec fv(free_.size());
  for (std::size_t t = free_.size(); t-- > 0;) {
    fv[t] = static_cast<Elem>(idx % f_->q());
    idx /= f_->q();
    x[free_[t]] = fv[t];
  }
  for (const auto& pr : pivots_) {
    Elem v = pr.constant;
    for (auto [p, c] : pr.terms) v = f_->sub(v, f_->mul(c, fv[p]));
    x[pr.var] = v;
  }
}

Vec AffineSolutions::solution(std::uint64_t idx) const {
  Vec x;
  solution_into(idx, x);
  return x;
}

}  // namespace linex
