#include "linex/restriction.hpp"

#include <sstream>

#include "json.hpp"
#include "linex/errors.hpp"
#include "linex/surd.hpp"

namespace linex {

Restriction::Restriction(const Field& f, int n, int m) : f_(&f), n_(n), m_(m) {}

std::optional<Restriction> Restriction::try_make(const Field& f, int n, int m,
                                                 std::vector<ColConstraint> cols,
                                                 std::vector<RowConstraint> rows) {
  return build(f, n, m, std::move(cols), std::move(rows), false);
}

Restriction Restriction::pair(const Field& f, int n, int m, std::vector<ColConstraint> cols,
                              std::vector<RowConstraint> rows) {
  auto r = build(f, n, m, std::move(cols), std::move(rows), true);
  if (!r) throw InconsistentRestriction("partial map sends a dependent vector inconsistently");
  return *r;
}

void Restriction::require_consistent() const {
  if (!consistent_) throw InconsistentRestriction("constraints define an empty coset");
}

std::optional<Restriction> Restriction::build(const Field& f, int n, int m,
                                              std::vector<ColConstraint> cols,
                                              std::vector<RowConstraint> rows, bool allow_cross) {
  Restriction r(f, n, m);
  // [v | w] rows, reduced; a pivot in the w-part means 0 -> nonzero.
  std::vector<Vec> aug;
  for (const auto& c : cols) {
    if (static_cast<int>(c.v.size()) != m || static_cast<int>(c.w.size()) != n)
      throw ShapeMismatch("column constraint has wrong lengths");
    Vec x = c.v;
    x.insert(x.end(), c.w.begin(), c.w.end());
    aug.push_back(std::move(x));
  }
  auto piv = rref(f, aug, m + n);
  for (std::size_t i = 0; i < aug.size(); ++i) {
    if (piv[i] >= m) return std::nullopt;
    r.cols_.push_back({Vec(aug[i].begin(), aug[i].begin() + m), Vec(aug[i].begin() + m, aug[i].end())});
  }
  std::vector<Vec> aug2;
  for (const auto& c : rows) {
    if (static_cast<int>(c.a.size()) != n || static_cast<int>(c.b.size()) != m)
      throw ShapeMismatch("row constraint has wrong lengths");
    Vec x = c.a;
    x.insert(x.end(), c.b.begin(), c.b.end());
    aug2.push_back(std::move(x));
  }
  auto piv2 = rref(f, aug2, m + n);
  for (std::size_t i = 0; i < aug2.size(); ++i) {
    if (piv2[i] >= n) return std::nullopt;
    r.rows_.push_back({Vec(aug2[i].begin(), aug2[i].begin() + n), Vec(aug2[i].begin() + n, aug2[i].end())});
  }
  for (const auto& c : r.cols_)
    for (const auto& rc : r.rows_)
      if (dot(f, rc.a, c.w) != dot(f, rc.b, c.v)) {
        if (!allow_cross) return std::nullopt;
        r.consistent_ = false;
      }
  return r;
}

Restriction Restriction::make(const Field& f, int n, int m, std::vector<ColConstraint> cols,
                              std::vector<RowConstraint> rows) {
  auto r = try_make(f, n, m, std::move(cols), std::move(rows));
  if (!r) throw InconsistentRestriction("constraints define an empty coset");
  return *r;
}

Subspace Restriction::col_domain() const {
  std::vector<Vec> vs;
  for (const auto& c : cols_) vs.push_back(c.v);
  return Subspace::span(*f_, m_, vs);
}

Subspace Restriction::row_domain() const {
  std::vector<Vec> as;
  for (const auto& c : rows_) as.push_back(c.a);
  return Subspace::span(*f_, n_, as);
}

// The v-parts are already in RREF, so coordinates are read off the pivots.
Vec Restriction::col_value(const Vec& x) const {
  Vec c = col_domain().coords(x);
  Vec w(n_, 0);
  for (std::size_t i = 0; i < cols_.size(); ++i)
    if (c[i])
      for (int j = 0; j < n_; ++j) w[j] = f_->add(w[j], f_->mul(c[i], cols_[i].w[j]));
  return w;
}

Vec Restriction::row_value(const Vec& a) const {
  Vec c = row_domain().coords(a);
  Vec b(m_, 0);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (c[i])
      for (int j = 0; j < m_; ++j) b[j] = f_->add(b[j], f_->mul(c[i], rows_[i].b[j]));
  return b;
}

bool Restriction::satisfied_by(const Mat& s) const {
  if (s.rows() != n_ || s.cols() != m_) throw ShapeMismatch("restriction shape");
  for (const auto& c : cols_)
    if (s.apply(c.v) != c.w) return false;
  for (const auto& c : rows_)
    if (s.apply_left(c.a) != c.b) return false;
  return true;
}

std::optional<Restriction> Restriction::merge(const Restriction& o) const {
  if (o.n_ != n_ || o.m_ != m_ || !(*o.f_ == *f_)) throw ShapeMismatch("merge: shape");
  auto cols = cols_;
  cols.insert(cols.end(), o.cols_.begin(), o.cols_.end());
  auto rows = rows_;
  rows.insert(rows.end(), o.rows_.begin(), o.rows_.end());
  return try_make(*f_, n_, m_, cols, rows);
}

mpz_class Restriction::coset_cardinality() const {
  require_consistent();
  return zpow(f_->q(), static_cast<unsigned long>(m_ - dim_s()) * (n_ - dim_a()));
}

namespace {

AffineSolutions coset_system(const Field& f, int n, int m, const std::vector<ColConstraint>& cols,
                             const std::vector<RowConstraint>& rows) {
  std::vector<Vec> eqs;
  Vec rhs;
  for (const auto& c : cols)
    for (int r = 0; r < n; ++r) {
      Vec e(n * m, 0);
      for (int j = 0; j < m; ++j) e[r * m + j] = c.v[j];
      eqs.push_back(std::move(e));
      rhs.push_back(c.w[r]);
    }
  for (const auto& c : rows)
    for (int j = 0; j < m; ++j) {
      Vec e(n * m, 0);
      for (int r = 0; r < n; ++r) e[r * m + j] = c.a[r];
      eqs.push_back(std::move(e));
      rhs.push_back(c.b[j]);
    }
  return AffineSolutions(f, n * m, std::move(eqs), std::move(rhs));
}

}  // namespace

CosetChart Restriction::chart() const {
  require_consistent();
  AffineSolutions sol = coset_system(*f_, n_, m_, cols_, rows_);
  Vec x0 = sol.solution(0);
  Mat sigma0(*f_, n_, m_);
  for (int r = 0; r < n_; ++r)
    for (int j = 0; j < m_; ++j) sigma0.set(r, j, x0[r * m_ + j]);
  Subspace annS = col_domain().annihilator();
  Subspace kerA = row_domain().annihilator();
  Mat P = Mat::from_rows(*f_, annS.basis(), m_);
  Mat Q = Mat::from_rows(*f_, kerA.basis(), n_).transpose();
  if (annS.dim() == 0) P = Mat(*f_, 0, m_);
  if (kerA.dim() == 0) Q = Mat(*f_, n_, 0);
  return {sigma0, Q, P};
}

std::vector<Mat> Restriction::enumerate(const Budget& budget) const {
  require_consistent();
  AffineSolutions sol = coset_system(*f_, n_, m_, cols_, rows_);
  budget.require_items(coset_cardinality().get_d(), "coset enumeration");
  std::uint64_t count = upow(f_->q(), sol.free_count());
  std::vector<Mat> out;
  out.reserve(count);
  Vec x;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    sol.solution_into(idx, x);
    Mat a(*f_, n_, m_);
    for (int r = 0; r < n_; ++r)
      for (int j = 0; j < m_; ++j) a.set(r, j, x[r * m_ + j]);
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

// dim{(alpha, beta) : V1 alpha = V2 beta and W1 alpha = W2 beta}.
int partial_agreement(const Field& f, int dom, int cod, const std::vector<Vec>& v1,
                      const std::vector<Vec>& w1, const std::vector<Vec>& v2,
                      const std::vector<Vec>& w2) {
  int k = static_cast<int>(v1.size() + v2.size());
  if (k == 0) return 0;
  Mat sys(f, dom + cod, k);
  for (std::size_t i = 0; i < v1.size(); ++i) {
    for (int r = 0; r < dom; ++r) sys.set(r, static_cast<int>(i), v1[i][r]);
    for (int r = 0; r < cod; ++r) sys.set(dom + r, static_cast<int>(i), w1[i][r]);
  }
  for (std::size_t j = 0; j < v2.size(); ++j) {
    int c = static_cast<int>(v1.size() + j);
    for (int r = 0; r < dom; ++r) sys.set(r, c, f.neg(v2[j][r]));
    for (int r = 0; r < cod; ++r) sys.set(dom + r, c, f.neg(w2[j][r]));
  }
  return k - rank(sys);
}

}  // namespace

int Restriction::col_agreement_dim(const Restriction& o) const {
  std::vector<Vec> v1, w1, v2, w2;
  for (const auto& c : cols_) v1.push_back(c.v), w1.push_back(c.w);
  for (const auto& c : o.cols_) v2.push_back(c.v), w2.push_back(c.w);
  return partial_agreement(*f_, m_, n_, v1, w1, v2, w2);
}

int Restriction::row_agreement_dim(const Restriction& o) const {
  std::vector<Vec> a1, b1, a2, b2;
  for (const auto& c : rows_) a1.push_back(c.a), b1.push_back(c.b);
  for (const auto& c : o.rows_) a2.push_back(c.a), b2.push_back(c.b);
  return partial_agreement(*f_, n_, m_, a1, b1, a2, b2);
}

bool Restriction::operator==(const Restriction& o) const {
  return *f_ == *o.f_ && n_ == o.n_ && m_ == o.m_ && cols_ == o.cols_ && rows_ == o.rows_ &&
         consistent_ == o.consistent_;
}

std::string Restriction::to_json() const {
  nlohmann::json j;
  j["cols"] = nlohmann::json::array();
  j["rows"] = nlohmann::json::array();
  for (const auto& c : cols_) j["cols"].push_back({c.v, c.w});
  for (const auto& c : rows_) j["rows"].push_back({c.a, c.b});
  return j.dump();
}

std::string Restriction::describe() const {
  std::ostringstream os;
  auto vs = [](const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  bool first = true;
  for (const auto& c : cols_) {
    os << (first ? "" : " & ") << "s" << vs(c.v) << "=" << vs(c.w);
    first = false;
  }
  for (const auto& c : rows_) {
    os << (first ? "" : " & ") << vs(c.a) << "^T s=" << vs(c.b);
    first = false;
  }
  if (first) os << "(none)";
  return os.str();
}

Restriction dual_restriction(const Restriction& r) {
  std::vector<ColConstraint> cols;
  std::vector<RowConstraint> rows;
  for (const auto& c : r.rows()) cols.push_back({c.a, c.b});
  for (const auto& c : r.cols()) rows.push_back({c.v, c.w});
  return r.is_consistent() ? Restriction::make(r.field(), r.m(), r.n(), cols, rows)
                           : Restriction::pair(r.field(), r.m(), r.n(), cols, rows);
}

Restriction restriction_from_json(const Field& f, int n, int m, const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    std::vector<ColConstraint> cols;
    std::vector<RowConstraint> rows;
    auto read = [&](const nlohmann::json& x, int len) {
      auto ints = x.get<std::vector<int>>();
      if (static_cast<int>(ints.size()) != len) throw ParseError("constraint vector length");
      Vec v;
      for (int e : ints) {
        if (e < 0 || e >= f.q()) throw ParseError("constraint entry out of range");
        v.push_back(static_cast<Elem>(e));
      }
      return v;
    };
    if (j.contains("cols"))
      for (const auto& p : j["cols"]) cols.push_back({read(p.at(0), m), read(p.at(1), n)});
    if (j.contains("rows"))
      for (const auto& p : j["rows"]) rows.push_back({read(p.at(0), n), read(p.at(1), m)});
    return Restriction::make(f, n, m, cols, rows);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("restriction JSON: ") + e.what());
  }
}

}  // namespace linex
