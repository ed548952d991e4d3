#include "linex/families.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace linex {

using nlohmann::json;

// ---------------------------------------------------------------- Family

Family::Family(const Field& f, int n, int m) : f_(&f), n_(n), m_(m), context_(f, n, m) {}

Family::Family(const Field& f, int n, int m, std::vector<Mat> members)
    : Family(Restriction(f, n, m), std::move(members)) {}

Family::Family(const Restriction& context, std::vector<Mat> members)
    : f_(&context.field()), n_(context.n()), m_(context.m()), context_(context),
      members_(std::move(members)) {
  if (!context_.is_consistent()) throw InconsistentRestriction("family context is empty");
  for (const auto& a : members_) {
    if (!(a.field() == *f_) || a.rows() != n_ || a.cols() != m_)
      throw ShapeMismatch("family member has the wrong shape or field");
    if (!context_.satisfied_by(a)) throw DomainError("family member violates its context");
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Family Family::full(const Field& f, int n, int m, const Budget& budget) {
  return Family(f, n, m, enumerate_all(f, n, m, budget));
}

Family Family::coset(const Restriction& r, const Budget& budget) {
  return Family(r.field(), r.n(), r.m(), r.enumerate(budget));
}

bool Family::contains(const Mat& a) const {
  return std::binary_search(members_.begin(), members_.end(), a);
}

mpq_class Family::measure() const {
  mpq_class v(mpz_class(members_.size()), context_.coset_cardinality());
  v.canonicalize();
  return v;
}

bool Family::operator==(const Family& o) const {
  return *f_ == *o.f_ && n_ == o.n_ && m_ == o.m_ && context_ == o.context_ &&
         members_ == o.members_;
}

mpz_class coset_cardinality(const Restriction& r) { return r.coset_cardinality(); }

namespace {

void require_trivial_overlap(const Restriction& ctx, const Restriction& r) {
  if (r.n() != ctx.n() || r.m() != ctx.m() || !(r.field() == ctx.field()))
    throw ShapeMismatch("restriction shape differs from the family");
  if (ctx.col_domain().intersect(r.col_domain()).dim() != 0)
    throw DomainOverlap("column domain meets the context column domain");
  if (ctx.row_domain().intersect(r.row_domain()).dim() != 0)
    throw DomainOverlap("row domain meets the context row domain");
}

}  // namespace

Family restrict(const Family& fam, const Restriction& r) {
  require_trivial_overlap(fam.context(), r);
  if (!r.is_consistent()) throw InconsistentRestriction("restriction defines an empty coset");
  auto merged = fam.context().merge(r);
  if (!merged) throw InconsistentRestriction("restriction is inconsistent with the context");
  std::vector<Mat> kept;
  for (const auto& a : fam.members())
    if (r.satisfied_by(a)) kept.push_back(a);
  return Family(*merged, std::move(kept));
}

namespace {

bool avoids(const Mat& a, const Restriction& r) {
  Subspace S = r.col_domain();
  auto xs = S.elements();
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (a.apply(xs[i]) == r.col_value(xs[i])) return false;
  Subspace A = r.row_domain();
  auto as = A.elements();
  for (std::size_t i = 1; i < as.size(); ++i)
    if (a.apply_left(as[i]) == r.row_value(as[i])) return false;
  return true;
}

}  // namespace

Family restrict_avoiding(const Family& fam, const Restriction& r) {
  require_trivial_overlap(fam.context(), r);
  std::vector<Mat> kept;
  for (const auto& a : fam.members())
    if (avoids(a, r)) kept.push_back(a);
  return Family(fam.context(), std::move(kept));
}

// ---------------------------------------------------------- predicates

namespace {

// Agreement dimension of all pairs; q = 2 uses packed rows.
struct PairRank {
  explicit PairRank(const Family& fam) : fam_(fam) {
    packed_ = fam.field().q() == 2 && fam.m() <= 64;
    if (packed_)
      for (const auto& a : fam.members()) {
        std::vector<std::uint64_t> rows(a.rows(), 0);
        for (int i = 0; i < a.rows(); ++i)
          for (int j = 0; j < a.cols(); ++j)
            if (a.at(i, j)) rows[i] |= std::uint64_t{1} << j;
        bits_.push_back(std::move(rows));
      }
  }
  int agreement(std::size_t i, std::size_t j) const {
    if (!packed_) return fam_.m() - rank(fam_.members()[i] - fam_.members()[j]);
    std::vector<std::uint64_t> d(bits_[i].size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = bits_[i][k] ^ bits_[j][k];
    return fam_.m() - rank_gf2(std::move(d));
  }
  const Family& fam_;
  bool packed_;
  std::vector<std::vector<std::uint64_t>> bits_;
};

PredicateResult scan_pairs(const Family& fam, const std::function<bool(int)>& bad) {
  PairRank pr(fam);
  const auto& mem = fam.members();
  for (std::size_t i = 0; i < mem.size(); ++i)
    for (std::size_t j = i + 1; j < mem.size(); ++j)
      if (bad(pr.agreement(i, j))) return {false, PairWitness{mem[i], mem[j]}};
  return {};
}

}  // namespace

PredicateResult is_t_intersecting(const Family& fam, int t) {
  return scan_pairs(fam, [t](int a) { return a < t; });
}

PredicateResult is_intersection_free(const Family& fam, int t_minus_1) {
  return scan_pairs(fam, [t_minus_1](int a) { return a == t_minus_1; });
}

// ------------------------------------------------------ candidate search

namespace {

using Words = std::vector<std::uint64_t>;

// Membership bitsets: col_[v][w] = {members sigma : sigma v = w}, and
// row_[a][b] = {members sigma : a^T sigma = b^T}.
class SearchIndex {
 public:
  SearchIndex(const Restriction& ctx, const std::vector<Mat>& members, const Budget& budget)
      : f_(ctx.field()), n_(ctx.n()), m_(ctx.m()), count_(members.size()) {
    qn_ = upow(f_.q(), n_);
    qm_ = upow(f_.q(), m_);
    words_ = (count_ + 63) / 64;
    budget.require_dense(2.0L * qn_ * qm_ * static_cast<long double>(words_), "capture search index");
    col_.assign(qm_ * qn_ * words_, 0);
    row_.assign(qn_ * qm_ * words_, 0);
    std::vector<Vec> vs, as;
    for (std::uint64_t v = 0; v < qm_; ++v) vs.push_back(vec_from_index(f_, m_, v));
    for (std::uint64_t a = 0; a < qn_; ++a) as.push_back(vec_from_index(f_, n_, a));
    for (std::size_t i = 0; i < count_; ++i) {
      const Mat& s = members[i];
      std::uint64_t bit = std::uint64_t{1} << (i % 64);
      for (std::uint64_t v = 0; v < qm_; ++v) {
        std::uint64_t w = vec_index(f_, s.apply(vs[v]));
        col_[(v * qn_ + w) * words_ + i / 64] |= bit;
      }
      for (std::uint64_t a = 0; a < qn_; ++a) {
        std::uint64_t b = vec_index(f_, s.apply_left(as[a]));
        row_[(a * qm_ + b) * words_ + i / 64] |= bit;
      }
    }
  }

  std::size_t words() const { return words_; }
  Words all() const {
    Words w(words_, ~std::uint64_t{0});
    if (count_ % 64) w.back() = (std::uint64_t{1} << (count_ % 64)) - 1;
    if (count_ == 0) w.clear();
    return w;
  }
  const std::uint64_t* col(std::uint64_t v, std::uint64_t w) const {
    return &col_[(v * qn_ + w) * words_];
  }
  const std::uint64_t* row(std::uint64_t a, std::uint64_t b) const {
    return &row_[(a * qm_ + b) * words_];
  }

 private:
  const Field& f_;
  int n_, m_;
  std::size_t count_;
  std::uint64_t qn_ = 0, qm_ = 0;
  std::size_t words_ = 0;
  Words col_, row_;
};

std::uint64_t popcount(const Words& w) {
  std::uint64_t c = 0;
  for (auto x : w) c += static_cast<std::uint64_t>(std::popcount(x));
  return c;
}

// One side of a candidate: a subspace with values on its basis, plus the
// value index of every element (element order of Subspace::elements()).
struct Side {
  std::uint64_t serial = 0;  // distinct per generated S-side
  const Subspace* dom = nullptr;
  std::vector<Vec> values;            // value on each basis vector
  std::vector<std::uint64_t> elem;    // index of each element
  std::vector<std::uint64_t> image;   // index of the value at each element
};

// Calls visit(S-side, A-side) for every candidate with complexity in
// [cmin, cmax] and domains meeting the context trivially. Order: complexity,
// then dim A, then S (key order), then Pi (base-q lex over the basis values),
// then A, then pi. visit returns true to stop; the function then returns true.
class CandidateWalker {
 public:
  CandidateWalker(const Restriction& ctx, const Budget& budget)
      : ctx_(ctx), f_(ctx.field()), n_(ctx.n()), m_(ctx.m()), budget_(budget),
        S0_(ctx.col_domain()), A0_(ctx.row_domain()) {}

  template <class Visit>
  bool walk(int cmin, int cmax, bool need_images, Visit&& visit) {
    for (int c = cmin; c <= cmax; ++c)
      for (int b = 0; b <= c; ++b) {
        int a = c - b;
        if (a > m_ - S0_.dim() || b > n_ - A0_.dim()) continue;
        auto Ss = domains(m_, a, S0_);
        auto As = domains(n_, b, A0_);
        if (Ss.empty() || As.empty()) continue;
        for (const Subspace* S : Ss) {
          auto selem = S->elements();
          std::uint64_t npi = upow(upow(f_.q(), n_), a);
          for (std::uint64_t pi_idx = 0; pi_idx < npi; ++pi_idx) {
            Side sside = make_side(*S, selem, n_, pi_idx, need_images);
            sside.serial = ++serial_;
            for (const Subspace* A : As) {
              auto aelem = A->elements();
              std::uint64_t nrho = upow(upow(f_.q(), m_), b);
              for (std::uint64_t rho_idx = 0; rho_idx < nrho; ++rho_idx) {
                if ((++ticks_ & 0xfff) == 0) budget_.check_deadline("restriction search");
                Side aside = make_side(*A, aelem, m_, rho_idx, need_images);
                if (visit(sside, aside)) return true;
              }
            }
          }
        }
      }
    return false;
  }

  Restriction as_restriction(const Side& s, const Side& a, bool pair) const {
    std::vector<ColConstraint> cols;
    std::vector<RowConstraint> rows;
    for (std::size_t i = 0; i < s.values.size(); ++i) cols.push_back({s.dom->basis()[i], s.values[i]});
    for (std::size_t i = 0; i < a.values.size(); ++i) rows.push_back({a.dom->basis()[i], a.values[i]});
    return pair ? Restriction::pair(f_, n_, m_, cols, rows) : Restriction::make(f_, n_, m_, cols, rows);
  }

  /// Cross condition of the candidate with itself and with the context.
  bool consistent(const Side& s, const Side& a) const {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const Vec& v = s.dom->basis()[i];
      const Vec& w = s.values[i];
      for (const auto& rc : ctx_.rows())
        if (dot(f_, rc.a, w) != dot(f_, rc.b, v)) return false;
      for (std::size_t j = 0; j < a.values.size(); ++j)
        if (dot(f_, a.dom->basis()[j], w) != dot(f_, a.values[j], v)) return false;
    }
    for (std::size_t j = 0; j < a.values.size(); ++j)
      for (const auto& cc : ctx_.cols())
        if (dot(f_, a.dom->basis()[j], cc.w) != dot(f_, a.values[j], cc.v)) return false;
    return true;
  }

 private:
  std::vector<const Subspace*> domains(int amb, int d, const Subspace& avoid) const {
    std::vector<const Subspace*> out;
    for (const auto& S : all_subspaces(f_, amb, d))
      if (avoid.intersect(S).dim() == 0) out.push_back(&S);
    return out;
  }

  Side make_side(const Subspace& dom, const std::vector<Vec>& elems, int cod, std::uint64_t idx,
                 bool need_images) const {
    Side side;
    side.dom = &dom;
    int d = dom.dim();
    std::uint64_t qc = upow(f_.q(), cod);
    // first basis value is the most significant digit
    std::vector<std::uint64_t> digits(d);
    for (int i = d - 1; i >= 0; --i) {
      digits[i] = idx % qc;
      idx /= qc;
    }
    for (int i = 0; i < d; ++i) side.values.push_back(vec_from_index(f_, cod, digits[i]));
    if (!need_images) {
      // basis vectors only
      for (int i = 0; i < d; ++i) {
        side.elem.push_back(vec_index(f_, dom.basis()[i]));
        side.image.push_back(digits[i]);
      }
      return side;
    }
    std::uint64_t count = elems.size();
    for (std::uint64_t e = 1; e < count; ++e) {
      Vec c = vec_from_index(f_, d, e);
      Vec val(cod, 0);
      for (int i = 0; i < d; ++i)
        if (c[i])
          for (int j = 0; j < cod; ++j) val[j] = f_.add(val[j], f_.mul(c[i], side.values[i][j]));
      side.elem.push_back(vec_index(f_, elems[e]));
      side.image.push_back(vec_index(f_, val));
    }
    return side;
  }

  const Restriction& ctx_;
  const Field& f_;
  int n_, m_;
  const Budget& budget_;
  Subspace S0_, A0_;
  std::uint64_t ticks_ = 0;
  std::uint64_t serial_ = 0;
};

// Largest count K with K / total <= eps.
std::uint64_t capture_threshold(std::uint64_t members, const mpz_class& total, const Surd& eps) {
  auto ok = [&](std::uint64_t k) {
    mpq_class x(mpz_class(k), total);
    x.canonicalize();
    return Surd(x) <= eps;
  };
  if (!ok(0)) return 0;  // eps >= 0 always, so unreachable
  std::uint64_t lo = 0, hi = members + 1;  // ok(lo), search for first failing
  if (ok(members)) return members;
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

std::optional<Restriction> is_captureable(const Family& fam, int s, const Surd& eps,
                                          const Budget& budget) {
  if (s < 0) throw DomainError("capture complexity must be nonnegative");
  const Restriction& ctx = fam.context();
  std::uint64_t thr = capture_threshold(fam.size(), ctx.coset_cardinality(), eps);
  if (fam.size() <= thr) return Restriction(fam.field(), fam.n(), fam.m());
  SearchIndex idx(ctx, fam.members(), budget);
  CandidateWalker walker(ctx, budget);
  std::optional<Restriction> out;
  Words base = idx.all();
  Words smask(idx.words()), mask(idx.words());
  std::uint64_t last_s = 0;
  walker.walk(1, s, true, [&](const Side& S, const Side& A) {
    if (last_s != S.serial) {
      smask = base;
      for (std::size_t e = 0; e < S.elem.size(); ++e) {
        const std::uint64_t* c = idx.col(S.elem[e], S.image[e]);
        for (std::size_t k = 0; k < smask.size(); ++k) smask[k] &= ~c[k];
      }
      last_s = S.serial;
    }
    mask = smask;
    for (std::size_t e = 0; e < A.elem.size(); ++e) {
      const std::uint64_t* r = idx.row(A.elem[e], A.image[e]);
      for (std::size_t k = 0; k < mask.size(); ++k) mask[k] &= ~r[k];
    }
    if (popcount(mask) <= thr) {
      out = walker.as_restriction(S, A, true);
      return true;
    }
    return false;
  });
  return out;
}

std::optional<Restriction> is_captureable_reference(const Family& fam, int s, const Surd& eps) {
  const Field& f = fam.field();
  const Restriction& ctx = fam.context();
  mpz_class total = ctx.coset_cardinality();
  auto small = [&](std::size_t k) {
    mpq_class x(mpz_class(k), total);
    x.canonicalize();
    return Surd(x) <= eps;
  };
  if (small(fam.size())) return Restriction(f, fam.n(), fam.m());
  std::size_t thr = 0;
  while (small(thr + 1)) ++thr;
  Subspace S0 = ctx.col_domain(), A0 = ctx.row_domain();
  std::uint64_t qn = upow(f.q(), fam.n()), qm = upow(f.q(), fam.m());
  for (int c = 1; c <= s; ++c)
    for (int b = 0; b <= c; ++b) {
      int a = c - b;
      if (a > fam.m() || b > fam.n()) continue;
      for (const auto& S : all_subspaces(f, fam.m(), a)) {
        if (S.intersect(S0).dim() != 0) continue;
        for (std::uint64_t pi = 0; pi < upow(qn, a); ++pi) {
          std::vector<ColConstraint> cols;
          std::uint64_t rest = pi;
          std::vector<std::uint64_t> dig(a);
          for (int i = a - 1; i >= 0; --i) dig[i] = rest % qn, rest /= qn;
          for (int i = 0; i < a; ++i) cols.push_back({S.basis()[i], vec_from_index(f, fam.n(), dig[i])});
          for (const auto& A : all_subspaces(f, fam.n(), b)) {
            if (A.intersect(A0).dim() != 0) continue;
            for (std::uint64_t rho = 0; rho < upow(qm, b); ++rho) {
              std::vector<RowConstraint> rows;
              std::uint64_t rr = rho;
              std::vector<std::uint64_t> dg(b);
              for (int i = b - 1; i >= 0; --i) dg[i] = rr % qm, rr /= qm;
              for (int i = 0; i < b; ++i) rows.push_back({A.basis()[i], vec_from_index(f, fam.m(), dg[i])});
              Restriction cand = Restriction::pair(f, fam.n(), fam.m(), cols, rows);
              // every nonzero point of both domains with its prescribed value
              std::vector<std::pair<Vec, Vec>> cpts, rpts;
              auto xs = S.elements();
              for (std::size_t i = 1; i < xs.size(); ++i) cpts.push_back({xs[i], cand.col_value(xs[i])});
              auto as = A.elements();
              for (std::size_t i = 1; i < as.size(); ++i) rpts.push_back({as[i], cand.row_value(as[i])});
              std::size_t kept = 0;
              for (const auto& sig : fam.members()) {
                bool ok = true;
                for (const auto& [x, w] : cpts)
                  if (sig.apply(x) == w) { ok = false; break; }
                for (std::size_t i = 0; ok && i < rpts.size(); ++i)
                  if (sig.apply_left(rpts[i].first) == rpts[i].second) ok = false;
                if (ok && ++kept > thr) break;
              }
              if (kept <= thr) return cand;
            }
          }
        }
      }
    }
  return std::nullopt;
}

namespace {

// Visits every consistent restriction of complexity 1..s with its weighted
// hit count and the dimension exponent of its merged coset; the visitor
// returns true to stop, and receives the walker to build the witness.
template <class Visit>
void scan_restrictions(const Restriction& ctx, const std::vector<Mat>& support,
                       const std::vector<mpz_class>* weights, int s, const Budget& budget,
                       Visit&& visit) {
  if (s < 0) throw DomainError("quasiregularity complexity must be nonnegative");
  SearchIndex idx(ctx, support, budget);
  CandidateWalker walker(ctx, budget);
  int free_m = ctx.m() - ctx.dim_s(), free_n = ctx.n() - ctx.dim_a();
  Words base = idx.all();
  Words mask(idx.words());
  walker.walk(1, s, false, [&](const Side& S, const Side& A) {
    if (!walker.consistent(S, A)) return false;
    mask = base;
    for (std::size_t e = 0; e < S.elem.size(); ++e) {
      const std::uint64_t* c = idx.col(S.elem[e], S.image[e]);
      for (std::size_t k = 0; k < mask.size(); ++k) mask[k] &= c[k];
    }
    for (std::size_t e = 0; e < A.elem.size(); ++e) {
      const std::uint64_t* r = idx.row(A.elem[e], A.image[e]);
      for (std::size_t k = 0; k < mask.size(); ++k) mask[k] &= r[k];
    }
    mpz_class hit = 0;
    if (weights) {
      for (std::size_t k = 0; k < mask.size(); ++k)
        for (std::uint64_t x = mask[k]; x; x &= x - 1)
          hit += (*weights)[k * 64 + static_cast<std::size_t>(std::countr_zero(x))];
    } else {
      hit = static_cast<unsigned long>(popcount(mask));
    }
    unsigned long e = static_cast<unsigned long>(free_m - S.dom->dim()) *
                      static_cast<unsigned long>(free_n - A.dom->dim());
    return visit(hit, e, walker, S, A);
  });
}

mpz_class weight_total(const std::vector<Mat>& support, const std::vector<mpz_class>* weights) {
  mpz_class total = 0;
  if (weights)
    for (const auto& w : *weights) total += w;
  else
    total = static_cast<unsigned long>(support.size());
  return total;
}

std::optional<Restriction> quasiregular_search(const Restriction& ctx,
                                               const std::vector<Mat>& support,
                                               const std::vector<mpz_class>* weights, int s,
                                               const mpq_class& alpha, const Budget& budget) {
  mpz_class total = weight_total(support, weights);
  if (total == 0) return std::nullopt;
  // density(R) > alpha * density(ctx)  <=>  hit * c0 * den > num * total * |coset(R)|
  mpz_class lhs_scale = ctx.coset_cardinality() * alpha.get_den();
  mpz_class rhs_scale = total * alpha.get_num();
  long q = ctx.field().q();
  std::optional<Restriction> out;
  scan_restrictions(ctx, support, weights, s, budget,
                    [&](const mpz_class& hit, unsigned long e, const CandidateWalker& w,
                        const Side& S, const Side& A) {
                      if (hit == 0) return false;
                      if (hit * lhs_scale > rhs_scale * zpow(q, e)) {
                        out = w.as_restriction(S, A, false);
                        return true;
                      }
                      return false;
                    });
  return out;
}

std::vector<mpz_class> integer_weights(const Restriction& context, const std::vector<Mat>& support,
                                       const std::vector<mpq_class>& values) {
  if (support.size() != values.size()) throw ShapeMismatch("support and values differ in length");
  mpz_class den = 1;
  for (const auto& v : values) {
    if (v < 0) throw DomainError("quasiregularity needs a nonnegative function");
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  }
  std::vector<mpz_class> w;
  for (const auto& v : values) w.push_back(v.get_num() * (den / v.get_den()));
  for (const auto& a : support)
    if (!context.satisfied_by(a)) throw DomainError("support point outside the context");
  return w;
}

}  // namespace

std::optional<Restriction> is_quasiregular(const Family& fam, int s, const mpq_class& alpha,
                                           const Budget& budget) {
  return quasiregular_search(fam.context(), fam.members(), nullptr, s, alpha, budget);
}

std::optional<Restriction> function_quasiregular_witness(const Restriction& context,
                                                         const std::vector<Mat>& support,
                                                         const std::vector<mpq_class>& values,
                                                         int s, const mpq_class& alpha,
                                                         const Budget& budget) {
  auto w = integer_weights(context, support, values);
  return quasiregular_search(context, support, &w, s, alpha, budget);
}

mpq_class quasiregularity_ratio(const Restriction& context, const std::vector<Mat>& support,
                                const std::vector<mpq_class>& values, int s, const Budget& budget) {
  auto w = integer_weights(context, support, values);
  mpz_class total = weight_total(support, &w);
  if (total == 0) return 0;
  mpz_class c0 = context.coset_cardinality();
  long q = context.field().q();
  mpq_class best = 0;
  scan_restrictions(context, support, &w, s, budget,
                    [&](const mpz_class& hit, unsigned long e, const CandidateWalker&, const Side&,
                        const Side&) {
                      mpq_class r(hit * c0, total * zpow(q, e));
                      r.canonicalize();
                      if (r > best) best = r;
                      return false;
                    });
  return best;
}

// --------------------------------------------------------------- claim

std::string ClaimReport::to_json() const {
  json j;
  j["b"] = b;
  j["N"] = N;
  j["delta"] = delta.get_str();
  j["beta"] = beta.get_str();
  j["measure"] = measure.get_str();
  j["holds"] = holds;
  j["witness"] = witness ? json::parse(witness->to_json()) : json();
  return j.dump();
}

ClaimReport quasiregular_implies_uncaptureable_check(const Family& fam, int b, int N,
                                                     const mpq_class& delta,
                                                     const mpq_class& beta,
                                                     const Budget& budget) {
  ClaimReport rep;
  rep.b = b;
  rep.N = N;
  rep.delta = delta;
  rep.beta = beta;
  rep.measure = fam.measure();
  if (fam.context().complexity() > b) throw HypothesisUnmet("context complexity exceeds b");
  if (rep.measure < delta) throw HypothesisUnmet("measure is below delta");
  if (is_quasiregular(fam, 1, beta, budget)) throw HypothesisUnmet("family is not (1, beta)-quasiregular");
  long e = std::min(fam.m(), fam.n()) - N - b;
  mpq_class qe = e >= 0 ? mpq_class(zpow(fam.field().q(), e)) : mpq_class(1, zpow(fam.field().q(), -e));
  if (!(2 * beta < qe)) throw HypothesisUnmet("beta is not below q^{min(m,n)-N-b}/2");
  mpq_class half = delta / 2;
  rep.witness = is_captureable(fam, N, Surd(half), budget);
  rep.holds = !rep.witness.has_value();
  return rep;
}

// --------------------------------------------------------------- juntas

Junta::Junta(const Field& f, int n, int m, std::vector<Restriction> components, long C, int r)
    : f_(&f), n_(n), m_(m), comps_(std::move(components)), C_(C), r_(r) {
  if (static_cast<long>(comps_.size()) > C_) throw DomainError("junta has more than C components");
  for (const auto& c : comps_) {
    if (!(c.field() == f) || c.n() != n || c.m() != m) throw ShapeMismatch("junta component shape");
    if (!c.is_consistent()) throw InconsistentRestriction("junta component is empty");
    if (c.complexity() > r_) throw DomainError("junta component complexity exceeds r");
  }
}

Junta Junta::of(const Field& f, int n, int m, std::vector<Restriction> components) {
  int r = 0;
  for (const auto& c : components) r = std::max(r, c.complexity());
  long C = static_cast<long>(components.size());
  return Junta(f, n, m, std::move(components), C, r);
}

bool Junta::contains(const Mat& a) const {
  for (const auto& c : comps_)
    if (c.satisfied_by(a)) return true;
  return false;
}

std::vector<Mat> Junta::members(const Budget& budget) const {
  std::set<Mat> all;
  for (const auto& c : comps_)
    for (auto& a : c.enumerate(budget)) all.insert(std::move(a));
  return {all.begin(), all.end()};
}

std::string Junta::to_json() const {
  json j = json::array();
  for (const auto& c : comps_) j.push_back(json::parse(c.to_json()));
  return j.dump();
}

Junta junta_from_json(const Field& f, int n, int m, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("junta JSON: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("junta JSON must be a list of components");
  std::vector<Restriction> comps;
  for (const auto& c : j) comps.push_back(restriction_from_json(f, n, m, c.dump()));
  return Junta::of(f, n, m, std::move(comps));
}

JuntaPairResult is_strongly_t_intersecting(const Junta& j, int t) {
  const auto& cs = j.components();
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a; b < cs.size(); ++b)
      if (cs[a].col_agreement_dim(cs[b]) < t && cs[a].row_agreement_dim(cs[b]) < t)
        return {false, std::make_pair(static_cast<int>(a), static_cast<int>(b))};
  return {};
}

mpq_class junta_measure(const Junta& j, const Budget& budget) {
  const auto& cs = j.components();
  mpz_class total = zpow(j.field().q(), static_cast<unsigned long>(j.n()) * j.m());
  if (cs.empty()) return 0;
  if (cs.size() <= 12) {
    mpz_class acc = 0;
    std::size_t k = cs.size();
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      std::optional<Restriction> cur;
      bool empty = false;
      for (std::size_t i = 0; i < k && !empty; ++i) {
        if (!(mask >> i & 1)) continue;
        if (!cur) cur = cs[i];
        else {
          cur = cur->merge(cs[i]);
          if (!cur) empty = true;
        }
      }
      if (empty) continue;
      if (std::popcount(mask) % 2) acc += cur->coset_cardinality();
      else acc -= cur->coset_cardinality();
    }
    mpq_class v(acc, total);
    v.canonicalize();
    return v;
  }
  mpq_class v(mpz_class(j.members(budget).size()), total);
  v.canonicalize();
  return v;
}

Family dual_family(const Family& fam) {
  std::vector<Mat> t;
  for (const auto& a : fam.members()) t.push_back(a.transpose());
  return Family(dual_restriction(fam.context()), std::move(t));
}

// ---------------------------------------------------------- regularity

std::string to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::good: return "good";
    case NodeStatus::bad: return "bad";
    case NodeStatus::captured: return "captured";
    case NodeStatus::empty: return "empty";
  }
  return "?";
}

std::string DecompositionLog::to_json() const {
  json j;
  j["r"] = r;
  j["s"] = s;
  j["eps"] = eps.to_string();
  j["nodes"] = json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    json x;
    x["id"] = i;
    x["depth"] = nd.depth;
    x["status"] = to_string(nd.status);
    x["restriction"] = nd.restriction.is_consistent() ? json::parse(nd.restriction.to_json()) : json();
    x["measure"] = nd.measure.get_str();
    x["capture"] = nd.capture ? json::parse(nd.capture->to_json()) : json();
    x["children"] = nd.children;
    j["nodes"].push_back(std::move(x));
  }
  return j.dump();
}

Surd default_regularity_eps(long q, int m, int n, int r) {
  long num = -4L * std::min(m, n) * r + static_cast<long>(r) * r;
  return Surd::power(mpq_class(q), num, 4);
}

Surd regularity_mass_bound(long q, int r, int s, const Surd& eps) {
  mpq_class c = 2 * mpq_class(zpow(q, r)) * mpq_class(zpow(zpow(q, s).get_si() - 1, r));
  return Surd(c) * eps;
}

std::pair<Junta, DecompositionLog> regularity_decompose(const Family& fam, int r, int s,
                                                        std::optional<Surd> eps,
                                                        const Budget& budget) {
  if (r < 1 || s < 1) throw DomainError("regularity needs r, s >= 1");
  DecompositionLog log;
  log.r = r;
  log.s = s;
  log.eps = eps ? *eps : default_regularity_eps(fam.field().q(), fam.m(), fam.n(), r);
  const Restriction& root_ctx = fam.context();
  int base = root_ctx.complexity();
  std::vector<Restriction> good;

  // Pending nodes hold a consistent restriction; children are appended in
  // the order x in S \ {0}, then a in A \ {0}.
  log.nodes.push_back({root_ctx, 0, NodeStatus::captured, std::nullopt, {}, fam.measure()});
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t id = stack.back();
    stack.pop_back();
    budget.check_deadline("regularity decomposition");
    Restriction node_r = log.nodes[id].restriction;
    int depth = log.nodes[id].depth;
    std::vector<Mat> sub;
    for (const auto& a : fam.members())
      if (node_r.satisfied_by(a)) sub.push_back(a);
    Family local(node_r, std::move(sub));
    log.nodes[id].measure = local.measure();
    if (depth == r) {
      log.nodes[id].status = NodeStatus::bad;
      continue;
    }
    auto cap = is_captureable(local, s, log.eps, budget);
    if (!cap) {
      log.nodes[id].status = NodeStatus::good;
      good.push_back(node_r);
      continue;
    }
    log.nodes[id].status = NodeStatus::captured;
    log.nodes[id].capture = cap;
    std::vector<Restriction> kids;
    auto xs = cap->col_domain().elements();
    for (std::size_t i = 1; i < xs.size(); ++i)
      kids.push_back(Restriction::pair(fam.field(), fam.n(), fam.m(), {{xs[i], cap->col_value(xs[i])}}, {}));
    auto as = cap->row_domain().elements();
    for (std::size_t i = 1; i < as.size(); ++i)
      kids.push_back(Restriction::pair(fam.field(), fam.n(), fam.m(), {}, {{as[i], cap->row_value(as[i])}}));
    std::vector<std::size_t> new_ids;
    for (const auto& k : kids) {
      auto merged = node_r.merge(k);
      std::size_t cid = log.nodes.size();
      log.nodes[id].children.push_back(static_cast<int>(cid));
      if (!merged) {
        // constraint clashes with the node: the child coset is empty
        log.nodes.push_back({Restriction::pair(fam.field(), fam.n(), fam.m(), {}, {}), depth + 1,
                             NodeStatus::empty, std::nullopt, {}, 0});
        continue;
      }
      log.nodes.push_back({*merged, depth + 1, NodeStatus::captured, std::nullopt, {}, 0});
      new_ids.push_back(cid);
    }
    for (auto it = new_ids.rbegin(); it != new_ids.rend(); ++it) stack.push_back(*it);
  }

  // Duplicate leaves arise for q > 2 (x and cx give the same constraint).
  std::vector<Restriction> comps;
  for (const auto& g : good)
    if (std::find(comps.begin(), comps.end(), g) == comps.end()) comps.push_back(g);
  long C = 1;
  for (int i = 0; i < r; ++i) C *= upow(fam.field().q(), s) - 1;
  int max_c = 0;
  for (const auto& c : comps) max_c = std::max(max_c, c.complexity());
  Junta j(fam.field(), fam.n(), fam.m(), comps, std::max<long>(C, static_cast<long>(comps.size())),
          std::max(max_c, base + r - 1));
  return {std::move(j), std::move(log)};
}

std::string RegularityCheck::to_json() const {
  json j;
  j["uncovered_measure"] = uncovered_measure.get_str();
  j["bound"] = bound.to_string();
  j["mass_ok"] = mass_ok;
  j["components_ok"] = components_ok;
  j["leaves_uncaptureable"] = leaves_uncaptureable;
  return j.dump();
}

RegularityCheck check_regularity(const Family& fam, const Junta& j, const DecompositionLog& log,
                                 const Budget& budget) {
  RegularityCheck rc;
  std::size_t outside = 0;
  for (const auto& a : fam.members())
    if (!j.contains(a)) ++outside;
  rc.uncovered_measure = mpq_class(mpz_class(outside), fam.context().coset_cardinality());
  rc.uncovered_measure.canonicalize();
  rc.bound = regularity_mass_bound(fam.field().q(), log.r, log.s, log.eps);
  rc.mass_ok = Surd(rc.uncovered_measure) <= rc.bound;
  long cap = 1;
  for (int i = 0; i < log.r; ++i) cap *= upow(fam.field().q(), log.s) - 1;
  rc.components_ok = static_cast<long>(j.components().size()) <= cap;
  int base = fam.context().complexity();
  for (const auto& c : j.components())
    if (c.complexity() - base >= log.r) rc.components_ok = false;
  rc.leaves_uncaptureable = true;
  for (const auto& c : j.components()) {
    std::vector<Mat> sub;
    for (const auto& a : fam.members())
      if (c.satisfied_by(a)) sub.push_back(a);
    if (is_captureable(Family(c, std::move(sub)), log.s, log.eps, budget))
      rc.leaves_uncaptureable = false;
  }
  return rc;
}

// ------------------------------------------------------------ bootstrap

BootstrapResult bootstrap_quasiregular(const Family& fam, int s_target, const mpq_class& alpha,
                                       int max_steps, const Budget& budget) {
  if (fam.empty()) throw PreconditionViolated("bootstrap needs a family of positive measure");
  BootstrapResult res{{}, fam, {fam.measure()}};
  for (;;) {
    auto w = is_quasiregular(res.family, s_target, alpha, budget);
    if (!w) return res;
    if (static_cast<int>(res.chain.size()) >= max_steps)
      throw StepBudgetExhausted("bootstrap did not reach quasiregularity within the step budget",
                                res.chain, res.family);
    res.family = restrict(res.family, *w);
    res.chain.push_back(*w);
    res.measures.push_back(res.family.measure());
  }
}

}  // namespace linex
