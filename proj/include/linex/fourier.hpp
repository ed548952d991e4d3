#pragma once

// Characters u_X(A) = omega^{tau(Tr(XA))} of (L(V,W), +), exact transforms,
// rank components, image/kernel projections, and the inequality checks built
// on them.
//
// Shapes: A in L(V,W) is n x m; the dual X in L(W,V) is m x n, so
// Tr(XA) = sum_{i,j} X[j][i] A[i][j], im(X) <= F^m and ker(X) <= F^n.

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "linex/cyclo.hpp"
#include "linex/restriction.hpp"
#include "linex/surd.hpp"

namespace linex {

class Family;

class DenseFunction {
 public:
  /// Zero function on L(V,W).
  DenseFunction(const Field& f, int n, int m);
  /// Values indexed by matrix index.
  DenseFunction(const Field& f, int n, int m, std::vector<Cyclo> values);
  /// Function on the coset of `context`; values in lexicographic coset order.
  DenseFunction(const Restriction& context, std::vector<Cyclo> values);

  static DenseFunction from_rational(const Field& f, int n, int m, const std::vector<mpq_class>& v);
  /// Indicator of the family's members, on its context coset.
  static DenseFunction indicator(const Family& fam);
  /// A -> u_X(A) for X of shape m x n.
  static DenseFunction character(const Mat& X, int n, int m);

  const Field& field() const { return *f_; }
  int n() const { return n_; }
  int m() const { return m_; }
  const std::optional<Restriction>& context() const { return ctx_; }
  const std::vector<Cyclo>& values() const { return v_; }
  std::size_t size() const { return v_.size(); }
  /// Matrices of the domain in value order.
  std::vector<Mat> domain() const;

  bool is_rational() const;
  /// Values as rationals; throws NotRational.
  std::vector<mpq_class> rational_values() const;
  bool is_indicator() const;
  bool is_zero() const;

  /// E[f].
  Cyclo mean() const;
  /// E[f conj(g)].
  Cyclo inner(const DenseFunction& g) const;
  /// E[|f|^2]; throws NotRational when it is irrational (complex values, p >= 5).
  mpq_class norm2() const;

  /// The function Y -> f(sigma0 + Q Y P) on the (n - dimA) x (m - dimS)
  /// space of chart coordinates. Identity for full-space functions.
  DenseFunction to_chart() const;

  DenseFunction operator+(const DenseFunction& o) const;
  DenseFunction operator-(const DenseFunction& o) const;
  DenseFunction scaled(const Cyclo& c) const;
  bool operator==(const DenseFunction& o) const;

 private:
  void check_same(const DenseFunction& o) const;
  const Field* f_;
  int n_;
  int m_;
  std::optional<Restriction> ctx_;
  std::vector<Cyclo> v_;
};

class Spectrum {
 public:
  /// Coefficients on L(W,V) for functions on n x m matrices.
  Spectrum(const Field& f, int n, int m, std::vector<Cyclo> coeffs);

  const Field& field() const { return *f_; }
  int n() const { return n_; }
  int m() const { return m_; }
  const std::vector<Cyclo>& coeffs() const { return c_; }
  /// Coefficient of the m x n dual matrix X.
  const Cyclo& at(const Mat& X) const;
  /// sum_X |coeff|^2; throws NotRational when irrational.
  mpq_class parseval_sum() const;
  bool operator==(const Spectrum& o) const { return *f_ == *o.f_ && n_ == o.n_ && m_ == o.m_ && c_ == o.c_; }
  /// [{"X": literal, "re": [coefficient strings]}] for the nonzero entries.
  std::string to_json() const;

 private:
  const Field* f_;
  int n_;
  int m_;
  std::vector<Cyclo> c_;
};

/// tau(Tr(XA)) in [0, p).
int trace_pairing(const Mat& X, const Mat& A);
Cyclo character(const Mat& X, const Mat& A);

/// Direct character sums (the reference transform).
Spectrum transform(const DenseFunction& f, const Budget& budget = default_budget());
/// Axis-by-axis transform over the F_p digits of the matrix index.
Spectrum fast_transform(const DenseFunction& f, const Budget& budget = default_budget());
DenseFunction inverse_transform(const Spectrum& s, const Budget& budget = default_budget());

/// Rank of every dual matrix X (index order), for the shape m x n.
std::vector<int> dual_ranks(const Field& f, int n, int m);

DenseFunction rank_component(const DenseFunction& f, int d);
/// Throws ZeroFunction for f = 0.
int degree(const DenseFunction& f);
DenseFunction project_image(const DenseFunction& f, const Subspace& Vp);
DenseFunction project_kernel(const DenseFunction& f, const Subspace& Wp);

/// ||Pi_{V'} f||^2 for every V' of dimension d (keyed by Subspace::key), and
/// likewise ||Pi_{W'} f||^2 over W' of codimension d.
struct ProjectionNorms {
  std::vector<std::pair<std::vector<std::uint64_t>, mpq_class>> image;
  std::vector<std::pair<std::vector<std::uint64_t>, mpq_class>> kernel;
};
ProjectionNorms projection_norms(const Spectrum& s, int d);

struct HypercontractiveReport {
  int d = 0;
  int k = 0;
  mpq_class lhs;        // E|f^{=d}|^k
  mpq_class proj_sum;   // sum of ||Pi||_2^k over both projection families
  Surd rhs;
  bool holds = false;
  std::string to_json() const;
};

/// Requires k >= 4 even and 1 <= d <= min(m,n); f is replaced by f^{=d}.
HypercontractiveReport verify_hypercontractive(const DenseFunction& f, int d, int k);

struct SumRankNullityReport {
  int r = 0;
  int image_dim = 0;
  int kernel_codim = 0;
  bool holds = false;
  std::string to_json() const;
};

/// X_i are m x n dual matrices of rank 1 with sum lambda_i X_i = 0.
SumRankNullityReport check_sum_rank_nullity(const std::vector<Elem>& lambdas,
                                            const std::vector<Mat>& Xs);

struct ProjectionLemmaReport {
  int s = 0;
  mpq_class C;
  mpq_class mean;
  mpq_class max_norm;  // largest ||Pi||^2 over the checked projections
  long checked = 0;
  bool holds = false;
  std::string to_json() const;
};

/// For a nonnegative rational f that is (s, C)-quasiregular with C >= 1,
/// checks ||Pi_{V'} f||^2 <= C^2 E[f]^2 for dim V' <= s and the kernel
/// analogue for codim W' <= s. Throws NotQuasiregular if the hypothesis fails.
ProjectionLemmaReport projection_norm_lemma_check(const DenseFunction& f, int s, const mpq_class& C);

struct LevelDReport {
  int d = 0;
  int k = 0;
  int s = 0;
  mpq_class C;
  mpq_class mean;
  mpq_class level;       // E|f^{=d}|^2
  mpq_class level_pow;   // level^k
  mpq_class moment;      // E|f^{=d}|^k
  Surd hyper_rhs;
  Surd constant_k;       // K^k
  Surd final_rhs;        // K^k C^k mean^{2k-1}
  bool holder_ok = false;
  bool hyper_ok = false;
  bool lemma_ok = false;
  bool holds = false;
  std::string to_json() const;
};

/// Composes the Hoelder step, the hypercontractive bound and the
/// projection-norm lemma into an explicit bound on E|f^{=d}|^2 (k-th powers).
LevelDReport level_d_bound_check(const DenseFunction& f, int d, int k, int s, const mpq_class& C);

}  // namespace linex
