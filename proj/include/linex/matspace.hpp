#pragma once

// Matrices over F_q, canonical subspaces, rank/kernel/agreement, counting
// formulas and enumeration.
//
// Index convention: a matrix (or vector) is identified with the base-q
// integer whose digits are its entry codes in row-major order, entry (0,0)
// most significant. Increasing index is lexicographic order of entries.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "linex/budget.hpp"
#include "linex/gf.hpp"

namespace linex {

using Vec = std::vector<Elem>;

/// q^e as an exact integer; throws DomainError if it does not fit 63 bits.
std::uint64_t upow(std::uint64_t q, unsigned e);

std::uint64_t vec_index(const Field& f, const Vec& v);
Vec vec_from_index(const Field& f, int len, std::uint64_t idx);
Elem dot(const Field& f, const Vec& a, const Vec& b);
bool is_zero(const Vec& v);

class Mat {
 public:
  Mat(const Field& f, int rows, int cols);
  static Mat identity(const Field& f, int n);
  static Mat from_index(const Field& f, int rows, int cols, std::uint64_t idx);
  static Mat from_rows(const Field& f, const std::vector<Vec>& rows, int cols);
  /// Entries given as integers, reduced via the coefficient encoding.
  static Mat from_ints(const Field& f, const std::vector<std::vector<int>>& rows);

  const Field& field() const { return *f_; }
  int rows() const { return n_; }
  int cols() const { return m_; }
  Elem at(int i, int j) const { return e_[static_cast<std::size_t>(i) * m_ + j]; }
  void set(int i, int j, Elem v) { e_[static_cast<std::size_t>(i) * m_ + j] = v; }
  const std::vector<Elem>& entries() const { return e_; }

  std::uint64_t index() const;
  Vec row(int i) const;
  Vec col(int j) const;
  Vec apply(const Vec& v) const;       // A v
  Vec apply_left(const Vec& a) const;  // a^T A, as a row vector
  Mat transpose() const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat scaled(Elem c) const;
  /// Submatrix rows [r0, r0+nr), cols [c0, c0+nc).
  Mat block(int r0, int c0, int nr, int nc) const;

  bool operator==(const Mat& o) const;
  bool operator<(const Mat& o) const { return e_ < o.e_; }

  /// q=<q>;n=<rows>;m=<cols>;rows=a,b;c,d
  std::string literal() const;

 private:
  void check_same(const Mat& o) const;
  const Field* f_;
  int n_;
  int m_;
  std::vector<Elem> e_;
};

Mat parse_literal(const std::string& text);

/// Row-reduce in place; returns pivot columns. If `reverse_cols`, columns are
/// scanned right to left (pivots land on the latest columns).
std::vector<int> rref(const Field& f, std::vector<Vec>& rows, int ncols, bool reverse_cols = false);

/// Subspace of F_q^k stored as RREF basis rows.
class Subspace {
 public:
  Subspace(const Field& f, int ambient);  // zero subspace
  static Subspace span(const Field& f, int ambient, std::vector<Vec> vectors);
  static Subspace full(const Field& f, int ambient);

  const Field& field() const { return *f_; }
  int ambient() const { return k_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }

  bool contains(const Vec& v) const;
  /// Coordinates of v in the RREF basis; throws DomainError if v is outside.
  Vec coords(const Vec& v) const;
  Subspace intersect(const Subspace& o) const;
  Subspace plus(const Subspace& o) const;
  /// {x : <x, s> = 0 for all s}.
  Subspace annihilator() const;
  /// All q^dim vectors, ordered by coordinate tuple (first coordinate most significant).
  std::vector<Vec> elements() const;
  /// Tuple of basis-row indices; the canonical ordering key.
  std::vector<std::uint64_t> key() const;

  bool operator==(const Subspace& o) const { return k_ == o.k_ && basis_ == o.basis_; }
  bool operator<(const Subspace& o) const { return key() < o.key(); }

 private:
  const Field* f_;
  int k_;
  std::vector<Vec> basis_;
  std::vector<int> pivots_;
};

/// Every d-dimensional subspace of F_q^k, sorted by key(). Cached.
const std::vector<Subspace>& all_subspaces(const Field& f, int k, int d);

int rank(const Mat& a);
/// Rank of a GF(2) matrix given as bit-packed rows.
int rank_gf2(std::vector<std::uint64_t> rows);
Subspace kernel(const Mat& a);
Subspace image(const Mat& a);
Subspace row_space(const Mat& a);
Subspace agreement(const Mat& a1, const Mat& a2);
int dual_agreement_dim(const Mat& a1, const Mat& a2);

/// dim{z in ker(D0) : (A1' - A2' + F0' D0') z in colspace(F0)}.
int block_agreement_dim(const Mat& a1p, const Mat& a2p, const Mat& d0, const Mat& f0,
                        const Mat& d0p, const Mat& f0p);

/// Drops the first `d` columns and first `dp` rows.
Mat delete_leading(const Mat& a, int d, int dp);

// ---- counting ----
mpz_class gaussian_binomial(int m, int d, long q);
mpz_class count_rank_d(int n, int m, int d, long q);
mpz_class m_qt(int n, long q, int t);
mpq_class phi(int m, int n, int t, long q);
mpz_class count_subspaces_avoiding(int n, int k, int d, long q);
mpz_class gl_order(int n, long q);

struct CountReport {
  std::string kind;
  std::map<std::string, long> params;
  mpq_class value;
  std::string to_json() const;
};

// ---- enumeration ----
using MatVisitor = std::function<bool(const Mat&)>;  // return false to stop

/// Matrices with index in [begin, end), in index order.
void for_each_matrix(const Field& f, int n, int m, std::uint64_t begin, std::uint64_t end,
                     const MatVisitor& visit, const Budget& budget = default_budget());
void for_each_matrix(const Field& f, int n, int m, const MatVisitor& visit,
                     const Budget& budget = default_budget());
void for_each_rank(const Field& f, int n, int m, int d, const MatVisitor& visit,
                   const Budget& budget = default_budget());
void for_each_gl(const Field& f, int n, const MatVisitor& visit,
                 const Budget& budget = default_budget());
void for_each_sl(const Field& f, int n, const MatVisitor& visit,
                 const Budget& budget = default_budget());

std::vector<Mat> enumerate_all(const Field& f, int n, int m, const Budget& budget = default_budget());
std::vector<Mat> enumerate_rank(const Field& f, int n, int m, int d,
                                const Budget& budget = default_budget());
std::vector<Mat> enumerate_gl(const Field& f, int n, const Budget& budget = default_budget());
std::vector<Mat> enumerate_sl(const Field& f, int n, const Budget& budget = default_budget());

Elem determinant(const Mat& a);

/// Affine solution set {x : E x = rhs} over F_q^nvars, parametrised so that
/// enumerating free-variable tuples in lexicographic order lists solutions in
/// lexicographic order.
class AffineSolutions {
 public:
  AffineSolutions(const Field& f, int nvars, std::vector<Vec> equations, Vec rhs);
  bool empty() const { return empty_; }
  int free_count() const { return static_cast<int>(free_.size()); }
  /// Solution for the idx-th free tuple (first free variable most significant).
  Vec solution(std::uint64_t idx) const;
  void solution_into(std::uint64_t idx, Vec& out) const;

 private:
  const Field* f_;
  int nvars_;
  bool empty_ = false;
  std::vector<int> free_;
  // pivot variable -> (constant, [(free position, coefficient)])
  struct PivotRow {
    int var;
    Elem constant;
    std::vector<std::pair<int, Elem>> terms;
  };
  std::vector<PivotRow> pivots_;
};

}  // namespace linex
