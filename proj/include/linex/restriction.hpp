#pragma once

// Constraint cosets L(V,W)(Pi, pi): sigma(v) = w for column constraints and
// a^T sigma = b^T for row constraints. Matrices are n x m (n = dim W).

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "linex/matspace.hpp"

namespace linex {

struct ColConstraint {
  Vec v;  // in F^m
  Vec w;  // in F^n
  bool operator==(const ColConstraint&) const = default;
};

struct RowConstraint {
  Vec a;  // functional on W, in F^n
  Vec b;  // functional on V, in F^m
  bool operator==(const RowConstraint&) const = default;
};

/// Coordinates of the coset: sigma = sigma0 + Q * Y * P with Y ranging over
/// all (n - dimA) x (m - dimS) matrices.
struct CosetChart {
  Mat sigma0;
  Mat Q;  // n x (n - dimA)
  Mat P;  // (m - dimS) x m
  Mat embed(const Mat& y) const { return sigma0 + Q * y * P; }
};

class Restriction {
 public:
  Restriction(const Field& f, int n, int m);
  /// Span-normalises both constraint lists (RREF of [v|w] and [a|b]).
  /// Throws InconsistentRestriction if the coset is empty.
  static Restriction make(const Field& f, int n, int m, std::vector<ColConstraint> cols,
                          std::vector<RowConstraint> rows);
  /// Like make, but returns nullopt instead of throwing.
  static std::optional<Restriction> try_make(const Field& f, int n, int m,
                                             std::vector<ColConstraint> cols,
                                             std::vector<RowConstraint> rows);
  /// A pair of partial maps (Pi, pi) with no cross condition between them, as
  /// used for avoidance. Each side must still be a well-defined linear map.
  static Restriction pair(const Field& f, int n, int m, std::vector<ColConstraint> cols,
                          std::vector<RowConstraint> rows);
  /// False when a(w) != b(v) for some column/row pair (the coset is empty).
  bool is_consistent() const { return consistent_; }

  const Field& field() const { return *f_; }
  int n() const { return n_; }
  int m() const { return m_; }
  const std::vector<ColConstraint>& cols() const { return cols_; }
  const std::vector<RowConstraint>& rows() const { return rows_; }
  int dim_s() const { return static_cast<int>(cols_.size()); }
  int dim_a() const { return static_cast<int>(rows_.size()); }
  int complexity() const { return dim_s() + dim_a(); }
  bool is_empty() const { return cols_.empty() && rows_.empty(); }

  Subspace col_domain() const;
  Subspace row_domain() const;
  /// Pi(x) for x in the column domain.
  Vec col_value(const Vec& x) const;
  /// pi(a) for a in the row domain.
  Vec row_value(const Vec& a) const;

  bool satisfied_by(const Mat& sigma) const;
  /// Union of both constraint sets; nullopt if the merged coset is empty.
  std::optional<Restriction> merge(const Restriction& o) const;
  mpz_class coset_cardinality() const;
  CosetChart chart() const;
  /// Coset members in lexicographic order.
  std::vector<Mat> enumerate(const Budget& budget = default_budget()) const;

  /// Partial-map agreement dimensions on intersected domains.
  int col_agreement_dim(const Restriction& o) const;
  int row_agreement_dim(const Restriction& o) const;

  bool operator==(const Restriction& o) const;
  std::string to_json() const;
  std::string describe() const;

 private:
  const Field* f_;
  int n_;
  int m_;
  std::vector<ColConstraint> cols_;
  std::vector<RowConstraint> rows_;
  bool consistent_ = true;

  static std::optional<Restriction> build(const Field& f, int n, int m, std::vector<ColConstraint> cols,
                                          std::vector<RowConstraint> rows, bool allow_cross);
  void require_consistent() const;
};

/// The transpose restriction on L(W, V): columns and rows swap roles.
Restriction dual_restriction(const Restriction& r);

/// Parse {"cols":[[v,w],...],"rows":[[a,b],...]} given as JSON text.
Restriction restriction_from_json(const Field& f, int n, int m, const std::string& text);

}  // namespace linex
