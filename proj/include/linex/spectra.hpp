#pragma once

// Spectra of the row-normalized Cayley graphs Gamma_t on L(V,W), generated by
// I_t = {A : dim ker A = t} (rank m - t). Vertices are n x m matrices; the
// eigenvalue on U_d is read off a rank-d dual matrix X (m x n).

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "linex/cyclo.hpp"
#include "linex/families.hpp"
#include "linex/fourier.hpp"
#include "linex/mis.hpp"

namespace linex {

struct CayleySpectrum {
  long q = 0;
  int m = 0;
  int n = 0;
  int t = 0;
  std::vector<Cyclo> lambda;      // by d = 0..min(m,n)
  std::vector<mpz_class> mult;    // dim U_d
  mpz_class gen_count;            // |I_t|
  bool trace_check = false;       // sum mult lambda^2 == 1/phi
  bool real_check = false;        // every lambda equals its conjugate
  /// lambda_d as a rational (eigenvalues of these graphs are rational).
  mpq_class rational(int d) const;
  std::string to_json() const;
};

/// Identity block in the top-left of an m x n matrix.
Mat canonical_dual(const Field& f, int m, int n, int d);

/// (1/|I_t|) sum over I_t of u_X(A) for a given m x n dual X.
Cyclo normalized_character_sum(const Mat& X, int t, const Budget& budget = default_budget());
Cyclo eigenvalue(long q, int m, int n, int t, int d, const Budget& budget = default_budget());
CayleySpectrum spectrum(long q, int m, int n, int t, const Budget& budget = default_budget());

struct RankInvarianceReport {
  int d = 0;
  long checked = 0;
  bool holds = false;
  std::optional<Mat> witness;  // a dual whose sum differs from the canonical one
  std::string to_json() const;
};

RankInvarianceReport rank_invariance_check(long q, int m, int n, int t, int d,
                                           const Budget& budget = default_budget());

struct EigenvalueBoundReport {
  int d = 0;
  mpq_class lambda_sq;
  mpq_class bound_sq;  // 1 / (phi(m,n,t) dim U_d)
  bool holds = false;
  std::string to_json() const;
};

EigenvalueBoundReport eigenvalue_bound_check(long q, int m, int n, int t, int d,
                                             const Budget& budget = default_budget());

struct BilinearReport {
  int t = 0;
  Cyclo direct{2};
  Cyclo spectral{2};
  bool holds = false;
  std::string to_json() const;
};

/// <f, M_{t-1} g> by the double sum over pairs with agreement dimension t-1,
/// and by E f conj(E g) + sum_{d >= 1} lambda_d <f^{=d}, g^{=d}>.
BilinearReport bilinear_decomposition(const DenseFunction& f, const DenseFunction& g, int t,
                                      const Budget& budget = default_budget());

/// -lambda_min / (1 - lambda_min); throws NoNegativeEigenvalue.
mpq_class hoffman_bound(const CayleySpectrum& s);

/// No distinct pair of members agrees on exactly t dimensions.
PredicateResult independence_check(const Family& fam, int t);

/// Gamma_t on the q^{nm} matrices (vertex = matrix index); requires t < m.
Graph cayley_graph(long q, int m, int n, int t, const Budget& budget = default_budget());

struct HoffmanReport {
  long q = 0;
  int m = 0;
  int n = 0;
  int t = 0;
  long vertices = 0;
  mpq_class bound;
  long mis_size = 0;
  mpq_class mis_measure;
  long clique_size = 0;  // clique used for the alpha * omega <= N cap
  bool exact = false;    // the independent set is certified maximum
  bool holds = false;    // exact and bound >= mis_measure
  std::uint64_t nodes = 0;
  std::string to_json() const;
};

/// Exact maximum independent set of Gamma_t compared with the ratio bound.
HoffmanReport hoffman_check(long q, int m, int n, int t, const Budget& budget = default_budget());

}  // namespace linex
