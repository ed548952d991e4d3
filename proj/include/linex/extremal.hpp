#pragma once

// Extremal constructions in GL(n, q): canonical column/row families, Singer
// cycles, the derangement process for maps fixing e_1..e_t, exhaustive and
// augmentation checks of the (t-1)-intersection-free bound, and SL families.
// Matrices act on column vectors, so sigma(e_i) is column i.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "linex/families.hpp"

namespace linex {

enum class Side { column, row };

/// column: sigma in GL(n,q) with sigma(e_i) = e_i for i <= t; row: transposes.
Family canonical_family(int n, long q, int t, Side side, const Budget& budget = default_budget());

/// Multiplication by a generator of F_{q^n}^x in the power basis of the
/// smallest monic irreducible of degree n; the subgroup it generates.
Family singer_cycle(int n, long q, const Budget& budget = default_budget());

struct SingerReport {
  int n = 0;
  long q = 0;
  long order = 0;
  bool closed = false;          // H is closed under multiplication
  bool disagreement = false;    // distinct members differ on every nonzero vector
  mpz_class gl_order;
  bool coset_bound = false;     // m_qt(n, q, 1) == |GL| / (q^n - 1)
  bool holds = false;
  std::string to_json() const;
};

SingerReport singer_check(int n, long q, const Budget& budget = default_budget());

/// {v in span(e_1..e_t) : tau v = v}; throws PreconditionViolated unless its
/// dimension is at most t - 1 and tau is invertible.
int derangement_fixed_dim(int n, int t, const Mat& tau);

/// |H| for H = {sigma in J cap GL : dim a(sigma, tau) = t - 1}.
mpz_class derangement_enumerate(int n, long q, int t, const Mat& tau, const Budget& budget = default_budget());
/// H itself, as matrix indices.
std::vector<std::uint64_t> derangement_set(int n, long q, int t, const Mat& tau,
                                           const Budget& budget = default_budget());

/// Every output of the choice process (requires 3t <= n); the visitor
/// returns false to stop. Returns the number of outputs visited.
std::uint64_t derangement_construct(int n, long q, int t, const Mat& tau,
                                    const std::function<bool(const Mat&)>& visit,
                                    const Budget& budget = default_budget());
/// Number of outputs of the process, counted without materializing the last step.
mpz_class derangement_construct_count(int n, long q, int t, const Mat& tau,
                                      const Budget& budget = default_budget());
/// One output with uniformly random choices at each step.
Mat derangement_sample(int n, long q, int t, const Mat& tau, std::mt19937_64& rng);

struct DerangementReport {
  int n = 0;
  long q = 0;
  int t = 0;
  int d = 0;                  // dim of the fixed part D
  int k = 0;                  // dim(T + tau^{-1} T)
  mpz_class H;                // exact |H|
  mpz_class m_qt;
  mpz_class w_count;          // (t-d-1)-subspaces meeting T + tau^{-1} T trivially
  mpq_class w_bound;          // [n, t-d-1]_q / 4
  mpz_class choice_product;   // prod_{i=2t-d}^{n} (q^n - q^{i-1} - q^{i-t})
  mpq_class product_bound;    // w_bound * choice_product
  mpz_class choices;          // exact number of choice sequences of the process
  std::optional<mpz_class> distinct_yields;  // only when every output was materialized
  std::uint64_t yields_checked = 0;
  bool yields_in_H = false;
  mpq_class ratio;            // 4|H| / m_qt
  mpq_class ratio_middle;     // [n, t-d-1]_q * choice_product / m_qt, as a quotient of products
  mpq_class inner;            // ratio_middle times prod_{i<=t-d-1} (q^{t-d-1} - q^{i-1})
  mpq_class phi_product;      // prod_{j=1}^{n-2t+d+1} (1 - q^{-j})
  mpz_class denom;            // prod_{i=1}^{t-d-1} (q^{t-d-1} - q^{i-1})
  mpq_class ratio_floor;      // q^{-(t-1)^2} / 4
  bool w_ok = false;          // w_count >= w_bound
  bool construct_ok = false;  // choices >= w_count * choice_product
  bool h_ok = false;          // |H| >= choices (and >= distinct yields) >= product_bound
  bool chain_applies = false; // t >= 2: the factorwise step inner >= phi_product is asserted
  bool ratio_ok = false;      // ratio >= ratio_middle = inner/denom, phi_product > 1/4,
                              // denom <= q^{(t-1)^2}, ratio > ratio_floor
  bool holds = false;
  std::string to_json() const;
};

/// Runs the whole counting chain. `samples` random process outputs are checked
/// against H; when `full_yields` is set every output is checked instead.
DerangementReport derangement_check(int n, long q, int t, const Mat& tau, bool full_yields, int samples,
                                    std::uint64_t seed, const Budget& budget = default_budget());

enum class ExtremalMode { exhaustive, sample, spectral };

struct ExtremalReport {
  std::string claim;
  std::map<std::string, std::string> params;
  std::string value;
  std::string bound;
  std::string status;  // confirmed | exploratory | violated
  std::vector<Mat> witness;
  // exhaustive mode
  long optimum_count = 0;     // number of maximum families found
  bool all_canonical = false; // each has a common t-dim agreement (columns or rows)
  std::string to_json() const;
};

/// Largest (t-1)-intersection-free family of GL(n,q) (exhaustive), maximality
/// of the canonical family under one-element augmentation (sample), or the
/// ratio bound of Gamma_{t-1} scaled to L(V,V) (spectral).
ExtremalReport verify_extremal_bound(int n, long q, int t, ExtremalMode mode,
                                     const Budget& budget = default_budget());

/// Common agreement dimension of a family: dim of {v : sigma(v) = sigma_0(v) for all sigma}.
int common_agreement_dim(const std::vector<Mat>& fam);

struct SlReport {
  int n = 0;
  long q = 0;
  int t = 0;
  mpz_class size;
  mpq_class expected;  // m_qt / (q - 1)
  bool holds = false;
  std::string to_json() const;
};

/// Canonical column family intersected with SL(n, q).
std::pair<Family, SlReport> sl_family(int n, long q, int t, const Budget& budget = default_budget());

}  // namespace linex
