#pragma once

// Explicit families of linear maps, juntas, intersection predicates,
// captureability / quasiregularity searches, the regularity decomposition
// and the density-increment bootstrap.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "linex/errors.hpp"
#include "linex/restriction.hpp"
#include "linex/surd.hpp"

namespace linex {

class Family {
 public:
  /// Empty family in L(V,W) with no context.
  Family(const Field& f, int n, int m);
  /// Members are sorted (index order) and deduplicated.
  Family(const Field& f, int n, int m, std::vector<Mat> members);
  /// Family living in the coset of `context`; throws DomainError if a member
  /// violates the context.
  Family(const Restriction& context, std::vector<Mat> members);

  static Family full(const Field& f, int n, int m, const Budget& budget = default_budget());
  /// The coset of `r` as a family of L(V,W) (no context).
  static Family coset(const Restriction& r, const Budget& budget = default_budget());

  const Field& field() const { return *f_; }
  int n() const { return n_; }
  int m() const { return m_; }
  const Restriction& context() const { return context_; }
  const std::vector<Mat>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(const Mat& a) const;

  /// |members| / |coset of the context|.
  mpq_class measure() const;

  bool operator==(const Family& o) const;

 private:
  const Field* f_;
  int n_;
  int m_;
  Restriction context_;
  std::vector<Mat> members_;
};

class StepBudgetExhausted : public Error {
 public:
  StepBudgetExhausted(const std::string& what, std::vector<Restriction> chain, Family family)
      : Error(what), chain_(std::move(chain)), family_(std::move(family)) {}
  const std::vector<Restriction>& chain() const { return chain_; }
  const Family& family() const { return family_; }

 private:
  std::vector<Restriction> chain_;
  Family family_;
};

mpz_class coset_cardinality(const Restriction& r);

/// Members satisfying `r`, inside the merged context. Throws DomainOverlap
/// unless the domains of `r` meet the context domains trivially, and
/// InconsistentRestriction if the merged coset is empty.
Family restrict(const Family& fam, const Restriction& r);
/// Members disagreeing with Pi on every nonzero x in S and with pi on every
/// nonzero a in A. `r` may be a cross-inconsistent pair. Context unchanged.
Family restrict_avoiding(const Family& fam, const Restriction& r);

struct PairWitness {
  Mat a;
  Mat b;
};

struct PredicateResult {
  bool holds = true;
  std::optional<PairWitness> witness;
};

PredicateResult is_t_intersecting(const Family& fam, int t);
/// No distinct pair agrees on exactly `t_minus_1` dimensions.
PredicateResult is_intersection_free(const Family& fam, int t_minus_1);

/// First (Pi, pi) of complexity <= s whose avoiders have measure <= eps, in
/// the documented candidate order; nullopt means (s, eps)-uncaptureable.
std::optional<Restriction> is_captureable(const Family& fam, int s, const Surd& eps,
                                          const Budget& budget = default_budget());
/// Plain re-implementation of is_captureable (same candidate order) that
/// filters members candidate by candidate; used as an oracle.
std::optional<Restriction> is_captureable_reference(const Family& fam, int s, const Surd& eps);
/// First restriction of complexity 1..s with density > alpha * measure.
std::optional<Restriction> is_quasiregular(const Family& fam, int s, const mpq_class& alpha,
                                           const Budget& budget = default_budget());
/// Same search for a nonnegative function given by its support within the
/// context coset and the value on each support point.
std::optional<Restriction> function_quasiregular_witness(const Restriction& context,
                                                         const std::vector<Mat>& support,
                                                         const std::vector<mpq_class>& values,
                                                         int s, const mpq_class& alpha,
                                                         const Budget& budget = default_budget());
/// Largest ratio E[f | context + R] / E[f | context] over restrictions R of
/// complexity 1..s; f is (s, C)-quasiregular iff this is <= C. 0 for f = 0.
mpq_class quasiregularity_ratio(const Restriction& context, const std::vector<Mat>& support,
                                const std::vector<mpq_class>& values, int s,
                                const Budget& budget = default_budget());

struct ClaimReport {
  int b = 0;
  int N = 0;
  mpq_class delta;
  mpq_class beta;
  mpq_class measure;
  bool holds = false;
  std::optional<Restriction> witness;  // a capture found (only if it fails)
  std::string to_json() const;
};

/// Checks the hypotheses (context complexity <= b, measure >= delta,
/// (1, beta)-quasiregular, beta < q^{min(m,n)-N-b}/2), throwing
/// HypothesisUnmet naming the first that fails, then searches for an
/// (N, delta/2) capture.
ClaimReport quasiregular_implies_uncaptureable_check(const Family& fam, int b, int N,
                                                     const mpq_class& delta,
                                                     const mpq_class& beta,
                                                     const Budget& budget = default_budget());

class Junta {
 public:
  Junta(const Field& f, int n, int m, std::vector<Restriction> components, long C, int r);
  /// C = #components, r = max complexity.
  static Junta of(const Field& f, int n, int m, std::vector<Restriction> components);

  const Field& field() const { return *f_; }
  int n() const { return n_; }
  int m() const { return m_; }
  const std::vector<Restriction>& components() const { return comps_; }
  long declared_C() const { return C_; }
  int declared_r() const { return r_; }
  bool contains(const Mat& a) const;
  /// Union of component cosets, sorted.
  std::vector<Mat> members(const Budget& budget = default_budget()) const;
  std::string to_json() const;

 private:
  const Field* f_;
  int n_;
  int m_;
  std::vector<Restriction> comps_;
  long C_;
  int r_;
};

Junta junta_from_json(const Field& f, int n, int m, const std::string& text);

struct JuntaPairResult {
  bool holds = true;
  std::optional<std::pair<int, int>> witness;
};

JuntaPairResult is_strongly_t_intersecting(const Junta& j, int t);
mpq_class junta_measure(const Junta& j, const Budget& budget = default_budget());

Family dual_family(const Family& fam);

// ---- regularity decomposition ----

enum class NodeStatus { good, bad, captured, empty };
std::string to_string(NodeStatus s);

struct DecompositionNode {
  Restriction restriction;  // cumulative, including the family's context
  int depth = 0;
  NodeStatus status = NodeStatus::captured;
  std::optional<Restriction> capture;  // witness for captured nodes
  std::vector<int> children;
  mpq_class measure;  // of F within this node's coset; 0 for empty nodes
};

struct DecompositionLog {
  int r = 0;
  int s = 0;
  Surd eps;
  std::vector<DecompositionNode> nodes;  // nodes[0] is the root
  std::string to_json() const;
};

/// q^{-min(m,n) r + r^2/4}.
Surd default_regularity_eps(long q, int m, int n, int r);
/// 2 q^r (q^s - 1)^r eps.
Surd regularity_mass_bound(long q, int r, int s, const Surd& eps);

std::pair<Junta, DecompositionLog> regularity_decompose(const Family& fam, int r, int s,
                                                        std::optional<Surd> eps = std::nullopt,
                                                        const Budget& budget = default_budget());

struct RegularityCheck {
  mpq_class uncovered_measure;  // mu(F \ J), relative to the family's context
  Surd bound;
  bool mass_ok = false;
  bool components_ok = false;  // count <= (q^s-1)^r and complexity < r
  bool leaves_uncaptureable = false;
  bool ok() const { return mass_ok && components_ok && leaves_uncaptureable; }
  std::string to_json() const;
};

/// Re-measures the three postconditions from scratch.
RegularityCheck check_regularity(const Family& fam, const Junta& j, const DecompositionLog& log,
                                 const Budget& budget = default_budget());

// ---- bootstrap ----

struct BootstrapResult {
  std::vector<Restriction> chain;  // the witness restriction of each step
  Family family;
  std::vector<mpq_class> measures;  // measure before step 1, after each step
};

/// Throws PreconditionViolated if the family is empty, StepBudgetExhausted
/// after `max_steps` increments without reaching quasiregularity.
BootstrapResult bootstrap_quasiregular(const Family& fam, int s_target, const mpq_class& alpha,
                                       int max_steps, const Budget& budget = default_budget());

}  // namespace linex
