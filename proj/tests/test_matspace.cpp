#include <gtest/gtest.h>

#include <random>
#include <set>

#include "linex/errors.hpp"
#include "linex/matspace.hpp"
#include "linex/restriction.hpp"
#include "linex/surd.hpp"

using namespace linex;

namespace {

Mat M(long q, std::vector<std::vector<int>> rows) { return Mat::from_ints(Field::get(q), rows); }

Mat random_mat(const Field& f, int n, int m, std::mt19937_64& rng) {
  Mat a(f, n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a.set(i, j, static_cast<Elem>(rng() % f.q()));
  return a;
}

// Brute-force rank census over all n x m matrices.
std::vector<mpz_class> rank_census(const Field& f, int n, int m) {
  std::vector<mpz_class> c(std::min(n, m) + 1, 0);
  for_each_matrix(f, n, m, [&](const Mat& a) {
    c[rank(a)] += 1;
    return true;
  });
  return c;
}

}  // namespace

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Mat(Field::get(3), 2, 3)), 0);
  EXPECT_EQ(rank(Mat::identity(Field::get(5), 4)), 4);
  EXPECT_EQ(rank(M(2, {{1, 1}, {1, 1}})), 1);
  EXPECT_EQ(rank(M(3, {{1, 2}, {2, 1}})), 1);  // second row = 2 * first
}

TEST(KernelImage, Examples) {
  const Field& f = Field::get(2);
  Mat z(f, 2, 3);
  EXPECT_EQ(kernel(z).dim(), 3);
  EXPECT_EQ(image(z).dim(), 0);
  EXPECT_EQ(kernel(Mat::identity(f, 3)).dim(), 0);
  Mat a = M(2, {{1, 0}, {0, 0}});
  EXPECT_EQ(image(a), Subspace::span(f, 2, {{1, 0}}));
  EXPECT_EQ(kernel(a), Subspace::span(f, 2, {{0, 1}}));
}

TEST(Agreement, Examples) {
  const Field& f = Field::get(2);
  Mat a = M(2, {{1, 0, 1}, {0, 1, 1}});
  EXPECT_EQ(agreement(a, a).dim(), 3);
  EXPECT_EQ(agreement(Mat::identity(f, 2), M(2, {{0, 1}, {1, 0}})), Subspace::span(f, 2, {{1, 1}}));
  EXPECT_EQ(agreement(Mat::identity(f, 2), Mat(f, 2, 2)).dim(), 0);
  EXPECT_THROW(agreement(Mat(f, 2, 2), Mat(f, 2, 3)), ShapeMismatch);
}

TEST(Agreement, DualDimension) {
  const Field& f = Field::get(2);
  EXPECT_EQ(dual_agreement_dim(Mat(f, 3, 2), Mat(f, 3, 2)), 3);
  Mat a1 = M(2, {{1, 0}, {0, 1}, {0, 0}});
  EXPECT_EQ(dual_agreement_dim(a1, Mat(f, 3, 2)), 1);
  EXPECT_EQ(dual_agreement_dim(Mat::identity(f, 3), Mat(f, 3, 3)), 0);
}

TEST(Agreement, RankIdentitiesRandomized) {
  std::mt19937_64 rng(7);
  for (long q : {2L, 3L, 4L, 5L}) {
    const Field& f = Field::get(q);
    for (int it = 0; it < 500; ++it) {
      int n = 1 + rng() % 4, m = 1 + rng() % 4;
      Mat a = random_mat(f, n, m, rng), b = random_mat(f, n, m, rng);
      int r = rank(a - b);
      EXPECT_EQ(agreement(a, b).dim() + r, m);
      EXPECT_EQ(dual_agreement_dim(a, b) + r, n);
      EXPECT_EQ(dual_agreement_dim(a, b), agreement(a.transpose(), b.transpose()).dim());
    }
  }
}

TEST(RankNullity, ExhaustiveGF2) {
  const Field& f = Field::get(2);
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m)
      for_each_matrix(f, n, m, [&](const Mat& a) {
        EXPECT_EQ(rank(a) + kernel(a).dim(), m);
        EXPECT_EQ(image(a).dim(), rank(a));
        return true;
      });
}

TEST(RankNullity, Randomized) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 10000; ++it) {
    long q = std::vector<long>{3, 4, 5, 7}[it % 4];
    const Field& f = Field::get(q);
    int n = 1 + rng() % 5, m = 1 + rng() % 5;
    Mat a = random_mat(f, n, m, rng);
    Subspace k = kernel(a);
    ASSERT_EQ(rank(a) + k.dim(), m);
    for (const auto& v : k.basis()) ASSERT_TRUE(is_zero(a.apply(v)));
  }
}

TEST(RankGF2, PackedMatchesGeneric) {
  std::mt19937_64 rng(3);
  const Field& f = Field::get(2);
  for (int it = 0; it < 2000; ++it) {
    int n = 1 + rng() % 6, m = 1 + rng() % 6;
    Mat a = random_mat(f, n, m, rng);
    std::vector<Vec> rows;
    for (int i = 0; i < n; ++i) rows.push_back(a.row(i));
    EXPECT_EQ(rank(a), static_cast<int>(rref(f, rows, m).size()));
  }
}

TEST(Gaussian, Examples) {
  EXPECT_EQ(gaussian_binomial(5, 0, 3), 1);
  EXPECT_EQ(gaussian_binomial(4, 2, 2), 35);
  EXPECT_EQ(gaussian_binomial(3, 1, 3), 13);
  EXPECT_THROW(gaussian_binomial(2, 3, 2), DomainError);
}

TEST(Gaussian, MatchesSubspaceEnumeration) {
  for (long q : {2L, 3L, 4L})
    for (int m = 0; m <= 4; ++m)
      for (int d = 0; d <= m; ++d) {
        const auto& subs = all_subspaces(Field::get(q), m, d);
        EXPECT_EQ(mpz_class(subs.size()), gaussian_binomial(m, d, q));
        std::set<std::vector<std::uint64_t>> keys;
        for (const auto& s : subs) keys.insert(s.key());
        EXPECT_EQ(keys.size(), subs.size());
      }
}

TEST(Gaussian, LowerBoundGrid) {
  for (long q : {2L, 3L, 4L, 5L})
    for (int m = 0; m <= 8; ++m)
      for (int d = 0; d <= m; ++d)
        EXPECT_GE(gaussian_binomial(m, d, q), zpow(q, d * (m - d)));
}

TEST(CountRank, Examples) {
  EXPECT_EQ(count_rank_d(3, 2, 0, 5), 1);
  EXPECT_EQ(count_rank_d(2, 2, 1, 2), 9);
  EXPECT_EQ(count_rank_d(2, 2, 2, 2), 6);
  EXPECT_THROW(count_rank_d(2, 3, 3, 2), DomainError);
}

TEST(CountRank, ExhaustiveCensus) {
  for (long q : {2L, 3L}) {
    const Field& f = Field::get(q);
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m) {
        auto c = rank_census(f, n, m);
        mpz_class total = 0;
        for (int d = 0; d <= std::min(n, m); ++d) {
          EXPECT_EQ(c[d], count_rank_d(n, m, d, q)) << q << " " << n << "x" << m << " d=" << d;
          total += count_rank_d(n, m, d, q);
        }
        EXPECT_EQ(total, zpow(q, n * m));
      }
  }
}

TEST(Mqt, Examples) {
  EXPECT_EQ(m_qt(2, 2, 1), 2);
  EXPECT_EQ(m_qt(3, 2, 1), 24);
  EXPECT_EQ(m_qt(4, 3, 4), 1);
  EXPECT_THROW(m_qt(2, 2, 3), DomainError);
}

TEST(Mqt, MatchesStabiliserEnumeration) {
  std::vector<std::pair<long, int>> grid = {{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {3, 3}};
  for (auto [q, n] : grid) {
    const Field& f = Field::get(q);
    std::vector<mpz_class> fixing(n + 1, 0);
    for_each_gl(f, n, [&](const Mat& a) {
      for (int t = 1; t <= n; ++t) {
        bool ok = true;
        for (int i = 0; i < t && ok; ++i)
          for (int r = 0; r < n; ++r)
            if (a.at(r, i) != (r == i ? 1 : 0)) ok = false;
        if (ok) fixing[t] += 1;
      }
      return true;
    });
    for (int t = 1; t <= n; ++t) EXPECT_EQ(fixing[t], m_qt(n, q, t)) << q << " " << n << " " << t;
  }
}

TEST(Phi, Examples) {
  EXPECT_EQ(phi(1, 1, 0, 2), mpq_class(1, 2));
  EXPECT_EQ(phi(1, 1, 0, 3), mpq_class(2, 3));
  EXPECT_EQ(phi(2, 2, 2, 2), mpq_class(1, 16));
  EXPECT_THROW(phi(3, 1, 1, 2), DomainError);
}

TEST(Phi, QuarterBoundForSquareOrWide) {
  for (long q : {2L, 3L, 4L, 5L})
    for (int m = 1; m <= 6; ++m)
      for (int n = m; n <= 7; ++n) EXPECT_GT(phi(m, n, 0, q), mpq_class(1, 4));
}

TEST(Avoiding, Examples) {
  EXPECT_EQ(count_subspaces_avoiding(4, 2, 0, 2), 1);
  EXPECT_EQ(count_subspaces_avoiding(2, 1, 1, 2), 2);
  EXPECT_EQ(count_subspaces_avoiding(3, 1, 1, 2), 6);
  EXPECT_THROW(count_subspaces_avoiding(3, 2, 2, 2), DomainError);
}

TEST(Avoiding, MatchesEnumerationAndQuarterBound) {
  for (long q : {2L, 3L}) {
    const Field& f = Field::get(q);
    for (int n = 1; n <= 4; ++n)
      for (int k = 0; k <= n; ++k) {
        std::vector<Vec> ub;
        for (int i = 0; i < k; ++i) {
          Vec e(n, 0);
          e[i] = 1;
          ub.push_back(e);
        }
        Subspace u = Subspace::span(f, n, ub);
        for (int d = 0; k + d <= n; ++d) {
          long cnt = 0;
          for (const auto& w : all_subspaces(f, n, d))
            if (w.intersect(u).dim() == 0) ++cnt;
          EXPECT_EQ(mpz_class(cnt), count_subspaces_avoiding(n, k, d, q));
        }
      }
  }
  for (long q : {2L, 3L, 4L, 5L})
    for (int n = 0; n <= 8; ++n)
      for (int k = 0; k <= n; ++k)
        for (int d = 0; k + d <= n; ++d)
          EXPECT_GE(4 * count_subspaces_avoiding(n, k, d, q), gaussian_binomial(n, d, q));
}

TEST(Enumerate, SmallSpaces) {
  auto all = enumerate_all(Field::get(2), 1, 1);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].at(0, 0), 0);
  EXPECT_EQ(all[1].at(0, 0), 1);
  EXPECT_EQ(enumerate_gl(Field::get(2), 2).size(), 6u);
  EXPECT_EQ(enumerate_sl(Field::get(3), 2).size(), 24u);
  EXPECT_EQ(enumerate_rank(Field::get(3), 2, 2, 1).size(), 32u);
}

TEST(Enumerate, LexOrderAndCardinality) {
  for (long q : {2L, 3L}) {
    const Field& f = Field::get(q);
    auto gl = enumerate_gl(f, 3);
    EXPECT_EQ(mpz_class(gl.size()), gl_order(3, q));
    for (std::size_t i = 1; i < gl.size(); ++i) EXPECT_LT(gl[i - 1].index(), gl[i].index());
    auto all = enumerate_all(f, 2, 2);
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].index(), i);
  }
}

TEST(Enumerate, BudgetCap) {
  Budget b;
  b.max_items = 100;
  EXPECT_THROW(enumerate_all(Field::get(2), 3, 3, b), BudgetExceeded);
}

TEST(Literal, RoundTripAndErrors) {
  Mat a = M(3, {{1, 2, 0}, {0, 1, 1}});
  EXPECT_EQ(a.literal(), "q=3;n=2;m=3;rows=1,2,0;0,1,1");
  EXPECT_EQ(parse_literal(a.literal()), a);
  EXPECT_THROW(parse_literal("q=3;n=2;m=3;rows=1,2,0"), ParseError);
  EXPECT_THROW(parse_literal("q=3;n=1;m=1;rows=3"), ParseError);
  EXPECT_THROW(parse_literal("nonsense"), ParseError);
}

TEST(SubspaceOps, IntersectPlusAnnihilator) {
  std::mt19937_64 rng(5);
  for (long q : {2L, 3L}) {
    const Field& f = Field::get(q);
    for (int it = 0; it < 300; ++it) {
      int k = 1 + rng() % 4;
      auto rand_sub = [&]() {
        std::vector<Vec> vs(rng() % (k + 1));
        for (auto& v : vs) v = vec_from_index(f, k, rng() % upow(q, k));
        return Subspace::span(f, k, vs);
      };
      Subspace a = rand_sub(), b = rand_sub();
      EXPECT_EQ(a.plus(b).dim() + a.intersect(b).dim(), a.dim() + b.dim());
      EXPECT_EQ(a.annihilator().dim(), k - a.dim());
      EXPECT_EQ(a.annihilator().annihilator(), a);
      for (const auto& x : a.intersect(b).elements()) {
        EXPECT_TRUE(a.contains(x));
        EXPECT_TRUE(b.contains(x));
      }
    }
  }
}

TEST(BlockAgreement, Trivial) {
  const Field& f = Field::get(2);
  Mat a = M(2, {{1, 0, 1}, {0, 1, 1}});
  Mat none_rows(f, 0, 3), none_cols(f, 2, 0);
  EXPECT_EQ(block_agreement_dim(a, a, none_rows, none_cols, none_rows, none_cols), 3);
  Mat b = M(2, {{0, 1, 1}, {1, 1, 0}});
  EXPECT_EQ(block_agreement_dim(a, b, M(2, {{1, 1, 0}}), Mat::identity(f, 2), none_rows, none_cols),
            kernel(M(2, {{1, 1, 0}})).dim());
  EXPECT_THROW(block_agreement_dim(a, b, M(2, {{1, 1, 0}, {1, 1, 0}}), none_cols, none_rows, none_cols),
               PreconditionViolated);
  EXPECT_THROW(block_agreement_dim(a, b, none_rows, M(2, {{1, 1}, {1, 1}}), none_rows, none_cols),
               PreconditionViolated);
}

TEST(BlockAgreement, MatchesAssembledInstances) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int it = 0; checked < 1000; ++it) {
    const Field& f = Field::get(it % 2 ? 3 : 2);
    int z = 1 + rng() % 4, rr = 1 + rng() % 4, u = rng() % 3;
    int lu = rng() % (z + 1), ku = rng() % (rr + 1);  // l - u, k - u
    Mat d0 = random_mat(f, lu, z, rng);
    Mat f0 = random_mat(f, rr, ku, rng);
    if (rank(d0) != lu || rank(f0) != ku) continue;
    Mat d0p = random_mat(f, u, z, rng), f0p = random_mat(f, rr, u, rng);
    Mat a1p = random_mat(f, rr, z, rng), a2p = random_mat(f, rr, z, rng);
    int l = u + lu, k = u + ku;
    Mat a1(f, l + rr, k + z), a2(f, l + rr, k + z);
    for (int i = 0; i < u; ++i) a2.set(i, i, 1);
    for (int i = 0; i < u; ++i)
      for (int j = 0; j < z; ++j) a2.set(i, k + j, d0p.at(i, j));
    for (int i = 0; i < lu; ++i)
      for (int j = 0; j < z; ++j) a2.set(u + i, k + j, d0.at(i, j));
    for (int i = 0; i < rr; ++i) {
      for (int j = 0; j < u; ++j) a2.set(l + i, j, f0p.at(i, j));
      for (int j = 0; j < ku; ++j) a2.set(l + i, u + j, f0.at(i, j));
      for (int j = 0; j < z; ++j) {
        a2.set(l + i, k + j, a2p.at(i, j));
        a1.set(l + i, k + j, a1p.at(i, j));
      }
    }
    ASSERT_EQ(block_agreement_dim(a1p, a2p, d0, f0, d0p, f0p), agreement(a1, a2).dim());
    ++checked;
  }
}

TEST(Deletion, LeadingZeroBlocks) {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 500; ++it) {
    const Field& f = Field::get(it % 2 ? 3 : 2);
    int n = 2 + rng() % 3, m = 2 + rng() % 3;
    int d = rng() % m, dp = rng() % n;
    Mat a1 = random_mat(f, n, m, rng), a2 = random_mat(f, n, m, rng);
    for (Mat* a : {&a1, &a2}) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) a->set(i, j, 0);
      for (int i = 0; i < dp; ++i)
        for (int j = 0; j < m; ++j) a->set(i, j, 0);
    }
    EXPECT_EQ(agreement(a1, a2).dim(),
              agreement(delete_leading(a1, d, dp), delete_leading(a2, d, dp)).dim() + d);
  }
}

TEST(RestrictionTest, CosetCardinalities) {
  const Field& f = Field::get(2);
  Restriction empty(f, 2, 2);
  EXPECT_EQ(empty.coset_cardinality(), 16);
  auto one = Restriction::make(f, 2, 2, {{{1, 0}, {1, 1}}}, {});
  EXPECT_EQ(one.coset_cardinality(), 4);
  EXPECT_EQ(one.enumerate().size(), 4u);
  auto two = Restriction::make(f, 2, 2, {{{1, 0}, {1, 1}}}, {{{0, 1}, {1, 0}}});
  EXPECT_EQ(two.coset_cardinality(), 2);
  EXPECT_EQ(two.enumerate().size(), 2u);
  for (const auto& s : two.enumerate()) EXPECT_TRUE(two.satisfied_by(s));
  // a(w) = 1 but b(v) = 0: empty coset
  EXPECT_THROW(Restriction::make(f, 2, 2, {{{1, 0}, {0, 1}}}, {{{0, 1}, {0, 1}}}),
               InconsistentRestriction);
  EXPECT_THROW(Restriction::make(f, 2, 2, {{{1, 0}, {0, 1}}, {{1, 0}, {1, 1}}}, {}),
               InconsistentRestriction);
}

TEST(RestrictionTest, CosetEnumerationMatchesFilterAndChart) {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 200; ++it) {
    const Field& f = Field::get(it % 2 ? 3 : 2);
    int n = 1 + rng() % 3, m = 1 + rng() % 3;
    Mat base = random_mat(f, n, m, rng);
    std::vector<ColConstraint> cols;
    std::vector<RowConstraint> rows;
    for (int c = rng() % 3; c > 0; --c) {
      Vec v = vec_from_index(f, m, rng() % upow(f.q(), m));
      cols.push_back({v, base.apply(v)});
    }
    for (int c = rng() % 3; c > 0; --c) {
      Vec a = vec_from_index(f, n, rng() % upow(f.q(), n));
      rows.push_back({a, base.apply_left(a)});
    }
    auto r = Restriction::make(f, n, m, cols, rows);
    auto members = r.enumerate();
    std::vector<Mat> filtered;
    for_each_matrix(f, n, m, [&](const Mat& a) {
      if (r.satisfied_by(a)) filtered.push_back(a);
      return true;
    });
    ASSERT_EQ(members, filtered);
    EXPECT_EQ(mpz_class(members.size()), r.coset_cardinality());
    auto chart = r.chart();
    std::set<std::uint64_t> seen;
    for_each_matrix(f, n - r.dim_a(), m - r.dim_s(), [&](const Mat& y) {
      Mat s = chart.embed(y);
      EXPECT_TRUE(r.satisfied_by(s));
      seen.insert(s.index());
      return true;
    });
    EXPECT_EQ(seen.size(), members.size());
  }
}

TEST(RestrictionTest, PartialAgreementAndDual) {
  const Field& f = Field::get(2);
  auto r1 = Restriction::make(f, 3, 3, {{{1, 0, 0}, {1, 0, 0}}, {{0, 1, 0}, {0, 1, 0}}}, {});
  auto r2 = Restriction::make(f, 3, 3, {{{1, 0, 0}, {1, 0, 0}}, {{0, 1, 0}, {1, 1, 0}}}, {});
  EXPECT_EQ(r1.col_agreement_dim(r1), 2);
  EXPECT_EQ(r1.col_agreement_dim(r2), 1);
  EXPECT_EQ(r1.row_agreement_dim(r2), 0);
  auto d = dual_restriction(r1);
  EXPECT_EQ(d.dim_a(), 2);
  EXPECT_EQ(dual_restriction(d), r1);
  EXPECT_EQ(restriction_from_json(f, 3, 3, r2.to_json()), r2);
}
