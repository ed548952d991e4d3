#include <random>

#include <gtest/gtest.h>

#include "linex/spectra.hpp"

using namespace linex;

namespace {

// Exhaustive maximum independent set size for tiny graphs.
int brute_mis(const Graph& g) {
  int n = g.size(), best = 0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    int c = __builtin_popcount(s);
    if (c <= best) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (s >> i & 1)
        for (int j = i + 1; j < n && ok; ++j)
          if ((s >> j & 1) && g.adjacent(i, j)) ok = false;
    if (ok) best = c;
  }
  return best;
}

DenseFunction random_rational(const Field& f, int n, int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  std::vector<mpq_class> v;
  for (std::uint64_t i = 0; i < upow(f.q(), n * m); ++i) {
    mpq_class x(num(rng), den(rng));
    x.canonicalize();
    v.push_back(x);
  }
  return DenseFunction::from_rational(f, n, m, v);
}

}  // namespace

TEST(Spectra, EigenvalueExamples) {
  EXPECT_EQ(eigenvalue(2, 1, 1, 0, 0), Cyclo(2, 1));
  EXPECT_EQ(eigenvalue(2, 1, 1, 0, 1), Cyclo(2, -1));
  EXPECT_EQ(eigenvalue(3, 1, 1, 0, 1), Cyclo(3, mpq_class(-1, 2)));
  EXPECT_THROW(eigenvalue(2, 2, 1, 0, 1), DomainError);  // m - t > n
  EXPECT_THROW(eigenvalue(2, 2, 2, 0, 3), DomainError);
}

TEST(Spectra, SpectrumExamples) {
  auto s = spectrum(2, 1, 1, 0);
  EXPECT_EQ(s.rational(0), 1);
  EXPECT_EQ(s.rational(1), -1);
  EXPECT_EQ(s.mult[0], 1);
  EXPECT_EQ(s.mult[1], 1);
  EXPECT_TRUE(s.trace_check);
  EXPECT_EQ(s.to_json(),
            R"({"q":2,"m":1,"n":1,"t":0,"lambda":[{"d":0,"num":"1","den":"1"},{"d":1,"num":"-1","den":"1"}],)"
            R"("mult":["1","1"],"gen_count":"1","trace_check":true})");
  auto s3 = spectrum(3, 1, 1, 0);
  EXPECT_EQ(s3.rational(1), mpq_class(-1, 2));
  EXPECT_TRUE(s3.trace_check);
  EXPECT_TRUE(spectrum(2, 2, 2, 0).trace_check);
}

TEST(Spectra, TraceIdentityGrid) {
  for (long q : {2, 3})
    for (int m = 1; m <= 3; ++m)
      for (int n = 1; n <= 3; ++n)
        for (int t = std::max(0, m - n); t <= m; ++t) {
          auto s = spectrum(q, m, n, t);
          EXPECT_EQ(s.rational(0), 1);
          EXPECT_TRUE(s.trace_check) << q << m << n << t;
          EXPECT_TRUE(s.real_check);
          mpz_class tot = 0;
          for (const auto& x : s.mult) tot += x;
          EXPECT_EQ(tot, zpow(q, n * m));
        }
}

TEST(Spectra, EigenvalueMatchesTransformOfGenerators) {
  // lambda_d = q^{nm} / |I_t| * transform(1_{I_t})(X) for real lambda
  for (long q : {2, 3})
    for (auto [m, n] : {std::pair{2, 2}, {1, 2}, {2, 1}, {2, 3}})
      for (int t = std::max(0, m - n); t < m; ++t) {
        if (upow(q, n * m) > 800) continue;
        const Field& f = Field::get(q);
        std::vector<mpq_class> v(upow(q, n * m), 0);
        long cnt = 0;
        for (const auto& a : enumerate_rank(f, n, m, m - t)) {
          v[a.index()] = 1;
          ++cnt;
        }
        Spectrum sp = fast_transform(DenseFunction::from_rational(f, n, m, v));
        for (int d = 0; d <= std::min(m, n); ++d) {
          mpq_class scale(mpz_class(upow(q, n * m)), cnt);
          scale.canonicalize();
          Cyclo viaT = sp.at(canonical_dual(f, m, n, d)) * scale;
          EXPECT_EQ(viaT, eigenvalue(q, m, n, t, d));
        }
      }
}

TEST(Spectra, RankInvariance) {
  auto r0 = rank_invariance_check(2, 2, 2, 0, 0);
  EXPECT_TRUE(r0.holds);
  EXPECT_EQ(r0.checked, 1);
  auto r1 = rank_invariance_check(2, 2, 2, 0, 1);
  EXPECT_TRUE(r1.holds);
  EXPECT_EQ(r1.checked, 9);
  for (long q : {2, 3})
    for (int m = 1; m <= 2; ++m)
      for (int n = 1; n <= 2; ++n)
        for (int t = std::max(0, m - n); t <= m; ++t)
          for (int d = 0; d <= std::min(m, n); ++d) EXPECT_TRUE(rank_invariance_check(q, m, n, t, d).holds);
}

TEST(Spectra, EigenvalueBound) {
  auto r = eigenvalue_bound_check(2, 1, 1, 0, 1);
  EXPECT_EQ(r.lambda_sq, 1);
  EXPECT_EQ(r.bound_sq, 2);
  EXPECT_TRUE(r.holds);
  EXPECT_THROW(eigenvalue_bound_check(2, 1, 1, 0, 0), DomainError);
  for (long q : {2, 3})
    for (int m = 1; m <= 3; ++m)
      for (int n = 1; n <= 3; ++n)
        for (int t = std::max(0, m - n); t <= m; ++t)
          for (int d = 1; d <= std::min(m, n); ++d) EXPECT_TRUE(eigenvalue_bound_check(q, m, n, t, d).holds);
}

TEST(Spectra, BilinearDecomposition) {
  const Field& f = Field::get(2);
  DenseFunction one = DenseFunction::from_rational(f, 2, 2, std::vector<mpq_class>(16, 1));
  for (int t : {1, 2}) {
    auto r = bilinear_decomposition(one, one, t);
    EXPECT_EQ(r.direct, Cyclo(2, 1));
    EXPECT_TRUE(r.holds);
  }
  // singletons {A}, {B} with agreement dimension t-1
  Mat A = Mat::from_ints(f, {{1, 0}, {0, 1}}), B = Mat::from_ints(f, {{1, 0}, {0, 0}});
  std::vector<mpq_class> va(16, 0), vb(16, 0);
  va[A.index()] = 1;
  vb[B.index()] = 1;
  auto r = bilinear_decomposition(DenseFunction::from_rational(f, 2, 2, va), DenseFunction::from_rational(f, 2, 2, vb), 2);
  // one generator hit out of |I_1| = 9, weighted by 1/16
  EXPECT_EQ(r.direct, Cyclo(2, mpq_class(1, 16 * 9)));
  EXPECT_TRUE(r.holds);

  std::mt19937_64 rng(21);
  for (int i = 0; i < 40; ++i) {
    auto rr = bilinear_decomposition(random_rational(f, 2, 2, rng), random_rational(f, 2, 2, rng), 1 + i % 2);
    EXPECT_TRUE(rr.holds);
  }
  // complex-valued functions over F_3
  const Field& f3 = Field::get(3);
  for (int i = 0; i < 5; ++i) {
    std::vector<Cyclo> a, b;
    std::uniform_int_distribution<int> d(-2, 2);
    for (int k = 0; k < 81; ++k) {
      a.push_back(Cyclo::from_coeffs(3, {d(rng), d(rng), 0}));
      b.push_back(Cyclo::from_coeffs(3, {d(rng), d(rng), d(rng)}));
    }
    EXPECT_TRUE(bilinear_decomposition(DenseFunction(f3, 2, 2, a), DenseFunction(f3, 2, 2, b), 1 + i % 2).holds);
  }
  EXPECT_THROW(bilinear_decomposition(one, DenseFunction(f, 2, 1), 1), ShapeMismatch);
  EXPECT_THROW(bilinear_decomposition(one, one, 0), DomainError);
}

TEST(Spectra, HoffmanExamples) {
  EXPECT_EQ(hoffman_bound(spectrum(2, 1, 1, 0)), mpq_class(1, 2));
  EXPECT_EQ(hoffman_bound(spectrum(3, 1, 1, 0)), mpq_class(1, 3));
  EXPECT_THROW(hoffman_bound(spectrum(2, 1, 1, 1)), NoNegativeEigenvalue);
  auto h = hoffman_check(2, 2, 2, 1);
  EXPECT_TRUE(h.exact);
  EXPECT_TRUE(h.holds);
  EXPECT_EQ(h.vertices, 16);
}

TEST(Spectra, HoffmanGrid) {
  for (long q : {2, 3})
    for (int m = 1; m <= 3; ++m)
      for (int n = 1; n <= 3; ++n) {
        if (upow(q, n * m) > 4096) continue;
        for (int t = std::max(0, m - n); t < m; ++t) {
          auto h = hoffman_check(q, m, n, t);
          EXPECT_TRUE(h.exact) << h.to_json();
          EXPECT_TRUE(h.holds) << h.to_json();
        }
      }
}

TEST(Spectra, CayleyGraphAdjacency) {
  const Field& f = Field::get(3);
  Graph g = cayley_graph(3, 2, 2, 1);
  auto all = enumerate_all(f, 2, 2);
  for (const auto& a : all)
    for (const auto& b : all)
      if (!(a == b))
        EXPECT_EQ(g.adjacent(static_cast<int>(a.index()), static_cast<int>(b.index())), agreement(a, b).dim() == 1);
  EXPECT_THROW(cayley_graph(2, 2, 2, 2), DomainError);
}

TEST(Spectra, MisSolverMatchesBruteForce) {
  std::mt19937_64 rng(22);
  for (int it = 0; it < 60; ++it) {
    int n = 1 + it % 16;
    Graph g(n);
    std::bernoulli_distribution e(0.15 + 0.1 * (it % 7));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (e(rng)) g.add_edge(i, j);
    MisResult r = max_independent_set(g);
    EXPECT_TRUE(r.optimal);
    EXPECT_TRUE(is_independent(g, r.set));
    EXPECT_EQ(static_cast<int>(r.set.size()), brute_mis(g));
  }
  Graph empty(0);
  EXPECT_TRUE(max_independent_set(empty).set.empty());
}

TEST(Spectra, MisSolverOnSmallCayleyGraphsWithoutCaps) {
  // plain branch and bound, no symmetry or clique cap, against hoffman_check
  for (auto [q, m, n, t] : {std::tuple{2L, 2, 2, 0}, {2L, 2, 2, 1}, {2L, 2, 3, 0}, {2L, 3, 2, 1}, {3L, 2, 2, 0}, {3L, 2, 2, 1}}) {
    Graph g = cayley_graph(q, m, n, t);
    MisResult r = max_independent_set(g);
    EXPECT_TRUE(r.optimal);
    EXPECT_EQ(static_cast<long>(r.set.size()), hoffman_check(q, m, n, t).mis_size);
  }
  // the 512-vertex case where the cap is not tight
  Graph g = cayley_graph(2, 3, 3, 1);
  MisOptions opt;
  opt.fixed = {0};
  MisResult r = max_independent_set(g, opt);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.set.size(), 8u);
}

TEST(Spectra, IndependenceCheck) {
  const Field& f = Field::get(2);
  Mat A = Mat::from_ints(f, {{1, 0}, {0, 1}}), B = Mat::from_ints(f, {{1, 0}, {0, 0}});
  EXPECT_TRUE(independence_check(Family(f, 2, 2, {A}), 1).holds);
  auto r = independence_check(Family(f, 2, 2, {A, B}), 1);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness);
  // maps fixing e1 pairwise agree on span{e1}: never exactly 0 agreement
  std::vector<Mat> fam;
  for (const auto& g : enumerate_gl(f, 3))
    if (g.col(0) == Vec{1, 0, 0}) fam.push_back(g);
  EXPECT_TRUE(independence_check(Family(f, 3, 3, fam), 0).holds);
  // an exact maximum independent set of Gamma_0 is 0-intersection-free
  Graph g = cayley_graph(2, 2, 2, 0);
  MisResult mr = max_independent_set(g);
  std::vector<Mat> mem;
  for (int v : mr.set) mem.push_back(Mat::from_index(f, 2, 2, v));
  EXPECT_TRUE(independence_check(Family(f, 2, 2, mem), 0).holds);
}

TEST(Spectra, ThreadCountDoesNotChangeResults) {
  const auto serial = spectrum(3, 2, 3, 1).to_json();
  const auto serial2 = spectrum(2, 3, 3, 1).to_json();
  set_default_threads(4);
  const auto par = spectrum(3, 2, 3, 1).to_json();
  const auto par2 = spectrum(2, 3, 3, 1).to_json();
  set_default_threads(1);
  EXPECT_EQ(serial, par);
  EXPECT_EQ(serial2, par2);
}
