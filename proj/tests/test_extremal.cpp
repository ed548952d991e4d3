#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "linex/extremal.hpp"

using namespace linex;

namespace {

bool fixes_first(const Mat& a, int t) {
  const int n = a.rows();
  for (int i = 0; i < t; ++i)
    for (int r = 0; r < n; ++r)
      if (a.at(r, i) != (r == i ? 1 : 0)) return false;
  return true;
}

std::set<std::uint64_t> indices(const std::vector<Mat>& v) {
  std::set<std::uint64_t> out;
  for (const auto& a : v) out.insert(a.index());
  return out;
}

// Plain scan of GL for maps fixing e_1..e_t that agree with tau on exactly t-1 dims.
std::vector<std::uint64_t> brute_h(int n, long q, int t, const Mat& tau) {
  std::vector<std::uint64_t> out;
  for (const auto& a : enumerate_gl(Field::get(q), n))
    if (fixes_first(a, t) && n - rank(a - tau) == t - 1) out.push_back(a.index());
  std::sort(out.begin(), out.end());
  return out;
}

Mat random_gl(const Field& f, int n, std::mt19937_64& rng) {
  const std::uint64_t total = upow(f.q(), n * n);
  while (true) {
    Mat a = Mat::from_index(f, n, n, rng() % total);
    if (rank(a) == n) return a;
  }
}

}  // namespace

TEST(Extremal, CanonicalFamilyExamples) {
  EXPECT_EQ(canonical_family(2, 2, 1, Side::column).size(), 2u);
  EXPECT_EQ(canonical_family(3, 2, 1, Side::column).size(), 24u);
  for (long q : {2, 3}) {
    const auto id = canonical_family(3, q, 3, Side::column);
    ASSERT_EQ(id.size(), 1u);
    EXPECT_EQ(id.members()[0], Mat::identity(Field::get(q), 3));
  }
  const auto col = canonical_family(3, 2, 1, Side::column);
  const auto row = canonical_family(3, 2, 1, Side::row);
  std::vector<Mat> tr;
  for (const auto& a : col.members()) tr.push_back(a.transpose());
  EXPECT_EQ(indices(tr), indices(row.members()));
  EXPECT_THROW(canonical_family(3, 2, 0, Side::column), DomainError);
  EXPECT_THROW(canonical_family(3, 2, 4, Side::column), DomainError);
}

TEST(Extremal, CanonicalFamilyMatchesFilteredGl) {
  struct P { long q; int n; };
  for (auto [q, n] : {P{2, 2}, P{2, 3}, P{2, 4}, P{3, 2}, P{3, 3}, P{4, 2}}) {
    const auto gl = enumerate_gl(Field::get(q), n);
    for (int t = 1; t <= n; ++t) {
      std::vector<Mat> brute;
      for (const auto& a : gl)
        if (fixes_first(a, t)) brute.push_back(a);
      const auto fam = canonical_family(n, q, t, Side::column);
      EXPECT_EQ(indices(fam.members()), indices(brute)) << "q=" << q << " n=" << n << " t=" << t;
      EXPECT_EQ(mpz_class(static_cast<unsigned long>(fam.size())), m_qt(n, q, t));
    }
  }
}

TEST(Extremal, CanonicalFamilySizeGrid) {
  for (long q : {2, 3})
    for (int n = 1; n <= 4; ++n)
      for (int t = 1; t <= n; ++t)
        for (Side side : {Side::column, Side::row})
          EXPECT_EQ(mpz_class(static_cast<unsigned long>(canonical_family(n, q, t, side).size())), m_qt(n, q, t))
              << "q=" << q << " n=" << n << " t=" << t;
}

TEST(Extremal, CanonicalFamilyIntersectionProperties) {
  struct P { long q; int n; };
  for (auto [q, n] : {P{2, 2}, P{2, 3}, P{2, 4}, P{3, 2}, P{3, 3}})
    for (int t = 1; t <= n; ++t)
      for (Side side : {Side::column, Side::row}) {
        const auto fam = canonical_family(n, q, t, side);
        if (fam.size() > 1500) continue;
        EXPECT_TRUE(is_t_intersecting(fam, t).holds) << q << " " << n << " " << t;
        EXPECT_TRUE(is_intersection_free(fam, t - 1).holds) << q << " " << n << " " << t;
      }
}

TEST(Extremal, SingerExamples) {
  const auto h22 = singer_cycle(2, 2);
  EXPECT_EQ(h22.size(), 3u);
  EXPECT_EQ(gl_order(2, 2), 6);
  EXPECT_EQ(gl_order(2, 2) / 3, m_qt(2, 2, 1));
  const auto h32 = singer_cycle(2, 3);
  EXPECT_EQ(h32.size(), 8u);
  EXPECT_EQ(gl_order(2, 3), 48);
  EXPECT_EQ(m_qt(2, 3, 1), 6);
  EXPECT_EQ(singer_cycle(3, 2).size(), 7u);
}

TEST(Extremal, SingerPropertiesByDirectScan) {
  struct P { long q; int n; };
  for (auto [q, n] : {P{2, 2}, P{2, 3}, P{3, 2}, P{3, 3}, P{4, 2}, P{2, 4}, P{5, 2}}) {
    const Field& f = Field::get(q);
    const auto h = singer_cycle(n, q);
    const auto& mem = h.members();
    const std::uint64_t order = upow(q, n) - 1;
    ASSERT_EQ(mem.size(), order);
    const auto idx = indices(mem);
    // cyclic: some member generates everything
    bool cyclic = false;
    for (const auto& g : mem) {
      std::set<std::uint64_t> pw;
      Mat p = g;
      for (std::uint64_t k = 0; k < order; ++k) {
        pw.insert(p.index());
        p = p * g;
      }
      if (pw == idx) {
        cyclic = true;
        break;
      }
    }
    EXPECT_TRUE(cyclic);
    for (const auto& a : mem)
      for (const auto& b : mem) EXPECT_TRUE(idx.count((a * b).index()));
    // distinct members disagree on every nonzero vector
    const std::uint64_t nv = upow(q, n);
    for (std::size_t i = 0; i < mem.size(); ++i)
      for (std::size_t j = i + 1; j < mem.size(); ++j)
        for (std::uint64_t v = 1; v < nv; ++v) {
          const Vec x = vec_from_index(f, n, v);
          ASSERT_NE(mem[i].apply(x), mem[j].apply(x));
        }
    const auto rep = singer_check(n, q);
    EXPECT_TRUE(rep.holds) << rep.to_json();
    EXPECT_EQ(rep.gl_order / mpz_class(static_cast<unsigned long>(order)), m_qt(n, q, 1));
  }
}

TEST(Extremal, DerangementPreconditions) {
  const Field& f = Field::get(2);
  const Mat id = Mat::identity(f, 3);
  EXPECT_THROW(derangement_enumerate(3, 2, 1, id), PreconditionViolated);
  EXPECT_THROW(derangement_enumerate(3, 2, 1, Mat(f, 3, 3)), PreconditionViolated);
  const Mat tau = Mat::from_ints(f, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
  EXPECT_EQ(derangement_fixed_dim(3, 1, tau), 0);
  const Mat swap4 = Mat::from_ints(f, {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}});
  EXPECT_NO_THROW(derangement_enumerate(4, 2, 2, swap4));
  EXPECT_THROW(derangement_construct_count(4, 2, 2, swap4), PreconditionViolated);
}

TEST(Extremal, DerangementEnumerateMatchesBruteForce) {
  std::mt19937_64 rng(7);
  struct P { long q; int n; int t; };
  for (auto [q, n, t] : {P{2, 3, 1}, P{2, 3, 2}, P{2, 4, 1}, P{2, 4, 2}, P{3, 2, 1}, P{3, 3, 1}}) {
    const Field& f = Field::get(q);
    int done = 0;
    while (done < 3) {
      const Mat tau = random_gl(f, n, rng);
      try {
        derangement_fixed_dim(n, t, tau);
      } catch (const PreconditionViolated&) {
        continue;
      }
      const auto want = brute_h(n, q, t, tau);
      EXPECT_EQ(derangement_set(n, q, t, tau), want);
      EXPECT_EQ(derangement_enumerate(n, q, t, tau), mpz_class(static_cast<unsigned long>(want.size())));
      ++done;
    }
  }
}

TEST(Extremal, DerangementYieldsLieInH) {
  const Field& f = Field::get(2);
  for (int n : {3, 4}) {
    const auto h = [&](const Mat& tau) { return brute_h(n, 2, 1, tau); };
    for (const auto& tau : enumerate_gl(f, n)) {
      if (fixes_first(tau, 1)) continue;
      if (n == 4 && (tau.index() % 97) != 0) continue;
      const auto hs = h(tau);
      std::set<std::uint64_t> seen;
      const auto visited = derangement_construct(n, 2, 1, tau, [&](const Mat& s) {
        EXPECT_TRUE(std::binary_search(hs.begin(), hs.end(), s.index()));
        EXPECT_TRUE(fixes_first(s, 1));
        EXPECT_EQ(rank(s), n);
        EXPECT_EQ(n - rank(s - tau), 0);
        seen.insert(s.index());
        return true;
      });
      EXPECT_EQ(visited, seen.size());
      EXPECT_EQ(derangement_construct_count(n, 2, 1, tau), mpz_class(static_cast<unsigned long>(visited)));
    }
  }
}

TEST(Extremal, DerangementChainSmall) {
  std::mt19937_64 rng(11);
  struct P { long q; int n; int t; };
  for (auto [q, n, t] : {P{2, 3, 1}, P{2, 4, 1}, P{3, 3, 1}, P{4, 3, 1}}) {
    const Field& f = Field::get(q);
    for (int k = 0; k < 4;) {
      const Mat tau = random_gl(f, n, rng);
      if (fixes_first(tau, 1)) continue;
      const auto r = derangement_check(n, q, t, tau, true, 0, 0);
      EXPECT_TRUE(r.holds) << r.to_json();
      EXPECT_EQ(r.H, mpz_class(static_cast<unsigned long>(brute_h(n, q, t, tau).size())));
      EXPECT_FALSE(r.chain_applies);
      if (q == 2) EXPECT_EQ(r.choice_product, 0);  // last factor 2^n - 2^{n-1} - 2^{n-1}
      ++k;
    }
  }
}

TEST(Extremal, DerangementChainSixByTwo) {
  std::mt19937_64 rng(3);
  const Field& f = Field::get(2);
  Mat tau = random_gl(f, 6, rng);
  while (true) {
    try {
      derangement_fixed_dim(6, 2, tau);
      break;
    } catch (const PreconditionViolated&) {
      tau = random_gl(f, 6, rng);
    }
  }
  const auto r = derangement_check(6, 2, 2, tau, true, 0, 0);
  EXPECT_TRUE(r.holds) << r.to_json();
  EXPECT_TRUE(r.chain_applies);
  EXPECT_TRUE(r.yields_in_H);
  EXPECT_GE(mpq_class(r.H), r.product_bound);
  // a tau fixing e_1 has d = 1
  Mat tau1 = Mat::identity(f, 6);
  tau1.set(0, 1, 1);
  tau1.set(1, 2, 1);
  tau1.set(3, 4, 1);
  const auto r1 = derangement_check(6, 2, 2, tau1, false, 200, 5);
  EXPECT_EQ(r1.d, 1);
  EXPECT_TRUE(r1.holds) << r1.to_json();
}

TEST(Extremal, DerangementSampleIsInH) {
  std::mt19937_64 rng(5);
  const Field& f = Field::get(3);
  const Mat tau = Mat::from_ints(f, {{0, 1, 0}, {1, 0, 0}, {0, 0, 2}});
  const auto hs = brute_h(3, 3, 1, tau);
  for (int k = 0; k < 50; ++k) {
    const Mat s = derangement_sample(3, 3, 1, tau, rng);
    EXPECT_TRUE(std::binary_search(hs.begin(), hs.end(), s.index()));
  }
}

TEST(Extremal, ExhaustiveSmallGl) {
  struct P { long q; int n; int t; long want; };
  for (auto [q, n, t, want] : {P{2, 2, 1, 2}, P{3, 2, 1, 6}, P{4, 2, 1, 12}, P{2, 3, 1, 24}}) {
    const auto r = verify_extremal_bound(n, q, t, ExtremalMode::exhaustive);
    EXPECT_EQ(r.value, std::to_string(want));
    EXPECT_EQ(r.bound, m_qt(n, q, t).get_str());
    EXPECT_EQ(r.status, "confirmed");
    EXPECT_TRUE(r.all_canonical) << r.to_json();
    EXPECT_GT(r.optimum_count, 0);
    Family w(Field::get(q), n, n, r.witness);
    EXPECT_EQ(w.size(), static_cast<std::size_t>(want));
    EXPECT_TRUE(is_intersection_free(w, t - 1).holds);
  }
}

TEST(Extremal, ExhaustiveGl22AgainstSubsets) {
  const Field& f = Field::get(2);
  const auto gl = enumerate_gl(f, 2);
  ASSERT_EQ(gl.size(), 6u);
  std::size_t best = 0;
  for (unsigned mask = 1; mask < 64; ++mask) {
    std::vector<Mat> s;
    for (int i = 0; i < 6; ++i)
      if (mask >> i & 1) s.push_back(gl[i]);
    bool ok = true;
    for (std::size_t i = 0; i < s.size() && ok; ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (rank(s[i] - s[j]) == 2) ok = false;
    if (ok) best = std::max(best, s.size());
  }
  EXPECT_EQ(best, 2u);
}

TEST(Extremal, ExhaustiveSmallNIsExploratory) {
  const auto r = verify_extremal_bound(3, 2, 2, ExtremalMode::exhaustive);
  EXPECT_EQ(r.status, "exploratory");
  Family w(Field::get(2), 3, 3, r.witness);
  EXPECT_TRUE(is_intersection_free(w, 1).holds);
  EXPECT_GE(std::stol(r.value), 4);
}

TEST(Extremal, AugmentationScan) {
  const auto r = verify_extremal_bound(4, 2, 1, ExtremalMode::sample);
  EXPECT_EQ(r.value, "0");
  EXPECT_EQ(r.params.at("outsiders"), "18816");
  EXPECT_TRUE(r.witness.empty());
  const auto r2 = verify_extremal_bound(2, 3, 1, ExtremalMode::sample);
  EXPECT_EQ(r2.value, "0");
}

TEST(Extremal, SpectralContext) {
  struct P { long q; int n; int t; };
  for (auto [q, n, t] : {P{2, 2, 1}, P{2, 2, 2}, P{2, 3, 1}, P{2, 3, 2}, P{3, 2, 1}}) {
    const auto r = verify_extremal_bound(n, q, t, ExtremalMode::spectral);
    EXPECT_EQ(r.status, "exploratory") << r.to_json();
    EXPECT_GE(mpq_class(r.value), mpq_class(m_qt(n, q, t)));
  }
}

TEST(Extremal, ReportJsonShape) {
  const auto r = verify_extremal_bound(2, 2, 1, ExtremalMode::exhaustive);
  const std::string js = r.to_json();
  for (const char* key : {"\"claim\"", "\"params\"", "\"value\"", "\"bound\"", "\"status\"", "\"witness\""})
    EXPECT_NE(js.find(key), std::string::npos) << key;
}

TEST(Extremal, SlFamily) {
  struct P { long q; int n; int t; long want; };
  for (auto [q, n, t, want] : {P{3, 2, 1, 3}, P{4, 2, 1, 4}, P{2, 3, 1, 24}, P{3, 3, 1, 216}, P{5, 2, 1, 5}}) {
    const auto [fam, rep] = sl_family(n, q, t);
    EXPECT_EQ(fam.size(), static_cast<std::size_t>(want));
    EXPECT_TRUE(rep.holds) << rep.to_json();
    std::vector<Mat> brute;
    for (const auto& a : enumerate_sl(Field::get(q), n))
      if (fixes_first(a, t)) brute.push_back(a);
    EXPECT_EQ(indices(fam.members()), indices(brute));
  }
}
