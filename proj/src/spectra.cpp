#include "linex/spectra.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "json.hpp"

namespace linex {

using nlohmann::ordered_json;

namespace {

void check_params(int m, int n, int t) {
  if (m < 1 || n < 1) throw DomainError("m and n must be positive");
  if (t < 0 || t > m || m - t > n) throw DomainError("need 0 <= t <= m and m - t <= n");
}

std::vector<Mat> generators(const Field& f, int m, int n, int t, const Budget& budget) {
  budget.require_items(static_cast<long double>(upow(f.q(), n * m)), "generator enumeration");
  auto g = enumerate_rank(f, n, m, m - t, budget);
  if (mpz_class(static_cast<unsigned long>(g.size())) != count_rank_d(n, m, m - t, f.q()))
    throw Error("generator count disagrees with the rank count");
  return g;
}

Cyclo character_mean(const Mat& X, const std::vector<Mat>& gens) {
  unsigned p = static_cast<unsigned>(X.field().p());
  // integer bins per worker over contiguous slices of I_t, summed afterwards
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(default_threads(), gens.size() / 256));
  std::vector<std::vector<long>> part(w, std::vector<long>(p, 0));
  auto work = [&](std::size_t k) {
    const std::size_t lo = gens.size() * k / w, hi = gens.size() * (k + 1) / w;
    for (std::size_t i = lo; i < hi; ++i) ++part[k][trace_pairing(X, gens[i])];
  };
  if (w == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < w; ++k) pool.emplace_back(work, k);
    for (auto& th : pool) th.join();
  }
  std::vector<long> bins(p, 0);
  for (const auto& b : part)
    for (unsigned i = 0; i < p; ++i) bins[i] += b[i];
  std::vector<mpq_class> c(p);
  for (unsigned i = 0; i < p; ++i) {
    c[i] = mpq_class(bins[i], static_cast<long>(gens.size()));
    c[i].canonicalize();
  }
  return Cyclo::from_coeffs(p, std::move(c));
}

}  // namespace

Mat canonical_dual(const Field& f, int m, int n, int d) {
  if (d < 0 || d > std::min(m, n)) throw DomainError("rank out of range");
  Mat X(f, m, n);
  for (int i = 0; i < d; ++i) X.set(i, i, 1);
  return X;
}

Cyclo normalized_character_sum(const Mat& X, int t, const Budget& budget) {
  int m = X.rows(), n = X.cols();
  check_params(m, n, t);
  return character_mean(X, generators(X.field(), m, n, t, budget));
}

Cyclo eigenvalue(long q, int m, int n, int t, int d, const Budget& budget) {
  check_params(m, n, t);
  const Field& f = Field::get(q);
  return normalized_character_sum(canonical_dual(f, m, n, d), t, budget);
}

mpq_class CayleySpectrum::rational(int d) const { return lambda.at(static_cast<std::size_t>(d)).to_rational(); }

std::string CayleySpectrum::to_json() const {
  ordered_json j;
  j["q"] = q;
  j["m"] = m;
  j["n"] = n;
  j["t"] = t;
  j["lambda"] = ordered_json::array();
  for (std::size_t d = 0; d < lambda.size(); ++d) {
    mpq_class l = rational(static_cast<int>(d));
    j["lambda"].push_back({{"d", d}, {"num", l.get_num().get_str()}, {"den", l.get_den().get_str()}});
  }
  j["mult"] = ordered_json::array();
  for (const auto& x : mult) j["mult"].push_back(x.get_str());
  j["gen_count"] = gen_count.get_str();
  j["trace_check"] = trace_check;
  return j.dump();
}

CayleySpectrum spectrum(long q, int m, int n, int t, const Budget& budget) {
  check_params(m, n, t);
  const Field& f = Field::get(q);
  auto gens = generators(f, m, n, t, budget);
  CayleySpectrum s;
  s.q = q;
  s.m = m;
  s.n = n;
  s.t = t;
  s.gen_count = static_cast<unsigned long>(gens.size());
  Cyclo tr(f.p());
  s.real_check = true;
  for (int d = 0; d <= std::min(m, n); ++d) {
    Cyclo l = character_mean(canonical_dual(f, m, n, d), gens);
    s.lambda.push_back(l);
    s.mult.push_back(count_rank_d(m, n, d, q));
    if (!(l == l.conj())) s.real_check = false;
    tr += l * l * mpq_class(s.mult.back());
  }
  s.trace_check = tr == Cyclo(f.p(), 1 / phi(m, n, t, q));
  return s;
}

std::string RankInvarianceReport::to_json() const {
  ordered_json j;
  j["d"] = d;
  j["checked"] = checked;
  j["holds"] = holds;
  if (witness) j["witness"] = witness->literal();
  return j.dump();
}

RankInvarianceReport rank_invariance_check(long q, int m, int n, int t, int d, const Budget& budget) {
  check_params(m, n, t);
  if (d < 0 || d > std::min(m, n)) throw DomainError("rank out of range");
  const Field& f = Field::get(q);
  auto gens = generators(f, m, n, t, budget);
  Cyclo ref = character_mean(canonical_dual(f, m, n, d), gens);
  RankInvarianceReport r;
  r.d = d;
  r.holds = true;
  for_each_rank(
      f, m, n, d,
      [&](const Mat& X) {
        ++r.checked;
        if (!(character_mean(X, gens) == ref)) {
          r.holds = false;
          r.witness = X;
          return false;
        }
        return true;
      },
      budget);
  return r;
}

std::string EigenvalueBoundReport::to_json() const {
  ordered_json j;
  j["d"] = d;
  j["lambda_sq"] = lambda_sq.get_str();
  j["bound_sq"] = bound_sq.get_str();
  j["holds"] = holds;
  return j.dump();
}

EigenvalueBoundReport eigenvalue_bound_check(long q, int m, int n, int t, int d, const Budget& budget) {
  check_params(m, n, t);
  if (d < 1 || d > std::min(m, n)) throw DomainError("need 1 <= d <= min(m,n)");
  mpq_class l = eigenvalue(q, m, n, t, d, budget).to_rational();
  EigenvalueBoundReport r;
  r.d = d;
  r.lambda_sq = l * l;
  r.bound_sq = 1 / (phi(m, n, t, q) * mpq_class(count_rank_d(m, n, d, q)));
  r.holds = r.lambda_sq <= r.bound_sq;
  return r;
}

std::string BilinearReport::to_json() const {
  ordered_json j;
  j["t"] = t;
  j["direct"] = direct.to_string();
  j["spectral"] = spectral.to_string();
  j["holds"] = holds;
  return j.dump();
}

BilinearReport bilinear_decomposition(const DenseFunction& f, const DenseFunction& g, int t, const Budget& budget) {
  if (f.context() || g.context()) throw DomainError("bilinear decomposition needs full-space functions");
  if (!(f.field() == g.field()) || f.n() != g.n() || f.m() != g.m()) throw ShapeMismatch("functions differ in shape");
  if (t < 1) throw DomainError("need t >= 1");
  int n = f.n(), m = f.m();
  check_params(m, n, t - 1);
  const Field& F = f.field();
  auto gens = generators(F, m, n, t - 1, budget);
  budget.require_items(static_cast<long double>(f.size()) * gens.size(), "bilinear direct sum");

  BilinearReport r;
  r.t = t;
  Cyclo acc(F.p());
  auto all = enumerate_all(F, n, m, budget);
  for (const auto& a : all) {
    const Cyclo& fa = f.values()[a.index()];
    if (fa.is_zero()) continue;
    Cyclo mg(F.p());
    for (const auto& gen : gens) mg += g.values()[(a - gen).index()];
    acc += fa * mg.conj();
  }
  acc *= mpq_class(1, static_cast<unsigned long>(gens.size()));
  acc *= mpq_class(1, static_cast<unsigned long>(f.size()));
  r.direct = acc;

  Cyclo sp = f.mean() * g.mean().conj();
  for (int d = 1; d <= std::min(m, n); ++d) {
    Cyclo l = character_mean(canonical_dual(F, m, n, d), gens);
    sp += l * rank_component(f, d).inner(rank_component(g, d));
  }
  r.spectral = sp;
  r.holds = r.direct == r.spectral;
  return r;
}

mpq_class hoffman_bound(const CayleySpectrum& s) {
  mpq_class lo = s.rational(0);
  for (std::size_t d = 0; d < s.lambda.size(); ++d) lo = std::min(lo, s.rational(static_cast<int>(d)));
  if (lo >= 0) throw NoNegativeEigenvalue("spectrum has no negative eigenvalue");
  return -lo / (1 - lo);
}

PredicateResult independence_check(const Family& fam, int t) {
  if (t < 0 || t > fam.m()) throw DomainError("t out of range");
  return is_intersection_free(fam, t);
}

namespace {

// Additive group of n x m matrices by index, with ranks.
struct MatrixGroup {
  int p = 0;
  std::uint64_t N = 0;
  std::vector<std::uint32_t> add;  // N x N
  std::vector<int> rank;

  MatrixGroup(const Field& f, int n, int m, const Budget& budget) : p(f.p()) {
    int nm = n * m;
    N = upow(f.q(), nm);
    budget.require_dense(static_cast<long double>(N) * N, "matrix addition table");
    std::vector<std::uint64_t> pw(nm);
    for (int k = 0; k < nm; ++k) pw[k] = upow(f.q(), nm - 1 - k);
    std::vector<std::vector<Elem>> dig(N);
    rank.resize(N);
    for (std::uint64_t v = 0; v < N; ++v) {
      Mat a = Mat::from_index(f, n, m, v);
      dig[v] = a.entries();
      rank[v] = linex::rank(a);
    }
    add.resize(N * N);
    for (std::uint64_t u = 0; u < N; ++u)
      for (std::uint64_t v = u; v < N; ++v) {
        std::uint64_t w = 0;
        for (int k = 0; k < nm; ++k) w += f.add(dig[u][k], dig[v][k]) * pw[k];
        add[u * N + v] = add[v * N + u] = static_cast<std::uint32_t>(w);
      }
  }
  std::uint32_t sum(std::uint64_t u, std::uint64_t v) const { return add[u * N + v]; }
  std::uint32_t times(std::uint32_t c, std::uint32_t g) const {
    std::uint32_t r = 0;
    for (std::uint32_t i = 0; i < c; ++i) r = sum(r, g);
    return r;
  }
};

// Large additive subgroup whose nonzero elements all satisfy `allowed`.
// Depth-first over generators, trying at each level the few generators that
// keep the most candidates alive; stops at `target`. A heuristic: it only
// ever returns genuine subgroups and never claims maximality.
std::vector<int> allowed_subgroup(const MatrixGroup& G, const std::function<bool(std::uint32_t)>& allowed,
                                  std::size_t target, int branch, std::uint64_t node_limit) {
  using List = std::vector<std::uint32_t>;
  List best{0};
  std::uint64_t nodes = 0;
  auto extend = [&](const List& H, const List& C, const std::vector<char>& inC, std::uint32_t g, List& H2, List& C2) {
    H2 = H;
    List mult;
    for (std::uint32_t c = 1; c < static_cast<std::uint32_t>(G.p); ++c) mult.push_back(G.times(c, g));
    for (auto cg : mult)
      for (auto h : H) H2.push_back(G.sum(h, cg));
    C2.clear();
    for (auto x : C) {
      bool ok = true;
      for (auto cg : mult) {
        std::uint32_t y = G.sum(x, cg);
        // x + cg must itself be a candidate, and x must not fall in H2
        if (!inC[y]) {
          ok = false;
          break;
        }
      }
      if (ok && x != g) C2.push_back(x);
    }
    // drop elements of H2 from the candidates
    std::vector<char> inH(G.N, 0);
    for (auto h : H2) inH[h] = 1;
    C2.erase(std::remove_if(C2.begin(), C2.end(), [&](std::uint32_t x) { return inH[x] != 0; }), C2.end());
  };
  std::function<void(const List&, const List&)> dfs = [&](const List& H, const List& C) {
    if (H.size() > best.size()) best = H;
    if (best.size() >= target || C.empty() || nodes >= node_limit) return;
    if (H.size() * (1 + C.size() / H.size()) <= best.size()) return;
    std::vector<char> inC(G.N, 0);
    for (auto x : C) inC[x] = 1;
    std::vector<std::pair<std::size_t, std::uint32_t>> scored;
    List H2, C2;
    for (auto g : C) {
      extend(H, C, inC, g, H2, C2);
      scored.emplace_back(C2.size(), g);
    }
    std::stable_sort(scored.begin(), scored.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (int i = 0; i < branch && i < static_cast<int>(scored.size()); ++i) {
      ++nodes;
      extend(H, C, inC, scored[i].second, H2, C2);
      dfs(H2, C2);
      if (best.size() >= target || nodes >= node_limit) return;
    }
  };
  List C;
  for (std::uint32_t x = 1; x < G.N; ++x)
    if (allowed(x)) C.push_back(x);
  dfs({0}, C);
  std::vector<int> out(best.begin(), best.end());
  std::sort(out.begin(), out.end());
  return out;
}

Graph build_graph(const MatrixGroup& G, const std::vector<std::uint32_t>& gens) {
  Graph g(static_cast<int>(G.N));
  for (std::uint64_t v = 0; v < G.N; ++v)
    for (auto gen : gens) {
      std::uint32_t w = G.sum(v, gen);
      if (w > v) g.add_edge(static_cast<int>(v), static_cast<int>(w));
    }
  return g;
}

std::vector<std::uint32_t> generator_indices(const MatrixGroup& G, int m, int t) {
  std::vector<std::uint32_t> gens;
  for (std::uint32_t x = 0; x < G.N; ++x)
    if (G.rank[x] == m - t) gens.push_back(x);
  return gens;
}

}  // namespace

Graph cayley_graph(long q, int m, int n, int t, const Budget& budget) {
  check_params(m, n, t);
  if (t == m) throw DomainError("t = m gives a loop-only graph");
  const Field& f = Field::get(q);
  MatrixGroup G(f, n, m, budget);
  auto gens = generator_indices(G, m, t);
  if (mpz_class(static_cast<unsigned long>(gens.size())) != count_rank_d(n, m, m - t, q))
    throw Error("generator count disagrees with the rank count");
  return build_graph(G, gens);
}

std::string HoffmanReport::to_json() const {
  ordered_json j;
  j["q"] = q;
  j["m"] = m;
  j["n"] = n;
  j["t"] = t;
  j["vertices"] = vertices;
  j["bound"] = bound.get_str();
  j["mis_size"] = mis_size;
  j["mis_measure"] = mis_measure.get_str();
  j["clique_size"] = clique_size;
  j["exact"] = exact;
  j["nodes"] = nodes;
  j["holds"] = holds;
  return j.dump();
}

HoffmanReport hoffman_check(long q, int m, int n, int t, const Budget& budget) {
  check_params(m, n, t);
  if (t == m) throw DomainError("t = m gives a loop-only graph");
  HoffmanReport r;
  r.q = q;
  r.m = m;
  r.n = n;
  r.t = t;
  const Field& f = Field::get(q);
  MatrixGroup G(f, n, m, budget);
  Graph g = build_graph(G, generator_indices(G, m, t));
  r.vertices = g.size();
  r.bound = hoffman_bound(spectrum(q, m, n, t, budget));
  // alpha * omega <= N for vertex-transitive graphs; any clique gives a cap
  auto clique = greedy_clique(g);
  auto sub_clique = allowed_subgroup(G, [&](std::uint32_t x) { return G.rank[x] == m - t; }, G.N, 2, 2000);
  if (sub_clique.size() > clique.size()) clique = sub_clique;
  for (std::size_t i = 0; i < clique.size(); ++i)
    for (std::size_t j = i + 1; j < clique.size(); ++j)
      if (!g.adjacent(clique[i], clique[j])) throw Error("clique certificate is not a clique");
  r.clique_size = static_cast<long>(clique.size());
  MisOptions opt;
  opt.fixed = {0};  // translate any independent set to contain 0
  opt.upper_bound = r.vertices / r.clique_size;
  opt.incumbent = allowed_subgroup(G, [&](std::uint32_t x) { return G.rank[x] != m - t; },
                                   static_cast<std::size_t>(*opt.upper_bound), 2, 2000);
  MisResult res = max_independent_set(g, opt, budget);
  if (!is_independent(g, res.set)) throw Error("independent set search returned a dependent set");
  r.mis_size = static_cast<long>(res.set.size());
  r.mis_measure = mpq_class(r.mis_size, r.vertices);
  r.mis_measure.canonicalize();
  r.exact = res.optimal;
  r.nodes = res.nodes;
  r.holds = r.exact && r.bound >= r.mis_measure;
  return r;
}

}  // namespace linex
