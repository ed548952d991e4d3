#include "linex/mis.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "linex/errors.hpp"

namespace linex {

namespace {

using Bits = std::vector<std::uint64_t>;

inline void set_bit(Bits& b, int v) { b[v >> 6] |= std::uint64_t{1} << (v & 63); }
inline void clear_bit(Bits& b, int v) { b[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
inline bool test_bit(const Bits& b, int v) { return (b[v >> 6] >> (v & 63)) & 1; }

bool any(const Bits& b) {
  for (auto w : b)
    if (w) return true;
  return false;
}

int count(const Bits& b) {
  int c = 0;
  for (auto w : b) c += std::popcount(w);
  return c;
}

}  // namespace

Graph::Graph(int n) : n_(n), words_((n + 63) / 64), adj_(n, Bits(words_, 0)) {
  if (n < 0) throw DomainError("graph size must be nonnegative");
}

void Graph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw DomainError("vertex out of range");
  if (u == v) throw DomainError("loops are not supported");
  set_bit(adj_[u], v);
  set_bit(adj_[v], u);
}

bool Graph::adjacent(int u, int v) const { return test_bit(adj_[u], v); }

int Graph::degree(int v) const { return count(adj_[v]); }

bool is_independent(const Graph& g, const std::vector<int>& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] == s[j] || g.adjacent(s[i], s[j])) return false;
  return true;
}

std::vector<int> greedy_clique(const Graph& g) {
  std::vector<int> best;
  int starts = std::min(g.size(), 64);
  for (int s = 0; s < starts; ++s) {
    std::vector<int> k{s};
    Bits cand = g.row(s);
    while (any(cand)) {
      int pick = -1, score = -1;
      for (int w = 0; w < g.words(); ++w)
        for (std::uint64_t x = cand[w]; x; x &= x - 1) {
          int u = w * 64 + std::countr_zero(x);
          int sc = 0;
          for (int i = 0; i < g.words(); ++i) sc += std::popcount(cand[i] & g.row(u)[i]);
          if (sc > score) {
            score = sc;
            pick = u;
          }
        }
      k.push_back(pick);
      for (int i = 0; i < g.words(); ++i) cand[i] &= g.row(pick)[i];
    }
    if (k.size() > best.size()) best = k;
  }
  std::sort(best.begin(), best.end());
  return best;
}

namespace {

// Maximum clique of the complement. Vertices are relabelled so that bit
// order follows the initial ordering.
class Solver {
 public:
  Solver(const Graph& g, const MisOptions& opt, const Budget& budget) : g_(g), opt_(opt), budget_(budget) {
    int n = g.size();
    words_ = g.words();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // high complement degree first
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g.degree(a) < g.degree(b); });
    label_ = order;
    pos_.assign(n, 0);
    for (int i = 0; i < n; ++i) pos_[order[i]] = i;
    adj_.assign(n, Bits(words_, 0));
    for (int i = 0; i < n; ++i)
      for (int w = 0; w < words_; ++w)
        for (std::uint64_t x = g.row(order[i])[w]; x; x &= x - 1) set_bit(adj_[i], pos_[w * 64 + std::countr_zero(x)]);
  }

  MisResult run() {
    int n = g_.size();
    Bits P(words_, 0);
    for (int i = 0; i < n; ++i) set_bit(P, i);
    if (!is_independent(g_, opt_.fixed)) throw DomainError("fixed vertices are not independent");
    for (int v : opt_.fixed) {
      int i = pos_[v];
      cur_.push_back(i);
      clear_bit(P, i);
      for (int w = 0; w < words_; ++w) P[w] &= ~adj_[i][w];
    }
    if (!opt_.incumbent.empty()) {
      if (!is_independent(g_, opt_.incumbent)) throw DomainError("incumbent is not independent");
      for (int v : opt_.incumbent) best_.push_back(pos_[v]);
    }
    if (best_.size() < cur_.size()) best_ = cur_;
    if (any(P) && !reached_cap()) expand(P);
    MisResult r;
    for (int i : best_) r.set.push_back(label_[i]);
    std::sort(r.set.begin(), r.set.end());
    r.optimal = !aborted_;
    r.nodes = nodes_;
    return r;
  }

 private:
  bool reached_cap() const { return opt_.upper_bound && static_cast<long>(best_.size()) >= *opt_.upper_bound; }

  void expand(Bits P) {
    if (aborted_ || reached_cap()) return;
    if (++nodes_ > opt_.max_nodes) {
      aborted_ = true;
      return;
    }
    if ((nodes_ & 0xfff) == 0) budget_.check_deadline("independent set search");
    // greedy cover of P by cliques of g (independent sets of the complement)
    std::vector<int> verts, col;
    Bits U = P;
    int k = 0;
    int need = static_cast<int>(best_.size()) - static_cast<int>(cur_.size());
    while (any(U)) {
      ++k;
      Bits Q = U;
      while (any(Q)) {
        int v = -1;
        for (int w = 0; w < words_; ++w)
          if (Q[w]) {
            v = w * 64 + std::countr_zero(Q[w]);
            break;
          }
        clear_bit(U, v);
        clear_bit(Q, v);
        for (int w = 0; w < words_; ++w) Q[w] &= adj_[v][w];
        if (k > need) {
          verts.push_back(v);
          col.push_back(k);
        }
      }
    }
    for (int i = static_cast<int>(verts.size()) - 1; i >= 0; --i) {
      if (static_cast<int>(cur_.size()) + col[i] <= static_cast<int>(best_.size())) return;
      int v = verts[i];
      Bits np(words_);
      for (int w = 0; w < words_; ++w) np[w] = P[w] & ~adj_[v][w];
      clear_bit(np, v);
      cur_.push_back(v);
      if (!any(np)) {
        if (cur_.size() > best_.size()) best_ = cur_;
      } else {
        expand(np);
      }
      cur_.pop_back();
      if (aborted_ || reached_cap()) return;
      clear_bit(P, v);
    }
  }

  const Graph& g_;
  const MisOptions& opt_;
  const Budget& budget_;
  int words_;
  std::vector<int> label_, pos_;
  std::vector<Bits> adj_;
  std::vector<int> cur_, best_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

MisResult max_independent_set(const Graph& g, const MisOptions& opt, const Budget& budget) {
  budget.require_dense(static_cast<long double>(g.size()) * g.size(), "independent set search");
  return Solver(g, opt, budget).run();
}

}  // namespace linex
