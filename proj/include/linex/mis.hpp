#pragma once

// Exact maximum independent set by bitset branch and bound (greedy clique
// cover as the upper bound), for graphs of a few thousand vertices.

#include <cstdint>
#include <optional>
#include <vector>

#include "linex/budget.hpp"

namespace linex {

class Graph {
 public:
  explicit Graph(int n);
  int size() const { return n_; }
  void add_edge(int u, int v);
  bool adjacent(int u, int v) const;
  int degree(int v) const;
  const std::vector<std::uint64_t>& row(int v) const { return adj_[v]; }
  int words() const { return words_; }

 private:
  int n_;
  int words_;
  std::vector<std::vector<std::uint64_t>> adj_;
};

struct MisOptions {
  /// Vertices forced into the set (must be pairwise non-adjacent).
  std::vector<int> fixed;
  /// Known independent set used as the starting incumbent.
  std::vector<int> incumbent;
  /// A proven upper bound on the answer; the search stops once reached.
  std::optional<long> upper_bound;
  std::uint64_t max_nodes = std::uint64_t{1} << 32;
};

struct MisResult {
  std::vector<int> set;  // sorted
  bool optimal = false;  // false only when the node cap was hit
  std::uint64_t nodes = 0;
};

MisResult max_independent_set(const Graph& g, const MisOptions& opt = {},
                              const Budget& budget = default_budget());

/// Largest clique found greedily from every start vertex (a lower bound).
std::vector<int> greedy_clique(const Graph& g);

bool is_independent(const Graph& g, const std::vector<int>& s);

}  // namespace linex
