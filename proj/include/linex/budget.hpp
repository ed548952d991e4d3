#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace linex {

/// Desk-scale guardrails. Enumerations refuse to start when their
/// cardinality exceeds `max_items`; dense tables are capped separately.
struct Budget {
  std::uint64_t max_items = std::uint64_t{1} << 28;
  std::uint64_t max_dense = std::uint64_t{1} << 24;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  /// Throws BudgetExceeded if `items` is over the item cap.
  void require_items(long double items, const std::string& what) const;
  void require_dense(long double items, const std::string& what) const;
  /// Throws BudgetExceeded once the wall-clock deadline has passed.
  void check_deadline(const std::string& what) const;
};

/// Process-wide budget used when a call does not pass one explicitly.
const Budget& default_budget();
void set_default_budget(const Budget& budget);

/// Worker count used by census-style reductions (1 = serial).
unsigned default_threads();
void set_default_threads(unsigned threads);

}  // namespace linex
