#include "linex/budget.hpp"

#include <atomic>
#include <mutex>

#include "linex/errors.hpp"

namespace linex {
namespace {

std::mutex g_budget_mutex;
Budget g_budget;
std::atomic<unsigned> g_threads{1};

}  // namespace

void Budget::require_items(long double items, const std::string& what) const {
  if (items > static_cast<long double>(max_items)) {
    throw BudgetExceeded(what + ": " + std::to_string(static_cast<double>(items)) +
                         " items exceeds cap " + std::to_string(max_items));
  }
}

void Budget::require_dense(long double items, const std::string& what) const {
  if (items > static_cast<long double>(max_dense)) {
    throw BudgetExceeded(what + ": dense table of " + std::to_string(static_cast<double>(items)) +
                         " entries exceeds cap " + std::to_string(max_dense));
  }
}

void Budget::check_deadline(const std::string& what) const {
  if (deadline && std::chrono::steady_clock::now() > *deadline) {
    throw BudgetExceeded(what + ": wall-clock budget exhausted");
  }
}

const Budget& default_budget() {
  std::lock_guard lock(g_budget_mutex);
  return g_budget;
}

void set_default_budget(const Budget& budget) {
  std::lock_guard lock(g_budget_mutex);
  g_budget = budget;
}

unsigned default_threads() { return g_threads.load(); }

void set_default_threads(unsigned threads) { g_threads.store(threads == 0 ? 1 : threads); }

}  // namespace linex
