#include <algorithm>

#include "json.hpp"
#include "linex/errors.hpp"
#include "linex/matspace.hpp"
#include "linex/surd.hpp"

namespace linex {

mpz_class gaussian_binomial(int m, int d, long q) {
  if (d < 0 || m < 0 || d > m) throw DomainError("gaussian_binomial: need 0 <= d <= m");
  mpz_class num = 1, den = 1;
  for (int i = 1; i <= d; ++i) {
    num *= zpow(q, m - i + 1) - 1;
    den *= zpow(q, d - i + 1) - 1;
  }
  return num / den;
}

mpz_class count_rank_d(int n, int m, int d, long q) {
  if (d < 0 || d > std::min(n, m)) throw DomainError("count_rank_d: need 0 <= d <= min(m, n)");
  mpz_class r = gaussian_binomial(m, d, q) * gaussian_binomial(n, d, q);
  for (int i = 1; i <= d; ++i) r *= zpow(q, d) - zpow(q, i - 1);
  return r;
}

mpz_class m_qt(int n, long q, int t) {
  if (t < 1 || t > n) throw DomainError("m_qt: need 1 <= t <= n");
  mpz_class r = 1;
  for (int i = 1; i <= n - t; ++i) r *= zpow(q, n) - zpow(q, i + t - 1);
  return r;
}

mpq_class phi(int m, int n, int t, long q) {
  if (t < 0 || t > m || n < m - t) throw DomainError("phi: need 0 <= t <= m and n >= m - t");
  mpq_class r(count_rank_d(n, m, m - t, q), zpow(q, static_cast<unsigned long>(n) * m));
  r.canonicalize();
  return r;
}

mpz_class count_subspaces_avoiding(int n, int k, int d, long q) {
  if (k < 0 || d < 0 || k + d > n) throw DomainError("count_subspaces_avoiding: need k + d <= n");
  mpz_class num = 1, den = 1;
  for (int i = 1; i <= d; ++i) {
    num *= zpow(q, n) - zpow(q, k + i - 1);
    den *= zpow(q, d) - zpow(q, i - 1);
  }
  return num / den;
}

mpz_class gl_order(int n, long q) {
  mpz_class r = 1;
  for (int i = 0; i < n; ++i) r *= zpow(q, n) - zpow(q, i);
  return r;
}

std::string CountReport::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  j["value"] = value.get_den() == 1 ? value.get_num().get_str() : value.get_str();
  return j.dump();
}

}  // namespace linex
