#include <cstdio>
#include <cstdlib>
#include <string>

#include "linex/acceptance.hpp"

// One line per criterion; exit status 1 if any fails.
int main(int argc, char** argv) {
  linex::AcceptanceConfig cfg;
  std::string suite = "all";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) cfg.seed = std::strtoull(argv[++i], nullptr, 10);
    else if (a == "--suite" && i + 1 < argc) suite = argv[++i];
  }
  bool ok = true;
  linex::run_suite(suite, cfg, [&](const linex::CheckResult& r) {
    ok = ok && r.pass;
    std::printf("%s criterion %2d  %-46s instances=%ld failures=%ld  %.1fs\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.instances, r.failures, r.seconds);
    if (!r.pass) std::printf("  detail: %s\n", r.detail.c_str());
    std::fflush(stdout);
  });
  return ok ? 0 : 1;
}
