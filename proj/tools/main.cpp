#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "linex/acceptance.hpp"
#include "linex/extremal.hpp"
#include "linex/io.hpp"
#include "linex/spectra.hpp"

using namespace linex;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2, kBudget = 3;

// Raised for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

void emit(const std::string& json) { std::cout << json << "\n"; }

struct CountArgs {
  std::string kind;
  long q = 2;
  int n = -1, m = -1, d = -1, t = -1, k = -1;
};

int cmd_count(const CountArgs& a) {
  require(a.q >= 2, "--q must be a prime power");
  Field::get(a.q);
  ordered_json j;
  j["kind"] = a.kind;
  j["q"] = a.q;
  std::string value;
  if (a.kind == "gauss") {
    require(a.m >= 0 && a.d >= 0 && a.d <= a.m, "gauss needs 0 <= --d <= --m");
    j["m"] = a.m;
    j["d"] = a.d;
    value = gaussian_binomial(a.m, a.d, a.q).get_str();
  } else if (a.kind == "rank") {
    require(a.n >= 0 && a.m >= 0 && a.d >= 0 && a.d <= std::min(a.n, a.m), "rank needs 0 <= --d <= min(--n, --m)");
    j["n"] = a.n;
    j["m"] = a.m;
    j["d"] = a.d;
    value = count_rank_d(a.n, a.m, a.d, a.q).get_str();
  } else if (a.kind == "mqt") {
    require(a.n >= 1 && a.t >= 0 && a.t <= a.n, "mqt needs 0 <= --t <= --n");
    j["n"] = a.n;
    j["t"] = a.t;
    value = m_qt(a.n, a.q, a.t).get_str();
  } else if (a.kind == "gl") {
    require(a.n >= 0, "gl needs --n");
    j["n"] = a.n;
    value = gl_order(a.n, a.q).get_str();
  } else if (a.kind == "phi") {
    require(a.m >= 0 && a.n >= 0 && a.t >= 0 && a.t <= a.m && a.m - a.t <= a.n, "phi needs 0 <= --m - --t <= --n");
    j["m"] = a.m;
    j["n"] = a.n;
    j["t"] = a.t;
    value = phi(a.m, a.n, a.t, a.q).get_str();
  } else if (a.kind == "avoid") {
    require(a.n >= 0 && a.k >= 0 && a.d >= 0 && a.k <= a.n && a.d <= a.n, "avoid needs 0 <= --k, --d <= --n");
    j["n"] = a.n;
    j["k"] = a.k;
    j["d"] = a.d;
    value = count_subspaces_avoiding(a.n, a.k, a.d, a.q).get_str();
  } else {
    throw UsageError("unknown --kind " + a.kind);
  }
  j["value"] = value;
  emit(j.dump());
  return kOk;
}

struct FourierArgs {
  std::string input, output;
  bool naive = false;
};

int cmd_fourier(const FourierArgs& a) {
  const DenseFunction f = parse_function(read_text_file(a.input));
  const Spectrum s = a.naive ? transform(f) : fast_transform(f);
  const bool parseval = s.parseval_sum() == f.norm2();
  const bool round_trip = inverse_transform(s) == f;
  ordered_json j;
  j["q"] = f.field().q();
  j["n"] = f.n();
  j["m"] = f.m();
  j["degree"] = degree(f);
  j["norm2"] = f.norm2().get_str();
  j["parseval"] = parseval;
  j["round_trip"] = round_trip;
  if (a.output.empty())
    j["spectrum"] = ordered_json::parse(s.to_json());
  else {
    write_text_file(a.output, s.to_json() + "\n");
    j["spectrum_file"] = a.output;
  }
  emit(j.dump());
  return parseval && round_trip ? kOk : kCheckFailed;
}

struct RegularityArgs {
  std::string family, out_dir = ".";
  int r = 1, s = 1;
};

int cmd_regularity(const RegularityArgs& a) {
  require(a.r >= 1 && a.s >= 1, "--r and --s must be positive");
  const Family fam = parse_family(read_text_file(a.family));
  const auto [junta, log] = regularity_decompose(fam, a.r, a.s);
  const auto chk = check_regularity(fam, junta, log);
  std::filesystem::create_directories(a.out_dir);
  const auto jpath = (std::filesystem::path(a.out_dir) / "junta.json").string();
  const auto lpath = (std::filesystem::path(a.out_dir) / "log.json").string();
  write_text_file(jpath, junta.to_json() + "\n");
  write_text_file(lpath, log.to_json() + "\n");
  ordered_json j;
  j["junta_file"] = jpath;
  j["log_file"] = lpath;
  j["components"] = junta.components().size();
  j["verification"] = ordered_json::parse(chk.to_json());
  emit(j.dump());
  return chk.ok() ? kOk : kCheckFailed;
}

struct BootstrapArgs {
  std::string family, alpha = "2", output;
  int s = 1, max_steps = 64;
};

int cmd_bootstrap(const BootstrapArgs& a) {
  mpq_class alpha;
  try {
    alpha = mpq_class(a.alpha);
    alpha.canonicalize();
  } catch (const std::invalid_argument&) {
    throw UsageError("--alpha must be a rational");
  }
  require(a.s >= 1 && a.max_steps >= 0, "--s must be positive and --max-steps nonnegative");
  const Family fam = parse_family(read_text_file(a.family));
  const auto res = bootstrap_quasiregular(fam, a.s, alpha, a.max_steps);
  ordered_json j;
  j["steps"] = res.chain.size();
  j["chain"] = ordered_json::array();
  for (const auto& r : res.chain) j["chain"].push_back(ordered_json::parse(r.to_json()));
  j["measures"] = ordered_json::array();
  for (const auto& m : res.measures) j["measures"].push_back(m.get_str());
  j["final_size"] = res.family.size();
  j["quasiregular"] = !is_quasiregular(res.family, a.s, alpha).has_value();
  if (!a.output.empty()) {
    write_text_file(a.output, format_family(res.family));
    j["family_file"] = a.output;
  }
  emit(j.dump());
  return j["quasiregular"].get<bool>() ? kOk : kCheckFailed;
}

struct ExtremalArgs {
  std::string what = "bound", mode = "exhaustive", side = "column", tau, output;
  long q = 2;
  int n = 2, t = 1, samples = 0;
  bool full = false;
};

int cmd_extremal(const ExtremalArgs& a, std::uint64_t seed) {
  require(a.n >= 1 && a.t >= 1 && a.t <= a.n, "need 1 <= --t <= --n");
  const Field& f = Field::get(a.q);
  if (a.what == "bound") {
    ExtremalMode mode;
    if (a.mode == "exhaustive") mode = ExtremalMode::exhaustive;
    else if (a.mode == "sample") mode = ExtremalMode::sample;
    else if (a.mode == "spectral") mode = ExtremalMode::spectral;
    else throw UsageError("unknown --mode " + a.mode);
    const auto rep = verify_extremal_bound(a.n, a.q, a.t, mode);
    emit(rep.to_json());
    return rep.status == "violated" ? kCheckFailed : kOk;
  }
  if (a.what == "canonical") {
    require(a.side == "column" || a.side == "row", "--side is column or row");
    const Family fam = canonical_family(a.n, a.q, a.t, a.side == "column" ? Side::column : Side::row);
    const bool ok = mpz_class(static_cast<unsigned long>(fam.size())) == m_qt(a.n, a.q, a.t);
    ordered_json j{{"n", a.n}, {"q", a.q}, {"t", a.t}, {"side", a.side}, {"size", fam.size()},
                   {"m_qt", m_qt(a.n, a.q, a.t).get_str()}, {"holds", ok}};
    if (!a.output.empty()) {
      write_text_file(a.output, format_family(fam));
      j["family_file"] = a.output;
    }
    emit(j.dump());
    return ok ? kOk : kCheckFailed;
  }
  if (a.what == "singer") {
    const auto rep = singer_check(a.n, a.q);
    if (!a.output.empty()) write_text_file(a.output, format_family(singer_cycle(a.n, a.q)));
    emit(rep.to_json());
    return rep.holds ? kOk : kCheckFailed;
  }
  if (a.what == "sl") {
    const auto [fam, rep] = sl_family(a.n, a.q, a.t);
    if (!a.output.empty()) write_text_file(a.output, format_family(fam));
    emit(rep.to_json());
    return rep.holds ? kOk : kCheckFailed;
  }
  if (a.what == "derangement") {
    Mat tau = Mat::identity(f, a.n);
    if (!a.tau.empty()) {
      tau = parse_literal(a.tau);
      require(&tau.field() == &f && tau.rows() == a.n && tau.cols() == a.n, "--tau must be an n x n literal over F_q");
    } else {
      // first seeded random invertible tau meeting the fixed-space condition
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> entry(0, static_cast<int>(a.q) - 1);
      for (;;) {
        for (int i = 0; i < a.n; ++i)
          for (int c = 0; c < a.n; ++c) tau.set(i, c, static_cast<Elem>(entry(rng)));
        if (rank(tau) != a.n) continue;
        try {
          derangement_fixed_dim(a.n, a.t, tau);
          break;
        } catch (const PreconditionViolated&) {
        }
      }
    }
    const auto rep = derangement_check(a.n, a.q, a.t, tau, a.full, a.samples, seed);
    ordered_json j = ordered_json::parse(rep.to_json());
    j["tau"] = tau.literal();
    emit(j.dump());
    return rep.holds ? kOk : kCheckFailed;
  }
  throw UsageError("unknown --what " + a.what);
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) throw UsageError("unknown suite " + suite);
  AcceptanceConfig cfg;
  cfg.seed = seed;
  bool ok = true;
  long n = 0;
  run_suite(suite, cfg, [&](const CheckResult& r) {
    ok = ok && r.pass;
    ++n;
    std::cout << r.to_json() << std::endl;
  });
  emit(ordered_json{{"suite", suite}, {"seed", seed}, {"checks", n}, {"pass", ok}}.dump());
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification toolkit for linear maps over finite fields"};
  app.require_subcommand(1);
  std::uint64_t seed = 0, budget_items = std::uint64_t{1} << 28;
  double budget_seconds = 600;
  unsigned threads = 1;
  app.add_option("--seed", seed, "seed for randomized corpora")->capture_default_str();
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
  app.add_option("--budget-items", budget_items, "largest enumeration allowed")->capture_default_str();
  app.add_option("--budget-seconds", budget_seconds, "wall-clock limit")->check(CLI::PositiveNumber)->capture_default_str();

  CountArgs ca;
  auto* count = app.add_subcommand("count", "closed-form counts");
  count->add_option("--kind", ca.kind, "gauss | rank | mqt | gl | phi | avoid")->required();
  count->add_option("--q", ca.q);
  count->add_option("--n", ca.n);
  count->add_option("--m", ca.m);
  count->add_option("--d", ca.d);
  count->add_option("--t", ca.t);
  count->add_option("--k", ca.k);

  long sq = 2;
  int sm = 1, sn = 1, st = 0;
  auto* spec = app.add_subcommand("spectrum", "eigenvalues of the rank Cayley graph");
  spec->add_option("--q", sq)->required();
  spec->add_option("--m", sm)->required();
  spec->add_option("--n", sn)->required();
  spec->add_option("--t", st)->required();

  FourierArgs fa;
  auto* four = app.add_subcommand("fourier", "transform of a function file");
  four->add_option("--input", fa.input)->required();
  four->add_option("--output", fa.output, "write the spectrum JSON here");
  four->add_flag("--naive", fa.naive, "use the direct character sum");

  RegularityArgs ra;
  auto* reg = app.add_subcommand("regularity", "junta decomposition of a family file");
  reg->add_option("--family", ra.family)->required();
  reg->add_option("--r", ra.r)->required();
  reg->add_option("--s", ra.s)->required();
  reg->add_option("--out-dir", ra.out_dir)->capture_default_str();

  BootstrapArgs ba;
  auto* boot = app.add_subcommand("bootstrap", "density increment until quasiregular");
  boot->add_option("--family", ba.family)->required();
  boot->add_option("--s", ba.s)->required();
  boot->add_option("--alpha", ba.alpha)->capture_default_str();
  boot->add_option("--max-steps", ba.max_steps)->capture_default_str();
  boot->add_option("--output", ba.output, "write the final family here");

  ExtremalArgs ea;
  auto* ext = app.add_subcommand("extremal", "extremal constructions and bounds in GL(n, q)");
  ext->add_option("--what", ea.what, "bound | canonical | singer | sl | derangement")->capture_default_str();
  ext->add_option("--mode", ea.mode, "exhaustive | sample | spectral")->capture_default_str();
  ext->add_option("--side", ea.side, "column | row")->capture_default_str();
  ext->add_option("--q", ea.q)->capture_default_str();
  ext->add_option("--n", ea.n)->capture_default_str();
  ext->add_option("--t", ea.t)->capture_default_str();
  ext->add_option("--tau", ea.tau, "matrix literal for the derangement check");
  ext->add_option("--samples", ea.samples, "random process outputs to test against H");
  ext->add_flag("--full", ea.full, "materialize every process output");
  ext->add_option("--output", ea.output, "write the family here");

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run acceptance suites");
  ver->add_option("--suite", suite, "fourier | spectra | families | extremal | all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Budget budget;
  budget.max_items = budget_items;
  budget.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget_seconds));
  set_default_budget(budget);
  set_default_threads(threads);

  try {
    if (*count) return cmd_count(ca);
    if (*spec) {
      const auto s = spectrum(sq, sm, sn, st);
      emit(s.to_json());
      return s.trace_check ? kOk : kCheckFailed;
    }
    if (*four) return cmd_fourier(fa);
    if (*reg) return cmd_regularity(ra);
    if (*boot) return cmd_bootstrap(ba);
    if (*ext) return cmd_extremal(ea, seed);
    if (*ver) return cmd_verify(suite, seed);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const StepBudgetExhausted& e) {
    std::cerr << "step budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionViolated& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    // file I/O and similar
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
