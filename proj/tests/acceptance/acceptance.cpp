// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset. Exit status is 0 only when every selected
// criterion passes.

#include <abemin.hpp>

#include "support/cli_harness.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

using namespace abemin;

namespace {

// Pinned tolerances and budgets.
constexpr double kSharedReduction = 25.0;
constexpr double kSharedBudgetS = 1.0;
constexpr double kDagBudgetS = 30.0;
constexpr double kSafetyBudgetS = 600.0;
constexpr double kComparisonBudgetS = 60.0;
constexpr double kTableBudgetS = 1800.0;
constexpr double kAbeBudgetS = 1200.0;
constexpr double kDataset4HcMax = 15.0;
constexpr double kDataset4IsaMin = 30.0;
constexpr double kDataset2IchLead = 10.0;
constexpr double kKeygenTolerance = 0.05;
constexpr double kEps = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Outcome over_budget(Outcome o, double elapsed, double budget) {
  if (elapsed > budget) {
    o.pass = false;
    o.detail += "; over budget " + fmt(elapsed) + " s > " + fmt(budget, 0) + " s";
  }
  return o;
}

// 1. The three-input example through the CLI, 100 seeds.
Outcome shared_input_reduction() {
  const auto start = Clock::now();
  const std::string input = std::string(ABEMIN_SAMPLES_DIR) + "/shared_input.txt";
  const Formula expected = parse_formula("In2 & (In1 | In3)");
  int good = 0;
  std::string first_bad;
  for (int seed = 0; seed < 100; ++seed) {
    const auto r = support::run({"optimize", "--alg", "hc", "--check", "--seed", std::to_string(seed), input});
    std::istringstream lines(r.out);
    std::string formula;
    std::string summary;
    std::getline(lines, formula);
    std::getline(lines, summary);
    bool ok = r.code == kExitOk && summary.rfind("cost 4 -> 3 (" + fmt(kSharedReduction) + "%) check exhaustive", 0) == 0;
    ok = ok && parse_formula(formula) == expected &&
         check_equivalence(parse_formula(formula), parse_formula("(In1 & In2) | (In2 & In3)")).equivalent;
    good += ok ? 1 : 0;
    if (!ok && first_bad.empty()) {
      first_bad = "seed " + std::to_string(seed) + ": " + r.out + r.err;
    }
  }
  Outcome o{good == 100, std::to_string(good) + "/100 seeds give cost 3, 25.0%, equivalent"};
  if (!first_bad.empty()) {
    o.detail += "; " + first_bad;
  }
  return over_budget(o, seconds_since(start), kSharedBudgetS);
}

// 2. Path/literal identity. Normalized formulas merge repeated subformulas,
// so the identity is checked on DAGs where no merge can happen; arbitrary
// DAGs are checked for cost <= paths and equivalence.
Outcome share_count_identity() {
  const auto start = Clock::now();
  Rng rng(20);
  int identity = 0;
  int identity_equiv = 0;
  int general_ok = 0;
  int general_equal = 0;
  int paths_match = 0;
  for (int n = 0; n < 500; ++n) {
    const Circuit c = support::irredundant_dag(rng, 12, 40);
    const auto paths = path_count(c);
    const Formula f = unfold(c);
    identity += f.cost() == paths.total ? 1 : 0;
    identity_equiv += check_equivalence(c, f).equivalent ? 1 : 0;
    paths_match += paths.total == support::enumerate_paths(c, c.output) ? 1 : 0;

    const Circuit g = support::random_dag(rng, 12, 40);
    const auto gpaths = path_count(g);
    const Formula gf = unfold(g);
    general_ok += gf.cost() <= gpaths.total && check_equivalence(g, gf).equivalent ? 1 : 0;
    general_equal += gf.cost() == gpaths.total ? 1 : 0;
  }
  Outcome o;
  o.pass = identity == 500 && identity_equiv == 500 && general_ok == 500 && paths_match == 500;
  o.detail = "irredundant DAGs: cost = paths " + std::to_string(identity) + "/500, equivalent " +
             std::to_string(identity_equiv) + "/500, DP = enumeration " + std::to_string(paths_match) +
             "/500; arbitrary DAGs: cost <= paths and equivalent " + std::to_string(general_ok) +
             "/500 (cost = paths in " + std::to_string(general_equal) + ")";
  return over_budget(o, seconds_since(start), kDagBudgetS);
}

// Corpus of criterion 3: half generated policies, half formulas with many
// shared subterms; at most 12 variables.
std::vector<Formula> safety_corpus() {
  std::vector<Formula> out;
  Rng rng(30);
  GenSpec spec;
  spec.variables = {4, 12};
  spec.literals = {6, 30};
  spec.clause_size = {2, 4};
  for (std::size_t i = 0; i < 500; ++i) {
    spec.seed = derive_seed(30, i);
    out.push_back(generate(spec));
  }
  while (out.size() < 1000) {
    const Formula f = support::redundant_formula(rng, static_cast<std::size_t>(uniform_int(rng, 3, 12)));
    if (f.root().is_gate()) {
      out.push_back(f);
    }
  }
  return out;
}

struct SafetyResult {
  std::size_t runs = 0;
  std::size_t bad_equivalence = 0;
  std::size_t cost_increase = 0;
  std::size_t hc_runs = 0;
  std::size_t hc_pairs = 0;
  std::size_t other_local_optima = 0;
  std::size_t other_runs = 0;
  std::size_t max_vars = 0;
  double seconds = 0.0;
};

const SafetyResult& safety_runs() {
  static const SafetyResult result = [] {
    SafetyResult r;
    const auto start = Clock::now();
    const auto corpus = safety_corpus();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Formula& f = corpus[i];
      r.max_vars = std::max(r.max_vars, f.attributes().size());
      for (Algorithm a : kAllAlgorithms) {
        for (std::uint64_t s = 0; s < 3; ++s) {
          HeuristicParams params;
          params.seed = derive_seed(i, s);
          const Formula g = run_algorithm(a, f, params, params.seed);
          ++r.runs;
          r.cost_increase += g.cost() > f.cost() ? 1 : 0;
          r.bad_equivalence += check_equivalence(f, g, Exhaustive{12}).equivalent ? 0 : 1;
          const std::size_t pairs = support::brute_force_factorization_pairs(g);
          if (base_algorithm(a) == Algorithm::HillClimbing) {
            ++r.hc_runs;
            r.hc_pairs += pairs;
          } else {
            ++r.other_runs;
            r.other_local_optima += pairs == 0 ? 1 : 0;
          }
        }
      }
    }
    r.seconds = seconds_since(start);
    return r;
  }();
  return result;
}

// 3. Equivalence safety.
Outcome equivalence_safety() {
  const auto& r = safety_runs();
  Outcome o;
  o.pass = r.runs == 18000 && r.bad_equivalence == 0 && r.cost_increase == 0 && r.max_vars <= 12;
  o.detail = std::to_string(r.runs) + " runs over 1000 formulas (<= " + std::to_string(r.max_vars) +
             " variables): non-equivalent " + std::to_string(r.bad_equivalence) + ", cost increased " +
             std::to_string(r.cost_increase) + ", " + fmt(r.seconds) + " s";
  return over_budget(o, r.seconds, kSafetyBudgetS);
}

// 4. Local-optimum certificate on the HC and IHC runs of criterion 3.
Outcome local_optimum_certificate() {
  const auto& r = safety_runs();
  Outcome o;
  o.pass = r.hc_runs == 6000 && r.hc_pairs == 0;
  o.detail = std::to_string(r.hc_runs) + " HC/IHC outputs, brute-force factorization pairs " +
             std::to_string(r.hc_pairs) + " (other algorithms: " + std::to_string(r.other_local_optima) + "/" +
             std::to_string(r.other_runs) + " outputs also pair-free)";
  return o;
}

// 5. Defactorization followed by the factorizations it induces restores the
// cost. Formulas are trimmed and irredundant; on redundant formulas the
// re-factorized result can only be cheaper, which is reported separately.
Outcome rewrite_inverse() {
  Rng rng(50);
  int pairs = 0;
  int restored = 0;
  int equivalent_all = 0;
  while (pairs < 500) {
    const Formula f = trim(support::random_formula(rng, static_cast<std::size_t>(uniform_int(rng, 4, 8)), 4, 4));
    if (!support::is_irredundant(f)) {
      continue;
    }
    const auto sites = find_defactorization_sites(f);
    if (sites.empty()) {
      continue;
    }
    const RewriteSite& site = sites[uniform_index(rng, sites.size())];
    const Formula d = apply_defactorization(f, site);
    const Formula g = support::induced_factorization(f, site);
    ++pairs;
    restored += g.cost() == f.cost() ? 1 : 0;
    equivalent_all += support::naive_equivalent(f, d) && support::naive_equivalent(f, g) ? 1 : 0;
  }
  int redundant_pairs = 0;
  int redundant_not_above = 0;
  while (redundant_pairs < 200) {
    const Formula f = support::redundant_formula(rng, 6);
    const auto sites = find_defactorization_sites(f);
    if (sites.empty()) {
      continue;
    }
    const Formula g = support::induced_factorization(f, sites[uniform_index(rng, sites.size())]);
    ++redundant_pairs;
    redundant_not_above += g.cost() <= f.cost() && support::naive_equivalent(f, g) ? 1 : 0;
  }
  Outcome o;
  o.pass = restored == 500 && equivalent_all == 500;
  o.detail = "cost restored " + std::to_string(restored) + "/500, equivalent throughout " +
             std::to_string(equivalent_all) + "/500; redundant inputs: cost <= original " +
             std::to_string(redundant_not_above) + "/200";
  return o;
}

// 6. Annealing schedule arithmetic with default parameters.
Outcome sa_loop_arithmetic() {
  const auto levels = static_cast<unsigned>(std::ceil(std::log(0.1) / std::log(0.9)));
  const HeuristicParams params;
  bool ok = levels == 22 && temperature_levels(params) == levels;
  unsigned max_proposals = 0;
  for (int preset = 1; preset <= 4; ++preset) {
    const Formula f = generate(dataset_preset(preset, 60));
    AnnealTrace trace;
    SearchControl control;
    control.trace = &trace;
    simulated_annealing(f, params, 6, control);
    ok = ok && trace.temperature_levels == levels && trace.proposals <= levels * params.inner_iterations;
    max_proposals = std::max(max_proposals, trace.proposals);
  }
  return {ok, "levels " + std::to_string(temperature_levels(params)) + " (expected " + std::to_string(levels) +
                  "), max proposals " + std::to_string(max_proposals) + " <= 550"};
}

// 7. Comparison formulas against numeric comparison.
Outcome comparison_correctness() {
  const auto start = Clock::now();
  std::uint64_t checked = 0;
  std::uint64_t wrong = 0;
  for (unsigned b = 3; b <= 10; ++b) {
    const std::uint64_t size = std::uint64_t{1} << b;
    std::vector<Assignment> encodings(size);
    for (std::uint64_t a = 0; a < size; ++a) {
      for (unsigned i = 0; i < b; ++i) {
        encodings[a]["A" + std::to_string(i)] = ((a >> i) & 1U) != 0;
      }
    }
    for (std::uint64_t k = 1; k < size; ++k) {
      const Formula f = gen_comparison_formula(k, b, "A");
      for (std::uint64_t a = 0; a < size; ++a) {
        wrong += evaluate(f, encodings[a]) == (a >= k) ? 0 : 1;
        ++checked;
      }
    }
  }
  Outcome o{wrong == 0, std::to_string(checked) + " (k, A) pairs for b = 3..10, mismatches " + std::to_string(wrong)};
  return over_budget(o, seconds_since(start), kComparisonBudgetS);
}

// 8. Qualitative shape of the results table on regenerated corpora.
Outcome table_shape() {
  const auto start = Clock::now();
  std::vector<BenchDataset> data;
  for (int preset = 1; preset <= 4; ++preset) {
    data.push_back({"Dataset " + std::to_string(preset),
                    generate_dataset(dataset_preset(preset, derive_seed(80, static_cast<std::uint64_t>(preset))), 30)});
  }
  BenchConfig config;
  config.algorithms.assign(kAllAlgorithms.begin(), kAllAlgorithms.end());
  config.repetitions = 16;
  config.seed = 80;
  config.check = true;
  const BenchReport report = run_bench(data, config, &std::cerr);
  write_table(std::cout, report);

  bool ok = true;
  std::string notes;
  auto mo = [&](int d, Algorithm a) { return report.cell("Dataset " + std::to_string(d), a).mo_percent; };
  for (int d = 1; d <= 4; ++d) {
    for (Algorithm a : {Algorithm::HillClimbing, Algorithm::SimulatedAnnealing, Algorithm::CustomHeuristic}) {
      const Algorithm it = a == Algorithm::HillClimbing        ? Algorithm::IteratedHillClimbing
                           : a == Algorithm::SimulatedAnnealing ? Algorithm::IteratedSimulatedAnnealing
                                                                : Algorithm::IteratedCustomHeuristic;
      if (mo(d, it) + kEps < mo(d, a)) {
        ok = false;
        notes += "; (a) fails on Dataset " + std::to_string(d) + " for " + std::string(short_name(it));
      }
    }
  }
  for (const auto& c : report.cells) {
    if (c.failures > 0) {
      ok = false;
      notes += "; " + std::to_string(c.failures) + " failed runs";
    }
  }
  const bool b = mo(4, Algorithm::HillClimbing) < kDataset4HcMax && mo(4, Algorithm::IteratedSimulatedAnnealing) > kDataset4IsaMin;
  const bool c = mo(2, Algorithm::IteratedCustomHeuristic) >= mo(2, Algorithm::HillClimbing) + kDataset2IchLead;
  ok = ok && b && c;
  Outcome o{ok, "(a) iterated >= base on all datasets" + std::string(notes.empty() ? "" : " NO") +
                    "; (b) Dataset 4 MO(HC) " + fmt(mo(4, Algorithm::HillClimbing)) + "% < 15, MO(ISA) " +
                    fmt(mo(4, Algorithm::IteratedSimulatedAnnealing)) + "% > 30: " + (b ? "yes" : "NO") +
                    "; (c) Dataset 2 MO(ICH) " + fmt(mo(2, Algorithm::IteratedCustomHeuristic)) + "% vs MO(HC) " +
                    fmt(mo(2, Algorithm::HillClimbing)) + "% + 10: " + (c ? "yes" : "NO") + notes};
  return over_budget(o, seconds_since(start), kTableBudgetS);
}

// 9. Modeled ABE timing series.
Outcome abe_series_shape() {
  const auto start = Clock::now();
  AbeSeriesConfig config;
  config.seed = 90;
  const AbeSeries series = run_abe_series(config);
  write_abe_series(std::cout, series, OutputFormat::Table);
  bool order = true;
  bool keygen = true;
  double worst_keygen = 0.0;
  for (unsigned size : config.sizes) {
    const auto& none = series.point(size, "none");
    const auto& hc = series.point(size, "HC");
    const auto& ch = series.point(size, "CH");
    const auto& isa = series.point(size, "ISA");
    order = order && isa.mean_decrypt_ms <= ch.mean_decrypt_ms + kEps &&
            ch.mean_decrypt_ms <= hc.mean_decrypt_ms + kEps && hc.mean_decrypt_ms <= none.mean_decrypt_ms + kEps;
    const double rel = std::abs(hc.mean_keygen_ms - none.mean_keygen_ms) / none.mean_keygen_ms;
    worst_keygen = std::max(worst_keygen, rel);
    keygen = keygen && rel <= kKeygenTolerance;
  }
  Outcome o{order && keygen, std::string("decrypt ISA <= CH <= HC <= none at every size: ") + (order ? "yes" : "NO") +
                                 "; HC keygen within " + fmt(100 * worst_keygen, 2) + "% of unoptimized (<= 5%)"};
  return over_budget(o, seconds_since(start), kAbeBudgetS);
}

// 10. Determinism across runs and thread counts.
Outcome determinism() {
  struct Case {
    std::vector<std::string> args;
    std::string stdin_text;
    std::vector<std::string> timing_columns;
  };
  const std::string sample = std::string(ABEMIN_SAMPLES_DIR) + "/shared_input.txt";
  const std::string policy =
      "(a & b & c) | (a & b & d) | (b & c & e) | (a & e & f) | (c & d & e) | (b & d & f) | (a & c & f)\n";
  const std::vector<Case> cases = {
      {{"optimize", "--alg", "ich", "--seed", "7", "--check", "-"}, policy, {}},
      {{"optimize", "--alg", "isa", "--seed", "3", "-"}, policy, {}},
      {{"optimize", "--alg", "ihc", "--seed", "1", sample}, "", {}},
      {{"gen", "--preset", "2", "-n", "5", "--seed", "11"}, "", {}},
      {{"gen", "--family", "comparison", "-n", "5", "--seed", "12"}, "", {}},
      {{"bench", "--preset", "1", "--preset", "4", "-n", "3", "--alg", "hc,isa,ich", "--reps", "3", "--seed", "13"},
       "",
       {}},
      {{"bench", "--preset", "2", "-n", "2", "--reps", "2", "--format", "csv", "--seed", "14"}, "", {"art_seconds"}},
      {{"bench", "--preset", "1", "-n", "2", "--alg", "ich", "--reps", "2", "--format", "json", "--seed", "15"}, "", {}},
      {{"bench", "abe", "--sizes", "30,60", "--repeats", "3", "--seed", "16"}, "", {"keygen_ms", "optimizer_ms"}},
      {{"verify", "--mode", "sampled", "--samples", "5000", "--seed", "17", "-", sample}, "", {}},
  };
  int stable = 0;
  std::string first_bad;
  for (const auto& c : cases) {
    auto normalize = [&](const support::CliRun& r) {
      std::string s = c.timing_columns.empty() ? r.out : support::drop_csv_columns(r.out, c.timing_columns);
      return std::to_string(r.code) + "\n" + support::strip_timing(s);
    };
    auto with_threads = [&](const std::string& n) {
      auto args = c.args;
      if (args[0] == "optimize" || args[0] == "bench") {
        args.insert(args.begin() + (args[1] == "abe" ? 2 : 1), {"--threads", n});
      }
      return args;
    };
    std::string stdin_text = c.stdin_text;
    if (c.args[0] == "verify") {
      stdin_text = "(In1 & In2) | (In2 & In3) | (In1 & In4)\n";
    }
    const std::string a = normalize(support::run(with_threads("1"), stdin_text));
    const std::string b = normalize(support::run(with_threads("1"), stdin_text));
    const std::string t = normalize(support::run(with_threads("4"), stdin_text));
    const bool same = a == b && a == t && a.rfind("0\n", 0) == 0;
    stable += same ? 1 : 0;
    if (!same && first_bad.empty()) {
      first_bad = "; differs: " + c.args[0] + " " + c.args[1];
    }
  }
  return {stable == static_cast<int>(cases.size()),
          std::to_string(stable) + "/" + std::to_string(cases.size()) +
              " commands byte-identical across two runs and 1 vs 4 threads" + first_bad};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "shared-input-reduction", shared_input_reduction},
      {2, "share-count-identity", share_count_identity},
      {3, "equivalence-safety", equivalence_safety},
      {4, "local-optimum-certificate", local_optimum_certificate},
      {5, "rewrite-inverse", rewrite_inverse},
      {6, "sa-loop-arithmetic", sa_loop_arithmetic},
      {7, "comparison-correctness", comparison_correctness},
      {8, "table-shape", table_shape},
      {9, "abe-series-shape", abe_series_shape},
      {10, "determinism", determinism},
  };
  // --report: exit 0 once every selected criterion reached a verdict, even a
  // FAIL one; harness errors still exit nonzero.
  bool report = false;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::string_view(argv[i]) == "--report") {
      report = true;
    } else {
      selected.insert(std::atoi(argv[i]));
    }
  }
  int ran = 0;
  int failed = 0;
  int errors = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) {
      continue;
    }
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
      ++errors;
    }
    ++ran;
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " (" << fmt(seconds_since(start))
              << " s): " << o.detail << std::endl;
  }
  std::cout << ran - failed << "/" << ran << " criteria passed" << std::endl;
  if (report) {
    return errors == 0 ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
