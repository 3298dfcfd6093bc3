#pragma once

#include <abemin/abe_cost.hpp>
#include <abemin/bench.hpp>
#include <abemin/circuit.hpp>
#include <abemin/datagen.hpp>
#include <abemin/equivalence.hpp>
#include <abemin/error.hpp>
#include <abemin/formula.hpp>
#include <abemin/heuristics.hpp>
#include <abemin/parser.hpp>
#include <abemin/rewrite.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace abemin {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitInvariant = 3,
};

/// Bad flag values; reported with the usage exit code.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace cli {

inline std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

inline double parse_double(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(std::string(text), &used);
    if (used == text.size()) {
      return value;
    }
  } catch (const std::exception&) {
  }
  throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
}

/// "lo:hi" or a single number.
inline IntRange parse_range(std::string_view text, std::string_view what) {
  const auto colon = text.find(':');
  IntRange range;
  if (colon == std::string_view::npos) {
    range.lo = range.hi = static_cast<int>(parse_u64(text, what));
  } else {
    range.lo = static_cast<int>(parse_u64(text.substr(0, colon), what));
    range.hi = static_cast<int>(parse_u64(text.substr(colon + 1), what));
  }
  if (!range.valid()) {
    throw UsageError("invalid " + std::string(what) + " range '" + std::string(text) + "'");
  }
  return range;
}

/// Applies "key=value,key=value" to `params`; every field is addressable.
inline void apply_params(HeuristicParams& params, std::string_view text) {
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) {
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("expected key=value in --params, got '" + std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "t_max") {
      params.t_max = parse_double(value, key);
    } else if (key == "t_min") {
      params.t_min = parse_double(value, key);
    } else if (key == "cooling_rate" || key == "c") {
      params.cooling_rate = parse_double(value, key);
    } else if (key == "inner_iterations" || key == "l") {
      params.inner_iterations = static_cast<unsigned>(parse_u64(value, key));
    } else if (key == "defactorization_probability" || key == "d") {
      params.defactorization_probability = parse_double(value, key);
    } else if (key == "k_max") {
      params.k_max = static_cast<unsigned>(parse_u64(value, key));
    } else if (key == "max_growth") {
      params.max_growth = parse_double(value, key);
    } else if (key == "restarts") {
      params.restarts = static_cast<unsigned>(parse_u64(value, key));
    } else if (key == "seed") {
      params.seed = parse_u64(value, key);
    } else if (key == "acceptance") {
      if (value == "standard") {
        params.acceptance = AcceptanceForm::Standard;
      } else if (value == "paper_literal") {
        params.acceptance = AcceptanceForm::PaperLiteral;
      } else {
        throw UsageError("acceptance must be 'standard' or 'paper_literal'");
      }
    } else {
      throw UsageError("unknown parameter '" + std::string(key) + "'");
    }
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline Algorithm algorithm_or_throw(std::string_view text) {
  const auto alg = parse_algorithm(text);
  if (!alg) {
    throw UsageError("unknown algorithm '" + std::string(text) + "' (expected hc, ihc, sa, isa, ch or ich)");
  }
  return *alg;
}

inline OutputFormat format_or_throw(std::string_view text) {
  const auto format = parse_output_format(text);
  if (!format) {
    throw UsageError("format must be table, json or csv");
  }
  return *format;
}

inline std::string read_text(const std::string& path, std::istream& in) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  std::ifstream file(path);
  if (!file) {
    throw Error("cannot open '" + path + "'");
  }
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

/// Formulas of a text input; a circuit is unfolded into a single formula.
struct Loaded {
  std::optional<Circuit> circuit;
  std::vector<Formula> formulas;
};

inline Loaded load_input(const std::string& path, std::istream& in) {
  const std::string text = read_text(path, in);
  Loaded loaded;
  if (looks_like_circuit(text)) {
    Circuit c = parse_circuit(text);
    require_valid(c);
    loaded.formulas.push_back(unfold(c));
    loaded.circuit = std::move(c);
    return loaded;
  }
  std::istringstream lines(text);
  loaded.formulas = read_formulas(lines);
  if (loaded.formulas.empty()) {
    throw Error("no formula in '" + path + "'");
  }
  return loaded;
}

inline std::string format_witness(const Assignment& witness, const AttributeUniverse& universe) {
  std::string out = "{";
  bool first = true;
  for (const auto& name : universe.names()) {
    const auto it = witness.find(name);
    if (it == witness.end()) {
      continue;
    }
    out += (first ? "" : ",") + name + "=" + (it->second ? "1" : "0");
    first = false;
  }
  return out + "}";
}

inline std::string percent(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << value << "%";
  return out.str();
}

struct OptimizeOptions {
  std::string input = "-";
  std::string algorithm = "hc";
  std::uint64_t seed = 0;
  bool check = false;
  std::string params;
  unsigned threads = 1;
};

inline int cmd_optimize(const OptimizeOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const Algorithm algorithm = algorithm_or_throw(o.algorithm);
  HeuristicParams params;
  params.seed = o.seed;
  apply_params(params, o.params);
  const Loaded loaded = load_input(o.input, in);
  SearchControl control;
  control.threads = std::max(1U, o.threads);
  for (std::size_t i = 0; i < loaded.formulas.size(); ++i) {
    const Formula& f = loaded.formulas[i];
    const auto start = std::chrono::steady_clock::now();
    const Formula g = run_algorithm(algorithm, f, params, derive_seed(params.seed, i), control);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (g.cost() > f.cost()) {
      throw InvariantViolation(std::string(short_name(algorithm)) + " increased the cost");
    }
    std::string verdict;
    if (o.check) {
      const EquivalenceResult r = loaded.circuit ? check_equivalence(*loaded.circuit, g, Exhaustive{})
                                                 : check_equivalence_auto(f, g, 22, 100000, params.seed);
      if (!r.equivalent) {
        err << "error: optimized formula is not equivalent to the input: " << g << "\n";
        return kExitInvariant;
      }
      verdict = r.exhaustive ? " check exhaustive" : " check sampled";
    }
    out << g << "\n";
    out << "cost " << f.cost() << " -> " << g.cost() << " (" << percent(reduction_percent(f.cost(), g.cost()))
        << ")" << verdict << " time " << std::fixed << std::setprecision(6) << seconds << " s\n";
    out.unsetf(std::ios::floatfield);
  }
  return kExitOk;
}

struct BenchOptions {
  std::vector<std::string> datasets;
  std::vector<int> presets;
  unsigned count = 30;
  std::vector<std::string> algorithms{"hc", "ihc", "sa", "isa", "ch", "ich"};
  unsigned repetitions = 16;
  std::uint64_t seed = 0;
  std::string format = "table";
  double time_limit = 0.0;
  unsigned threads = 1;
  bool check = false;
  std::string params;
};

inline int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  BenchConfig config;
  config.datasets = o.datasets;
  for (const auto& name : o.algorithms) {
    config.algorithms.push_back(algorithm_or_throw(name));
  }
  if (o.algorithms.empty()) {
    throw UsageError("at least one algorithm is required");
  }
  config.repetitions = o.repetitions;
  config.seed = o.seed;
  config.format = format_or_throw(o.format);
  if (o.time_limit > 0.0) {
    config.time_limit_seconds = o.time_limit;
  }
  config.threads = std::max(1U, o.threads);
  config.check = o.check;
  apply_params(config.params, o.params);
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.datasets.empty() && o.presets.empty()) {
    throw UsageError("bench needs dataset files or --preset");
  }
  std::vector<BenchDataset> data;
  for (const auto& path : o.datasets) {
    data.push_back(load_dataset(path));
  }
  for (int preset : o.presets) {
    if (preset < 1 || preset > 4) {
      throw UsageError("preset must be 1, 2, 3 or 4");
    }
    data.push_back({"Dataset " + std::to_string(preset),
                    generate_dataset(dataset_preset(preset, derive_seed(o.seed, static_cast<std::uint64_t>(preset))),
                                     o.count)});
  }
  const BenchReport report = run_bench(data, config, &err);
  write_report(out, report, config.format);
  return kExitOk;
}

struct AbeOptions {
  std::vector<unsigned> sizes{50, 100, 150, 200, 250};
  std::vector<std::string> optimizers{"none", "hc", "ch", "isa"};
  unsigned repeats = 30;
  std::uint64_t seed = 0;
  std::string format = "csv";
  double pairing_ms = 1.3;
  double share_gen_ms = 1.3;
  std::string keygen_basis = "original";
  unsigned threads = 1;
  std::string params;
};

inline int cmd_bench_abe(const AbeOptions& o, std::ostream& out) {
  AbeSeriesConfig config;
  config.sizes = o.sizes;
  config.optimizers.clear();
  for (const auto& name : o.optimizers) {
    if (name == "none") {
      config.optimizers.emplace_back(std::nullopt);
    } else {
      config.optimizers.emplace_back(algorithm_or_throw(name));
    }
  }
  config.repeats = o.repeats;
  config.seed = o.seed;
  config.model.pairing_ms = o.pairing_ms;
  config.model.share_gen_ms = o.share_gen_ms;
  if (o.keygen_basis == "original") {
    config.model.keygen_basis = KeygenShareBasis::Original;
  } else if (o.keygen_basis == "optimized") {
    config.model.keygen_basis = KeygenShareBasis::Optimized;
  } else {
    throw UsageError("keygen basis must be 'original' or 'optimized'");
  }
  config.threads = std::max(1U, o.threads);
  apply_params(config.params, o.params);
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_abe_series(out, run_abe_series(config), format_or_throw(o.format));
  return kExitOk;
}

struct VerifyOptions {
  std::vector<std::string> inputs;
  std::string mode = "exhaustive";
  std::size_t max_variables = 22;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  bool rewrites = false;
};

/// Lists every rewrite site of each formula and checks each rewrite.
inline int verify_rewrites(const Loaded& loaded, const EquivalenceMode& mode, std::ostream& out,
                           std::ostream& err) {
  int status = kExitOk;
  for (const auto& f : loaded.formulas) {
    out << f << "\n";
    for (RewriteKind kind : {RewriteKind::Factorization, RewriteKind::Defactorization}) {
      for (const auto& site : find_sites(f, kind)) {
        const Formula g = apply_rewrite(f, site);
        const EquivalenceResult r = check_equivalence(f, g, mode);
        const auto change = static_cast<std::int64_t>(g.cost()) - static_cast<std::int64_t>(f.cost());
        const bool delta_ok = kind == RewriteKind::Factorization ? change <= site.delta : change == site.delta;
        out << "  " << describe(f, site) << " -> " << g << (r.equivalent && delta_ok ? "  ok" : "  FAILED") << "\n";
        if (!r.equivalent || !delta_ok) {
          err << "error: rewrite broke " << (r.equivalent ? "its cost delta" : "equivalence") << "\n";
          status = kExitInvariant;
        }
      }
    }
  }
  return status;
}

inline int cmd_verify(const VerifyOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  EquivalenceMode mode;
  if (o.mode == "exhaustive") {
    mode = Exhaustive{o.max_variables};
  } else if (o.mode == "sampled") {
    mode = Sampled{o.samples, o.seed};
  } else {
    throw UsageError("mode must be 'exhaustive' or 'sampled'");
  }
  if (o.rewrites) {
    if (o.inputs.size() != 1) {
      throw UsageError("--rewrites takes exactly one input");
    }
    return verify_rewrites(load_input(o.inputs[0], in), mode, out, err);
  }
  if (o.inputs.size() != 2) {
    throw UsageError("verify takes two inputs");
  }
  const Loaded a = load_input(o.inputs[0], in);
  const Loaded b = load_input(o.inputs[1], in);
  if (a.formulas.size() != 1 || b.formulas.size() != 1) {
    throw Error("verify inputs must hold exactly one formula or circuit each");
  }
  const Formula& g = b.formulas.front();
  const EquivalenceResult r =
      a.circuit ? check_equivalence(*a.circuit, g, mode) : check_equivalence(a.formulas.front(), g, mode);
  if (!r.equivalent) {
    const AttributeUniverse universe = a.formulas.front().attributes().merged(g.attributes());
    out << "NOT-EQUIVALENT witness " << format_witness(*r.witness, universe) << "\n";
  } else if (r.exhaustive) {
    out << "EQUIVALENT\n";
  } else {
    out << "UNKNOWN-SAMPLED-OK (" << r.assignments_checked << " assignments)\n";
  }
  return kExitOk;
}

struct GenOptions {
  std::string family = "random";
  std::optional<int> preset;
  std::string vars;
  std::string lits;
  std::string clause_size;
  double or_probability = -1.0;
  unsigned count = 1;
  std::uint64_t seed = 0;
  unsigned bits = 0;
  std::optional<std::uint64_t> k;
  std::string prefix = "A";
  unsigned clauses = 0;
  unsigned attributes = 0;
  std::string output;
};

inline int cmd_gen(const GenOptions& o, std::ostream& out) {
  std::vector<Formula> formulas;
  std::ostringstream header;
  if (o.k) {
    if (o.family != "comparison") {
      throw UsageError("--k needs --family comparison");
    }
    const unsigned bits = o.bits == 0 ? 8 : o.bits;
    if (*o.k == 0 || bits > 63 || *o.k >= (std::uint64_t{1} << bits)) {
      throw UsageError("--k must satisfy 1 <= k < 2^bits");
    }
    header << "# gen family=comparison k=" << *o.k << " bits=" << bits << " prefix=" << o.prefix;
    formulas.assign(o.count, gen_comparison_formula(*o.k, bits, o.prefix));
  } else {
    GenSpec spec;
    if (o.preset) {
      if (*o.preset < 1 || *o.preset > 4) {
        throw UsageError("preset must be 1, 2, 3 or 4");
      }
      spec = dataset_preset(*o.preset);
    } else if (o.family == "comparison") {
      spec.family = DatasetFamily::ComparisonQuery;
      spec.comparison = ComparisonSpec{};
    } else if (o.family != "random") {
      throw UsageError("family must be 'random' or 'comparison'");
    }
    spec.seed = o.seed;
    if (!o.vars.empty()) {
      spec.variables = parse_range(o.vars, "--vars");
    }
    if (!o.lits.empty()) {
      spec.literals = parse_range(o.lits, "--lits");
    }
    if (!o.clause_size.empty()) {
      spec.clause_size = parse_range(o.clause_size, "--clause-size");
    }
    if (o.or_probability >= 0.0) {
      if (o.or_probability > 1.0) {
        throw UsageError("--or-prob must lie in [0, 1]");
      }
      spec.or_probability = o.or_probability;
    }
    if (spec.comparison) {
      if (o.bits != 0) {
        spec.comparison->bit_width = o.bits;
      }
      if (o.clauses != 0) {
        spec.comparison->num_clauses = o.clauses;
      }
      if (o.attributes != 0) {
        spec.comparison->numeric_attributes = o.attributes;
      }
    }
    header << "# gen family=" << (spec.comparison ? "comparison" : "random") << " vars=" << spec.variables.lo << ":"
           << spec.variables.hi << " lits=" << spec.literals.lo << ":" << spec.literals.hi
           << " clause-size=" << spec.clause_size.lo << ":" << spec.clause_size.hi
           << " or-prob=" << spec.or_probability;
    if (spec.comparison) {
      header << " bits=" << spec.comparison->bit_width << " clauses=" << spec.comparison->num_clauses
             << " attributes=" << spec.comparison->numeric_attributes;
    }
    header << " n=" << o.count << " seed=" << spec.seed;
    formulas = generate_dataset(spec, o.count);
  }
  std::ofstream file;
  if (!o.output.empty() && o.output != "-") {
    file.open(o.output);
    if (!file) {
      throw Error("cannot write '" + o.output + "'");
    }
  }
  std::ostream& sink = file.is_open() ? static_cast<std::ostream&>(file) : out;
  sink << header.str() << "\n";
  for (const auto& f : formulas) {
    sink << f << "\n";
  }
  return kExitOk;
}

} // namespace cli

/// Entry point of the abemin tool; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monotone Boolean formula minimizer for ABE access structures", "abemin"};
  app.require_subcommand(1);

  cli::OptimizeOptions optimize;
  auto* optimize_cmd = app.add_subcommand("optimize", "Minimize the literal count of formulas or a circuit");
  optimize_cmd->add_option("input", optimize.input, "Formula file, circuit file or - for stdin");
  optimize_cmd->add_option("--alg", optimize.algorithm, "hc, ihc, sa, isa, ch or ich");
  optimize_cmd->add_option("--seed", optimize.seed, "Random seed");
  optimize_cmd->add_flag("--check", optimize.check, "Verify the result with the equivalence oracle");
  optimize_cmd->add_option("--params", optimize.params, "Heuristic parameters as key=value,...");
  optimize_cmd->add_option("--threads", optimize.threads, "Workers for restarts of iterated variants");

  cli::BenchOptions bench;
  bench.algorithms = {"hc", "ihc", "sa", "isa", "ch", "ich"};
  auto* bench_cmd = app.add_subcommand("bench", "Table of MO, BOI and ART per dataset and algorithm");
  bench_cmd->add_option("datasets", bench.datasets, "Dataset files, one formula per line");
  bench_cmd->add_option("--preset", bench.presets, "Generate dataset family 1..4 instead of reading files")->delimiter(',')->allow_extra_args(false);
  bench_cmd->add_option("-n,--count", bench.count, "Formulas per generated dataset");
  bench_cmd->add_option("--alg", bench.algorithms, "Algorithms to run")->delimiter(',')->allow_extra_args(false);
  bench_cmd->add_option("--reps", bench.repetitions, "Repetitions per formula");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--format", bench.format, "table, json or csv");
  bench_cmd->add_option("--time-limit", bench.time_limit, "Seconds per formula and algorithm");
  bench_cmd->add_option("--threads", bench.threads, "Workers for repetitions");
  bench_cmd->add_flag("--check", bench.check, "Verify every best formula with the oracle");
  bench_cmd->add_option("--params", bench.params, "Heuristic parameters as key=value,...");

  cli::AbeOptions abe;
  auto* abe_cmd = bench_cmd->add_subcommand("abe", "Modeled key generation and decryption times");
  abe_cmd->add_option("--sizes", abe.sizes, "Share counts of the access structures")->delimiter(',');
  abe_cmd->add_option("--optimizers", abe.optimizers, "none and algorithm names")->delimiter(',');
  abe_cmd->add_option("--repeats", abe.repeats, "Access structures per size");
  abe_cmd->add_option("--seed", abe.seed, "Random seed");
  abe_cmd->add_option("--format", abe.format, "table, json or csv");
  abe_cmd->add_option("--pairing-ms", abe.pairing_ms, "Modeled time of one pairing");
  abe_cmd->add_option("--share-gen-ms", abe.share_gen_ms, "Modeled time to generate one share");
  abe_cmd->add_option("--keygen-basis", abe.keygen_basis, "original or optimized share count for keygen");
  abe_cmd->add_option("--threads", abe.threads, "Workers for restarts of iterated variants");
  abe_cmd->add_option("--params", abe.params, "Heuristic parameters as key=value,...");

  cli::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check two formulas or circuits for equivalence");
  verify_cmd->add_option("inputs", verify.inputs, "Two inputs, or one with --rewrites")->required();
  verify_cmd->add_option("--mode", verify.mode, "exhaustive or sampled");
  verify_cmd->add_option("--max-vars", verify.max_variables, "Largest universe for exhaustive mode");
  verify_cmd->add_option("--samples", verify.samples, "Assignments drawn in sampled mode");
  verify_cmd->add_option("--seed", verify.seed, "Seed of sampled mode");
  verify_cmd->add_flag("--rewrites", verify.rewrites, "List and check every rewrite site of the input");

  cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a dataset of random policies");
  gen_cmd->add_option("--family", gen.family, "random or comparison");
  gen_cmd->add_option("--preset", gen.preset, "Dataset family 1..4");
  gen_cmd->add_option("--vars", gen.vars, "Variable count range lo:hi");
  gen_cmd->add_option("--lits", gen.lits, "Literal count range lo:hi");
  gen_cmd->add_option("--clause-size", gen.clause_size, "Authorized set size range lo:hi");
  gen_cmd->add_option("--or-prob", gen.or_probability, "Probability of OR when linking subformulas");
  gen_cmd->add_option("-n,--count", gen.count, "Number of formulas");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--bits", gen.bits, "Bit width of comparisons");
  gen_cmd->add_option("--k", gen.k, "Emit the single comparison A >= k");
  gen_cmd->add_option("--prefix", gen.prefix, "Attribute prefix of --k");
  gen_cmd->add_option("--clauses", gen.clauses, "Comparisons per policy");
  gen_cmd->add_option("--attributes", gen.attributes, "Numeric attributes per policy");
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'abemin --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (optimize_cmd->parsed()) {
      return cli::cmd_optimize(optimize, in, out, err);
    }
    if (abe_cmd->parsed()) {
      return cli::cmd_bench_abe(abe, out);
    }
    if (bench_cmd->parsed()) {
      return cli::cmd_bench(bench, out, err);
    }
    if (verify_cmd->parsed()) {
      return cli::cmd_verify(verify, in, out, err);
    }
    if (gen_cmd->parsed()) {
      return cli::cmd_gen(gen, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

} // namespace abemin
