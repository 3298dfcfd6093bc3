#pragma once

#include <abemin/equivalence.hpp>
#include <abemin/error.hpp>
#include <abemin/formula.hpp>
#include <abemin/parallel.hpp>
#include <abemin/random.hpp>
#include <abemin/rewrite.hpp>

#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace abemin {

enum class Algorithm : std::uint8_t {
  HillClimbing,
  SimulatedAnnealing,
  CustomHeuristic,
  IteratedHillClimbing,
  IteratedSimulatedAnnealing,
  IteratedCustomHeuristic,
};

inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::HillClimbing,         Algorithm::IteratedHillClimbing,       Algorithm::SimulatedAnnealing,
    Algorithm::IteratedSimulatedAnnealing, Algorithm::CustomHeuristic, Algorithm::IteratedCustomHeuristic};

constexpr std::string_view short_name(Algorithm a) noexcept {
  switch (a) {
  case Algorithm::HillClimbing:
    return "HC";
  case Algorithm::SimulatedAnnealing:
    return "SA";
  case Algorithm::CustomHeuristic:
    return "CH";
  case Algorithm::IteratedHillClimbing:
    return "IHC";
  case Algorithm::IteratedSimulatedAnnealing:
    return "ISA";
  case Algorithm::IteratedCustomHeuristic:
    return "ICH";
  }
  return "?";
}

/// Accepts "hc", "IHC", ... (case-insensitive).
inline std::optional<Algorithm> parse_algorithm(std::string_view text) {
  std::string upper(text);
  for (auto& c : upper) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  for (const Algorithm a : kAllAlgorithms) {
    if (upper == short_name(a)) {
      return a;
    }
  }
  return std::nullopt;
}

constexpr bool is_iterated(Algorithm a) noexcept {
  return a == Algorithm::IteratedHillClimbing || a == Algorithm::IteratedSimulatedAnnealing ||
         a == Algorithm::IteratedCustomHeuristic;
}

constexpr Algorithm base_algorithm(Algorithm a) noexcept {
  switch (a) {
  case Algorithm::IteratedHillClimbing:
    return Algorithm::HillClimbing;
  case Algorithm::IteratedSimulatedAnnealing:
    return Algorithm::SimulatedAnnealing;
  case Algorithm::IteratedCustomHeuristic:
    return Algorithm::CustomHeuristic;
  default:
    return a;
  }
}

enum class AcceptanceForm : std::uint8_t {
  /// exp(-delta / t): hotter means more uphill moves accepted.
  Standard,
  /// exp(-delta * t), as the annealing pseudocode is literally written.
  PaperLiteral,
};

struct HeuristicParams {
  double t_max = 100.0;
  double t_min = 10.0;
  double cooling_rate = 0.1;
  unsigned inner_iterations = 25;
  double defactorization_probability = 0.25;
  unsigned k_max = 500;
  unsigned restarts = 16;
  std::uint64_t seed = 0;
  AcceptanceForm acceptance = AcceptanceForm::Standard;
  /// SA and CH only propose defactorizations that keep the formula within
  /// max_growth times the input cost; 0 disables the cap.
  double max_growth = 4.0;

  void validate() const {
    if (!(t_min > 0.0) || !(t_max > t_min)) {
      throw std::invalid_argument("temperatures must satisfy t_max > t_min > 0");
    }
    if (!(cooling_rate > 0.0 && cooling_rate < 1.0)) {
      throw std::invalid_argument("cooling rate must lie in (0, 1)");
    }
    if (inner_iterations == 0 || k_max == 0 || restarts == 0) {
      throw std::invalid_argument("inner_iterations, k_max and restarts must be positive");
    }
    if (!(defactorization_probability >= 0.0 && defactorization_probability <= 1.0)) {
      throw std::invalid_argument("defactorization probability must lie in [0, 1]");
    }
    if (!(max_growth == 0.0 || max_growth >= 1.0)) {
      throw std::invalid_argument("max_growth must be 0 or at least 1");
    }
  }
};

/// Counters filled in by an annealing run.
struct AnnealTrace {
  unsigned temperature_levels = 0;
  unsigned proposals = 0;
  unsigned defactorizations_proposed = 0;
  unsigned defactorizations_accepted = 0;
  unsigned empty_neighbourhoods = 0;
  unsigned descent_steps = 0;
};

struct SearchControl {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Workers for restarts of iterated variants; results do not depend on it.
  unsigned threads = 1;
  AnnealTrace* trace = nullptr;

  void check() const {
    if (deadline && std::chrono::steady_clock::now() > *deadline) {
      throw TimeLimitExceeded();
    }
  }
};

/// Probability of choosing defactorization at iteration k of the custom heuristic.
constexpr double custom_defactorization_probability(unsigned k, unsigned k_max) noexcept {
  return static_cast<double>(k_max - k) / (5.0 * static_cast<double>(k_max));
}

/// Number of temperature levels the annealing schedule runs.
inline unsigned temperature_levels(const HeuristicParams& params) {
  unsigned levels = 0;
  double t = params.t_max;
  do {
    ++levels;
    t *= 1.0 - params.cooling_rate;
  } while (t > params.t_min);
  return levels;
}

namespace detail {

inline std::optional<Formula> random_neighbour(const Formula& f, RewriteKind kind, Rng& rng,
                                              std::uint64_t cap = 0) {
  auto sites = find_sites(f, kind);
  if (cap != 0 && kind == RewriteKind::Defactorization) {
    std::erase_if(sites, [&](const RewriteSite& s) { return f.cost() + static_cast<std::uint64_t>(s.delta) > cap; });
  }
  if (sites.empty()) {
    return std::nullopt;
  }
  return apply_rewrite(f, sites[uniform_index(rng, sites.size())]);
}

inline std::uint64_t cost_cap(const Formula& f, const HeuristicParams& params) {
  if (params.max_growth == 0.0) {
    return 0;
  }
  return static_cast<std::uint64_t>(params.max_growth * static_cast<double>(f.cost()));
}

inline Formula descend(Formula current, Rng& rng, const SearchControl& control, unsigned* steps = nullptr) {
  for (;;) {
    control.check();
    auto next = random_neighbour(current, RewriteKind::Factorization, rng);
    if (!next) {
      return current;
    }
    current = std::move(*next);
    if (steps != nullptr) {
      ++*steps;
    }
  }
}

} // namespace detail

/// Applies uniformly random factorizations until none is left.
inline Formula hill_climb(const Formula& f, std::uint64_t seed, const SearchControl& control = {}) {
  Rng rng(seed);
  return detail::descend(f, rng, control);
}

inline Formula simulated_annealing(const Formula& f, const HeuristicParams& params, std::uint64_t seed,
                                   const SearchControl& control = {}) {
  params.validate();
  Rng rng(seed);
  AnnealTrace local;
  AnnealTrace& trace = control.trace != nullptr ? *control.trace : local;
  trace = {};

  Formula current = f;
  Formula best = f;
  const std::uint64_t cap = detail::cost_cap(f, params);
  double t = params.t_max;
  do {
    ++trace.temperature_levels;
    for (unsigned i = 0; i < params.inner_iterations; ++i) {
      control.check();
      ++trace.proposals;
      const bool defactorize = uniform01(rng) < params.defactorization_probability;
      auto neighbour = detail::random_neighbour(
          current, defactorize ? RewriteKind::Defactorization : RewriteKind::Factorization, rng, cap);
      if (!neighbour) {
        ++trace.empty_neighbourhoods;
        continue;
      }
      if (!defactorize) {
        current = std::move(*neighbour);
        if (current.cost() < best.cost()) {
          best = current;
        }
        continue;
      }
      ++trace.defactorizations_proposed;
      const double delta = static_cast<double>(neighbour->cost()) - static_cast<double>(current.cost());
      const double p = params.acceptance == AcceptanceForm::Standard ? std::exp(-delta / t) : std::exp(-delta * t);
      if (uniform01(rng) < p) {
        current = std::move(*neighbour);
        ++trace.defactorizations_accepted;
      }
    }
    t *= 1.0 - params.cooling_rate;
  } while (t > params.t_min);

  Formula result = detail::descend(std::move(current), rng, control, &trace.descent_steps);
  // The walk may end above where it started; fall back to the best state seen.
  if (best.cost() < result.cost()) {
    result = detail::descend(std::move(best), rng, control, &trace.descent_steps);
  }
  return result;
}

/// Runs k_max random moves with a linearly decaying defactorization
/// probability, then descends from the cheapest formula seen (input included).
inline Formula custom_heuristic(const Formula& f, const HeuristicParams& params, std::uint64_t seed,
                                const SearchControl& control = {}) {
  params.validate();
  Rng rng(seed);
  Formula current = f;
  Formula best = f;
  const std::uint64_t cap = detail::cost_cap(f, params);
  for (unsigned k = 0; k < params.k_max; ++k) {
    control.check();
    const bool defactorize = uniform01(rng) < custom_defactorization_probability(k, params.k_max);
    auto neighbour = detail::random_neighbour(
        current, defactorize ? RewriteKind::Defactorization : RewriteKind::Factorization, rng, cap);
    if (!neighbour) {
      continue;
    }
    current = std::move(*neighbour);
    if (current.cost() < best.cost()) {
      best = current;
    }
  }
  return detail::descend(std::move(best), rng, control);
}

inline Formula run_algorithm(Algorithm algorithm, const Formula& f, const HeuristicParams& params,
                             std::uint64_t seed, const SearchControl& control = {});

/// Best of `params.restarts` independent runs of a base algorithm; restart r
/// uses stream derive_seed(seed, r). Ties go to the lowest restart index.
inline Formula iterated(Algorithm base, const Formula& f, const HeuristicParams& params, std::uint64_t seed,
                        const SearchControl& control = {}) {
  params.validate();
  base = base_algorithm(base);
  SearchControl inner = control;
  inner.threads = 1;
  inner.trace = nullptr;
  std::vector<std::optional<Formula>> results(params.restarts);
  parallel_for(params.restarts, control.threads, [&](std::size_t r) {
    results[r] = run_algorithm(base, f, params, derive_seed(seed, r), inner);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r]->cost() < results[best]->cost()) {
      best = r;
    }
  }
  return std::move(*results[best]);
}

inline Formula run_algorithm(Algorithm algorithm, const Formula& f, const HeuristicParams& params,
                             std::uint64_t seed, const SearchControl& control) {
  if (is_iterated(algorithm)) {
    return iterated(base_algorithm(algorithm), f, params, seed, control);
  }
  switch (algorithm) {
  case Algorithm::HillClimbing:
    return hill_climb(f, seed, control);
  case Algorithm::SimulatedAnnealing:
    return simulated_annealing(f, params, seed, control);
  case Algorithm::CustomHeuristic:
    return custom_heuristic(f, params, seed, control);
  default:
    break;
  }
  throw std::logic_error("unhandled algorithm");
}

struct RunRecord {
  std::uint64_t final_cost = 0;
  double seconds = 0.0;
};

struct RunReport {
  Algorithm algorithm = Algorithm::HillClimbing;
  std::uint64_t original_cost = 0;
  std::uint64_t best_cost = 0;
  std::vector<RunRecord> runs;
  double mo_percent = 0.0;
  double boi_percent = 0.0;
  double art_seconds = 0.0;
  Formula best_formula;
  bool verified_exhaustively = false;
  std::vector<std::string> warnings;
};

struct ReportOptions {
  unsigned threads = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::size_t exhaustive_bound = 22;
  std::uint64_t oracle_samples = 100000;
  /// Check the best formula against the input with the equivalence oracle.
  bool verify = true;
};

inline double reduction_percent(std::uint64_t original, std::uint64_t final_cost) {
  return 100.0 * (static_cast<double>(original) - static_cast<double>(final_cost)) / static_cast<double>(original);
}

/// Repeats an algorithm, repetition i seeded with derive_seed(params.seed, i),
/// and aggregates mean optimization (MO), best over iterations (BOI) and
/// average running time (ART). The best formula is checked against the input.
inline RunReport optimize_report(Algorithm algorithm, const Formula& f, const HeuristicParams& params,
                                 unsigned repetitions = 16, const ReportOptions& options = {}) {
  if (repetitions == 0) {
    throw std::invalid_argument("repetitions must be positive");
  }
  params.validate();
  std::vector<std::optional<Formula>> outputs(repetitions);
  std::vector<RunRecord> runs(repetitions);
  SearchControl control;
  control.deadline = options.deadline;
  parallel_for(repetitions, options.threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    outputs[i] = run_algorithm(algorithm, f, params, derive_seed(params.seed, i), control);
    const auto stop = std::chrono::steady_clock::now();
    runs[i] = {outputs[i]->cost(), std::chrono::duration<double>(stop - start).count()};
  });

  std::size_t best = 0;
  double mo = 0.0;
  double seconds = 0.0;
  for (std::size_t i = 0; i < repetitions; ++i) {
    if (runs[i].final_cost < runs[best].final_cost) {
      best = i;
    }
    mo += reduction_percent(f.cost(), runs[i].final_cost);
    seconds += runs[i].seconds;
  }
  RunReport report{.algorithm = algorithm,
                   .original_cost = f.cost(),
                   .best_cost = runs[best].final_cost,
                   .runs = std::move(runs),
                   .mo_percent = mo / repetitions,
                   .boi_percent = 0.0,
                   .art_seconds = seconds / repetitions,
                   .best_formula = std::move(*outputs[best]),
                   .verified_exhaustively = false,
                   .warnings = {}};
  report.boi_percent = reduction_percent(report.original_cost, report.best_cost);

  if (report.best_cost > report.original_cost) {
    throw InvariantViolation(std::string(short_name(algorithm)) + " increased the cost");
  }
  if (!options.verify) {
    return report;
  }
  const std::size_t variables = f.attributes().merged(report.best_formula.attributes()).size();
  EquivalenceResult check;
  if (variables <= options.exhaustive_bound) {
    check = check_equivalence(f, report.best_formula, Exhaustive{options.exhaustive_bound});
  } else {
    report.warnings.push_back("universe of " + std::to_string(variables) +
                              " variables exceeds the exhaustive bound; verified by sampling");
    check = check_equivalence(f, report.best_formula, Sampled{options.oracle_samples, params.seed});
  }
  if (!check.equivalent) {
    throw InvariantViolation(std::string(short_name(algorithm)) + " produced a non-equivalent formula: " +
                             to_string(report.best_formula));
  }
  report.verified_exhaustively = check.exhaustive;
  return report;
}

} // namespace abemin
