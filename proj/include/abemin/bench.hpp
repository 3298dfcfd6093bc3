#pragma once

#include <abemin/abe_cost.hpp>
#include <abemin/datagen.hpp>
#include <abemin/error.hpp>
#include <abemin/formula.hpp>
#include <abemin/heuristics.hpp>
#include <abemin/parser.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace abemin {

enum class OutputFormat : std::uint8_t { Table, Json, Csv };

inline std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "table") {
    return OutputFormat::Table;
  }
  if (text == "json") {
    return OutputFormat::Json;
  }
  if (text == "csv") {
    return OutputFormat::Csv;
  }
  return std::nullopt;
}

struct BenchDataset {
  std::string name;
  std::vector<Formula> formulas;
};

/// Reads a one-formula-per-line dataset file; the dataset is named after the path.
inline BenchDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open dataset '" + path + "'");
  }
  try {
    return {path, read_formulas(in)};
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

struct BenchConfig {
  std::vector<std::string> datasets;
  std::vector<Algorithm> algorithms;
  unsigned repetitions = 16;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::Table;
  std::optional<double> time_limit_seconds;
  unsigned threads = 1;
  bool check = false;
  HeuristicParams params;

  void validate() const {
    if (repetitions == 0) {
      throw std::invalid_argument("repetitions must be at least 1");
    }
    if (algorithms.empty()) {
      throw std::invalid_argument("at least one algorithm is required");
    }
    if (time_limit_seconds && !(*time_limit_seconds > 0.0)) {
      throw std::invalid_argument("time limit must be positive");
    }
    params.validate();
  }
};

/// Outcome of one algorithm on one formula.
struct FormulaResult {
  std::string dataset;
  std::size_t index = 0;
  Algorithm algorithm = Algorithm::HillClimbing;
  bool ok = false;
  std::string error;
  std::uint64_t original_cost = 0;
  std::uint64_t best_cost = 0;
  std::vector<std::uint64_t> run_costs;
  double mo_percent = 0.0;
  double boi_percent = 0.0;
  double art_seconds = 0.0;
  std::string best_formula;
};

/// Means over the successful formulas of one (dataset, algorithm) pair.
struct BenchCell {
  std::string dataset;
  Algorithm algorithm = Algorithm::HillClimbing;
  std::size_t formulas = 0;
  std::size_t failures = 0;
  double mo_percent = 0.0;
  double boi_percent = 0.0;
  double art_seconds = 0.0;
};

struct BenchReport {
  std::vector<std::string> datasets;
  std::vector<Algorithm> algorithms;
  std::vector<FormulaResult> results;
  std::vector<BenchCell> cells;

  const BenchCell& cell(std::string_view dataset, Algorithm algorithm) const {
    for (const auto& c : cells) {
      if (c.dataset == dataset && c.algorithm == algorithm) {
        return c;
      }
    }
    throw std::out_of_range("no bench cell for " + std::string(dataset));
  }
};

/// Runs every algorithm on every formula. Formula i of dataset d is seeded
/// with derive_seed(derive_seed(seed, d), i). Timeouts and library errors are
/// logged to `log` and counted; invariant violations propagate.
inline BenchReport run_bench(const std::vector<BenchDataset>& datasets, const BenchConfig& config,
                             std::ostream* log = nullptr) {
  config.validate();
  BenchReport report;
  report.algorithms = config.algorithms;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const BenchDataset& data = datasets[d];
    report.datasets.push_back(data.name);
    for (Algorithm algorithm : config.algorithms) {
      BenchCell cell{.dataset = data.name, .algorithm = algorithm};
      for (std::size_t i = 0; i < data.formulas.size(); ++i) {
        HeuristicParams params = config.params;
        params.seed = derive_seed(derive_seed(config.seed, d), i);
        ReportOptions options;
        options.threads = config.threads;
        options.verify = config.check;
        if (config.time_limit_seconds) {
          options.deadline = std::chrono::steady_clock::now() +
                             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(*config.time_limit_seconds));
        }
        FormulaResult result;
        result.dataset = data.name;
        result.index = i;
        result.algorithm = algorithm;
        result.original_cost = data.formulas[i].cost();
        try {
          const RunReport run = optimize_report(algorithm, data.formulas[i], params, config.repetitions, options);
          result.ok = true;
          result.best_cost = run.best_cost;
          for (const auto& r : run.runs) {
            result.run_costs.push_back(r.final_cost);
          }
          result.mo_percent = run.mo_percent;
          result.boi_percent = run.boi_percent;
          result.art_seconds = run.art_seconds;
          result.best_formula = to_string(run.best_formula);
          cell.mo_percent += run.mo_percent;
          cell.boi_percent += run.boi_percent;
          cell.art_seconds += run.art_seconds;
          ++cell.formulas;
        } catch (const InvariantViolation&) {
          throw;
        } catch (const Error& e) {
          result.error = e.what();
          ++cell.failures;
          if (log) {
            *log << data.name << " formula " << i << " " << short_name(algorithm) << ": " << e.what() << "\n";
          }
        }
        report.results.push_back(std::move(result));
      }
      if (cell.formulas > 0) {
        const auto n = static_cast<double>(cell.formulas);
        cell.mo_percent /= n;
        cell.boi_percent /= n;
        cell.art_seconds /= n;
      }
      report.cells.push_back(cell);
    }
  }
  return report;
}

namespace detail {

inline std::string fixed(double value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

inline std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) {
    text.append(width - text.size(), ' ');
  }
  return text;
}

inline std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) {
    return text;
  }
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  return quoted + '"';
}

inline std::string full_precision(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

} // namespace detail

/// One row per algorithm, MO / BOI / ART columns per dataset.
inline void write_table(std::ostream& out, const BenchReport& report) {
  constexpr std::size_t kLabel = 6;
  constexpr std::size_t kColumn = 10;
  std::string header = detail::pad("", kLabel);
  std::string columns = detail::pad("", kLabel);
  for (const auto& name : report.datasets) {
    header += " | " + detail::pad(name, 3 * kColumn);
    columns += " | " + detail::pad("MO", kColumn) + detail::pad("BOI", kColumn) + detail::pad("ART", kColumn);
  }
  out << header << "\n" << columns << "\n";
  for (Algorithm algorithm : report.algorithms) {
    std::string row = detail::pad(std::string(short_name(algorithm)), kLabel);
    for (const auto& name : report.datasets) {
      const BenchCell& c = report.cell(name, algorithm);
      if (c.formulas == 0) {
        row += " | " + detail::pad("-", kColumn) + detail::pad("-", kColumn) + detail::pad("-", kColumn);
        continue;
      }
      row += " | " + detail::pad(detail::fixed(c.mo_percent, 1) + " %", kColumn) +
             detail::pad(detail::fixed(c.boi_percent, 1) + " %", kColumn) +
             detail::pad(detail::fixed(c.art_seconds, 2) + " s", kColumn);
    }
    while (!row.empty() && row.back() == ' ') {
      row.pop_back();
    }
    out << row << "\n";
  }
  for (const auto& c : report.cells) {
    if (c.failures > 0) {
      out << "failed: " << c.failures << " formula(s) in " << c.dataset << " for " << short_name(c.algorithm) << "\n";
    }
  }
}

inline nlohmann::ordered_json to_json(const FormulaResult& r) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["formula"] = r.index;
  j["algorithm"] = short_name(r.algorithm);
  j["ok"] = r.ok;
  j["original_cost"] = r.original_cost;
  if (r.ok) {
    j["best_cost"] = r.best_cost;
    j["run_costs"] = r.run_costs;
    j["mo_percent"] = r.mo_percent;
    j["boi_percent"] = r.boi_percent;
    j["art_seconds"] = r.art_seconds;
    j["best_formula"] = r.best_formula;
  } else {
    j["error"] = r.error;
  }
  return j;
}

inline void write_json(std::ostream& out, const BenchReport& report) {
  nlohmann::ordered_json j;
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : report.results) {
    j["results"].push_back(to_json(r));
  }
  j["summary"] = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    j["summary"].push_back({{"dataset", c.dataset},
                            {"algorithm", short_name(c.algorithm)},
                            {"formulas", c.formulas},
                            {"failures", c.failures},
                            {"mo_percent", c.mo_percent},
                            {"boi_percent", c.boi_percent},
                            {"art_seconds", c.art_seconds}});
  }
  out << j.dump(2) << "\n";
}

inline void write_csv(std::ostream& out, const BenchReport& report) {
  out << "dataset,formula,algorithm,ok,original_cost,best_cost,mo_percent,boi_percent,art_seconds,error\n";
  for (const auto& r : report.results) {
    out << detail::csv_field(r.dataset) << ',' << r.index << ',' << short_name(r.algorithm) << ','
        << (r.ok ? "1" : "0") << ',' << r.original_cost << ',';
    if (r.ok) {
      out << r.best_cost << ',' << detail::full_precision(r.mo_percent) << ','
          << detail::full_precision(r.boi_percent) << ',' << detail::full_precision(r.art_seconds) << ",";
    } else {
      out << ",,,," << detail::csv_field(r.error);
    }
    out << "\n";
  }
}

inline void write_report(std::ostream& out, const BenchReport& report, OutputFormat format) {
  switch (format) {
  case OutputFormat::Table:
    write_table(out, report);
    break;
  case OutputFormat::Json:
    write_json(out, report);
    break;
  case OutputFormat::Csv:
    write_csv(out, report);
    break;
  }
}

// ABE timing series: modeled key generation and decryption time against the
// share count of the original access structure.

struct AbeSeriesConfig {
  std::vector<unsigned> sizes{50, 100, 150, 200, 250};
  /// Empty entries stand for the unoptimized structure.
  std::vector<std::optional<Algorithm>> optimizers{std::nullopt, Algorithm::HillClimbing, Algorithm::CustomHeuristic,
                                                   Algorithm::IteratedSimulatedAnnealing};
  unsigned repeats = 30;
  std::uint64_t seed = 0;
  CostModel model;
  HeuristicParams params;
  unsigned threads = 1;

  void validate() const {
    if (sizes.empty() || optimizers.empty() || repeats == 0) {
      throw std::invalid_argument("abe series needs sizes, optimizers and at least one repeat");
    }
    for (unsigned s : sizes) {
      if (s < 2) {
        throw std::invalid_argument("abe series sizes must be at least 2");
      }
    }
    params.validate();
  }
};

inline std::string optimizer_name(const std::optional<Algorithm>& optimizer) {
  return optimizer ? std::string(short_name(*optimizer)) : std::string("none");
}

/// Random policy with exactly `shares` literals, seeded with `seed`.
inline Formula abe_access_structure(unsigned shares, std::uint64_t seed) {
  GenSpec spec;
  spec.seed = seed;
  spec.literals = {static_cast<int>(shares), static_cast<int>(shares)};
  const int n = static_cast<int>(shares);
  spec.variables = {std::max(1, std::min(n / 2, 20)), std::max(2, std::max(std::min(n, 20), n / 2))};
  spec.clause_size = {2, std::min(6, static_cast<int>(shares))};
  return generate(spec);
}

struct AbeSample {
  unsigned size = 0;
  unsigned repeat = 0;
  std::string optimizer;
  PipelineRecord record;
};

struct AbeSeriesPoint {
  unsigned size = 0;
  std::string optimizer;
  double mean_shares = 0.0;
  double mean_keygen_ms = 0.0;
  double mean_decrypt_ms = 0.0;
  double mean_optimizer_ms = 0.0;
};

struct AbeSeries {
  std::vector<AbeSample> samples;
  std::vector<AbeSeriesPoint> points;

  const AbeSeriesPoint& point(unsigned size, std::string_view optimizer) const {
    for (const auto& p : points) {
      if (p.size == size && p.optimizer == optimizer) {
        return p;
      }
    }
    throw std::out_of_range("no abe series point");
  }
};

/// Every optimizer sees the same access structure for a given (size, repeat),
/// generated with derive_seed(derive_seed(seed, size), repeat); optimizer runs
/// use derive_seed of that seed.
inline AbeSeries run_abe_series(const AbeSeriesConfig& config) {
  config.validate();
  AbeSeries series;
  for (unsigned size : config.sizes) {
    std::vector<AbeSeriesPoint> points;
    for (const auto& optimizer : config.optimizers) {
      points.push_back({.size = size, .optimizer = optimizer_name(optimizer)});
    }
    for (unsigned r = 0; r < config.repeats; ++r) {
      const std::uint64_t structure_seed = derive_seed(derive_seed(config.seed, size), r);
      const Formula f = abe_access_structure(size, structure_seed);
      SearchControl control;
      control.threads = config.threads;
      for (std::size_t o = 0; o < config.optimizers.size(); ++o) {
        PipelineRecord record = simulate_pipeline(f, config.optimizers[o], config.model, config.params,
                                                  derive_seed(structure_seed, 1), control);
        points[o].mean_shares += static_cast<double>(record.opt_shares);
        points[o].mean_keygen_ms += record.keygen_ms;
        points[o].mean_decrypt_ms += record.decrypt_ms;
        points[o].mean_optimizer_ms += record.optimizer_ms;
        series.samples.push_back({size, r, points[o].optimizer, std::move(record)});
      }
    }
    for (auto& p : points) {
      const auto n = static_cast<double>(config.repeats);
      p.mean_shares /= n;
      p.mean_keygen_ms /= n;
      p.mean_decrypt_ms /= n;
      p.mean_optimizer_ms /= n;
      series.points.push_back(p);
    }
  }
  return series;
}

inline void write_abe_series(std::ostream& out, const AbeSeries& series, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& p : series.points) {
      j.push_back({{"shares", p.size},
                   {"optimizer", p.optimizer},
                   {"optimized_shares", p.mean_shares},
                   {"keygen_ms", p.mean_keygen_ms},
                   {"decrypt_ms", p.mean_decrypt_ms},
                   {"optimizer_ms", p.mean_optimizer_ms}});
    }
    out << j.dump(2) << "\n";
    return;
  }
  if (format == OutputFormat::Csv) {
    out << "shares,optimizer,optimized_shares,keygen_ms,decrypt_ms,optimizer_ms\n";
    for (const auto& p : series.points) {
      out << p.size << ',' << p.optimizer << ',' << detail::full_precision(p.mean_shares) << ','
          << detail::full_precision(p.mean_keygen_ms) << ',' << detail::full_precision(p.mean_decrypt_ms) << ','
          << detail::full_precision(p.mean_optimizer_ms) << "\n";
    }
    return;
  }
  out << "shares  optimizer  opt_shares  keygen_ms  decrypt_ms\n";
  for (const auto& p : series.points) {
    out << detail::pad(std::to_string(p.size), 8) << detail::pad(p.optimizer, 11)
        << detail::pad(detail::fixed(p.mean_shares, 1), 12) << detail::pad(detail::fixed(p.mean_keygen_ms, 1), 11)
        << detail::fixed(p.mean_decrypt_ms, 1) << "\n";
  }
}

} // namespace abemin
