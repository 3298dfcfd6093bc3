#pragma once

#include <abemin/formula.hpp>
#include <abemin/heuristics.hpp>

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace abemin {

struct ShareCount {
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> per_attribute;
};

/// Secret shares handed out by top-down sharing over the formula's tree:
/// one per leaf occurrence, so the total is the literal count.
inline ShareCount share_count(const Formula& f) {
  return {f.cost(), literal_counts(f)};
}

enum class KeygenShareBasis : std::uint8_t {
  /// Key generation is charged for the shares of the input structure.
  Original,
  /// Key generation is charged for the shares of the optimized structure.
  Optimized,
};

/// Per-operation times of a pairing-based KP-ABE implementation. Decryption
/// runs one pairing per share.
struct CostModel {
  double pairing_ms = 1.3;
  double share_gen_ms = 1.3;
  /// Scale applied to the optimizer's wall time when it is charged to keygen.
  double keygen_overhead = 1.0;
  KeygenShareBasis keygen_basis = KeygenShareBasis::Original;
};

struct PipelineRecord {
  std::uint64_t orig_shares = 0;
  std::uint64_t opt_shares = 0;
  double keygen_ms = 0.0;
  double decrypt_ms = 0.0;
  double optimizer_ms = 0.0;
  Formula optimized;
};

inline double decrypt_ms(std::uint64_t shares, const CostModel& model) {
  return model.pairing_ms * static_cast<double>(shares);
}

/// Optimizes (unless `optimizer` is empty), times the optimizer, and prices
/// key generation and decryption under `model`.
inline PipelineRecord simulate_pipeline(const Formula& f, std::optional<Algorithm> optimizer, const CostModel& model,
                                        const HeuristicParams& params, std::uint64_t seed,
                                        const SearchControl& control = {}) {
  Formula optimized = f;
  double optimizer_ms = 0.0;
  if (optimizer) {
    const auto start = std::chrono::steady_clock::now();
    optimized = run_algorithm(*optimizer, f, params, seed, control);
    optimizer_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  const std::uint64_t keygen_shares = model.keygen_basis == KeygenShareBasis::Original ? f.cost() : optimized.cost();
  PipelineRecord record{.orig_shares = f.cost(),
                        .opt_shares = optimized.cost(),
                        .keygen_ms = model.share_gen_ms * static_cast<double>(keygen_shares) +
                                     model.keygen_overhead * optimizer_ms,
                        .decrypt_ms = decrypt_ms(optimized.cost(), model),
                        .optimizer_ms = optimizer_ms,
                        .optimized = std::move(optimized)};
  return record;
}

} // namespace abemin
