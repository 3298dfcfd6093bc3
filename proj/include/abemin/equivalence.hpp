#pragma once

#include <abemin/error.hpp>
#include <abemin/formula.hpp>
#include <abemin/random.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace abemin {

struct Exhaustive {
  std::size_t max_variables = 22;
};

struct Sampled {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
};

using EquivalenceMode = std::variant<Exhaustive, Sampled>;

struct EquivalenceResult {
  bool equivalent = true;
  /// True when every assignment was checked, so `equivalent` is definitive.
  bool exhaustive = false;
  std::uint64_t assignments_checked = 0;
  /// First disagreeing assignment when not equivalent.
  std::optional<Assignment> witness;
};

/// Formula compiled to a postfix program evaluated on 64 assignments at once.
/// Lane j of the word for variable i holds the value of that variable in the
/// j-th assignment of the block.
class FormulaProgram {
public:
  FormulaProgram(const Formula& f, const AttributeUniverse& universe) {
    compile(f.root(), universe);
  }

  std::uint64_t evaluate(std::span<const std::uint64_t> variables) const {
    stack_.clear();
    for (const auto& op : ops_) {
      switch (op.kind) {
      case NodeKind::Leaf:
        stack_.push_back(variables[op.operand]);
        break;
      case NodeKind::And: {
        std::uint64_t acc = ~std::uint64_t{0};
        for (std::uint32_t i = 0; i < op.operand; ++i) {
          acc &= stack_.back();
          stack_.pop_back();
        }
        stack_.push_back(acc);
        break;
      }
      case NodeKind::Or: {
        std::uint64_t acc = 0;
        for (std::uint32_t i = 0; i < op.operand; ++i) {
          acc |= stack_.back();
          stack_.pop_back();
        }
        stack_.push_back(acc);
        break;
      }
      }
    }
    return stack_.back();
  }

private:
  struct Op {
    NodeKind kind;
    std::uint32_t operand; // variable index for leaves, arity for gates
  };

  void compile(const Node& node, const AttributeUniverse& universe) {
    if (node.is_leaf()) {
      const std::size_t index = universe.index_of(node.attribute());
      if (index == universe.size()) {
        throw MissingAttributeError(node.attribute());
      }
      ops_.push_back({NodeKind::Leaf, static_cast<std::uint32_t>(index)});
      return;
    }
    for (const auto& child : node.children()) {
      compile(*child, universe);
    }
    ops_.push_back({node.kind(), static_cast<std::uint32_t>(node.children().size())});
  }

  std::vector<Op> ops_;
  mutable std::vector<std::uint64_t> stack_;
};

namespace detail {

// Lane patterns of the six low-order variables in an exhaustive block.
constexpr std::array<std::uint64_t, 6> kLanePatterns = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

inline Assignment lane_assignment(const AttributeUniverse& universe,
                                  std::span<const std::uint64_t> words, int lane) {
  Assignment out;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    out.emplace(universe.names()[i], ((words[i] >> lane) & 1U) != 0);
  }
  return out;
}

} // namespace detail

/// Compares two programs over `universe`. Each program must expose
/// `std::uint64_t evaluate(std::span<const std::uint64_t>) const`.
template <class Left, class Right>
EquivalenceResult compare_programs(const Left& left, const Right& right,
                                   const AttributeUniverse& universe, const EquivalenceMode& mode) {
  EquivalenceResult result;
  const std::size_t n = universe.size();
  std::vector<std::uint64_t> words(n);

  auto check_block = [&](std::uint64_t lanes) {
    const std::uint64_t diff = (left.evaluate(words) ^ right.evaluate(words)) & lanes;
    result.assignments_checked += static_cast<std::uint64_t>(std::popcount(lanes));
    if (diff != 0) {
      result.equivalent = false;
      result.witness = detail::lane_assignment(universe, words, std::countr_zero(diff));
      return false;
    }
    return true;
  };

  if (const auto* exhaustive = std::get_if<Exhaustive>(&mode)) {
    if (n > exhaustive->max_variables) {
      throw UniverseTooLargeError(n, exhaustive->max_variables);
    }
    result.exhaustive = true;
    const std::uint64_t lanes =
        n >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (std::uint64_t{1} << n)) - 1);
    const std::uint64_t blocks = n > 6 ? (std::uint64_t{1} << (n - 6)) : 1;
    for (std::size_t i = 0; i < n && i < 6; ++i) {
      words[i] = detail::kLanePatterns[i];
    }
    for (std::uint64_t block = 0; block < blocks; ++block) {
      for (std::size_t i = 6; i < n; ++i) {
        words[i] = ((block >> (i - 6)) & 1U) != 0 ? ~std::uint64_t{0} : 0;
      }
      if (!check_block(lanes)) {
        return result;
      }
    }
    return result;
  }

  const auto& sampled = std::get<Sampled>(mode);
  Rng rng(sampled.seed);
  std::uint64_t remaining = sampled.samples;
  while (remaining > 0) {
    const std::uint64_t count = remaining < 64 ? remaining : 64;
    for (auto& w : words) {
      w = rng();
    }
    if (!check_block(count == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1))) {
      return result;
    }
    remaining -= count;
  }
  return result;
}

/// Truth-table comparison over the union of both attribute sets. Exhaustive
/// mode is definitive; sampled mode can only prove inequivalence.
inline EquivalenceResult check_equivalence(const Formula& f, const Formula& g,
                                           const EquivalenceMode& mode = Exhaustive{}) {
  const AttributeUniverse universe = f.attributes().merged(g.attributes());
  return compare_programs(FormulaProgram(f, universe), FormulaProgram(g, universe), universe, mode);
}

inline bool equivalent(const Formula& f, const Formula& g, const EquivalenceMode& mode = Exhaustive{}) {
  return check_equivalence(f, g, mode).equivalent;
}

/// Exhaustive when the union universe fits `bound`, sampled otherwise.
inline EquivalenceResult check_equivalence_auto(const Formula& f, const Formula& g,
                                                std::size_t bound = 22,
                                                std::uint64_t samples = 100000,
                                                std::uint64_t seed = 0) {
  const std::size_t n = f.attributes().merged(g.attributes()).size();
  if (n <= bound) {
    return check_equivalence(f, g, Exhaustive{bound});
  }
  return check_equivalence(f, g, Sampled{samples, seed});
}

} // namespace abemin
