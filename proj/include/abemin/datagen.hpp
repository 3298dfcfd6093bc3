#pragma once

#include <abemin/error.hpp>
#include <abemin/formula.hpp>
#include <abemin/random.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abemin {

struct IntRange {
  int lo = 0;
  int hi = 0;

  bool contains(std::uint64_t v) const noexcept {
    return v >= static_cast<std::uint64_t>(lo) && v <= static_cast<std::uint64_t>(hi);
  }
  bool valid() const noexcept { return lo >= 0 && lo <= hi; }

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

enum class DatasetFamily : std::uint8_t { RandomPolicy, ComparisonQuery };

struct ComparisonSpec {
  unsigned bit_width = 8;
  /// Number of threshold comparisons combined into one policy.
  unsigned num_clauses = 5;
  /// Size of the pool of numeric attributes the comparisons draw from.
  unsigned numeric_attributes = 3;
};

struct GenSpec {
  IntRange variables{20, 25};
  IntRange literals{20, 40};
  std::uint64_t seed = 0;
  DatasetFamily family = DatasetFamily::RandomPolicy;
  std::optional<ComparisonSpec> comparison;
  /// Sizes of the minimal authorized sets (AND clauses) of random policies.
  IntRange clause_size{2, 6};
  /// Probability that two linked subformulas are joined by OR rather than AND.
  double or_probability = 0.5;
  unsigned max_retries = 1000;
};

/// Table-style dataset presets 1..4: three random-policy families and one of
/// comparison queries.
inline GenSpec dataset_preset(int dataset, std::uint64_t seed = 0) {
  GenSpec spec;
  spec.seed = seed;
  switch (dataset) {
  case 1:
    spec.variables = {20, 25};
    spec.literals = {20, 40};
    break;
  case 2:
    spec.variables = {20, 20};
    spec.literals = {60, 90};
    break;
  case 3:
    spec.variables = {25, 35};
    spec.literals = {160, 200};
    break;
  case 4:
    spec.variables = {20, 25};
    spec.literals = {20, 40};
    spec.family = DatasetFamily::ComparisonQuery;
    spec.comparison = ComparisonSpec{.bit_width = 6, .num_clauses = 7, .numeric_attributes = 2};
    break;
  default:
    throw std::invalid_argument("dataset preset must be 1, 2, 3 or 4");
  }
  return spec;
}

namespace detail {

// Child sets of gates, as sorted digests.
inline std::vector<std::uint64_t> member_hashes(const Node& node, NodeKind as) {
  std::vector<std::uint64_t> out;
  if (node.kind() == as) {
    for (const auto& child : node.children()) {
      out.push_back(child->hash());
    }
  } else {
    out.push_back(node.hash());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline NodePtr trim_node(const NodePtr& node) {
  if (node->is_leaf()) {
    return node;
  }
  std::vector<NodePtr> children;
  children.reserve(node->children().size());
  for (const auto& child : node->children()) {
    children.push_back(trim_node(child));
  }
  NodePtr current = Node::gate(node->kind(), std::move(children));
  // A child X of an OR is absorbed when another child's conjuncts are a
  // subset of X's conjuncts; dually for AND.
  for (;;) {
    if (current->is_leaf()) {
      return current;
    }
    const NodeKind inner = dual(current->kind());
    const auto kids = current->children();
    std::vector<std::vector<std::uint64_t>> members;
    members.reserve(kids.size());
    for (const auto& child : kids) {
      members.push_back(member_hashes(*child, inner));
    }
    std::vector<NodePtr> kept;
    for (std::size_t x = 0; x < kids.size(); ++x) {
      bool absorbed = false;
      for (std::size_t y = 0; y < kids.size() && !absorbed; ++y) {
        absorbed = y != x && members[y].size() < members[x].size() &&
                   std::includes(members[x].begin(), members[x].end(), members[y].begin(), members[y].end());
      }
      if (!absorbed) {
        kept.push_back(kids[x]);
      }
    }
    if (kept.size() == kids.size()) {
      return current;
    }
    current = Node::gate(current->kind(), std::move(kept));
  }
}

inline std::string attribute_name(std::size_t i) { return "a" + std::to_string(i); }

// Joins subformulas pairwise at random until one remains.
inline NodePtr link_randomly(std::vector<NodePtr> items, double or_probability, Rng& rng) {
  while (items.size() > 1) {
    const std::size_t i = uniform_index(rng, items.size());
    std::size_t j = uniform_index(rng, items.size() - 1);
    if (j >= i) {
      ++j;
    }
    const NodeKind kind = uniform01(rng) < or_probability ? NodeKind::Or : NodeKind::And;
    NodePtr joined = Node::gate(kind, {items[i], items[j]});
    const std::size_t hi = std::max(i, j);
    const std::size_t lo = std::min(i, j);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(hi));
    items[lo] = std::move(joined);
  }
  return items.front();
}

inline void check_ranges(const GenSpec& spec) {
  if (!spec.variables.valid() || !spec.literals.valid() || spec.variables.hi == 0 || spec.literals.hi == 0) {
    throw std::invalid_argument("variable and literal ranges must be nonempty and positive");
  }
}

inline bool in_ranges(const Formula& f, const GenSpec& spec) {
  return spec.literals.contains(f.cost()) && spec.variables.contains(f.attributes().size());
}

} // namespace detail

/// Removes duplicate and absorbed terms until nothing changes. Absorption is
/// decided on child sets: (A & B) is absorbed by A under an OR.
inline Formula trim(const Formula& f) {
  NodePtr current = f.root_ptr();
  for (;;) {
    NodePtr next = detail::trim_node(current);
    if (structurally_equal(*next, *current)) {
      return Formula(std::move(next));
    }
    current = std::move(next);
  }
}

/// Random access policy: AND clauses over random attribute subsets (minimal
/// authorized sets) linked by a random AND/OR tree, trimmed, retried until
/// the variable and literal counts fall in range.
inline Formula gen_random_policy(const GenSpec& spec) {
  detail::check_ranges(spec);
  if (!spec.clause_size.valid() || spec.clause_size.lo == 0) {
    throw std::invalid_argument("clause size range must be positive");
  }
  Rng rng(spec.seed);
  for (unsigned attempt = 0; attempt < spec.max_retries; ++attempt) {
    const int variables = uniform_int(rng, spec.variables.lo, spec.variables.hi);
    const int literals = uniform_int(rng, spec.literals.lo, spec.literals.hi);
    if (variables == 0) {
      continue;
    }
    std::vector<NodePtr> clauses;
    int placed = 0;
    while (placed < literals) {
      int size = uniform_int(rng, spec.clause_size.lo, spec.clause_size.hi);
      size = std::min({size, variables, literals - placed});
      std::vector<std::size_t> members;
      while (static_cast<int>(members.size()) < size) {
        const std::size_t v = uniform_index(rng, static_cast<std::size_t>(variables));
        if (std::find(members.begin(), members.end(), v) == members.end()) {
          members.push_back(v);
        }
      }
      std::vector<NodePtr> leaves;
      for (const std::size_t v : members) {
        leaves.push_back(Node::leaf(detail::attribute_name(v)));
      }
      clauses.push_back(leaves.size() == 1 ? leaves.front() : Node::gate(NodeKind::And, std::move(leaves)));
      placed += size;
    }
    Formula candidate = trim(Formula(detail::link_randomly(std::move(clauses), spec.or_probability, rng)));
    if (detail::in_ranges(candidate, spec)) {
      return candidate;
    }
  }
  throw GenerationError("could not generate a random policy within the requested ranges", spec.max_retries);
}

/// Threshold circuit for "A >= k" over bit attributes prefix0 (LSB) ..
/// prefix{bit_width-1}: start at the lowest set bit j of k, then AND in bit i
/// when k has it set and OR it in otherwise. Has bit_width - j literals.
inline Formula gen_comparison_formula(std::uint64_t k, unsigned bit_width, std::string_view prefix) {
  if (bit_width == 0 || bit_width > 63) {
    throw std::invalid_argument("bit width must lie in [1, 63]");
  }
  if (k == 0) {
    throw std::invalid_argument("A >= 0 is always true and has no monotone formula");
  }
  if (k >= (std::uint64_t{1} << bit_width)) {
    throw std::invalid_argument("threshold does not fit in the bit width");
  }
  auto bit = [&](unsigned i) { return Node::leaf(std::string(prefix) + std::to_string(i)); };
  unsigned j = 0;
  while (((k >> j) & 1U) == 0) {
    ++j;
  }
  NodePtr acc = bit(j);
  for (unsigned i = j + 1; i < bit_width; ++i) {
    const NodeKind kind = ((k >> i) & 1U) != 0 ? NodeKind::And : NodeKind::Or;
    acc = Node::gate(kind, {acc, bit(i)});
  }
  return Formula(std::move(acc));
}

/// "A <= k", written as ~A >= ~k over the complemented-encoding bit
/// attributes `complement_prefix`i (true iff bit i of A is 0).
inline Formula gen_at_most_formula(std::uint64_t k, unsigned bit_width, std::string_view complement_prefix) {
  const std::uint64_t mask = (std::uint64_t{1} << bit_width) - 1;
  if (k >= mask) {
    throw std::invalid_argument("A <= max is always true and has no monotone formula");
  }
  return gen_comparison_formula(mask & ~k, bit_width, complement_prefix);
}

/// Policy of `num_clauses` random threshold comparisons on a small pool of
/// numeric attributes, each either ">=" (bits "N<a>:<i>") or "<=" (bits of
/// the complemented encoding "N<a>c:<i>"), linked by random AND/OR and trimmed.
inline Formula gen_comparison_policy(const GenSpec& spec) {
  detail::check_ranges(spec);
  const ComparisonSpec cmp = spec.comparison.value_or(ComparisonSpec{});
  if (cmp.bit_width == 0 || cmp.bit_width > 32 || cmp.num_clauses == 0 || cmp.numeric_attributes == 0) {
    throw std::invalid_argument("comparison spec needs bit width in [1, 32] and positive counts");
  }
  const std::uint64_t top = (std::uint64_t{1} << cmp.bit_width) - 1;
  Rng rng(spec.seed);
  for (unsigned attempt = 0; attempt < spec.max_retries; ++attempt) {
    std::vector<NodePtr> clauses;
    for (unsigned c = 0; c < cmp.num_clauses; ++c) {
      const std::string name = "N" + std::to_string(uniform_index(rng, cmp.numeric_attributes));
      const bool at_least = uniform01(rng) < 0.5;
      const std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(1, top - 1)(rng);
      clauses.push_back(at_least ? gen_comparison_formula(k, cmp.bit_width, name + ":").root_ptr()
                                 : gen_at_most_formula(k, cmp.bit_width, name + "c:").root_ptr());
    }
    Formula candidate = trim(Formula(detail::link_randomly(std::move(clauses), spec.or_probability, rng)));
    if (detail::in_ranges(candidate, spec)) {
      return candidate;
    }
  }
  throw GenerationError("could not generate a comparison policy within the requested ranges", spec.max_retries);
}

inline Formula generate(const GenSpec& spec) {
  return spec.family == DatasetFamily::RandomPolicy ? gen_random_policy(spec) : gen_comparison_policy(spec);
}

/// `count` formulas; entry i is generated with seed derive_seed(spec.seed, i).
inline std::vector<Formula> generate_dataset(const GenSpec& spec, std::size_t count) {
  std::vector<Formula> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GenSpec entry = spec;
    entry.seed = derive_seed(spec.seed, i);
    out.push_back(generate(entry));
  }
  return out;
}

} // namespace abemin
