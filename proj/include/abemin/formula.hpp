#pragma once

#include <abemin/error.hpp>
#include <abemin/random.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace abemin {

enum class NodeKind : std::uint8_t { And, Or, Leaf };

constexpr NodeKind dual(NodeKind kind) noexcept {
  return kind == NodeKind::And ? NodeKind::Or : NodeKind::And;
}

constexpr std::string_view operator_symbol(NodeKind kind) noexcept {
  return kind == NodeKind::And ? "&" : "|";
}

class Node;
using NodePtr = std::shared_ptr<const Node>;

namespace detail {

constexpr std::uint64_t kLeafSalt = 0x5bd1e9955bd1e995ULL;
constexpr std::uint64_t kAndSalt = 0x27d4eb2f165667c5ULL;
constexpr std::uint64_t kOrSalt = 0x165667b19e3779f9ULL;

constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace detail

/// Contribution of one child to its parent's digest. Gate digests are a
/// finalized sum of these, so they do not depend on child order.
constexpr std::uint64_t hash_term(std::uint64_t child_hash) noexcept {
  return mix64(child_hash ^ 0xd6e8feb86659fd93ULL);
}

/// Digest of a gate whose children contribute `term_sum` in total.
constexpr std::uint64_t gate_hash(NodeKind kind, std::uint64_t term_sum) noexcept {
  return mix64(term_sum + (kind == NodeKind::And ? detail::kAndSalt : detail::kOrSalt));
}

constexpr std::uint64_t leaf_hash(std::string_view attribute) noexcept {
  return mix64(detail::fnv1a(attribute) ^ detail::kLeafSalt);
}

int compare(const Node& a, const Node& b) noexcept;

/// Immutable node of a normalized monotone formula. Gates are n-ary, never
/// have a child of their own kind, never hold two equal children and always
/// have at least two children. Children are kept sorted by `compare`, so two
/// nodes are equal iff their subtrees agree up to commutativity and
/// associativity.
class Node {
  struct Key {
    explicit Key() = default;
  };

public:
  Node(Key, NodeKind kind, std::string attribute, std::vector<NodePtr> children,
       std::uint64_t hash, std::uint64_t cost, std::uint64_t size)
      : kind_(kind), attribute_(std::move(attribute)), children_(std::move(children)),
        hash_(hash), cost_(cost), size_(size) {}

  static NodePtr leaf(std::string attribute) {
    if (attribute.empty()) {
      throw std::invalid_argument("attribute name must not be empty");
    }
    const std::uint64_t h = leaf_hash(attribute);
    return std::make_shared<const Node>(Key{}, NodeKind::Leaf, std::move(attribute),
                                        std::vector<NodePtr>{}, h, 1, 1);
  }

  /// Builds a normalized gate: same-kind children are flattened, duplicates
  /// removed, and a gate left with a single child collapses into it.
  static NodePtr gate(NodeKind kind, std::vector<NodePtr> children) {
    if (kind == NodeKind::Leaf) {
      throw std::invalid_argument("gate kind must be And or Or");
    }
    if (children.empty()) {
      throw std::invalid_argument("gate needs at least one child");
    }
    std::vector<NodePtr> flat;
    flat.reserve(children.size());
    for (auto& child : children) {
      if (child->kind_ == kind) {
        flat.insert(flat.end(), child->children_.begin(), child->children_.end());
      } else {
        flat.push_back(std::move(child));
      }
    }
    std::sort(flat.begin(), flat.end(),
              [](const NodePtr& a, const NodePtr& b) { return compare(*a, *b) < 0; });
    flat.erase(std::unique(flat.begin(), flat.end(),
                           [](const NodePtr& a, const NodePtr& b) { return compare(*a, *b) == 0; }),
               flat.end());
    if (flat.size() == 1) {
      return std::move(flat.front());
    }
    std::uint64_t sum = 0;
    std::uint64_t cost = 0;
    std::uint64_t size = 1;
    for (const auto& child : flat) {
      sum += hash_term(child->hash_);
      cost += child->cost_;
      size += child->size_;
    }
    return std::make_shared<const Node>(Key{}, kind, std::string{}, std::move(flat),
                                        gate_hash(kind, sum), cost, size);
  }

  NodeKind kind() const noexcept { return kind_; }
  bool is_leaf() const noexcept { return kind_ == NodeKind::Leaf; }
  bool is_gate() const noexcept { return kind_ != NodeKind::Leaf; }
  const std::string& attribute() const noexcept { return attribute_; }
  std::span<const NodePtr> children() const noexcept { return children_; }
  const Node& child(std::size_t i) const noexcept { return *children_[i]; }

  /// Canonical digest; equal for nodes equal modulo child order and flattening.
  std::uint64_t hash() const noexcept { return hash_; }
  /// Number of leaves (literals).
  std::uint64_t cost() const noexcept { return cost_; }
  /// Number of nodes in the subtree.
  std::uint64_t size() const noexcept { return size_; }

private:
  NodeKind kind_;
  std::string attribute_;
  std::vector<NodePtr> children_;
  std::uint64_t hash_;
  std::uint64_t cost_;
  std::uint64_t size_;
};

/// Total order used for canonical child order: digest first, structure on ties.
inline int compare(const Node& a, const Node& b) noexcept {
  if (&a == &b) {
    return 0;
  }
  if (a.hash() != b.hash()) {
    return a.hash() < b.hash() ? -1 : 1;
  }
  if (a.kind() != b.kind()) {
    return a.kind() < b.kind() ? -1 : 1;
  }
  if (a.is_leaf()) {
    const int c = a.attribute().compare(b.attribute());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  const auto ac = a.children();
  const auto bc = b.children();
  if (ac.size() != bc.size()) {
    return ac.size() < bc.size() ? -1 : 1;
  }
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (const int c = compare(*ac[i], *bc[i]); c != 0) {
      return c;
    }
  }
  return 0;
}

inline bool structurally_equal(const Node& a, const Node& b) noexcept {
  return compare(a, b) == 0;
}

inline std::uint64_t canonical_hash(const Node& node) noexcept { return node.hash(); }

/// Distinct attribute names of a formula, in lexicographic order.
class AttributeUniverse {
public:
  AttributeUniverse() = default;
  explicit AttributeUniverse(std::vector<std::string> names) : names_(std::move(names)) {
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  }

  std::span<const std::string> names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

  /// Position of `name`, or size() when absent.
  std::size_t index_of(std::string_view name) const noexcept {
    const auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) {
      return names_.size();
    }
    return static_cast<std::size_t>(it - names_.begin());
  }

  bool contains(std::string_view name) const noexcept { return index_of(name) != size(); }

  AttributeUniverse merged(const AttributeUniverse& other) const {
    std::vector<std::string> all = names_;
    all.insert(all.end(), other.names_.begin(), other.names_.end());
    return AttributeUniverse(std::move(all));
  }

  friend bool operator==(const AttributeUniverse&, const AttributeUniverse&) = default;

private:
  std::vector<std::string> names_;
};

using Assignment = std::unordered_map<std::string, bool>;

/// A monotone Boolean formula in normalized alternating form.
class Formula {
public:
  explicit Formula(NodePtr root) : root_(std::move(root)) {
    if (!root_) {
      throw std::invalid_argument("formula root must not be null");
    }
  }

  static Formula leaf(std::string attribute) { return Formula(Node::leaf(std::move(attribute))); }

  const Node& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }

  std::uint64_t cost() const noexcept { return root_->cost(); }
  std::uint64_t hash() const noexcept { return root_->hash(); }
  std::uint64_t node_count() const noexcept { return root_->size(); }

  AttributeUniverse attributes() const {
    std::vector<std::string> names;
    collect(*root_, names);
    return AttributeUniverse(std::move(names));
  }

  friend bool operator==(const Formula& a, const Formula& b) noexcept {
    return structurally_equal(*a.root_, *b.root_);
  }

private:
  static void collect(const Node& node, std::vector<std::string>& out) {
    if (node.is_leaf()) {
      out.push_back(node.attribute());
      return;
    }
    for (const auto& child : node.children()) {
      collect(*child, out);
    }
  }

  NodePtr root_;
};

inline std::uint64_t cost(const Formula& f) noexcept { return f.cost(); }

namespace detail {

inline std::string print_node(const Node& node) {
  if (node.is_leaf()) {
    return node.attribute();
  }
  // Display order: leaves first, then gates, each group sorted by text.
  std::vector<std::pair<bool, std::string>> parts;
  parts.reserve(node.children().size());
  for (const auto& child : node.children()) {
    parts.emplace_back(child->is_gate(), print_node(*child));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  const std::string separator = std::string(" ") + std::string(operator_symbol(node.kind())) + " ";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) {
      out += separator;
    }
    out += parts[i].second;
  }
  out += ")";
  return out;
}

inline bool evaluate_node(const Node& node, const Assignment& assignment) {
  switch (node.kind()) {
  case NodeKind::Leaf: {
    const auto it = assignment.find(node.attribute());
    if (it == assignment.end()) {
      throw MissingAttributeError(node.attribute());
    }
    return it->second;
  }
  case NodeKind::And:
    for (const auto& child : node.children()) {
      if (!evaluate_node(*child, assignment)) {
        return false;
      }
    }
    return true;
  case NodeKind::Or:
    for (const auto& child : node.children()) {
      if (evaluate_node(*child, assignment)) {
        return true;
      }
    }
    return false;
  }
  return false;
}

} // namespace detail

/// Deterministic canonical text; parses back to an equal formula.
inline std::string to_string(const Node& node) { return detail::print_node(node); }
inline std::string to_string(const Formula& f) { return detail::print_node(f.root()); }

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

inline bool evaluate(const Formula& f, const Assignment& assignment) {
  // Every attribute must be present even where short-circuiting would skip it.
  const AttributeUniverse universe = f.attributes();
  for (const auto& name : universe.names()) {
    if (!assignment.contains(name)) {
      throw MissingAttributeError(name);
    }
  }
  return detail::evaluate_node(f.root(), assignment);
}

/// Leaf occurrences per attribute.
inline std::map<std::string, std::uint64_t> literal_counts(const Formula& f) {
  std::map<std::string, std::uint64_t> counts;
  std::vector<const Node*> stack{&f.root()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      ++counts[node->attribute()];
    } else {
      for (const auto& child : node->children()) {
        stack.push_back(child.get());
      }
    }
  }
  return counts;
}

} // namespace abemin
