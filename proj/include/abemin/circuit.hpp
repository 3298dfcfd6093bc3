#pragma once

#include <abemin/equivalence.hpp>
#include <abemin/error.hpp>
#include <abemin/formula.hpp>
#include <abemin/parser.hpp>

#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace abemin {

enum class CircuitNodeKind : std::uint8_t { Input, And, Or };

struct CircuitNode {
  CircuitNodeKind kind = CircuitNodeKind::Input;
  std::string id;
  std::string attribute;              // inputs only
  std::vector<std::size_t> children;  // gates only, indices into Circuit::nodes
};

/// Monotone Boolean DAG. Edges point from a gate to the nodes it reads;
/// `output` is the node whose value is the circuit's value.
struct Circuit {
  std::vector<CircuitNode> nodes;
  std::size_t output = 0;
};

enum class CircuitIssueKind {
  Cycle,
  Unreachable,
  MultipleOutputs,
  FanIn,
  DuplicateEdge,
  EmptyAttribute,
  BadReference,
};

struct CircuitIssue {
  CircuitIssueKind kind;
  std::size_t node;
  std::string message;
};

inline std::string_view to_string(CircuitIssueKind kind) {
  switch (kind) {
  case CircuitIssueKind::Cycle:
    return "cycle";
  case CircuitIssueKind::Unreachable:
    return "unreachable";
  case CircuitIssueKind::MultipleOutputs:
    return "multiple-outputs";
  case CircuitIssueKind::FanIn:
    return "fan-in";
  case CircuitIssueKind::DuplicateEdge:
    return "duplicate-edge";
  case CircuitIssueKind::EmptyAttribute:
    return "empty-attribute";
  case CircuitIssueKind::BadReference:
    return "bad-reference";
  }
  return "unknown";
}

/// Structural checks; an empty result means the circuit is valid.
inline std::vector<CircuitIssue> validate(const Circuit& c) {
  std::vector<CircuitIssue> issues;
  const std::size_t n = c.nodes.size();
  auto label = [&](std::size_t i) { return c.nodes[i].id.empty() ? "#" + std::to_string(i) : c.nodes[i].id; };
  if (n == 0 || c.output >= n) {
    issues.push_back({CircuitIssueKind::BadReference, c.output, "output does not name a node"});
    return issues;
  }
  bool references_ok = true;
  std::vector<std::size_t> consumers(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = c.nodes[i];
    if (node.kind == CircuitNodeKind::Input) {
      if (node.attribute.empty()) {
        issues.push_back({CircuitIssueKind::EmptyAttribute, i, "input " + label(i) + " has no attribute"});
      }
      if (!node.children.empty()) {
        issues.push_back({CircuitIssueKind::BadReference, i, "input " + label(i) + " has children"});
      }
      continue;
    }
    if (node.children.size() < 2) {
      issues.push_back({CircuitIssueKind::FanIn, i,
                        "gate " + label(i) + " has fan-in " + std::to_string(node.children.size()) + " < 2"});
    }
    std::vector<std::size_t> seen;
    for (const std::size_t child : node.children) {
      if (child >= n) {
        issues.push_back({CircuitIssueKind::BadReference, i, "gate " + label(i) + " reads a missing node"});
        references_ok = false;
        continue;
      }
      if (std::find(seen.begin(), seen.end(), child) != seen.end()) {
        issues.push_back({CircuitIssueKind::DuplicateEdge, i,
                          "gate " + label(i) + " reads " + label(child) + " twice"});
        continue;
      }
      seen.push_back(child);
      ++consumers[child];
    }
  }
  if (!references_ok) {
    return issues;
  }

  // Cycle detection, iterative three-colour DFS.
  std::vector<std::uint8_t> colour(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (colour[start] != 0) {
      continue;
    }
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    colour[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < c.nodes[node].children.size()) {
        const std::size_t child = c.nodes[node].children[next++];
        if (colour[child] == 1) {
          issues.push_back({CircuitIssueKind::Cycle, child, "cycle through " + label(child)});
        } else if (colour[child] == 0) {
          colour[child] = 1;
          stack.emplace_back(child, 0);
        }
      } else {
        colour[node] = 2;
        stack.pop_back();
      }
    }
  }

  std::vector<bool> reachable(n, false);
  std::vector<std::size_t> work{c.output};
  reachable[c.output] = true;
  while (!work.empty()) {
    const std::size_t node = work.back();
    work.pop_back();
    for (const std::size_t child : c.nodes[node].children) {
      if (!reachable[child]) {
        reachable[child] = true;
        work.push_back(child);
      }
    }
  }
  std::size_t sinks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (consumers[i] == 0) {
      ++sinks;
    }
    if (!reachable[i]) {
      issues.push_back({CircuitIssueKind::Unreachable, i, "node " + label(i) + " does not reach the output"});
    }
  }
  if (consumers[c.output] != 0 || sinks > 1) {
    issues.push_back({CircuitIssueKind::MultipleOutputs, c.output,
                      "circuit must have exactly one unconsumed node, the output"});
  }
  return issues;
}

inline void require_valid(const Circuit& c) {
  const auto issues = validate(c);
  if (!issues.empty()) {
    std::string message = "invalid circuit:";
    for (const auto& issue : issues) {
      message += " [" + std::string(to_string(issue.kind)) + "] " + issue.message + ";";
    }
    throw InvalidCircuitError(message);
  }
}

namespace detail {

// Nodes ordered so every gate precedes the nodes it reads (output first).
inline std::vector<std::size_t> top_down_order(const Circuit& c) {
  const std::size_t n = c.nodes.size();
  std::vector<std::size_t> post;
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{c.output, 0}};
  visited[c.output] = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < c.nodes[node].children.size()) {
      const std::size_t child = c.nodes[node].children[next++];
      if (visited[child] == 0) {
        visited[child] = 1;
        stack.emplace_back(child, 0);
      }
    } else {
      post.push_back(node);
      stack.pop_back();
    }
  }
  return {post.rbegin(), post.rend()};
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw UnfoldTooLargeError("path count overflows 64 bits");
  }
  return a + b;
}

} // namespace detail

struct PathCount {
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> per_attribute;
};

/// Number of distinct output-to-input paths, which equals the number of
/// secret shares each input receives.
inline PathCount path_count(const Circuit& c) {
  require_valid(c);
  std::vector<std::uint64_t> paths(c.nodes.size(), 0);
  paths[c.output] = 1;
  PathCount out;
  for (const std::size_t node : detail::top_down_order(c)) {
    const auto& current = c.nodes[node];
    if (current.kind == CircuitNodeKind::Input) {
      auto& slot = out.per_attribute[current.attribute];
      slot = detail::checked_add(slot, paths[node]);
      out.total = detail::checked_add(out.total, paths[node]);
      continue;
    }
    for (const std::size_t child : current.children) {
      paths[child] = detail::checked_add(paths[child], paths[node]);
    }
  }
  return out;
}

inline constexpr std::uint64_t kDefaultUnfoldCap = 1'000'000;

/// Expands shared subcircuits into a tree. Gates that repeat a subformula
/// among their children are normalized, so the result can have fewer literals
/// than the circuit has paths; for irredundant alternating circuits the two
/// counts agree.
inline Formula unfold(const Circuit& c, std::uint64_t max_leaves = kDefaultUnfoldCap) {
  const auto paths = path_count(c);
  if (paths.total > max_leaves) {
    throw UnfoldTooLargeError("unfolded formula would have " + std::to_string(paths.total) +
                              " leaves, cap is " + std::to_string(max_leaves));
  }
  const auto order = detail::top_down_order(c);
  std::vector<NodePtr> built(c.nodes.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& node = c.nodes[*it];
    if (node.kind == CircuitNodeKind::Input) {
      built[*it] = Node::leaf(node.attribute);
      continue;
    }
    std::vector<NodePtr> children;
    children.reserve(node.children.size());
    for (const std::size_t child : node.children) {
      children.push_back(built[child]);
    }
    built[*it] = Node::gate(node.kind == CircuitNodeKind::And ? NodeKind::And : NodeKind::Or,
                            std::move(children));
  }
  return Formula(built[c.output]);
}

/// Tree-shaped circuit of a formula; one input node per leaf occurrence.
inline Circuit to_circuit(const Formula& f) {
  Circuit c;
  auto add = [&](auto&& self, const Node& node) -> std::size_t {
    const std::size_t index = c.nodes.size();
    c.nodes.emplace_back();
    c.nodes[index].id = "n" + std::to_string(index);
    if (node.is_leaf()) {
      c.nodes[index].kind = CircuitNodeKind::Input;
      c.nodes[index].attribute = node.attribute();
      return index;
    }
    c.nodes[index].kind = node.kind() == NodeKind::And ? CircuitNodeKind::And : CircuitNodeKind::Or;
    for (const auto& child : node.children()) {
      const std::size_t ci = self(self, *child);
      c.nodes[index].children.push_back(ci);
    }
    return index;
  };
  c.output = add(add, f.root());
  return c;
}

/// Evaluates the DAG directly, 64 assignments per call; no unfolding.
class CircuitProgram {
public:
  CircuitProgram(const Circuit& c, const AttributeUniverse& universe) : circuit_(&c) {
    require_valid(c);
    const auto order = detail::top_down_order(c);
    order_.assign(order.rbegin(), order.rend());
    variable_.assign(c.nodes.size(), 0);
    for (const std::size_t i : order_) {
      if (c.nodes[i].kind == CircuitNodeKind::Input) {
        const std::size_t index = universe.index_of(c.nodes[i].attribute);
        if (index == universe.size()) {
          throw MissingAttributeError(c.nodes[i].attribute);
        }
        variable_[i] = index;
      }
    }
    values_.assign(c.nodes.size(), 0);
  }

  std::uint64_t evaluate(std::span<const std::uint64_t> variables) const {
    for (const std::size_t i : order_) {
      const auto& node = circuit_->nodes[i];
      switch (node.kind) {
      case CircuitNodeKind::Input:
        values_[i] = variables[variable_[i]];
        break;
      case CircuitNodeKind::And: {
        std::uint64_t acc = ~std::uint64_t{0};
        for (const std::size_t child : node.children) {
          acc &= values_[child];
        }
        values_[i] = acc;
        break;
      }
      case CircuitNodeKind::Or: {
        std::uint64_t acc = 0;
        for (const std::size_t child : node.children) {
          acc |= values_[child];
        }
        values_[i] = acc;
        break;
      }
      }
    }
    return values_[circuit_->output];
  }

private:
  const Circuit* circuit_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> variable_;
  mutable std::vector<std::uint64_t> values_;
};

inline AttributeUniverse attributes(const Circuit& c) {
  std::vector<std::string> names;
  for (const auto& node : c.nodes) {
    if (node.kind == CircuitNodeKind::Input) {
      names.push_back(node.attribute);
    }
  }
  return AttributeUniverse(std::move(names));
}

inline bool evaluate(const Circuit& c, const Assignment& assignment) {
  const AttributeUniverse universe = attributes(c);
  std::vector<std::uint64_t> words(universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const auto it = assignment.find(universe.names()[i]);
    if (it == assignment.end()) {
      throw MissingAttributeError(universe.names()[i]);
    }
    words[i] = it->second ? 1 : 0;
  }
  return (CircuitProgram(c, universe).evaluate(words) & 1U) != 0;
}

inline EquivalenceResult check_equivalence(const Circuit& c, const Formula& f,
                                           const EquivalenceMode& mode = Exhaustive{}) {
  const AttributeUniverse universe = attributes(c).merged(f.attributes());
  return compare_programs(CircuitProgram(c, universe), FormulaProgram(f, universe), universe, mode);
}

/// True when the text ends with an `OUTPUT <id>` line (circuit format).
inline bool looks_like_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (is_ignorable_line(line)) {
      continue;
    }
    std::istringstream words(line);
    std::string first;
    words >> first;
    if (first == "OUTPUT") {
      return true;
    }
  }
  return false;
}

/// Reads `<id> INPUT <attr>`, `<id> AND <id>...`, `<id> OR <id>...` lines and
/// a final `OUTPUT <id>`. Child ids may be defined later in the file.
inline Circuit parse_circuit(std::istream& in) {
  struct Pending {
    std::vector<std::string> children;
    std::size_t line;
  };
  Circuit c;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<Pending> pending;
  std::string output_id;
  std::size_t output_line = 0;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string t; words >> t;) {
      tokens.push_back(t);
    }
    if (tokens.empty()) {
      continue;
    }
    if (!output_id.empty()) {
      throw ParseError("content after OUTPUT line", 0, number);
    }
    if (tokens[0] == "OUTPUT") {
      if (tokens.size() != 2) {
        throw ParseError("expected 'OUTPUT <id>'", 0, number);
      }
      output_id = tokens[1];
      output_line = number;
      continue;
    }
    if (tokens.size() < 2) {
      throw ParseError("expected '<id> INPUT|AND|OR ...'", 0, number);
    }
    if (index.contains(tokens[0])) {
      throw ParseError("duplicate node id '" + tokens[0] + "'", 0, number);
    }
    CircuitNode node;
    node.id = tokens[0];
    if (tokens[1] == "INPUT") {
      if (tokens.size() != 3) {
        throw ParseError("expected '<id> INPUT <attribute>'", 0, number);
      }
      node.kind = CircuitNodeKind::Input;
      node.attribute = tokens[2];
    } else if (tokens[1] == "AND" || tokens[1] == "OR") {
      node.kind = tokens[1] == "AND" ? CircuitNodeKind::And : CircuitNodeKind::Or;
    } else if (tokens[1] == "NOT") {
      throw NonMonotoneError("NOT gates are not allowed in a monotone circuit", 0, number);
    } else {
      throw ParseError("unknown node type '" + tokens[1] + "'", 0, number);
    }
    index.emplace(node.id, c.nodes.size());
    pending.push_back({{tokens.begin() + 2, tokens.end()}, number});
    if (node.kind == CircuitNodeKind::Input) {
      pending.back().children.clear();
    }
    c.nodes.push_back(std::move(node));
  }
  if (output_id.empty()) {
    throw ParseError("missing OUTPUT line", 0, number == 0 ? 1 : number);
  }
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    for (const auto& child : pending[i].children) {
      const auto it = index.find(child);
      if (it == index.end()) {
        throw ParseError("unknown node id '" + child + "'", 0, pending[i].line);
      }
      c.nodes[i].children.push_back(it->second);
    }
  }
  const auto it = index.find(output_id);
  if (it == index.end()) {
    throw ParseError("unknown output id '" + output_id + "'", 0, output_line);
  }
  c.output = it->second;
  return c;
}

inline Circuit parse_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_circuit(in);
}

inline std::string to_text(const Circuit& c) {
  std::string out;
  for (const auto& node : c.nodes) {
    out += node.id;
    switch (node.kind) {
    case CircuitNodeKind::Input:
      out += " INPUT " + node.attribute;
      break;
    case CircuitNodeKind::And:
    case CircuitNodeKind::Or:
      out += node.kind == CircuitNodeKind::And ? " AND" : " OR";
      for (const std::size_t child : node.children) {
        out += " " + c.nodes[child].id;
      }
      break;
    }
    out += "\n";
  }
  out += "OUTPUT " + c.nodes[c.output].id + "\n";
  return out;
}

} // namespace abemin
