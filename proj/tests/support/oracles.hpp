#pragma once

#include <abemin/circuit.hpp>
#include <abemin/formula.hpp>
#include <abemin/rewrite.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace abemin::support {

/// Calls fn on every assignment of `names`, one map at a time.
inline void for_each_assignment(const std::vector<std::string>& names,
                                const std::function<bool(const Assignment&)>& fn) {
  Assignment a;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << names.size()); ++bits) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      a[names[i]] = ((bits >> i) & 1U) != 0;
    }
    if (!fn(a)) {
      return;
    }
  }
}

inline std::vector<std::string> union_names(const Formula& f, const Formula& g) {
  const auto u = f.attributes().merged(g.attributes());
  return {u.names().begin(), u.names().end()};
}

/// Tree-walking truth-table comparison, one assignment at a time.
inline bool naive_equivalent(const Formula& f, const Formula& g) {
  bool same = true;
  for_each_assignment(union_names(f, g), [&](const Assignment& a) {
    same = evaluate(f, a) == evaluate(g, a);
    return same;
  });
  return same;
}

/// Recursive evaluation of a circuit node without memoization.
inline bool naive_circuit_value(const Circuit& c, std::size_t node, const Assignment& a) {
  const auto& n = c.nodes[node];
  if (n.kind == CircuitNodeKind::Input) {
    return a.at(n.attribute);
  }
  const bool is_and = n.kind == CircuitNodeKind::And;
  for (std::size_t child : n.children) {
    if (naive_circuit_value(c, child, a) != is_and) {
      return !is_and;
    }
  }
  return is_and;
}

/// Number of output-to-input paths, by explicit enumeration.
inline std::uint64_t enumerate_paths(const Circuit& c, std::size_t node) {
  const auto& n = c.nodes[node];
  if (n.kind == CircuitNodeKind::Input) {
    return 1;
  }
  std::uint64_t total = 0;
  for (std::size_t child : n.children) {
    total += enumerate_paths(c, child);
  }
  return total;
}

inline void collect_gates(const Node& node, std::vector<const Node*>& out) {
  if (node.is_leaf()) {
    return;
  }
  out.push_back(&node);
  for (const auto& child : node.children()) {
    collect_gates(*child, out);
  }
}

/// Factorization pairs found by comparing printed subformulas: for every gate
/// T and every pair of distinct children, each pair of equal factors (a leaf
/// child stands for itself).
inline std::size_t brute_force_factorization_pairs(const Formula& f) {
  std::vector<const Node*> gates;
  collect_gates(f.root(), gates);
  std::size_t count = 0;
  for (const Node* t : gates) {
    const auto terms = t->children();
    auto factors = [](const Node& term) {
      std::vector<std::string> out;
      if (term.is_leaf()) {
        out.push_back(to_string(term));
      } else {
        for (const auto& c : term.children()) {
          out.push_back(to_string(*c));
        }
      }
      return out;
    };
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto fi = factors(*terms[i]);
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        const auto fj = factors(*terms[j]);
        for (const auto& a : fi) {
          for (const auto& b : fj) {
            count += a == b ? 1 : 0;
          }
        }
      }
    }
  }
  return count;
}

/// Rebuilds `root` with the node at `path` replaced.
inline NodePtr substitute(const NodePtr& root, const std::vector<std::uint32_t>& path, std::size_t depth,
                          const NodePtr& replacement) {
  if (depth == path.size()) {
    return replacement;
  }
  std::vector<NodePtr> children(root->children().begin(), root->children().end());
  children[path[depth]] = substitute(children[path[depth]], path, depth + 1, replacement);
  return Node::gate(root->kind(), children);
}

/// Distribution of the gate at `path` over its child `compound`, built
/// directly from the definition.
inline Formula distribute(const Formula& f, const std::vector<std::uint32_t>& path, std::uint32_t compound) {
  const Node* gate = &f.root();
  for (auto step : path) {
    gate = &gate->child(step);
  }
  std::vector<NodePtr> others;
  for (std::uint32_t i = 0; i < gate->children().size(); ++i) {
    if (i != compound) {
      others.push_back(gate->children()[i]);
    }
  }
  const Node& d = gate->child(compound);
  std::vector<NodePtr> products;
  for (const auto& alt : d.children()) {
    auto term = others;
    term.push_back(alt);
    products.push_back(Node::gate(gate->kind(), term));
  }
  return Formula(substitute(f.root_ptr(), path, 0, Node::gate(d.kind(), products)));
}

struct Distribution {
  std::vector<std::uint32_t> path;
  std::uint32_t compound;
  std::int64_t change;
};

/// Every (gate, compound child) distribution with its exact cost change.
inline std::vector<Distribution> all_distributions(const Formula& f) {
  std::vector<Distribution> out;
  std::function<void(const Node&, std::vector<std::uint32_t>&)> walk = [&](const Node& node,
                                                                         std::vector<std::uint32_t>& path) {
    if (node.is_leaf()) {
      return;
    }
    for (std::uint32_t i = 0; i < node.children().size(); ++i) {
      if (node.child(i).is_gate()) {
        const Formula g = distribute(f, path, i);
        out.push_back({path, i, static_cast<std::int64_t>(g.cost()) - static_cast<std::int64_t>(f.cost())});
      }
    }
    for (std::uint32_t i = 0; i < node.children().size(); ++i) {
      path.push_back(i);
      walk(node.child(i), path);
      path.pop_back();
    }
  };
  std::vector<std::uint32_t> path;
  walk(f.root(), path);
  return out;
}

/// True when deleting any child of any gate changes the function, checked
/// exhaustively.
inline bool is_irredundant(const Formula& f) {
  bool essential = true;
  std::function<void(const Node&, std::vector<std::uint32_t>&)> walk = [&](const Node& node,
                                                                         std::vector<std::uint32_t>& path) {
    for (std::uint32_t i = 0; essential && i < node.children().size(); ++i) {
      std::vector<NodePtr> rest;
      for (std::uint32_t j = 0; j < node.children().size(); ++j) {
        if (j != i) {
          rest.push_back(node.children()[j]);
        }
      }
      const Formula without(substitute(f.root_ptr(), path, 0, Node::gate(node.kind(), rest)));
      essential = !naive_equivalent(f, without);
      if (essential && node.child(i).is_gate()) {
        path.push_back(i);
        walk(node.child(i), path);
        path.pop_back();
      }
    }
  };
  std::vector<std::uint32_t> path;
  if (f.root().is_gate()) {
    walk(f.root(), path);
  }
  return essential;
}

inline void collect_hashes(const Node& node, std::set<std::uint64_t>& out) {
  out.insert(node.hash());
  for (const auto& child : node.children()) {
    collect_hashes(*child, out);
  }
}

/// Undoes the distribution of G(c1..cm, D(d1..dr)) at `site` with plain
/// factorizations. The distributed terms G(c..., di) are merged one at a
/// time into G(c..., D(d1..dk)): each merge factors out c1, then c2 from the
/// two remainders, and so on. Every step is located by the hashes of the
/// terms it must combine; if one cannot be found the partial result is
/// returned.
inline Formula induced_factorization(const Formula& f, const RewriteSite& site) {
  const Node& gate = detail::node_at(f.root(), site.anchor);
  const NodeKind kind = gate.kind();
  const Node& compound = gate.child(site.compound);
  std::vector<NodePtr> others;
  for (std::uint32_t i = 0; i < gate.children().size(); ++i) {
    if (i != site.compound) {
      others.push_back(gate.children()[i]);
    }
  }
  auto term = [&](std::size_t from, const NodePtr& x) {
    std::vector<NodePtr> children(others.begin() + static_cast<std::ptrdiff_t>(from), others.end());
    children.push_back(x);
    return Node::gate(kind, children);
  };
  Formula g = apply_defactorization(f, site);
  const auto alternatives = compound.children();
  std::vector<NodePtr> merged{alternatives[0]};
  for (std::size_t k = 1; k < alternatives.size(); ++k) {
    const NodePtr left = merged.size() == 1 ? merged[0] : Node::gate(compound.kind(), merged);
    const NodePtr& right = alternatives[k];
    for (std::size_t j = 0; j < others.size(); ++j) {
      const std::uint64_t a = term(j, left)->hash();
      const std::uint64_t b = term(j, right)->hash();
      std::optional<RewriteSite> step;
      for (const auto& s : find_factorization_sites(g)) {
        const Node& t = detail::node_at(g.root(), s.anchor);
        const std::uint64_t h1 = t.child(s.first_parent).hash();
        const std::uint64_t h2 = t.child(s.second_parent).hash();
        if (detail::term_factor(t.child(s.first_parent), s.first_child).hash() == others[j]->hash() &&
            ((h1 == a && h2 == b) || (h1 == b && h2 == a))) {
          step = s;
          break;
        }
      }
      if (!step) {
        return g;
      }
      g = apply_factorization(g, *step);
    }
    merged.push_back(right);
  }
  return g;
}

} // namespace abemin::support
