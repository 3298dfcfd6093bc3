#pragma once

#include <abemin/error.hpp>
#include <abemin/formula.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace abemin {

enum class RewriteKind : std::uint8_t { Factorization, Defactorization };

/// Child indices from the root down to a node.
using NodePath = std::vector<std::uint32_t>;

/// Marks a factor that is itself a leaf child of the grandparent, i.e. a
/// term with an implicit one-element parent. Factoring such a term is what
/// triggers absorption.
inline constexpr std::uint32_t kWholeTerm = 0xffffffffU;

/// An applicable rewrite, located by paths in the formula it was found in.
///
/// Factorization: `anchor` is the common grandparent T; the factor sits at
/// child `first_child` of T's child `first_parent`, and again at
/// `second_child` of `second_parent` (first_parent < second_parent).
///
/// Defactorization: `anchor` is the gate G and `compound` the index of the
/// child D of G that G's other children get distributed over.
struct RewriteSite {
  RewriteKind kind = RewriteKind::Factorization;
  std::uint64_t stamp = 0; // canonical hash of the formula the site belongs to
  NodePath anchor;
  std::uint32_t first_parent = 0;
  std::uint32_t first_child = 0;
  std::uint32_t second_parent = 0;
  std::uint32_t second_child = 0;
  std::uint32_t compound = 0;
  /// Predicted cost change: minus the factor's cost for factorizations
  /// (absorption can only lower it further), the exact increase for
  /// defactorizations.
  std::int64_t delta = 0;

  friend bool operator==(const RewriteSite&, const RewriteSite&) = default;
};

namespace detail {

inline const Node& node_at(const Node& root, const NodePath& path) {
  const Node* node = &root;
  for (const std::uint32_t step : path) {
    if (!node->is_gate() || step >= node->children().size()) {
      throw StaleSiteError("site path does not exist in this formula");
    }
    node = &node->child(step);
  }
  return *node;
}

// Rebuilds the ancestors of the node at `path` after substituting it.
inline NodePtr replace_at(const NodePtr& root, const NodePath& path, std::size_t depth, NodePtr replacement) {
  if (depth == path.size()) {
    return replacement;
  }
  std::vector<NodePtr> children(root->children().begin(), root->children().end());
  children[path[depth]] = replace_at(children[path[depth]], path, depth + 1, std::move(replacement));
  return Node::gate(root->kind(), std::move(children));
}

inline const Node& term_factor(const Node& parent, std::uint32_t child) {
  return child == kWholeTerm ? parent : parent.child(child);
}

struct FactorEntry {
  std::uint64_t hash;
  std::uint32_t parent;
  std::uint32_t child;
  const Node* node;
};

inline void collect_factorizations(const Node& grandparent, std::uint64_t stamp, NodePath& path,
                                   std::vector<RewriteSite>& out, std::vector<FactorEntry>& scratch) {
  if (grandparent.is_leaf()) {
    return;
  }
  const auto terms = grandparent.children();
  scratch.clear();
  bool has_gate_term = false;
  for (std::uint32_t p = 0; p < terms.size(); ++p) {
    const Node& term = *terms[p];
    if (term.is_leaf()) {
      scratch.push_back({term.hash(), p, kWholeTerm, &term});
      continue;
    }
    has_gate_term = true;
    const auto factors = term.children();
    for (std::uint32_t j = 0; j < factors.size(); ++j) {
      scratch.push_back({factors[j]->hash(), p, j, factors[j].get()});
    }
  }
  if (has_gate_term) {
    std::sort(scratch.begin(), scratch.end(), [](const FactorEntry& a, const FactorEntry& b) {
      if (a.hash != b.hash) {
        return a.hash < b.hash;
      }
      if (a.parent != b.parent) {
        return a.parent < b.parent;
      }
      return a.child < b.child;
    });
    for (std::size_t lo = 0; lo < scratch.size();) {
      std::size_t hi = lo + 1;
      while (hi < scratch.size() && scratch[hi].hash == scratch[lo].hash) {
        ++hi;
      }
      for (std::size_t a = lo; a < hi; ++a) {
        for (std::size_t b = a + 1; b < hi; ++b) {
          const auto& x = scratch[a];
          const auto& y = scratch[b];
          if (x.parent == y.parent || !structurally_equal(*x.node, *y.node)) {
            continue;
          }
          RewriteSite site;
          site.kind = RewriteKind::Factorization;
          site.stamp = stamp;
          site.anchor = path;
          site.first_parent = x.parent;
          site.first_child = x.child;
          site.second_parent = y.parent;
          site.second_child = y.child;
          site.delta = -static_cast<std::int64_t>(y.node->cost());
          out.push_back(std::move(site));
        }
      }
      lo = hi;
    }
  }
  for (std::uint32_t p = 0; p < terms.size(); ++p) {
    if (terms[p]->is_gate()) {
      path.push_back(p);
      collect_factorizations(*terms[p], stamp, path, out, scratch);
      path.pop_back();
    }
  }
}

// Whether distributing `gate` over its child `compound` merges any terms,
// either inside a new term or against the gate's siblings under `parent`.
// Merges are absorption-like simplifications, not defactorizations.
inline bool distribution_merges(const Node& gate, std::uint32_t compound, const Node* parent,
                                std::uint32_t gate_index, std::vector<std::uint64_t>& others) {
  const Node& spread = gate.child(compound);
  others.clear();
  std::uint64_t others_sum = 0;
  for (std::uint32_t i = 0; i < gate.children().size(); ++i) {
    if (i != compound) {
      others.push_back(gate.child(i).hash());
      others_sum += hash_term(gate.child(i).hash());
    }
  }
  std::sort(others.begin(), others.end());
  auto in_others = [&](std::uint64_t h) { return std::binary_search(others.begin(), others.end(), h); };
  for (const auto& alternative : spread.children()) {
    std::uint64_t sum = others_sum;
    if (alternative->is_leaf()) {
      if (in_others(alternative->hash())) {
        return true;
      }
      sum += hash_term(alternative->hash());
    } else {
      for (const auto& inner : alternative->children()) {
        if (in_others(inner->hash())) {
          return true;
        }
        sum += hash_term(inner->hash());
      }
    }
    if (parent != nullptr) {
      const std::uint64_t term = gate_hash(gate.kind(), sum);
      for (std::uint32_t s = 0; s < parent->children().size(); ++s) {
        if (s != gate_index && parent->child(s).hash() == term) {
          return true;
        }
      }
    }
  }
  return false;
}

inline void collect_defactorizations(const Node& gate, const Node* parent, std::uint32_t gate_index,
                                     std::uint64_t stamp, NodePath& path, std::vector<RewriteSite>& out,
                                     std::vector<std::uint64_t>& scratch) {
  if (gate.is_leaf()) {
    return;
  }
  const auto children = gate.children();
  for (std::uint32_t d = 0; d < children.size(); ++d) {
    const Node& compound = *children[d];
    if (compound.is_leaf() || distribution_merges(gate, d, parent, gate_index, scratch)) {
      continue;
    }
    const std::uint64_t rest = gate.cost() - compound.cost();
    RewriteSite site;
    site.kind = RewriteKind::Defactorization;
    site.stamp = stamp;
    site.anchor = path;
    site.compound = d;
    site.delta = static_cast<std::int64_t>((compound.children().size() - 1) * rest);
    out.push_back(std::move(site));
  }
  for (std::uint32_t i = 0; i < children.size(); ++i) {
    if (children[i]->is_gate()) {
      path.push_back(i);
      collect_defactorizations(*children[i], &gate, i, stamp, path, out, scratch);
      path.pop_back();
    }
  }
}

inline void check_stamp(const Formula& f, const RewriteSite& site, RewriteKind expected) {
  if (site.kind != expected) {
    throw StaleSiteError("rewrite site has the wrong kind");
  }
  if (site.stamp != f.hash()) {
    throw StaleSiteError("rewrite site was found in a different formula");
  }
}

} // namespace detail

/// Every pair of equal subformulas with distinct parents and a common
/// grandparent, each unordered pair once, in a deterministic order.
/// A leaf directly under the grandparent counts as its own one-element term.
inline std::vector<RewriteSite> find_factorization_sites(const Formula& f) {
  std::vector<RewriteSite> out;
  std::vector<detail::FactorEntry> scratch;
  NodePath path;
  detail::collect_factorizations(f.root(), f.hash(), path, out, scratch);
  return out;
}

/// Every (gate, compound child) pair whose distribution is a proper
/// defactorization, i.e. strictly raises the literal count.
inline std::vector<RewriteSite> find_defactorization_sites(const Formula& f) {
  std::vector<RewriteSite> out;
  std::vector<std::uint64_t> scratch;
  NodePath path;
  detail::collect_defactorizations(f.root(), nullptr, 0, f.hash(), path, out, scratch);
  return out;
}

inline std::vector<RewriteSite> find_sites(const Formula& f, RewriteKind kind) {
  return kind == RewriteKind::Factorization ? find_factorization_sites(f) : find_defactorization_sites(f);
}

/// Extracts the common factor psi of two terms P1, P2 under T:
/// T(P1, P2, rest...) becomes T(psi * (P1' + P2'), rest...), where P' is P
/// without psi. If a term consisted of psi alone, the whole product
/// collapses to psi (absorption).
inline Formula apply_factorization(const Formula& f, const RewriteSite& site) {
  detail::check_stamp(f, site, RewriteKind::Factorization);
  const Node& anchor = detail::node_at(f.root(), site.anchor);
  const auto terms = anchor.children();
  if (anchor.is_leaf() || site.first_parent >= terms.size() || site.second_parent >= terms.size() ||
      site.first_parent == site.second_parent) {
    throw StaleSiteError("factorization site does not match this formula");
  }
  const NodePtr& p1 = terms[site.first_parent];
  const NodePtr& p2 = terms[site.second_parent];
  auto valid_child = [](const Node& parent, std::uint32_t child) {
    return child == kWholeTerm ? parent.is_leaf() : (parent.is_gate() && child < parent.children().size());
  };
  if (!valid_child(*p1, site.first_child) || !valid_child(*p2, site.second_child)) {
    throw StaleSiteError("factorization site does not match this formula");
  }
  const Node& factor = detail::term_factor(*p1, site.first_child);
  if (!structurally_equal(factor, detail::term_factor(*p2, site.second_child))) {
    throw StaleSiteError("factorization site does not name equal subformulas");
  }

  const NodeKind outer = anchor.kind();
  const NodeKind inner = dual(outer);
  auto remainder = [](const NodePtr& term, std::uint32_t child) {
    std::vector<NodePtr> rest;
    if (child != kWholeTerm) {
      for (std::uint32_t i = 0; i < term->children().size(); ++i) {
        if (i != child) {
          rest.push_back(term->children()[i]);
        }
      }
    }
    return rest;
  };
  const NodePtr factor_ptr = site.first_child == kWholeTerm ? p1 : p1->children()[site.first_child];
  auto rest1 = remainder(p1, site.first_child);
  auto rest2 = remainder(p2, site.second_child);

  NodePtr merged;
  if (rest1.empty() || rest2.empty()) {
    merged = factor_ptr;
  } else {
    NodePtr alternatives = Node::gate(outer, {Node::gate(inner, std::move(rest1)), Node::gate(inner, std::move(rest2))});
    merged = Node::gate(inner, {factor_ptr, std::move(alternatives)});
  }

  std::vector<NodePtr> children;
  children.reserve(terms.size() - 1);
  for (std::uint32_t i = 0; i < terms.size(); ++i) {
    if (i != site.first_parent && i != site.second_parent) {
      children.push_back(terms[i]);
    }
  }
  children.push_back(std::move(merged));
  NodePtr replacement = Node::gate(outer, std::move(children));
  return Formula(detail::replace_at(f.root_ptr(), site.anchor, 0, std::move(replacement)));
}

/// Distributes gate G over one compound child D:
/// G(c..., D(d1..dr)) becomes D-kind(G(c..., d1), ..., G(c..., dr)).
inline Formula apply_defactorization(const Formula& f, const RewriteSite& site) {
  detail::check_stamp(f, site, RewriteKind::Defactorization);
  const Node& gate = detail::node_at(f.root(), site.anchor);
  if (gate.is_leaf() || site.compound >= gate.children().size() || gate.child(site.compound).is_leaf()) {
    throw StaleSiteError("defactorization site does not match this formula");
  }
  const auto children = gate.children();
  const Node& compound = gate.child(site.compound);
  std::vector<NodePtr> others;
  for (std::uint32_t i = 0; i < children.size(); ++i) {
    if (i != site.compound) {
      others.push_back(children[i]);
    }
  }
  std::vector<NodePtr> products;
  products.reserve(compound.children().size());
  for (const auto& alternative : compound.children()) {
    std::vector<NodePtr> term = others;
    term.push_back(alternative);
    products.push_back(Node::gate(gate.kind(), std::move(term)));
  }
  NodePtr replacement = Node::gate(compound.kind(), std::move(products));
  return Formula(detail::replace_at(f.root_ptr(), site.anchor, 0, std::move(replacement)));
}

inline Formula apply_rewrite(const Formula& f, const RewriteSite& site) {
  return site.kind == RewriteKind::Factorization ? apply_factorization(f, site) : apply_defactorization(f, site);
}

/// Human-readable description, used by the CLI's rewrite listing.
inline std::string describe(const Formula& f, const RewriteSite& site) {
  const Node& anchor = detail::node_at(f.root(), site.anchor);
  if (site.kind == RewriteKind::Factorization) {
    const Node& factor = detail::term_factor(anchor.child(site.first_parent), site.first_child);
    return "factor " + to_string(factor) + " out of " + to_string(anchor.child(site.first_parent)) +
           " and " + to_string(anchor.child(site.second_parent)) + " (delta " + std::to_string(site.delta) + ")";
  }
  return "distribute " + to_string(anchor) + " over " + to_string(anchor.child(site.compound)) + " (delta +" +
         std::to_string(site.delta) + ")";
}

} // namespace abemin
