#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "theta/colored_tree.hpp"
#include "theta/errors.hpp"
#include "theta/tree.hpp"

namespace theta {

namespace detail {

inline Tree rebuild_node(const Tree& like, const Tree& a, const Tree& b) {
  return Tree::node(a, b, like.head());
}
inline CTree rebuild_node(const CTree& like, const CTree& a, const CTree& b) {
  return CTree::node(a, b, like.head(), like.color());
}

inline Tree stub_leaf(const Tree&) { return Tree::trace("*cut"); }
inline CTree stub_leaf(const CTree& like) { return CTree::trace("*cut", like.color()); }

}  // namespace detail

// Trace leaf for a contracted subtree: labelled by the head item of the
// subtree, with a '+' suffix when a whole phrase (not a single leaf) was
// contracted; the colored form keeps the subtree's root color, terminal
// wrapper stripped.
inline std::string trace_label(const std::string& head_item, bool phrase) {
  std::string base = head_item[0] == '*' ? head_item : "*" + head_item;
  return phrase ? base + "+" : base;
}

inline Tree make_trace_for(const Tree& sub) {
  std::string head = sub.subtree(sub.head_leaf()).label();
  return Tree::trace(trace_label(head, sub.is_internal()));
}
inline CTree make_trace_for(const CTree& sub) {
  std::string head = sub.subtree(sub.head_leaf()).label();
  return CTree::trace(trace_label(head, sub.is_internal()), strip_terminal(sub.color()));
}

// Deletion quotient: remove the subtrees at `cut`, contract non-branching
// vertices. Returns nothing if the root itself is cut away.
template <class TreeT>
std::optional<TreeT> quotient_delete(const TreeT& t, const std::set<VertexPath>& cut) {
  if (cut.count(VertexPath{})) return std::nullopt;
  std::function<std::optional<TreeT>(const TreeT&, VertexPath&)> rec =
      [&](const TreeT& n, VertexPath& p) -> std::optional<TreeT> {
    if (n.is_leaf()) return TreeT(n);
    std::optional<TreeT> kept[2];
    for (int i = 0; i < 2; ++i) {
      p.push_back(i);
      if (!cut.count(p)) kept[i] = rec(n.child(i), p);
      p.pop_back();
    }
    if (kept[0] && kept[1]) return detail::rebuild_node(n, *kept[0], *kept[1]);
    if (kept[0] || kept[1]) return kept[0] ? *kept[0] : *kept[1];
    return detail::stub_leaf(n);
  };
  VertexPath p;
  return rec(t, p);
}

// Contraction quotient: shrink each subtree at `cut` to a trace leaf carrying
// its features (and color).
template <class TreeT>
std::optional<TreeT> quotient_contract(const TreeT& t, const std::set<VertexPath>& cut) {
  if (cut.count(VertexPath{})) return std::nullopt;
  std::function<TreeT(const TreeT&, VertexPath&)> rec = [&](const TreeT& n,
                                                            VertexPath& p) -> TreeT {
    if (!p.empty() && cut.count(p)) return make_trace_for(n);
    if (n.is_leaf()) return TreeT(n);
    p.push_back(0);
    TreeT a = rec(n.child(0), p);
    p.back() = 1;
    TreeT b = rec(n.child(1), p);
    p.pop_back();
    return detail::rebuild_node(n, a, b);
  };
  VertexPath p;
  if (cut.count(p)) return std::nullopt;
  return rec(t, p);
}

template <class TreeT>
struct CoproductTerm {
  std::vector<VertexPath> cut;       // lower endpoints of the cut edges
  bool full_cut = false;             // the T (x) 1 term
  std::vector<TreeT> left;           // extracted forest
  std::optional<TreeT> right_del;    // deletion quotient (nullopt = unit)
  std::optional<TreeT> right_con;    // contraction quotient (nullopt = unit)
};

// All edge antichains of t (no two cut edges on one root-to-leaf path),
// including the empty cut; the full-cut term T (x) 1 is appended separately.
template <class TreeT>
std::vector<CoproductTerm<TreeT>> coproduct(const TreeT& t, size_t max_terms = 100000) {
  std::vector<std::vector<VertexPath>> antichains;
  std::function<std::vector<std::vector<VertexPath>>(const TreeT&, VertexPath&)> rec =
      [&](const TreeT& n, VertexPath& p) -> std::vector<std::vector<VertexPath>> {
    std::vector<std::vector<VertexPath>> out{{}};
    if (n.is_leaf()) return out;
    for (int i = 0; i < 2; ++i) {
      p.push_back(i);
      auto sub = rec(n.child(i), p);
      sub.push_back({p});  // cutting the edge above this child
      std::vector<std::vector<VertexPath>> merged;
      merged.reserve(out.size() * sub.size());
      for (const auto& a : out)
        for (const auto& b : sub) {
          auto c = a;
          c.insert(c.end(), b.begin(), b.end());
          merged.push_back(std::move(c));
          if (merged.size() > max_terms) throw GuardExceeded("coproduct term guard exceeded");
        }
      out = std::move(merged);
      p.pop_back();
    }
    return out;
  };
  VertexPath p;
  antichains = rec(t, p);
  if (antichains.size() + 1 > max_terms) throw GuardExceeded("coproduct term guard exceeded");

  std::vector<CoproductTerm<TreeT>> terms;
  terms.reserve(antichains.size() + 1);
  for (auto& cut : antichains) {
    CoproductTerm<TreeT> term;
    std::sort(cut.begin(), cut.end());
    term.cut = cut;
    std::set<VertexPath> cs(cut.begin(), cut.end());
    for (const auto& c : cut) term.left.push_back(t.subtree(c));
    std::sort(term.left.begin(), term.left.end());
    term.right_del = quotient_delete(t, cs);
    term.right_con = quotient_contract(t, cs);
    terms.push_back(std::move(term));
  }
  CoproductTerm<TreeT> full;
  full.full_cut = true;
  full.left.push_back(t);
  terms.push_back(std::move(full));
  return terms;
}

}  // namespace theta
