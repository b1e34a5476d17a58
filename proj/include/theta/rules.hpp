#pragma once

#include <optional>
#include <string>
#include <vector>

#include "theta/colored_tree.hpp"
#include "theta/colors.hpp"
#include "theta/errors.hpp"
#include "theta/lexicon.hpp"

namespace theta {

enum class RuleFamily { Rule1, Rule2, Rule3, Rule3b, Rule4, Rule5, BareComb };

inline const char* family_name(RuleFamily f) {
  switch (f) {
    case RuleFamily::Rule1: return "Rule1";
    case RuleFamily::Rule2: return "Rule2";
    case RuleFamily::Rule3: return "Rule3";
    case RuleFamily::Rule3b: return "Rule3b";
    case RuleFamily::Rule4: return "Rule4";
    case RuleFamily::Rule5: return "Rule5";
    case RuleFamily::BareComb: return "BareComb";
  }
  return "?";
}

// A bud generating system over the Merge operad: the lexicon supplies the
// terminal colors, the inventory the nonterminal ones, the mode selects the
// bare or the complete rule set.
struct BudSystem {
  const Lexicon* lexicon = nullptr;
  SystemMode mode = SystemMode::Complete;

  const RoleInventory& inv() const { return lexicon->inventory(); }
  bool initial(const ThetaColor& c) const { return is_initial_color(c, mode); }
};

inline BudSystem bare_system(const Lexicon& lex) { return {&lex, SystemMode::Bare}; }
inline BudSystem complete_system(const Lexicon& lex) { return {&lex, SystemMode::Complete}; }

// How one side of a cherry looks to the rule matcher: a lexical leaf matches
// the terminal variant of a rule leaf (subject to lexicon licensing); interior
// vertices and trace leaves match the nonterminal one.
struct ChildView {
  ThetaColor color;
  bool lex_leaf = false;
  bool trace = false;
  bool unit = false;
  std::string lexid;
};

inline ChildView child_view(const CTree& t) {
  ChildView v;
  v.color = t.color();
  v.trace = t.is_trace();
  v.lex_leaf = t.is_leaf() && !t.is_trace();
  if (v.lex_leaf) v.lexid = t.label();
  return v;
}

inline ChildView unit_view() {
  ChildView v;
  v.color = unit_terminal_color();
  v.unit = true;
  return v;
}

// True iff the child can occupy a rule leaf whose nonterminal color is `base`.
inline bool child_matches(const BudSystem& sys, const ChildView& v, const ThetaColor& base) {
  if (v.unit) return false;
  if (v.lex_leaf) {
    if (!v.color.terminal || v.color.unit) return false;
    if (strip_terminal(v.color) != base) return false;
    if (!sys.lexicon->has(v.lexid)) return false;
    return licensed(sys.lexicon->item(v.lexid), base);
  }
  return !v.color.terminal && v.color == base;
}

struct RuleMatch {
  RuleFamily family = RuleFamily::Rule1;
  int head = 0;               // which of the two given children projects
  ThetaColor root;            // root color after the match
  bool via_rule5 = false;     // a unary theta0 recoloring bridges root and rule
  ThetaColor rule5_source;    // color the rule produced before recoloring
};

namespace detail {

// Matches the theta chain step with head child tuple q (|q| >= 2): root is q
// with its last entry peeled, the sibling receives that entry.
inline std::optional<ThetaColor> chain_root(const BudSystem& sys, const ChildView& sib,
                                            const ThetaColor& q_color) {
  auto q = up_tuple(q_color);
  if (!q || q->size() < 2) return std::nullopt;
  if (static_cast<int>(q->size()) > sys.inv().n_max()) return std::nullopt;
  if (!is_theta_hierarchy(std::vector<RoleId>(q->begin() + 1, q->end()), sys.inv()))
    return std::nullopt;
  if (!child_matches(sys, sib, role_color(q->back(), Polarity::Receiver))) return std::nullopt;
  return up_tuple_color(std::vector<RoleId>(q->begin(), q->end() - 1));
}

}  // namespace detail

// Matches one cherry against the rule set: children as given (c0, c1) with the
// head flag relative to that order; `demand` is the required root color, or
// nullopt when the root color is ignored. For theta0 demands a failed direct
// match may still succeed through the unary Rule5 recoloring, which collapses
// to a color change on the vertex because merging with the unit adds no node.
inline std::optional<RuleMatch> match_vertex(const BudSystem& sys, const ChildView& c0,
                                             const ChildView& c1, int head,
                                             std::optional<ThetaColor> demand) {
  if (head != 0 && head != 1) return std::nullopt;
  const ChildView& X = head == 0 ? c0 : c1;  // projecting child
  const ChildView& Y = head == 0 ? c1 : c0;  // sibling
  const bool complete = sys.mode == SystemMode::Complete;

  auto accept = [&](RuleFamily fam, const ThetaColor& root) -> std::optional<RuleMatch> {
    RuleMatch m;
    m.family = fam;
    m.head = head;
    if (!demand || *demand == root) {
      m.root = demand ? *demand : root;
      return m;
    }
    if (complete && is_theta0_content(*demand) && !demand->terminal) {
      m.root = *demand;
      m.via_rule5 = true;
      m.rule5_source = root;
      return m;
    }
    return std::nullopt;
  };

  // Rule5 proper: one operand is the formal unit; only reachable through the
  // colored Merge admissibility test, never inside a tree.
  if (c0.unit || c1.unit) {
    if (!complete) return std::nullopt;
    if (X.unit || !Y.unit) return std::nullopt;
    ThetaColor src;
    if (X.lex_leaf) {
      if (!X.color.terminal || X.color.unit) return std::nullopt;
      const LexItem& it = sys.lexicon->item(X.lexid);
      src = strip_terminal(X.color);
      // the moved item lands at a non-theta position, so it must license theta0
      if (!licensed(it, src) || !it.theta0_capable) return std::nullopt;
    } else {
      if (X.color.terminal || !sys.initial(X.color)) return std::nullopt;
      src = X.color;
    }
    if (demand && !(is_theta0_content(*demand) && !demand->terminal)) return std::nullopt;
    RuleMatch m;
    m.family = RuleFamily::Rule5;
    m.head = head;
    m.root = theta0_color();
    m.rule5_source = src;
    return m;
  }

  // Rule1: (c; r_down, r_up) for any initial c.
  {
    ThetaColor xb = X.lex_leaf ? strip_terminal(X.color) : X.color;
    if (xb.tag == ThetaColor::Tag::Role && xb.pol == Polarity::Giver &&
        child_matches(sys, X, xb) &&
        child_matches(sys, Y, role_color(xb.role, Polarity::Receiver))) {
      ThetaColor root = demand ? *demand : theta0_color();
      if (!demand || sys.initial(*demand)) {
        RuleMatch m;
        m.family = RuleFamily::Rule1;
        m.head = head;
        m.root = root;
        return m;
      }
    }
  }

  // Chain step (Rule2 / Rule3 / Rule3b): head carries the tuple.
  {
    ThetaColor xb = X.lex_leaf ? strip_terminal(X.color) : X.color;
    if (child_matches(sys, X, xb)) {
      if (auto root = detail::chain_root(sys, Y, xb)) {
        // the step where the full grid enters (a leaf on the head side) is the
        // bottom of the comb
        RuleFamily fam = (X.lex_leaf || X.trace)
                             ? RuleFamily::Rule3b
                             : (up_tuple(xb)->size() == 2 ? RuleFamily::Rule2 : RuleFamily::Rule3);
        if (auto m = accept(fam, *root)) return m;
      }
    }
  }

  if (!complete) return std::nullopt;

  // Rule4: (c; c, theta0), the non-theta child never projects.
  {
    ThetaColor yb = Y.lex_leaf ? strip_terminal(Y.color) : Y.color;
    if (is_theta0_content(yb) && !yb.terminal && child_matches(sys, Y, yb)) {
      ThetaColor xb = X.lex_leaf ? strip_terminal(X.color) : X.color;
      if (sys.initial(xb) && child_matches(sys, X, xb)) {
        if (auto m = accept(RuleFamily::Rule4, xb)) return m;
      }
    }
  }

  return std::nullopt;
}

// Admissibility set Xi for the colored Merge: root color c against the two
// operand root views, trying both head designations.
inline std::optional<RuleMatch> xi_admits(const BudSystem& sys, const ThetaColor& c,
                                          const ChildView& a, const ChildView& b) {
  for (int head : {0, 1})
    if (auto m = match_vertex(sys, a, b, head, c)) return m;
  return std::nullopt;
}

// Root colors c admitting the pair {a, b}, with the matching rule.
inline std::vector<RuleMatch> admitted_root_colors(const BudSystem& sys, const ChildView& a,
                                                   const ChildView& b) {
  std::vector<RuleMatch> out;
  for (const auto& c : initial_colors(sys.inv(), sys.mode))
    if (auto m = xi_admits(sys, c, a, b)) {
      m->root = c;
      out.push_back(*m);
    }
  return out;
}

// --- materialized generators ------------------------------------------------

// A cherry generator, possibly with a symbolic root ("for an arbitrary c").
struct RuleInstance {
  RuleFamily family;
  bool root_any = false;      // root ranges over the initial colors
  bool child_tied = false;    // head child color equals the root (Rule4)
  ThetaColor root;            // meaningful when !root_any
  ThetaColor head_color;      // head child
  ThetaColor sib_color;       // other child
};

inline std::string describe(const RuleInstance& r, const RoleInventory& inv) {
  std::string root = r.root_any ? "c" : print_color(r.root, inv);
  std::string head = r.child_tied ? "c" : print_color(r.head_color, inv);
  std::string s = std::string(family_name(r.family)) + ": (" + root + "; " + head + "* , " +
                  print_color(r.sib_color, inv) + ")";
  return s;
}

// All cherry rules of the complete system over the inventory; terminal-leaf
// variants are not materialized here (they are licensing-checked on demand),
// except that enumerate_rules below can expand them for display.
inline std::vector<RuleInstance> complete_rule_table(const BudSystem& sys) {
  std::vector<RuleInstance> out;
  const RoleInventory& inv = sys.inv();
  for (RoleId r = 0; r < inv.size(); ++r) {
    RuleInstance i;
    i.family = RuleFamily::Rule1;
    i.root_any = true;
    i.head_color = role_color(r, Polarity::Giver);
    i.sib_color = role_color(r, Polarity::Receiver);
    out.push_back(i);
  }
  for (const auto& g : all_valid_grids(inv)) {
    if (g.size() < 2) continue;
    RuleInstance i;
    i.family = g.size() == 2 ? RuleFamily::Rule2 : RuleFamily::Rule3;
    i.root = up_tuple_color(ThetaGrid(g.begin(), g.end() - 1));
    i.head_color = up_tuple_color(g);
    i.sib_color = role_color(g.back(), Polarity::Receiver);
    out.push_back(i);
  }
  if (sys.mode == SystemMode::Complete) {
    RuleInstance r4;
    r4.family = RuleFamily::Rule4;
    r4.root_any = true;
    r4.child_tied = true;
    r4.sib_color = theta0_color();
    out.push_back(r4);
    RuleInstance r5;
    r5.family = RuleFamily::Rule5;
    r5.root = theta0_color();
    r5.child_tied = true;  // head child is the arbitrary c'
    r5.sib_color = unit_terminal_color();
    out.push_back(r5);
  }
  return out;
}

// --- bare comb generators ---------------------------------------------------

// The comb generator for a grid: receivers peel off the giver tuple top-down,
// the giver leaf is the head of every spine vertex. Leaves are colored
// nonterminally unless a lexicalization is supplied (index 0 = external
// receiver, .., n-1 = innermost receiver, n = giver leaf; empty id = keep
// nonterminal).
inline CTree bare_comb(const RoleInventory& inv, const ThetaGrid& grid, const ThetaColor& root,
                       const std::vector<std::string>& lexicalize = {}) {
  if (!is_valid_grid(grid, inv)) throw Error("bare_comb: not a theta hierarchy grid");
  const int n = static_cast<int>(grid.size());

  std::function<CTree(int)> spine = [&](int k) -> CTree {
    // vertex colored grid_tail(grid, n-k)... built bottom-up: at depth k the
    // head side carries the prefix of length k+1
    ThetaColor head_col = up_tuple_color(ThetaGrid(grid.begin(), grid.begin() + k + 1));
    CTree head_child =
        k == n - 1
            ? (static_cast<int>(lexicalize.size()) > n && !lexicalize[n].empty()
                   ? CTree::leaf(lexicalize[n], make_terminal(lexicalize[n], head_col))
                   : CTree::leaf("?", head_col))
            : spine(k + 1);
    ThetaColor sib_col = role_color(grid[k], Polarity::Receiver);
    CTree sib = static_cast<int>(lexicalize.size()) > k && !lexicalize[k].empty()
                    ? CTree::leaf(lexicalize[k], make_terminal(lexicalize[k], sib_col))
                    : CTree::leaf("?", sib_col);
    ThetaColor vcol = k == 0 ? root : up_tuple_color(ThetaGrid(grid.begin(), grid.begin() + k));
    return CTree::node(sib, head_child, 1, vcol);
  };
  return spine(0);
}

// --- colored operad composition ----------------------------------------------

// x o_i y at leaf i (1-based, head-final order): defined only when the color
// of leaf i equals y's root color.
inline CTree bud_compose(const CTree& x, int i, const CTree& y) {
  std::vector<VertexPath> leaves;
  {
    std::function<void(const CTree&, VertexPath&)> rec = [&](const CTree& n, VertexPath& p) {
      if (n.is_leaf()) {
        leaves.push_back(p);
        return;
      }
      if (n.head() < 0) throw Error("head function undefined at an internal vertex");
      int first = 1 - n.head();
      for (int c : {first, 1 - first}) {
        p.push_back(c);
        rec(n.child(c), p);
        p.pop_back();
      }
    };
    VertexPath p;
    rec(x, p);
  }
  if (i < 1 || i > static_cast<int>(leaves.size()))
    throw ArityError("bud_compose: index " + std::to_string(i) + " out of 1.." +
                     std::to_string(leaves.size()));
  const VertexPath target = leaves[i - 1];
  ThetaColor leaf_color = x.subtree(target).color();
  if (leaf_color != y.color())
    throw ColorMismatch("bud_compose: leaf color " + leaf_color.key() + " != root color " +
                        y.color().key());
  if (x.is_leaf()) return y;  // colored unit law

  std::function<CTree(const CTree&, VertexPath&, size_t)> rec =
      [&](const CTree& n, VertexPath& p, size_t depth) -> CTree {
    if (depth == target.size()) return y;
    int d = target[depth];
    p.push_back(d);
    CTree nc = rec(n.child(d), p, depth + 1);
    p.pop_back();
    CTree other = n.child(1 - d);
    int head = n.head() == d ? 0 : 1;
    return d == 0 ? CTree::node(nc, other, head == 0 ? 0 : 1, n.color())
                  : CTree::node(other, nc, head == 0 ? 1 : 0, n.color());
  };
  VertexPath p;
  return rec(x, p, 0);
}

}  // namespace theta
