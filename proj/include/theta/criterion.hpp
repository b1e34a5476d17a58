#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "theta/colored_tree.hpp"
#include "theta/membership.hpp"
#include "theta/rules.hpp"

namespace theta {

// Theta criterion on a single colored headed tree: the head leaf carries an
// up-only tuple of length #leaves - 1, every other leaf a single receiver
// role, and the two multisets of roles coincide. The root color does not
// participate. Trace leaves count as leaves carrying their color.
inline bool theta_criterion(const CTree& t, std::string* why = nullptr) {
  auto reject = [&](const std::string& r) {
    if (why) *why = r;
    return false;
  };
  if (t.is_leaf()) return reject("a single leaf has no giver tuple");
  VertexPath head = t.head_leaf();

  std::multiset<RoleId> given, received;
  bool bad = false;
  std::string reason;
  t.walk([&](const VertexPath& p, const CNode& n) {
    if (bad || !n.is_leaf()) return;
    ThetaColor base = strip_terminal(n.color);
    if (p == head) {
      auto tup = up_tuple(base);
      if (!tup) {
        bad = true;
        reason = "head leaf does not carry a giver tuple";
        return;
      }
      given.insert(tup->begin(), tup->end());
    } else {
      if (!is_down_role(base)) {
        bad = true;
        reason = "non-head leaf " + n.label + " does not carry a single receiver role";
        return;
      }
      received.insert(base.role);
    }
  });
  if (bad) return reject(reason);
  if (static_cast<int>(given.size()) != t.n_leaves() - 1)
    return reject("giver tuple length " + std::to_string(given.size()) + " != #leaves-1 = " +
                  std::to_string(t.n_leaves() - 1));
  if (given != received) return reject("receiver roles do not match the giver tuple");
  if (why) why->clear();
  return true;
}

// --- the C0 admissible cut ---------------------------------------------------

// Non-full remainder before edge contraction, kept for reporting.
struct NonFullNode {
  ThetaColor color;
  bool leaf = false;
  std::string label;
  std::vector<NonFullNode> children;  // 0, 1 or 2
};

inline std::string render_nonfull(const NonFullNode& n, const RoleInventory& inv) {
  if (n.leaf) return n.label + ":" + print_color(strip_terminal(n.color), inv);
  std::string s = "(";
  for (size_t i = 0; i < n.children.size(); ++i) {
    if (i) s += " ";
    s += render_nonfull(n.children[i], inv);
  }
  return s + " :" + print_color(n.color, inv) + ")";
}

struct CutResult {
  std::vector<VertexPath> cut_edges;  // lower endpoints of the cut edges
  std::vector<CTree> pruned;          // the forest pi_C
  NonFullNode remainder_nonfull;      // rho~_C, with non-branching vertices
  CTree remainder;                    // the deletion quotient, full binary
};

// Cuts, on every root-to-leaf path, the first edge whose lower vertex carries
// theta0 content; the remainder is the deletion quotient (non-branching
// vertices contracted, surviving vertices keep their colors, head pointers
// pass to the surviving child).
inline CutResult cut_C0(const CTree& t) {
  CutResult res;

  std::function<void(const CTree&, VertexPath&)> find = [&](const CTree& n, VertexPath& p) {
    if (!p.empty() && is_theta0_content(strip_terminal(n.color()))) {
      res.cut_edges.push_back(p);
      res.pruned.push_back(n);
      return;
    }
    if (n.is_leaf()) return;
    for (int i = 0; i < 2; ++i) {
      p.push_back(i);
      find(n.child(i), p);
      p.pop_back();
    }
  };
  VertexPath p;
  find(t, p);

  std::set<VertexPath> cut(res.cut_edges.begin(), res.cut_edges.end());

  std::function<NonFullNode(const CTree&, VertexPath&)> nf = [&](const CTree& n,
                                                                 VertexPath& q) -> NonFullNode {
    NonFullNode out;
    out.color = n.color();
    if (n.is_leaf()) {
      out.leaf = true;
      out.label = n.label();
      return out;
    }
    for (int i = 0; i < 2; ++i) {
      q.push_back(i);
      if (!cut.count(q)) out.children.push_back(nf(n.child(i), q));
      q.pop_back();
    }
    return out;
  };
  VertexPath q;
  res.remainder_nonfull = nf(t, q);

  std::function<std::optional<CTree>(const CTree&, VertexPath&)> quo =
      [&](const CTree& n, VertexPath& r) -> std::optional<CTree> {
    if (n.is_leaf()) return CTree(n);
    std::optional<CTree> kept[2];
    for (int i = 0; i < 2; ++i) {
      r.push_back(i);
      if (!cut.count(r)) kept[i] = quo(n.child(i), r);
      r.pop_back();
    }
    if (kept[0] && kept[1])
      return CTree::node(*kept[0], *kept[1], n.head(), n.color());
    if (kept[0] || kept[1]) return kept[0] ? *kept[0] : *kept[1];  // splice
    return CTree::trace("*cut", n.color());  // both children cut off
  };
  VertexPath r;
  res.remainder = *quo(t, r);
  return res;
}

// --- recursive projection ----------------------------------------------------

struct Projection {
  std::vector<CTree> components;    // theta0-free quotients (root possibly theta0)
  std::vector<CTree> theta0_leaves; // residue of bare/terminal theta0 leaves
};

// Fixpoint of cut_C0 over the pruned components: the forest of deletion
// quotients plus the residue of non-theta leaves.
inline Projection project_tilde_Pi0(const CTree& t) {
  Projection out;
  std::vector<CTree> work{t};
  while (!work.empty()) {
    CTree cur = work.back();
    work.pop_back();
    if (cur.is_leaf() && is_theta0_content(strip_terminal(cur.color()))) {
      out.theta0_leaves.push_back(cur);
      continue;
    }
    if (cur.is_leaf()) {
      out.components.push_back(cur);
      continue;
    }
    CutResult r = cut_C0(cur);
    out.components.push_back(r.remainder);
    for (auto& pr : r.pruned) work.push_back(pr);
  }
  return out;
}

// --- balanced structures -------------------------------------------------------

struct BalanceComponent {
  CTree tree;
  MembershipResult bare;  // with the root color ignored
};

struct BalanceReport {
  bool balanced = false;
  MembershipResult complete;            // membership in the complete language
  std::vector<BalanceComponent> components;
  std::vector<CTree> theta0_leaves;
};

// Balanced iff the structure is in the complete language and every component
// of the recursive theta0 cut lies, below its root, in the bare language.
inline BalanceReport is_balanced(const Lexicon& lexicon, const CTree& t) {
  BalanceReport rep;
  BudSystem complete = complete_system(lexicon);
  BudSystem bare = bare_system(lexicon);
  rep.complete = membership(complete, t);

  Projection proj = project_tilde_Pi0(t);
  rep.theta0_leaves = proj.theta0_leaves;
  bool all_bare = true;
  for (const auto& comp : proj.components) {
    BalanceComponent bc;
    bc.tree = comp;
    if (comp.is_leaf()) {
      bc.bare.member = false;
      bc.bare.reason = "a 1-leaf component is in no language";
    } else {
      bc.bare = membership_ignore_root(bare, comp);
    }
    all_bare = all_bare && bc.bare.member;
    rep.components.push_back(std::move(bc));
  }
  rep.balanced = rep.complete.member && all_bare;
  return rep;
}

}  // namespace theta
