#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "theta/colored_tree.hpp"
#include "theta/rules.hpp"

namespace theta {

struct VertexWitness {
  VertexPath path;
  RuleMatch match;
};

struct MembershipResult {
  bool member = false;
  std::string reason;         // set when !member
  VertexPath fail_at;
  std::vector<VertexWitness> witness;  // per internal vertex, preorder

  explicit operator bool() const { return member; }
};

struct MembershipOptions {
  bool ignore_root = false;            // the p_in projection: root color free
  bool require_terminal_leaves = true; // off: derivability from 1_c with open inputs
};

// Language membership. Complete mode: every cherry of the tree must match a
// coloring rule (the unary Rule5 recoloring is folded into theta0-colored
// vertices), the root color must be initial and every lexical leaf terminal
// and licensed. Trace leaves stand for contracted complete subtrees and match
// the nonterminal side of a rule. Bare mode adds the restriction to the theta
// families and the requirement that every maximal projection is a Rule1
// output.
inline MembershipResult membership(const BudSystem& sys, const CTree& t,
                                   MembershipOptions opt = {}) {
  MembershipResult res;
  auto fail = [&](const VertexPath& p, const std::string& why) {
    res.member = false;
    res.fail_at = p;
    res.reason = why;
    return res;
  };

  if (t.is_leaf())
    return fail({}, "a 1-leaf colored tree is in no language (no unary generators)");

  if (!opt.ignore_root && !sys.initial(t.color()))
    return fail({}, "root color is not initial: " + t.color().key());

  bool bad = false;
  t.walk([&](const VertexPath& p, const CNode& n) {
    if (bad || !n.is_leaf()) return;
    if (n.lkind == LeafKind::Trace) {
      if (n.color.terminal && !n.color.unit) {
        bad = true;
        res.fail_at = p;
        res.reason = "trace leaf with a terminal color";
      }
      if (sys.mode == SystemMode::Bare && is_theta0_content(n.color)) {
        bad = true;
        res.fail_at = p;
        res.reason = "non-theta color in the bare system";
      }
      return;
    }
    if (opt.require_terminal_leaves && (!n.color.terminal || n.color.unit)) {
      bad = true;
      res.fail_at = p;
      res.reason = "leaf " + n.label + " does not carry a terminal color";
      return;
    }
    if (n.color.terminal && !n.color.unit) {
      if (!sys.lexicon->has(n.label)) {
        bad = true;
        res.fail_at = p;
        res.reason = "unknown lexical item: " + n.label;
        return;
      }
      if (!licensed(sys.lexicon->item(n.label), strip_terminal(n.color))) {
        bad = true;
        res.fail_at = p;
        res.reason = "lexicon does not license " + n.label + " as " +
                     strip_terminal(n.color).key();
        return;
      }
      if (sys.mode == SystemMode::Bare && is_theta0_content(n.color)) {
        bad = true;
        res.fail_at = p;
        res.reason = "non-theta color in the bare system";
      }
    }
  });
  if (bad) {
    res.member = false;
    return res;
  }

  // every internal vertex must be the output of a generator
  std::map<VertexPath, RuleFamily> families;
  std::string why;
  VertexPath where;
  t.walk([&](const VertexPath& p, const CNode& n) {
    if (bad || n.is_leaf()) return;
    if (n.head < 0) {
      bad = true;
      where = p;
      why = "no head designation";
      return;
    }
    CTree v = t.subtree(p);
    std::optional<ThetaColor> demand = std::optional<ThetaColor>(n.color);
    if (p.empty() && opt.ignore_root) demand = std::nullopt;
    auto m = match_vertex(sys, child_view(v.child(0)), child_view(v.child(1)), n.head, demand);
    if (!m) {
      bad = true;
      where = p;
      why = "no generator decomposition at this vertex";
      return;
    }
    if (sys.mode == SystemMode::Bare &&
        (m->family == RuleFamily::Rule4 || m->family == RuleFamily::Rule5 || m->via_rule5)) {
      bad = true;
      where = p;
      why = "non-theta generator used in the bare system";
      return;
    }
    families[p] = m->family;
    res.witness.push_back({p, *m});
  });
  if (bad) return fail(where, why);

  if (sys.mode == SystemMode::Bare) {
    // Every vertex that is the maximal projection of a leaf must be a Rule1
    // output: the grid injected at that leaf is fully discharged there.
    for (const auto& [leaf, proj] : maximal_projections(t)) {
      auto it = families.find(proj);
      if (it == families.end() || it->second != RuleFamily::Rule1)
        return fail(proj, "maximal projection of " + path_str(leaf) +
                              " is not the output of a Rule1 generator");
    }
  }

  res.member = true;
  return res;
}

// Membership of (T, leaf colors) with the root color ignored; used for the
// balanced-structure test where pruned components may keep a theta0 root.
inline MembershipResult membership_ignore_root(const BudSystem& sys, const CTree& t) {
  MembershipOptions opt;
  opt.ignore_root = true;
  return membership(sys, t, opt);
}

// Derivable from a unit through generators, with inputs left open (leaves need
// not be terminal). Used by closure assertions on intermediate structures.
inline MembershipResult derivable(const BudSystem& sys, const CTree& t) {
  MembershipOptions opt;
  opt.require_terminal_leaves = false;
  return membership(sys, t, opt);
}

}  // namespace theta
