#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "theta/colored_tree.hpp"
#include "theta/coproduct.hpp"
#include "theta/membership.hpp"
#include "theta/rules.hpp"
#include "theta/tree.hpp"

namespace theta {

// A workspace is a finite multiset of syntactic objects; components are kept
// sorted so the serialization is a canonical multiset key.
template <class TreeT>
struct WorkspaceT {
  std::vector<TreeT> comps;

  WorkspaceT() = default;
  explicit WorkspaceT(std::vector<TreeT> cs) : comps(std::move(cs)) {
    std::sort(comps.begin(), comps.end());
  }

  size_t size() const { return comps.size(); }
  const TreeT& at(size_t i) const { return comps.at(i); }

  std::string key() const {
    std::string s;
    for (const auto& c : comps) {
      s += c.repr();
      s += "\n";
    }
    return s;
  }
  friend bool operator==(const WorkspaceT& a, const WorkspaceT& b) {
    return a.comps == b.comps;
  }
  friend bool operator<(const WorkspaceT& a, const WorkspaceT& b) {
    return a.key() < b.key();
  }

  WorkspaceT replaced(std::vector<size_t> remove, std::vector<TreeT> add) const {
    std::vector<TreeT> next;
    std::sort(remove.begin(), remove.end());
    for (size_t i = 0; i < comps.size(); ++i)
      if (!std::binary_search(remove.begin(), remove.end(), i)) next.push_back(comps[i]);
    for (auto& t : add) next.push_back(std::move(t));
    return WorkspaceT(std::move(next));
  }
};

using Workspace = WorkspaceT<Tree>;
using CWorkspace = WorkspaceT<CTree>;

enum class MergeKind { EM, IM, SM1, SM2, SM3 };

inline const char* merge_kind_name(MergeKind k) {
  switch (k) {
    case MergeKind::EM: return "EM";
    case MergeKind::IM: return "IM";
    case MergeKind::SM1: return "SM1";
    case MergeKind::SM2: return "SM2";
    case MergeKind::SM3: return "SM3";
  }
  return "?";
}

template <class TreeT>
struct MergeEventT {
  MergeKind kind = MergeKind::EM;
  size_t comp_a = 0, comp_b = 0;   // component indices in the source workspace
  VertexPath path_a, path_b;       // empty path = the whole component
  std::optional<ThetaColor> root_color;  // colored mode
  std::optional<RuleMatch> rule;         // colored mode witness
  int head_choice = 0;                   // free mode: head among (first, second) operand
  TreeT product;                         // the freshly grafted tree
  WorkspaceT<TreeT> result;
};

using MergeEvent = MergeEventT<Tree>;
using CMergeEvent = MergeEventT<CTree>;

// --- free Merge ---------------------------------------------------------------

// Head of a freshly merged root: the operand whose head leaf is a grid-
// carrying item projects; ties go to the canonically first child.
inline int default_head(const Lexicon& lex, const Tree& a, const Tree& b) {
  auto giver = [&](const Tree& t) {
    const Tree h = t.subtree(t.head_leaf());
    return h.leaf_kind() == LeafKind::Lex && lex.has(h.label()) && lex.item(h.label()).is_giver();
  };
  bool ga = giver(a), gb = giver(b);
  if (ga != gb) return ga ? 0 : 1;
  return a.repr() <= b.repr() ? 0 : 1;
}

struct FreeMergeOptions {
  enum class HeadPolicy { Default, Both } heads = HeadPolicy::Default;
  size_t guard = 100000;
};

namespace detail {
template <class TreeT>
TreeT contract_at(const TreeT& t, const std::vector<VertexPath>& paths) {
  std::set<VertexPath> cut(paths.begin(), paths.end());
  auto q = quotient_contract(t, cut);
  if (!q) throw SelectorError("cannot contract the root away");
  return *q;
}

inline bool disjoint_paths(const VertexPath& a, const VertexPath& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return true;
  return false;  // one is a prefix of the other
}
}  // namespace detail

// One free MergeEvent; selectors follow the event kind. EM merges two whole
// components; IM extracts an accessible term and merges it with the
// contraction quotient of its own component; the SM forms keep the source
// remainders in the workspace.
inline MergeEvent merge_free(const Lexicon& lex, const Workspace& ws, MergeKind kind,
                             size_t comp_a, const VertexPath& path_a, size_t comp_b,
                             const VertexPath& path_b, int head_choice = -1) {
  if (comp_a >= ws.size() || (kind != MergeKind::IM && kind != MergeKind::SM3 && comp_b >= ws.size()))
    throw SelectorError("component index out of range");
  MergeEvent ev;
  ev.kind = kind;
  ev.comp_a = comp_a;
  ev.comp_b = comp_b;
  ev.path_a = path_a;
  ev.path_b = path_b;

  auto mk = [&](const Tree& x, const Tree& y) {
    int h = head_choice >= 0 ? head_choice : default_head(lex, x, y);
    ev.head_choice = h;
    ev.product = Tree::node(x, y, h);
  };

  switch (kind) {
    case MergeKind::EM: {
      if (comp_a == comp_b) throw SelectorError("self Merge of a component is excluded");
      mk(ws.at(comp_a), ws.at(comp_b));
      ev.result = ws.replaced({comp_a, comp_b}, {ev.product});
      break;
    }
    case MergeKind::IM: {
      if (path_a.empty()) throw SelectorError("IM must extract a proper accessible term");
      Tree whole = ws.at(comp_a);
      Tree tv = whole.subtree(path_a);
      Tree quo = detail::contract_at(whole, {path_a});
      mk(tv, quo);
      ev.result = ws.replaced({comp_a}, {ev.product});
      break;
    }
    case MergeKind::SM1: {
      if (comp_a == comp_b) throw SelectorError("SM1 needs two components");
      if (path_a.empty()) throw SelectorError("SM1 extracts a proper accessible term");
      Tree tv = ws.at(comp_a).subtree(path_a);
      Tree rem = detail::contract_at(ws.at(comp_a), {path_a});
      mk(tv, ws.at(comp_b));
      ev.result = ws.replaced({comp_a, comp_b}, {ev.product, rem});
      break;
    }
    case MergeKind::SM2: {
      if (comp_a == comp_b) throw SelectorError("SM2 needs two components");
      if (path_a.empty() || path_b.empty()) throw SelectorError("SM2 extracts accessible terms");
      Tree ta = ws.at(comp_a).subtree(path_a);
      Tree tb = ws.at(comp_b).subtree(path_b);
      Tree ra = detail::contract_at(ws.at(comp_a), {path_a});
      Tree rb = detail::contract_at(ws.at(comp_b), {path_b});
      mk(ta, tb);
      ev.result = ws.replaced({comp_a, comp_b}, {ev.product, ra, rb});
      break;
    }
    case MergeKind::SM3: {
      if (path_a.empty() || path_b.empty() || !detail::disjoint_paths(path_a, path_b))
        throw SelectorError("SM3 extracts two disjoint accessible terms of one component");
      Tree ta = ws.at(comp_a).subtree(path_a);
      Tree tb = ws.at(comp_a).subtree(path_b);
      Tree rem = detail::contract_at(ws.at(comp_a), {path_a, path_b});
      mk(ta, tb);
      ev.result = ws.replaced({comp_a}, {ev.product, rem});
      break;
    }
  }
  return ev;
}

// --- colored Merge --------------------------------------------------------------

// M(T,1) in the colored system: the root is recolored theta0, keeping the
// terminal wrapper on a moved lexical leaf.
inline CTree recolor_root_theta0(const CTree& t) {
  if (t.is_leaf() && t.color().terminal && !t.color().unit)
    return t.with_root_color(make_terminal(t.label(), theta0_color()));
  return t.with_root_color(theta0_color());
}

struct ColoredRejection {
  std::string reason;
};

// One colored MergeEvent with root color c, or the rejection reason. IM is
// forced through the unary theta0 step: the moved copy's root is recolored
// before the outer Merge, while the trace keeps the original color.
inline std::optional<CMergeEvent> merge_colored(const BudSystem& sys, const CWorkspace& ws,
                                                MergeKind kind, const ThetaColor& c,
                                                size_t comp_a, const VertexPath& path_a,
                                                size_t comp_b, const VertexPath& path_b,
                                                ColoredRejection* rej = nullptr) {
  auto reject = [&](const std::string& why) -> std::optional<CMergeEvent> {
    if (rej) rej->reason = why;
    return std::nullopt;
  };
  CMergeEvent ev;
  ev.kind = kind;
  ev.comp_a = comp_a;
  ev.comp_b = comp_b;
  ev.path_a = path_a;
  ev.path_b = path_b;
  ev.root_color = c;

  auto graft = [&](const CTree& x, const CTree& y) -> bool {
    auto m = xi_admits(sys, c, child_view(x), child_view(y));
    if (!m) return false;
    ev.rule = m;
    ev.product = CTree::node(x, y, m->head, c);
    return true;
  };

  switch (kind) {
    case MergeKind::EM: {
      if (comp_a == comp_b) throw SelectorError("self Merge of a component is excluded");
      if (!graft(ws.at(comp_a), ws.at(comp_b)))
        return reject("color pair not admitted by any rule");
      ev.result = ws.replaced({comp_a, comp_b}, {ev.product});
      return ev;
    }
    case MergeKind::IM: {
      if (path_a.empty()) throw SelectorError("IM must extract a proper accessible term");
      CTree whole = ws.at(comp_a);
      CTree tv = whole.subtree(path_a);
      // inner step M^{theta0}_{Tv,(1,theta0)}: Rule5 must admit the operand
      auto inner = xi_admits(sys, theta0_color(), child_view(tv), unit_view());
      if (!inner) return reject("unary theta0 recoloring not admitted (Rule5)");
      CTree moved = recolor_root_theta0(tv);
      CTree quo = detail::contract_at(whole, {path_a});
      if (!graft(moved, quo)) return reject("moved copy lands at no admissible color pair");
      ev.result = ws.replaced({comp_a}, {ev.product});
      return ev;
    }
    case MergeKind::SM1: {
      if (comp_a == comp_b) throw SelectorError("SM1 needs two components");
      if (path_a.empty()) throw SelectorError("SM1 extracts a proper accessible term");
      CTree tv = ws.at(comp_a).subtree(path_a);
      CTree rem = detail::contract_at(ws.at(comp_a), {path_a});
      if (!graft(tv, ws.at(comp_b))) return reject("color pair not admitted by any rule");
      ev.result = ws.replaced({comp_a, comp_b}, {ev.product, rem});
      return ev;
    }
    case MergeKind::SM2: {
      if (comp_a == comp_b) throw SelectorError("SM2 needs two components");
      if (path_a.empty() || path_b.empty()) throw SelectorError("SM2 extracts accessible terms");
      CTree ta = ws.at(comp_a).subtree(path_a);
      CTree tb = ws.at(comp_b).subtree(path_b);
      if (!graft(ta, tb)) return reject("color pair not admitted by any rule");
      CTree ra = detail::contract_at(ws.at(comp_a), {path_a});
      CTree rb = detail::contract_at(ws.at(comp_b), {path_b});
      ev.result = ws.replaced({comp_a, comp_b}, {ev.product, ra, rb});
      return ev;
    }
    case MergeKind::SM3: {
      if (path_a.empty() || path_b.empty() || !detail::disjoint_paths(path_a, path_b))
        throw SelectorError("SM3 extracts two disjoint accessible terms of one component");
      CTree ta = ws.at(comp_a).subtree(path_a);
      CTree tb = ws.at(comp_a).subtree(path_b);
      if (!graft(ta, tb)) return reject("color pair not admitted by any rule");
      CTree rem = detail::contract_at(ws.at(comp_a), {path_a, path_b});
      ev.result = ws.replaced({comp_a}, {ev.product, rem});
      return ev;
    }
  }
  return std::nullopt;
}

// --- the Markov step -------------------------------------------------------------

struct StepOptions {
  size_t guard = 100000;  // maximum number of events per step
  FreeMergeOptions::HeadPolicy heads = FreeMergeOptions::HeadPolicy::Default;
};

inline std::vector<MergeEvent> markov_step_free(const Lexicon& lex, const Workspace& ws,
                                                const StepOptions& opt = {}) {
  std::vector<MergeEvent> out;
  auto push = [&](MergeEvent ev) {
    out.push_back(std::move(ev));
    if (out.size() > opt.guard) throw GuardExceeded("markov step event guard exceeded");
  };
  auto heads_for = [&](const Tree& a, const Tree& b) {
    std::vector<int> hs;
    if (opt.heads == FreeMergeOptions::HeadPolicy::Both)
      hs = {0, 1};
    else
      hs = {default_head(lex, a, b)};
    return hs;
  };

  for (size_t i = 0; i < ws.size(); ++i) {
    // IM over accessible terms
    for (const auto& [p, tv] : accessible_terms(ws.at(i))) {
      Tree quo = detail::contract_at(ws.at(i), {p});
      for (int h : heads_for(tv, quo)) push(merge_free(lex, ws, MergeKind::IM, i, p, 0, {}, h));
    }
    // SM3: disjoint accessible pairs of one component
    auto acc = accessible_terms(ws.at(i));
    for (size_t x = 0; x < acc.size(); ++x)
      for (size_t y = x + 1; y < acc.size(); ++y) {
        if (!detail::disjoint_paths(acc[x].first, acc[y].first)) continue;
        for (int h : heads_for(acc[x].second, acc[y].second))
          push(merge_free(lex, ws, MergeKind::SM3, i, acc[x].first, 0, acc[y].first, h));
      }
    for (size_t j = 0; j < ws.size(); ++j) {
      if (i == j) continue;
      // EM (unordered pairs)
      if (i < j)
        for (int h : heads_for(ws.at(i), ws.at(j)))
          push(merge_free(lex, ws, MergeKind::EM, i, {}, j, {}, h));
      // SM1: accessible term of i with the whole of j
      for (const auto& [p, tv] : accessible_terms(ws.at(i)))
        for (int h : heads_for(tv, ws.at(j)))
          push(merge_free(lex, ws, MergeKind::SM1, i, p, j, {}, h));
      // SM2 (unordered across components)
      if (i < j)
        for (const auto& [pa, ta] : accessible_terms(ws.at(i)))
          for (const auto& [pb, tb] : accessible_terms(ws.at(j)))
            for (int h : heads_for(ta, tb))
              push(merge_free(lex, ws, MergeKind::SM2, i, pa, j, pb, h));
    }
  }
  return out;
}

inline std::vector<CMergeEvent> markov_step_colored(const BudSystem& sys, const CWorkspace& ws,
                                                    const StepOptions& opt = {}) {
  std::vector<CMergeEvent> out;
  auto push = [&](std::optional<CMergeEvent> ev) {
    if (!ev) return;
    out.push_back(std::move(*ev));
    if (out.size() > opt.guard) throw GuardExceeded("markov step event guard exceeded");
  };
  auto colors = initial_colors(sys.inv(), sys.mode);

  for (size_t i = 0; i < ws.size(); ++i) {
    for (const auto& [p, tv] : accessible_terms(ws.at(i)))
      for (const auto& c : colors) push(merge_colored(sys, ws, MergeKind::IM, c, i, p, 0, {}));
    auto acc = accessible_terms(ws.at(i));
    for (size_t x = 0; x < acc.size(); ++x)
      for (size_t y = x + 1; y < acc.size(); ++y) {
        if (!detail::disjoint_paths(acc[x].first, acc[y].first)) continue;
        for (const auto& c : colors)
          push(merge_colored(sys, ws, MergeKind::SM3, c, i, acc[x].first, 0, acc[y].first));
      }
    for (size_t j = 0; j < ws.size(); ++j) {
      if (i == j) continue;
      if (i < j)
        for (const auto& c : colors) push(merge_colored(sys, ws, MergeKind::EM, c, i, {}, j, {}));
      for (const auto& [p, tv] : accessible_terms(ws.at(i)))
        for (const auto& c : colors) push(merge_colored(sys, ws, MergeKind::SM1, c, i, p, j, {}));
      if (i < j)
        for (const auto& [pa, ta] : accessible_terms(ws.at(i)))
          for (const auto& [pb, tb] : accessible_terms(ws.at(j)))
            for (const auto& c : colors)
              push(merge_colored(sys, ws, MergeKind::SM2, c, i, pa, j, pb));
    }
  }
  return out;
}

}  // namespace theta
