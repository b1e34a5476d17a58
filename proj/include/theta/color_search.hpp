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
#include "theta/tree.hpp"

namespace theta {

// A coloring found for an uncolored headed tree. When the root color is only
// constrained to "any initial c" (a Rule1 or Rule4 output), the family is
// collapsed to the theta0 instance and flagged parametric.
struct Coloring {
  CTree tree;
  bool parametric_root = false;
};

namespace detail {

struct Cand {
  std::map<VertexPath, ThetaColor> colors;
  // positions whose color is the (single) unresolved root variable; empty =
  // concrete root. All entries hold theta0 as the default instantiation.
  std::vector<VertexPath> var_positions;

  std::string sig() const {
    std::string s;
    for (const auto& [p, c] : colors) {
      s += path_str(p);
      s += "=";
      s += c.key();
      s += ";";
    }
    s += "|";
    for (const auto& p : var_positions) s += path_str(p) + ",";
    return s;
  }
};

inline void set_var(Cand& c, const ThetaColor& value) {
  for (const auto& p : c.var_positions) c.colors[p] = value;
  c.var_positions.clear();
}

}  // namespace detail

// All colorings of a headed tree whose leaves carry lexical items (and
// possibly traces of earlier movement) such that the colored tree is in the
// system's language. Givers propagate along head lines, receivers and theta0
// fill in around them; an empty result means the tree is filtered out.
inline std::vector<Coloring> color_search(const BudSystem& sys, const Tree& t,
                                          bool expand_parametric_root = false) {
  if (!t.is_headed()) throw Error("color_search needs a head function");
  const bool complete = sys.mode == SystemMode::Complete;
  const auto initials = initial_colors(sys.inv(), sys.mode);
  const auto grids = all_valid_grids(sys.inv());

  using detail::Cand;
  // returns candidates for the subtree at `path`
  std::function<std::vector<Cand>(const Tree&, VertexPath&)> search =
      [&](const Tree& n, VertexPath& path) -> std::vector<Cand> {
    std::vector<Cand> out;
    auto add = [&](Cand c) { out.push_back(std::move(c)); };

    if (n.is_leaf()) {
      if (n.leaf_kind() == LeafKind::Trace) {
        // "*item": trace of a moved lexical leaf, constrained by licensing;
        // "*item+": trace of a contracted phrase, any initial root color
        std::string label = n.label();
        bool phrase = !label.empty() && label.back() == '+';
        std::string item = label.substr(1, label.size() - (phrase ? 2 : 1));
        std::vector<ThetaColor> opts;
        if (!phrase && sys.lexicon->has(item))
          opts = licensed_bases(sys.lexicon->item(item), sys.mode);
        else
          opts = initials;
        for (const auto& c : opts) {
          Cand cd;
          cd.colors[path] = c;
          add(std::move(cd));
        }
      } else {
        for (const auto& b : licensed_bases(sys.lexicon->item(n.label()), sys.mode)) {
          Cand cd;
          cd.colors[path] = make_terminal(n.label(), b);
          add(std::move(cd));
        }
      }
      return out;
    }

    path.push_back(0);
    auto c0 = search(n.child(0), path);
    path.back() = 1;
    auto c1 = search(n.child(1), path);
    path.pop_back();
    const int h = n.head();
    VertexPath hp = path, sp = path;
    hp.push_back(h);
    sp.push_back(1 - h);

    auto child_base = [&](const Cand& c, const VertexPath& p) -> std::optional<ThetaColor> {
      // nullopt = unresolved variable
      if (std::find(c.var_positions.begin(), c.var_positions.end(), p) != c.var_positions.end())
        return std::nullopt;
      ThetaColor col = c.colors.at(p);
      return col.terminal ? strip_terminal(col) : col;
    };

    for (const auto& a : c0)
      for (const auto& b : c1) {
        const Cand& hc = h == 0 ? a : b;  // candidate holding the head child
        const Cand& sc = h == 0 ? b : a;

        auto emit = [&](ThetaColor head_val, bool head_var_used, ThetaColor sib_val,
                        bool sib_var_used, const std::optional<ThetaColor>& vertex,
                        bool tie_to_head_var) {
          Cand merged;
          Cand hh = hc, ss = sc;
          if (head_var_used) detail::set_var(hh, head_val);
          if (sib_var_used) detail::set_var(ss, sib_val);
          merged.colors = hh.colors;
          merged.colors.insert(ss.colors.begin(), ss.colors.end());
          if (tie_to_head_var) {
            merged.var_positions = hh.var_positions;
            merged.var_positions.push_back(path);
            merged.colors[path] = theta0_color();
          } else if (vertex) {
            merged.colors[path] = *vertex;
          } else {  // fresh variable at this vertex (Rule1 output)
            merged.var_positions.push_back(path);
            merged.colors[path] = theta0_color();
          }
          out.push_back(std::move(merged));
        };

        auto hb = child_base(hc, hp);
        auto sb = child_base(sc, sp);

        // Rule1: (any c; r_down, r_up*), output a fresh variable
        {
          std::vector<RoleId> rs;
          if (hb && hb->tag == ThetaColor::Tag::Role && hb->pol == Polarity::Giver)
            rs = {hb->role};
          else if (!hb)
            for (RoleId r = 0; r < sys.inv().size(); ++r) rs.push_back(r);
          for (RoleId r : rs) {
            ThetaColor up = role_color(r, Polarity::Giver);
            ThetaColor down = role_color(r, Polarity::Receiver);
            bool sib_ok = (sb && *sb == down) || !sb;
            if (!sib_ok) continue;
            emit(up, !hb, down, !sb, std::nullopt, false);
          }
        }
        // Chain step: head carries tuple q, sibling receives last(q)
        {
          std::vector<std::vector<RoleId>> qs;
          if (hb) {
            if (auto q = up_tuple(*hb); q && q->size() >= 2) qs = {*q};
          } else {
            for (const auto& g : grids)
              if (g.size() >= 2) qs.push_back(g);
          }
          for (const auto& q : qs) {
            ThetaColor down = role_color(q.back(), Polarity::Receiver);
            if (sb && *sb != down) continue;
            ThetaColor root = up_tuple_color(std::vector<RoleId>(q.begin(), q.end() - 1));
            emit(up_tuple_color(q), !hb, down, !sb, root, false);
            if (complete && !(root == theta0_color()))
              emit(up_tuple_color(q), !hb, down, !sb, theta0_color(), false);  // Rule5 bridge
          }
        }
        // Rule4: sibling theta0, vertex color tied to the head child
        if (complete) {
          bool sib_ok = (sb && is_theta0_content(*sb)) || !sb;
          if (sib_ok) {
            if (hb) {
              if (sys.initial(*hb)) {
                emit(*hb, false, theta0_color(), !sb, *hb, false);
                if (!is_theta0_content(*hb))
                  emit(*hb, false, theta0_color(), !sb, theta0_color(), false);  // bridge
              }
            } else {
              // tied variable flows through; the bridged form needs a concrete
              // head, so instantiate it explicitly
              emit(theta0_color(), false, theta0_color(), !sb, std::nullopt, true);
              for (const auto& c : initials)
                if (!is_theta0_content(c)) emit(c, true, theta0_color(), !sb, theta0_color(), false);
            }
          }
        }
      }

    // dedup
    std::sort(out.begin(), out.end(),
              [](const Cand& x, const Cand& y) { return x.sig() < y.sig(); });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Cand& x, const Cand& y) { return x.sig() == y.sig(); }),
              out.end());
    return out;
  };

  VertexPath p;
  auto cands = search(t, p);

  // materialize
  std::function<CTree(const Tree&, VertexPath&, const std::map<VertexPath, ThetaColor>&)> build =
      [&](const Tree& n, VertexPath& path,
          const std::map<VertexPath, ThetaColor>& colors) -> CTree {
    if (n.is_leaf()) {
      const ThetaColor& c = colors.at(path);
      return n.leaf_kind() == LeafKind::Trace ? CTree::trace(n.label(), c)
                                              : CTree::leaf(n.label(), c);
    }
    path.push_back(0);
    CTree a = build(n.child(0), path, colors);
    path.back() = 1;
    CTree b = build(n.child(1), path, colors);
    path.pop_back();
    return CTree::node(a, b, n.head(), colors.at(path));
  };

  std::set<std::string> seen;
  std::vector<Coloring> result;
  auto emit_candidate = [&](const detail::Cand& cand, bool parametric) {
    VertexPath q;
    CTree built = build(t, q, cand.colors);
    if (!membership(sys, built)) return;  // final guard, also bare-mode projections
    if (seen.insert(built.repr()).second) result.push_back({built, parametric});
  };

  for (auto& cand : cands) {
    if (cand.var_positions.empty()) {
      emit_candidate(cand, false);
    } else if (expand_parametric_root) {
      for (const auto& c : initials) {
        detail::Cand inst = cand;
        detail::set_var(inst, c);
        emit_candidate(inst, true);
      }
    } else {
      detail::Cand inst = cand;
      detail::set_var(inst, complete ? theta0_color() : initials.front());
      emit_candidate(inst, true);
    }
  }
  return result;
}

}  // namespace theta
