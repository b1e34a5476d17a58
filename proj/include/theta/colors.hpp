#pragma once

#include <optional>
#include <string>
#include <vector>

#include "theta/errors.hpp"
#include "theta/lexicon.hpp"

namespace theta {

enum class Polarity { Giver, Receiver };  // up / down

// An element of the color set: a polarized role, a giver tuple (grid, all up,
// length >= 2), the non-theta marker, or a terminal pair (lexical item or the
// formal unit, paired with one of the former).
struct ThetaColor {
  enum class Tag { Role, Grid, Theta0 };

  Tag tag = Tag::Theta0;
  Polarity pol = Polarity::Giver;  // Role only
  RoleId role = -1;                // Role only
  std::vector<RoleId> grid;        // Grid only, size >= 2
  bool terminal = false;
  bool unit = false;               // the (1,theta0) color
  std::string lex;                 // terminal non-unit: item id

  friend bool operator==(const ThetaColor& a, const ThetaColor& b) {
    return a.tag == b.tag && a.pol == b.pol && a.role == b.role && a.grid == b.grid &&
           a.terminal == b.terminal && a.unit == b.unit && a.lex == b.lex;
  }
  friend bool operator!=(const ThetaColor& a, const ThetaColor& b) { return !(a == b); }

  // Compact deterministic key (role ids, not names); canonical tree
  // serialization is built from these.
  std::string key() const {
    std::string s;
    if (terminal) s += unit ? "U:" : ("T" + lex + ":");
    switch (tag) {
      case Tag::Theta0:
        s += "0";
        break;
      case Tag::Role:
        s += (pol == Polarity::Giver ? "u" : "d") + std::to_string(role);
        break;
      case Tag::Grid:
        s += "G";
        for (size_t i = 0; i < grid.size(); ++i) {
          if (i) s += ",";
          s += std::to_string(grid[i]);
        }
        break;
    }
    return s;
  }
  friend bool operator<(const ThetaColor& a, const ThetaColor& b) { return a.key() < b.key(); }
};

inline ThetaColor theta0_color() {
  ThetaColor c;
  c.tag = ThetaColor::Tag::Theta0;
  return c;
}

inline ThetaColor role_color(RoleId r, Polarity p) {
  ThetaColor c;
  c.tag = ThetaColor::Tag::Role;
  c.role = r;
  c.pol = p;
  return c;
}

// Giver tuple; a length-1 tuple is the bare up-polarized role.
inline ThetaColor up_tuple_color(const std::vector<RoleId>& roles) {
  if (roles.empty()) throw Error("empty giver tuple");
  if (roles.size() == 1) return role_color(roles[0], Polarity::Giver);
  ThetaColor c;
  c.tag = ThetaColor::Tag::Grid;
  c.grid = roles;
  return c;
}

inline ThetaColor make_terminal(const std::string& lex, ThetaColor base) {
  base.terminal = true;
  base.unit = false;
  base.lex = lex;
  return base;
}

inline ThetaColor unit_terminal_color() {
  ThetaColor c = theta0_color();
  c.terminal = true;
  c.unit = true;
  return c;
}

// Theta content with the terminal wrapper removed; (1,theta0) strips to theta0.
inline ThetaColor strip_terminal(ThetaColor c) {
  c.terminal = false;
  c.unit = false;
  c.lex.clear();
  return c;
}

inline bool is_theta0_content(const ThetaColor& c) { return c.tag == ThetaColor::Tag::Theta0; }

inline bool is_down_role(const ThetaColor& c) {
  return c.tag == ThetaColor::Tag::Role && c.pol == Polarity::Receiver;
}

// The up-polarized tuple carried by a color, if any (Role-up => length 1).
inline std::optional<std::vector<RoleId>> up_tuple(const ThetaColor& c) {
  if (c.tag == ThetaColor::Tag::Grid) return c.grid;
  if (c.tag == ThetaColor::Tag::Role && c.pol == Polarity::Giver)
    return std::vector<RoleId>{c.role};
  return std::nullopt;
}

// Remaining tuple after k internal roles have been peeled innermost-first.
inline ThetaColor grid_tail(const ThetaColor& g, int k) {
  auto t = up_tuple(g);
  if (!t) throw Error("grid_tail: not a giver tuple");
  if (k < 0 || k >= static_cast<int>(t->size()))
    throw Error("grid_tail: k out of range");
  return up_tuple_color(std::vector<RoleId>(t->begin(), t->end() - k));
}

enum class SystemMode { Bare, Complete };

// Nonterminal colors admitted at roots and interior vertices.
inline bool is_initial_color(const ThetaColor& c, SystemMode mode) {
  if (c.terminal) return false;
  if (c.tag == ThetaColor::Tag::Theta0) return mode == SystemMode::Complete;
  return true;
}

inline bool is_terminal_color(const ThetaColor& c) { return c.terminal; }

inline std::vector<ThetaGrid> all_valid_grids(const RoleInventory& inv) {
  std::vector<ThetaGrid> out;
  std::vector<RoleId> cur;
  // external role unconstrained; internal part strictly decreasing
  auto extend = [&](auto&& self, ThetaGrid g) -> void {
    out.push_back(g);
    if (static_cast<int>(g.size()) >= inv.n_max()) return;
    for (RoleId r = 0; r < inv.size(); ++r) {
      if (g.size() == 1 || inv.gt(g.back(), r)) {
        g.push_back(r);
        self(self, g);
        g.pop_back();
      }
    }
  };
  for (RoleId e = 0; e < inv.size(); ++e) extend(extend, ThetaGrid{e});
  return out;
}

// All nonterminal colors, materialized (roles both polarities, giver grids,
// theta0 in complete mode).
inline std::vector<ThetaColor> initial_colors(const RoleInventory& inv, SystemMode mode) {
  std::vector<ThetaColor> out;
  for (RoleId r = 0; r < inv.size(); ++r) {
    out.push_back(role_color(r, Polarity::Receiver));
    out.push_back(role_color(r, Polarity::Giver));
  }
  for (const auto& g : all_valid_grids(inv))
    if (g.size() >= 2) out.push_back(up_tuple_color(g));
  if (mode == SystemMode::Complete) out.push_back(theta0_color());
  return out;
}

// A lexical item may carry a terminal color only if the lexicon licenses it.
inline bool licensed(const LexItem& item, const ThetaColor& base) {
  switch (base.tag) {
    case ThetaColor::Tag::Theta0:
      return item.theta0_capable;
    case ThetaColor::Tag::Role:
      if (base.pol == Polarity::Receiver) return item.receivable.count(base.role) != 0;
      return item.has_grid({base.role});
    case ThetaColor::Tag::Grid:
      return item.has_grid(base.grid);
  }
  return false;
}

inline std::vector<ThetaColor> licensed_bases(const LexItem& item, SystemMode mode) {
  std::vector<ThetaColor> out;
  for (RoleId r : item.receivable) out.push_back(role_color(r, Polarity::Receiver));
  for (const auto& g : item.grids) out.push_back(up_tuple_color(g));
  if (mode == SystemMode::Complete && item.theta0_capable) out.push_back(theta0_color());
  return out;
}

inline std::vector<ThetaColor> licensed_terminal_colors(const Lexicon& lex, SystemMode mode) {
  std::vector<ThetaColor> out;
  for (const auto& id : lex.ids())
    for (const auto& b : licensed_bases(lex.item(id), mode))
      out.push_back(make_terminal(id, b));
  if (mode == SystemMode::Complete) out.push_back(unit_terminal_color());
  return out;
}

// --- text form ------------------------------------------------------------
// role^ | role_v | G[r1,r2,...] | 0 | 1_0; the terminal wrapper is implied by
// the leaf the color sits on.

inline std::string print_color(const ThetaColor& c, const RoleInventory& inv) {
  if (c.terminal && c.unit) return "1_0";
  switch (c.tag) {
    case ThetaColor::Tag::Theta0:
      return "0";
    case ThetaColor::Tag::Role:
      return inv.name(c.role) + (c.pol == Polarity::Giver ? "^" : "_v");
    case ThetaColor::Tag::Grid: {
      std::string s = "G[";
      for (size_t i = 0; i < c.grid.size(); ++i) {
        if (i) s += ",";
        s += inv.name(c.grid[i]);
      }
      return s + "]";
    }
  }
  return "?";
}

// Parses the base form above (no terminal wrapper).
inline ThetaColor parse_color(const std::string& s, const RoleInventory& inv) {
  if (s == "0") return theta0_color();
  if (s == "1_0") return unit_terminal_color();
  if (s.size() > 2 && s.substr(0, 2) == "G[" && s.back() == ']') {
    std::vector<RoleId> roles;
    std::string body = s.substr(2, s.size() - 3), tok;
    for (char ch : body) {
      if (ch == ',') {
        roles.push_back(inv.id(tok));
        tok.clear();
      } else if (!isspace(static_cast<unsigned char>(ch))) {
        tok += ch;
      }
    }
    if (!tok.empty()) roles.push_back(inv.id(tok));
    if (roles.empty()) throw ParseError("empty grid color: " + s);
    ThetaColor c = up_tuple_color(roles);
    if (c.tag == ThetaColor::Tag::Grid &&
        !is_theta_hierarchy(std::vector<RoleId>(roles.begin() + 1, roles.end()), inv))
      throw ParseError("grid color is not a theta hierarchy: " + s);
    return c;
  }
  if (s.size() > 1 && s.back() == '^')
    return role_color(inv.id(s.substr(0, s.size() - 1)), Polarity::Giver);
  if (s.size() > 2 && s.substr(s.size() - 2) == "_v")
    return role_color(inv.id(s.substr(0, s.size() - 2)), Polarity::Receiver);
  throw ParseError("cannot parse color: " + s);
}

}  // namespace theta
