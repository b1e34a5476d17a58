#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "theta/colors.hpp"
#include "theta/errors.hpp"
#include "theta/tree.hpp"

namespace theta {

// Colored headed tree: every vertex (root, interior, leaves) carries a color
// from Theta. By the edge-color convention a non-root vertex's color is also
// the color of the edge above it. Canonical child order is lexicographic on
// the colored serializations, so equal colorings of equal trees compare equal.
struct CNode;
using CPtr = std::shared_ptr<const CNode>;

struct CNode {
  CPtr child[2];
  int head = -1;
  LeafKind lkind = LeafKind::Lex;
  std::string label;
  ThetaColor color;
  int nleaves = 1;
  std::string repr;

  bool is_leaf() const { return !child[0]; }
};

class CTree {
 public:
  CTree() = default;

  static CTree leaf(const std::string& id, const ThetaColor& c) {
    return mk_leaf(LeafKind::Lex, id, c);
  }
  static CTree trace(const std::string& label, const ThetaColor& c) {
    return mk_leaf(LeafKind::Trace, label[0] == '*' ? label : "*" + label, c);
  }

  static CTree node(const CTree& a, const CTree& b, int head, const ThetaColor& c) {
    auto n = std::make_shared<CNode>();
    bool swap = b.ptr_->repr < a.ptr_->repr;
    n->child[0] = swap ? b.ptr_ : a.ptr_;
    n->child[1] = swap ? a.ptr_ : b.ptr_;
    n->head = head < 0 ? -1 : (swap ? 1 - head : head);
    if (n->child[0]->repr == n->child[1]->repr && n->head == 1) n->head = 0;
    n->color = c;
    n->nleaves = n->child[0]->nleaves + n->child[1]->nleaves;
    n->repr = "(" + n->child[0]->repr + (n->head == 0 ? "^" : "") + " " + n->child[1]->repr +
              (n->head == 1 ? "^" : "") + " :" + c.key() + ")";
    return CTree(std::move(n));
  }

  bool empty() const { return !ptr_; }
  bool is_leaf() const { return ptr_->is_leaf(); }
  bool is_internal() const { return !ptr_->is_leaf(); }
  bool is_trace() const { return ptr_->is_leaf() && ptr_->lkind == LeafKind::Trace; }
  const std::string& label() const { return ptr_->label; }
  const ThetaColor& color() const { return ptr_->color; }
  int n_leaves() const { return ptr_->nleaves; }
  int head() const { return ptr_->head; }
  CTree child(int i) const { return CTree(ptr_->child[i]); }
  const std::string& repr() const { return ptr_->repr; }

  friend bool operator==(const CTree& a, const CTree& b) { return a.repr() == b.repr(); }
  friend bool operator!=(const CTree& a, const CTree& b) { return !(a == b); }
  friend bool operator<(const CTree& a, const CTree& b) { return a.repr() < b.repr(); }

  CTree with_root_color(const ThetaColor& c) const {
    if (is_leaf()) {
      auto n = std::make_shared<CNode>(*ptr_);
      n->color = c;
      n->repr = n->label + ":" + c.key();
      return CTree(std::move(n));
    }
    return node(child(0), child(1), head(), c);
  }

  CTree subtree(const VertexPath& p) const {
    CPtr cur = ptr_;
    for (int d : p) {
      if (cur->is_leaf()) throw Error("path leaves the tree");
      cur = cur->child[d];
    }
    return CTree(cur);
  }

  bool is_headed() const {
    bool ok = true;
    walk([&](const VertexPath&, const CNode& n) {
      if (!n.is_leaf() && n.head < 0) ok = false;
    });
    return ok;
  }

  VertexPath head_leaf(VertexPath from = {}) const {
    CPtr cur = ptr_;
    for (int d : from) cur = cur->child[d];
    while (!cur->is_leaf()) {
      if (cur->head < 0) throw Error("head function undefined at an internal vertex");
      from.push_back(cur->head);
      cur = cur->child[cur->head];
    }
    return from;
  }

  void walk(const std::function<void(const VertexPath&, const CNode&)>& f) const {
    VertexPath p;
    walk_rec(ptr_, p, f);
  }

 private:
  static CTree mk_leaf(LeafKind k, const std::string& label, const ThetaColor& c) {
    auto n = std::make_shared<CNode>();
    n->lkind = k;
    n->label = label;
    n->color = c;
    n->repr = label + ":" + c.key();
    return CTree(std::move(n));
  }
  static void walk_rec(const CPtr& n, VertexPath& p,
                       const std::function<void(const VertexPath&, const CNode&)>& f) {
    f(p, *n);
    if (n->is_leaf()) return;
    for (int i = 0; i < 2; ++i) {
      p.push_back(i);
      walk_rec(n->child[i], p, f);
      p.pop_back();
    }
  }

  explicit CTree(CPtr p) : ptr_(std::move(p)) {}
  CPtr ptr_;
};

struct CTreeHash {
  size_t operator()(const CTree& t) const { return std::hash<std::string>()(t.repr()); }
};

inline Tree underlying(const CTree& t) {
  if (t.is_leaf())
    return t.is_trace() ? Tree::trace(t.label()) : Tree::leaf(t.label());
  return Tree::node(underlying(t.child(0)), underlying(t.child(1)), t.head());
}

inline std::vector<std::pair<VertexPath, CTree>> accessible_terms(const CTree& t) {
  std::vector<std::pair<VertexPath, CTree>> out;
  t.walk([&](const VertexPath& p, const CNode&) {
    if (!p.empty()) out.emplace_back(p, t.subtree(p));
  });
  return out;
}

inline std::map<VertexPath, VertexPath> maximal_projections(const CTree& t) {
  std::map<VertexPath, VertexPath> mp;
  t.walk([&](const VertexPath& p, const CNode& n) {
    if (n.is_leaf() || n.head < 0) return;
    VertexPath leaf = t.head_leaf(p);
    if (!mp.count(leaf)) mp[leaf] = p;
  });
  return mp;
}

// --- text format ------------------------------------------------------------
// Extends the tree format with ":color" annotations on every vertex. A leaf
// that is a head is wrapped in parentheses so the head marker stays outside
// the color: ((gave:G[agent,theme,goal]^)^ x:agent_v :0).

inline std::string print_ctree(const CTree& t, const RoleInventory& inv, bool head = false) {
  if (t.is_leaf()) {
    ThetaColor base = t.is_trace() || !t.color().terminal ? t.color() : strip_terminal(t.color());
    std::string s = t.label() + ":" + print_color(base, inv);
    return head ? "(" + s + ")^" : s;
  }
  std::string s = "(" + print_ctree(t.child(0), inv, t.head() == 0) + " " +
                  print_ctree(t.child(1), inv, t.head() == 1) + " :" +
                  print_color(t.color(), inv) + ")";
  return head ? s + "^" : s;
}

namespace detail {

struct CTreeParser {
  const std::string& s;
  const RoleInventory& inv;
  size_t pos = 0;

  CTreeParser(const std::string& str, const RoleInventory& i) : s(str), inv(i) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  static bool color_char(char c) {
    return is_atom_char(c) || c == '[' || c == ']' || c == ',' || c == '^';
  }

  ThetaColor color_after_colon() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && color_char(s[pos])) ++pos;
    if (pos == start) throw ParseError("expected a color after ':'");
    std::string tok = s.substr(start, pos - start);
    try {
      return parse_color(tok, inv);
    } catch (const ParseError&) {
      // a trailing '^' may be a head marker rather than part of the color
      if (tok.size() > 1 && tok.back() == '^') {
        tok.pop_back();
        --pos;
        return parse_color(tok, inv);
      }
      throw;
    }
  }

  CTree parse(bool* head) {
    CTree t = parse_bare();
    *head = eat('^');
    return t;
  }

  CTree parse_bare() {
    skip_ws();
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      bool h1 = false, h2 = false;
      CTree a = parse(&h1);
      skip_ws();
      if (eat(')')) {
        if (h1) throw ParseError("head marker on a singleton group");
        return a;
      }
      if (eat(':')) {  // leaf wrapped for a head marker has no sibling
        throw ParseError("color on a singleton group");
      }
      CTree b = parse(&h2);
      if (!eat(':')) throw ParseError("internal vertex without a color near position " +
                                      std::to_string(pos));
      ThetaColor c = color_after_colon();
      if (!eat(')')) throw ParseError("expected ')' at position " + std::to_string(pos));
      if (h1 && h2) throw ParseError("both children marked as head");
      return CTree::node(a, b, h1 ? 0 : (h2 ? 1 : -1), c);
    }
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && is_atom_char(s[pos])) ++pos;
    if (pos == start) throw ParseError("expected a tree at position " + std::to_string(start));
    std::string id = s.substr(start, pos - start);
    if (!eat(':')) throw ParseError("leaf " + id + " without a color");
    ThetaColor c = color_after_colon();
    if (id[0] == '*') {
      if (c.terminal && !c.unit) throw ParseError("trace leaf with a terminal color");
      return CTree::trace(id, c);
    }
    return CTree::leaf(id, c.terminal ? c : make_terminal(id, c));
  }
};

}  // namespace detail

inline CTree parse_ctree(const std::string& str, const RoleInventory& inv) {
  detail::CTreeParser p(str, inv);
  CTree t = p.parse_bare();
  if (p.eat('^')) throw ParseError("head marker on the root");
  p.skip_ws();
  if (p.pos != str.size()) throw ParseError("trailing input after tree");
  return t;
}

}  // namespace theta
