#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "theta/errors.hpp"
#include "theta/lexicon.hpp"

namespace theta {

// Path from the root: sequence of child indices (0/1) in canonical order.
using VertexPath = std::vector<int>;

inline std::string path_str(const VertexPath& p) {
  if (p.empty()) return "e";
  std::string s;
  for (int d : p) s += static_cast<char>('0' + d);
  return s;
}

enum class LeafKind { Lex, Trace, Slot, Unit };

// Immutable non-planar binary rooted tree. Children are stored in a canonical
// order (lexicographic on serialized subtrees), so equality of serializations
// is equality of syntactic objects. The head choice, when present, is a flag
// on the canonical node: 0 = first child projects, 1 = second.
struct TreeNode;
using TreePtr = std::shared_ptr<const TreeNode>;

struct TreeNode {
  TreePtr child[2];  // null for leaves
  int head = -1;     // -1 unset
  LeafKind lkind = LeafKind::Lex;
  std::string label;  // lex id, or trace label starting with '*'
  int nleaves = 1;
  std::string repr;

  bool is_leaf() const { return !child[0]; }
};

class Tree {
 public:
  Tree() = default;

  static Tree leaf(const std::string& id) { return mk_leaf(LeafKind::Lex, id); }
  static Tree trace(const std::string& label) {
    return mk_leaf(LeafKind::Trace, label[0] == '*' ? label : "*" + label);
  }
  static Tree slot() { return mk_leaf(LeafKind::Slot, "_"); }
  static Tree unit() { return mk_leaf(LeafKind::Unit, "1"); }

  // Builds the canonical node; head is relative to the argument order.
  static Tree node(const Tree& a, const Tree& b, int head = -1) {
    if (a.is_unit() || b.is_unit()) throw Error("the unit never occurs inside a tree");
    auto n = std::make_shared<TreeNode>();
    bool swap = b.ptr_->repr < a.ptr_->repr;
    n->child[0] = swap ? b.ptr_ : a.ptr_;
    n->child[1] = swap ? a.ptr_ : b.ptr_;
    n->head = head < 0 ? -1 : (swap ? 1 - head : head);
    if (n->child[0]->repr == n->child[1]->repr && n->head == 1) n->head = 0;
    n->nleaves = n->child[0]->nleaves + n->child[1]->nleaves;
    n->repr = "(" + n->child[0]->repr + (n->head == 0 ? "^" : "") + " " + n->child[1]->repr +
              (n->head == 1 ? "^" : "") + ")";
    return Tree(std::move(n));
  }

  bool empty() const { return !ptr_; }
  bool is_leaf() const { return ptr_->is_leaf(); }
  bool is_internal() const { return !ptr_->is_leaf(); }
  bool is_unit() const { return ptr_->lkind == LeafKind::Unit && ptr_->is_leaf(); }
  bool is_trace() const { return ptr_->is_leaf() && ptr_->lkind == LeafKind::Trace; }
  LeafKind leaf_kind() const { return ptr_->lkind; }
  const std::string& label() const { return ptr_->label; }
  int n_leaves() const { return ptr_->nleaves; }
  int head() const { return ptr_->head; }
  Tree child(int i) const { return Tree(ptr_->child[i]); }
  const std::string& repr() const { return ptr_->repr; }

  friend bool operator==(const Tree& a, const Tree& b) { return a.repr() == b.repr(); }
  friend bool operator!=(const Tree& a, const Tree& b) { return !(a == b); }
  friend bool operator<(const Tree& a, const Tree& b) { return a.repr() < b.repr(); }

  Tree subtree(const VertexPath& p) const {
    TreePtr cur = ptr_;
    for (int d : p) {
      if (cur->is_leaf()) throw Error("path leaves the tree");
      cur = cur->child[d];
    }
    return Tree(cur);
  }

  // True iff every internal vertex carries a head flag.
  bool is_headed() const {
    bool ok = true;
    walk([&](const VertexPath&, const TreeNode& n) {
      if (!n.is_leaf() && n.head < 0) ok = false;
    });
    return ok;
  }

  // Leaf reached by following head children from the vertex at `from`.
  VertexPath head_leaf(VertexPath from = {}) const {
    TreePtr cur = ptr_;
    for (int d : from) cur = cur->child[d];
    while (!cur->is_leaf()) {
      if (cur->head < 0) throw Error("head function undefined at an internal vertex");
      from.push_back(cur->head);
      cur = cur->child[cur->head];
    }
    return from;
  }

  void walk(const std::function<void(const VertexPath&, const TreeNode&)>& f) const {
    VertexPath p;
    walk_rec(ptr_, p, f);
  }

 private:
  static Tree mk_leaf(LeafKind k, const std::string& label) {
    auto n = std::make_shared<TreeNode>();
    n->lkind = k;
    n->label = label;
    n->repr = label;
    return Tree(std::move(n));
  }
  static void walk_rec(const TreePtr& n, VertexPath& p,
                       const std::function<void(const VertexPath&, const TreeNode&)>& f) {
    f(p, *n);
    if (n->is_leaf()) return;
    for (int i = 0; i < 2; ++i) {
      p.push_back(i);
      walk_rec(n->child[i], p, f);
      p.pop_back();
    }
  }

  explicit Tree(TreePtr p) : ptr_(std::move(p)) {}
  TreePtr ptr_;

  friend struct TreeHash;
};

struct TreeHash {
  size_t operator()(const Tree& t) const { return std::hash<std::string>()(t.repr()); }
};

// Every non-root vertex paired with the full subtree rooted there.
inline std::vector<std::pair<VertexPath, Tree>> accessible_terms(const Tree& t) {
  std::vector<std::pair<VertexPath, Tree>> out;
  t.walk([&](const VertexPath& p, const TreeNode&) {
    if (!p.empty()) out.emplace_back(p, t.subtree(p));
  });
  return out;
}

// Leaf order induced by the harmonic head-final planar embedding: at each
// vertex the non-head child's leaves precede the head child's.
inline std::vector<VertexPath> leaves_head_final(const Tree& t) {
  std::vector<VertexPath> out;
  std::function<void(const Tree&, VertexPath&)> rec = [&](const Tree& n, VertexPath& p) {
    if (n.is_leaf()) {
      out.push_back(p);
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
  rec(t, p);
  return out;
}

// Replace the subtree at `p` (possibly re-ordering ancestors canonically).
inline Tree replace_subtree(const Tree& t, const VertexPath& p, const Tree& sub, size_t depth = 0) {
  if (depth == p.size()) return sub;
  int d = p[depth];
  Tree nc = replace_subtree(t.child(d), p, sub, depth + 1);
  Tree other = t.child(1 - d);
  int head = t.head();
  if (head >= 0) head = (head == d) ? 0 : 1;
  return d == 0 ? Tree::node(nc, other, head) : Tree::node(other, nc, head < 0 ? -1 : 1 - head);
}

// Highest ancestor of each projecting leaf under the head function.
inline std::map<VertexPath, VertexPath> maximal_projections(const Tree& t) {
  std::map<VertexPath, VertexPath> mp;  // head leaf -> highest vertex
  t.walk([&](const VertexPath& p, const TreeNode& n) {
    if (n.is_leaf() || n.head < 0) return;
    VertexPath leaf = t.head_leaf(p);
    if (!mp.count(leaf)) mp[leaf] = p;  // walk() visits top-down
  });
  return mp;
}

// --- text format ------------------------------------------------------------
// tree := lexid | "(" tree tree ")"; a "^" suffix marks the head child.
// Redundant parentheses around a single tree are accepted on input.

namespace detail {
inline bool is_atom_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*' || c == '+' ||
         c == '-';
}

struct TreeParser {
  const std::string& s;
  size_t pos = 0;

  explicit TreeParser(const std::string& str) : s(str) {}

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
  std::string atom() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && is_atom_char(s[pos])) ++pos;
    if (pos == start) throw ParseError("expected a tree at position " + std::to_string(start));
    return s.substr(start, pos - start);
  }

  // Parses one tree; sets *head if a trailing '^' follows.
  Tree parse(bool* head) {
    Tree t = parse_bare();
    *head = eat('^');
    return t;
  }

  Tree parse_bare() {
    skip_ws();
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      bool h1 = false, h2 = false;
      Tree a = parse(&h1);
      skip_ws();
      if (eat(')')) {
        if (h1) throw ParseError("head marker on a singleton group");
        return a;  // redundant parentheses
      }
      Tree b = parse(&h2);
      if (!eat(')')) throw ParseError("expected ')' at position " + std::to_string(pos));
      if (h1 && h2) throw ParseError("both children marked as head");
      return Tree::node(a, b, h1 ? 0 : (h2 ? 1 : -1));
    }
    std::string id = atom();
    if (id[0] == '*') return Tree::trace(id);
    if (id == "_") return Tree::slot();
    return Tree::leaf(id);
  }
};
}  // namespace detail

inline Tree parse_tree(const std::string& s) {
  detail::TreeParser p(s);
  Tree t = p.parse_bare();
  if (p.eat('^')) throw ParseError("head marker on the root");
  p.skip_ws();
  if (p.pos != s.size()) throw ParseError("trailing input after tree");
  return t;
}

// The canonical print is the serialization itself.
inline std::string print_tree(const Tree& t) { return t.repr(); }

inline void validate_leaves(const Tree& t, const Lexicon& lex) {
  t.walk([&](const VertexPath&, const TreeNode& n) {
    if (n.is_leaf() && n.lkind == LeafKind::Lex && !lex.has(n.label))
      throw LexiconError("unknown lexical item: " + n.label);
  });
}

}  // namespace theta
