#pragma once

#include <map>
#include <string>
#include <vector>

#include "theta/errors.hpp"
#include "theta/tree.hpp"

namespace theta {

// Element of the Merge operad with head structure: an abstract binary rooted
// tree with unlabeled leaves and a head function. The unit is the single leaf.
struct OperadElement {
  Tree shape;

  OperadElement() : shape(Tree::slot()) {}
  explicit OperadElement(Tree t) : shape(std::move(t)) { check(); }

  int arity() const { return shape.n_leaves(); }
  bool is_unit() const { return shape.is_leaf(); }

  friend bool operator==(const OperadElement& a, const OperadElement& b) {
    return a.shape == b.shape;
  }
  friend bool operator<(const OperadElement& a, const OperadElement& b) {
    return a.shape < b.shape;
  }

 private:
  void check() const {
    shape.walk([](const VertexPath&, const TreeNode& n) {
      if (n.is_leaf() && n.lkind != LeafKind::Slot)
        throw Error("operad element leaves must be unlabeled");
      if (!n.is_leaf() && n.head < 0) throw Error("operad element must carry a head function");
    });
  }
};

inline OperadElement operad_unit() { return OperadElement(); }

inline OperadElement operad_cherry(int head = 1) {
  return OperadElement(Tree::node(Tree::slot(), Tree::slot(), head));
}

namespace detail {
// Rebuild `t` with the leaves at head-final positions replaced per `subst`.
template <class TreeT>
TreeT graft_head_final(const TreeT& t, const std::map<VertexPath, TreeT>& subst) {
  std::function<TreeT(const TreeT&, VertexPath&)> rec = [&](const TreeT& n,
                                                            VertexPath& p) -> TreeT {
    if (n.is_leaf()) {
      auto it = subst.find(p);
      return it == subst.end() ? n : it->second;
    }
    p.push_back(0);
    TreeT a = rec(n.child(0), p);
    p.back() = 1;
    TreeT b = rec(n.child(1), p);
    p.pop_back();
    return TreeT::node(a, b, n.head());
  };
  VertexPath p;
  return rec(t, p);
}
}  // namespace detail

// Grafts y's root at leaf i of x, indices 1..n in head-final leaf order.
inline OperadElement insert(const OperadElement& x, int i, const OperadElement& y) {
  if (i < 1 || i > x.arity())
    throw ArityError("insertion index " + std::to_string(i) + " out of 1.." +
                     std::to_string(x.arity()));
  if (x.is_unit()) return y;
  if (y.is_unit()) return x;
  auto leaves = leaves_head_final(x.shape);
  std::map<VertexPath, Tree> subst{{leaves[i - 1], y.shape}};
  return OperadElement(detail::graft_head_final(x.shape, subst));
}

// gamma(x; y_1..y_n) = (..(x o_n y_n)..) o_1 y_1.
inline OperadElement compose(const OperadElement& x, const std::vector<OperadElement>& ys) {
  if (static_cast<int>(ys.size()) != x.arity())
    throw ArityError("compose: expected " + std::to_string(x.arity()) + " arguments, got " +
                     std::to_string(ys.size()));
  OperadElement acc = x;
  for (int i = x.arity(); i >= 1; --i) acc = insert(acc, i, ys[i - 1]);
  return acc;
}

// Algebra action on syntactic objects: plugs the argument roots into the
// leaves of the operation, in head-final order.
inline Tree act(const OperadElement& x, const std::vector<Tree>& args) {
  if (static_cast<int>(args.size()) != x.arity())
    throw ArityError("act: expected " + std::to_string(x.arity()) + " arguments, got " +
                     std::to_string(args.size()));
  if (x.is_unit()) return args[0];
  auto leaves = leaves_head_final(x.shape);
  std::map<VertexPath, Tree> subst;
  for (size_t k = 0; k < leaves.size(); ++k) subst[leaves[k]] = args[k];
  return detail::graft_head_final(x.shape, subst);
}

// M(T, 1) = T. The interesting behavior is in the colored version, which
// recolors the root (see workspace.hpp).
inline Tree merge_unary(const Tree& t) { return t; }

}  // namespace theta
