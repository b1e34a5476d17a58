#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "theta/errors.hpp"

namespace theta {

using RoleId = int;

// Thematic role inventory with a preorder (reflexive + transitive, not
// necessarily antisymmetric). The strict order a > b derived from it drives
// theta hierarchies: a > b iff a >= b and not b >= a.
class RoleInventory {
 public:
  RoleInventory() = default;

  RoleInventory(std::vector<std::string> roles,
                const std::vector<std::pair<std::string, std::string>>& geq_pairs,
                int n_max = 4)
      : roles_(std::move(roles)), n_max_(n_max) {
    if (n_max_ < 1) throw LexiconError("n_max must be >= 1");
    for (size_t i = 0; i < roles_.size(); ++i) {
      if (roles_[i].empty()) throw LexiconError("empty role name");
      if (index_.count(roles_[i])) throw LexiconError("duplicate role: " + roles_[i]);
      index_[roles_[i]] = static_cast<RoleId>(i);
    }
    geq_.assign(roles_.size(), std::vector<bool>(roles_.size(), false));
    for (size_t i = 0; i < roles_.size(); ++i) geq_[i][i] = true;
    for (const auto& [a, b] : geq_pairs) geq_[id(a)][id(b)] = true;
    close_transitively();
  }

  RoleId id(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw LexiconError("unknown role: " + name);
    return it->second;
  }
  const std::string& name(RoleId r) const { return roles_.at(r); }
  int size() const { return static_cast<int>(roles_.size()); }
  int n_max() const { return n_max_; }

  bool geq(RoleId a, RoleId b) const { return geq_[a][b]; }
  bool gt(RoleId a, RoleId b) const { return geq_[a][b] && !geq_[b][a]; }

 private:
  void close_transitively() {
    const size_t n = roles_.size();
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i)
        if (geq_[i][k])
          for (size_t j = 0; j < n; ++j)
            if (geq_[k][j]) geq_[i][j] = true;
  }

  std::vector<std::string> roles_;
  std::map<std::string, RoleId> index_;
  std::vector<std::vector<bool>> geq_;
  int n_max_ = 4;
};

// Theta grid: external role first, then internal roles. Stored external-first;
// the internal part must be strictly decreasing in the role preorder.
using ThetaGrid = std::vector<RoleId>;

// True iff the sequence is strictly decreasing under the strict order induced
// by the preorder. Length <= 1 is trivially a hierarchy.
inline bool is_theta_hierarchy(const std::vector<RoleId>& seq, const RoleInventory& inv) {
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    if (!inv.gt(seq[i], seq[i + 1])) return false;
  return true;
}

inline bool is_valid_grid(const ThetaGrid& g, const RoleInventory& inv) {
  if (g.empty() || static_cast<int>(g.size()) > inv.n_max()) return false;
  return is_theta_hierarchy(std::vector<RoleId>(g.begin() + 1, g.end()), inv);
}

struct LexItem {
  std::string id;
  std::vector<std::string> features;
  std::vector<ThetaGrid> grids;   // grids this item can give
  std::set<RoleId> receivable;    // roles this item can receive
  bool theta0_capable = false;    // may sit at a non-theta position

  bool has_grid(const ThetaGrid& g) const {
    return std::find(grids.begin(), grids.end(), g) != grids.end();
  }
  bool is_giver() const { return !grids.empty(); }
};

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(RoleInventory inv, std::vector<LexItem> items) : inv_(std::move(inv)) {
    for (auto& it : items) add(std::move(it));
  }

  const RoleInventory& inventory() const { return inv_; }

  void add(LexItem item) {
    if (item.id.empty()) throw LexiconError("empty lexical item id");
    if (item.id[0] == '*') throw LexiconError("item id may not start with '*': " + item.id);
    if (items_.count(item.id)) throw LexiconError("duplicate item: " + item.id);
    for (const auto& g : item.grids)
      if (!is_valid_grid(g, inv_))
        throw LexiconError("item " + item.id + " has a grid that is not a theta hierarchy");
    order_.push_back(item.id);
    items_.emplace(item.id, std::move(item));
  }

  const LexItem& item(const std::string& id) const {
    auto it = items_.find(id);
    if (it == items_.end()) throw LexiconError("unknown lexical item: " + id);
    return it->second;
  }
  bool has(const std::string& id) const { return items_.count(id) != 0; }
  const std::vector<std::string>& ids() const { return order_; }

 private:
  RoleInventory inv_;
  std::map<std::string, LexItem> items_;
  std::vector<std::string> order_;
};

// Lexicon file schema:
//   { "roles": [...], "preorder": [["a","b"], ...], "n_max": 4,
//     "items": [ {"id": ..., "features": [...], "grids": [[...]],
//                 "receivable": [...], "theta0_capable": bool} ] }
inline Lexicon lexicon_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> roles = j.at("roles").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> pre;
    if (j.contains("preorder"))
      for (const auto& p : j.at("preorder")) pre.emplace_back(p.at(0), p.at(1));
    int n_max = j.value("n_max", 4);
    RoleInventory inv(std::move(roles), pre, n_max);

    std::vector<LexItem> items;
    for (const auto& ji : j.value("items", nlohmann::json::array())) {
      LexItem it;
      it.id = ji.at("id").get<std::string>();
      it.features = ji.value("features", std::vector<std::string>{});
      for (const auto& g : ji.value("grids", nlohmann::json::array())) {
        ThetaGrid grid;
        for (const auto& r : g) grid.push_back(inv.id(r.get<std::string>()));
        it.grids.push_back(std::move(grid));
      }
      for (const auto& r : ji.value("receivable", nlohmann::json::array()))
        it.receivable.insert(inv.id(r.get<std::string>()));
      it.theta0_capable = ji.value("theta0_capable", false);
      items.push_back(std::move(it));
    }
    return Lexicon(std::move(inv), std::move(items));
  } catch (const nlohmann::json::exception& e) {
    throw LexiconError(std::string("bad lexicon file: ") + e.what());
  }
}

inline Lexicon lexicon_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LexiconError(std::string("bad lexicon JSON: ") + e.what());
  }
  return lexicon_from_json(j);
}

}  // namespace theta
