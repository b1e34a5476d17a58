#pragma once

#include <future>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "theta/color_search.hpp"
#include "theta/workspace.hpp"

namespace theta {

struct ExploreOptions {
  int depth = 2;
  size_t guard = 100000;  // total events across the exploration
  int jobs = 1;
  FreeMergeOptions::HeadPolicy heads = FreeMergeOptions::HeadPolicy::Default;
};

template <class TreeT>
struct ExploreResult {
  std::set<WorkspaceT<TreeT>> reachable;           // all workspaces within depth
  std::vector<size_t> frontier_sizes;              // per level
  std::map<MergeKind, size_t> event_counts;
  std::set<TreeT> products;                        // trees built by some event
  std::vector<MergeEventT<TreeT>> events;          // kept when record_events
  bool record_events = false;
  size_t total_events = 0;
};

namespace detail {

template <class WS, class StepFn>
void explore_generic(const std::vector<WS>& start, const ExploreOptions& opt, StepFn step,
                     ExploreResult<typename std::decay_t<decltype(std::declval<WS>().comps[0])>>& res) {
  using TreeT = std::decay_t<decltype(std::declval<WS>().comps[0])>;
  std::set<std::string> seen;
  std::vector<WS> frontier;
  for (const auto& w : start)
    if (seen.insert(w.key()).second) {
      frontier.push_back(w);
      res.reachable.insert(w);
    }
  res.frontier_sizes.push_back(frontier.size());

  for (int d = 0; d < opt.depth && !frontier.empty(); ++d) {
    std::vector<std::vector<MergeEventT<TreeT>>> batches(frontier.size());
    auto run = [&](size_t lo, size_t hi) {
      for (size_t i = lo; i < hi; ++i) batches[i] = step(frontier[i]);
    };
    if (opt.jobs > 1 && frontier.size() > 1) {
      size_t n = frontier.size();
      size_t chunk = (n + opt.jobs - 1) / opt.jobs;
      std::vector<std::future<void>> futs;
      for (size_t lo = 0; lo < n; lo += chunk)
        futs.push_back(std::async(std::launch::async, run, lo, std::min(lo + chunk, n)));
      for (auto& f : futs) f.get();
    } else {
      run(0, frontier.size());
    }

    std::vector<WS> next;
    for (auto& batch : batches)
      for (auto& ev : batch) {
        res.total_events++;
        if (res.total_events > opt.guard) throw GuardExceeded("exploration event guard exceeded");
        res.event_counts[ev.kind]++;
        res.products.insert(ev.product);
        if (seen.insert(ev.result.key()).second) {
          next.push_back(ev.result);
          res.reachable.insert(ev.result);
        }
        if (res.record_events) res.events.push_back(std::move(ev));
      }
    res.frontier_sizes.push_back(next.size());
    frontier = std::move(next);
  }
}

}  // namespace detail

inline ExploreResult<Tree> explore_free(const Lexicon& lex, const std::vector<Workspace>& start,
                                        const ExploreOptions& opt, bool record_events = false) {
  ExploreResult<Tree> res;
  res.record_events = record_events;
  StepOptions sopt;
  sopt.guard = opt.guard;
  sopt.heads = opt.heads;
  detail::explore_generic(start, opt,
                          [&](const Workspace& w) { return markov_step_free(lex, w, sopt); }, res);
  return res;
}

inline ExploreResult<CTree> explore_colored(const BudSystem& sys,
                                            const std::vector<CWorkspace>& start,
                                            const ExploreOptions& opt,
                                            bool record_events = false) {
  ExploreResult<CTree> res;
  res.record_events = record_events;
  StepOptions sopt;
  sopt.guard = opt.guard;
  detail::explore_generic(
      start, opt, [&](const CWorkspace& w) { return markov_step_colored(sys, w, sopt); }, res);
  return res;
}

// Seeded random walks instead of the full closure, for larger inputs.
template <class WS, class StepFn>
std::vector<WS> sample_walks(const WS& start, int depth, int samples, uint64_t seed, StepFn step) {
  std::mt19937_64 rng(seed);
  std::vector<WS> endpoints;
  for (int s = 0; s < samples; ++s) {
    WS cur = start;
    for (int d = 0; d < depth; ++d) {
      auto evs = step(cur);
      if (evs.empty()) break;
      cur = evs[std::uniform_int_distribution<size_t>(0, evs.size() - 1)(rng)].result;
    }
    endpoints.push_back(cur);
  }
  return endpoints;
}

// --- build-vs-filter equivalence ------------------------------------------------

struct EquivReport {
  bool equal = false;
  int depth = 0;
  size_t built = 0;          // colored Merge route
  size_t filtered = 0;       // free Merge + color_search route
  size_t free_products = 0;  // distinct free trees considered
  size_t free_rejected = 0;  // free trees with no admissible coloring
  std::map<MergeKind, size_t> colored_events, free_events;
  std::vector<std::string> only_built, only_filtered;  // diff samples, capped
};

// Start workspace: `copies` occurrences of every lexical item (colored route:
// every licensed coloring of every item).
inline CWorkspace colored_start(const BudSystem& sys, int copies) {
  std::vector<CTree> comps;
  for (const auto& id : sys.lexicon->ids())
    for (const auto& b : licensed_bases(sys.lexicon->item(id), sys.mode))
      for (int k = 0; k < copies; ++k) comps.push_back(CTree::leaf(id, make_terminal(id, b)));
  return CWorkspace(std::move(comps));
}

inline Workspace free_start(const Lexicon& lex, int copies) {
  std::vector<Tree> comps;
  for (const auto& id : lex.ids())
    for (int k = 0; k < copies; ++k) comps.push_back(Tree::leaf(id));
  return Workspace(std::move(comps));
}

// Computes (A) the colored trees built by colored Merge in <= depth steps and
// (B) the free-Merge trees of <= depth steps that color_search can color into
// the language, and compares them as sets of colored trees. Single leaves are
// compared as licensed colorings on both sides (1-leaf trees are in no
// language). The free route enumerates both head choices; the colored route
// fixes heads through the matched rules.
inline EquivReport equivalence_harness(const Lexicon& lexicon, int depth, size_t guard = 2000000,
                                       int copies = 2, int jobs = 1, size_t diff_cap = 8) {
  BudSystem sys = complete_system(lexicon);
  EquivReport rep;
  rep.depth = depth;

  ExploreOptions copt;
  copt.depth = depth;
  copt.guard = guard;
  copt.jobs = jobs;
  auto colored = explore_colored(sys, {colored_start(sys, copies)}, copt);
  rep.colored_events = colored.event_counts;

  std::set<std::string> built;
  for (const auto& id : lexicon.ids())
    for (const auto& b : licensed_bases(lexicon.item(id), sys.mode))
      built.insert(CTree::leaf(id, make_terminal(id, b)).repr());
  for (const auto& t : colored.products) built.insert(t.repr());

  ExploreOptions fopt = copt;
  fopt.heads = FreeMergeOptions::HeadPolicy::Both;
  auto free_side = explore_free(lexicon, {free_start(lexicon, copies)}, fopt);
  rep.free_events = free_side.event_counts;

  std::set<std::string> filtered;
  for (const auto& id : lexicon.ids())
    for (const auto& b : licensed_bases(lexicon.item(id), sys.mode))
      filtered.insert(CTree::leaf(id, make_terminal(id, b)).repr());
  rep.free_products = free_side.products.size();
  for (const auto& t : free_side.products) {
    auto colorings = color_search(sys, t, /*expand_parametric_root=*/true);
    if (colorings.empty()) rep.free_rejected++;
    for (const auto& col : colorings) filtered.insert(col.tree.repr());
  }

  rep.built = built.size();
  rep.filtered = filtered.size();
  for (const auto& s : built)
    if (!filtered.count(s) && rep.only_built.size() < diff_cap) rep.only_built.push_back(s);
  for (const auto& s : filtered)
    if (!built.count(s) && rep.only_filtered.size() < diff_cap) rep.only_filtered.push_back(s);
  rep.equal = built == filtered;
  return rep;
}

}  // namespace theta
