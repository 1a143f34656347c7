#include "hierj/solvers.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <tuple>

#include "hierj/error.hpp"

namespace hierj {

namespace {

void check_budget(const Tree& tree, std::size_t k) {
  if (k < 1 || k > tree.leaf_count()) {
    throw Error(Errc::budget_out_of_range,
                "k = " + std::to_string(k) + " outside 1.." + std::to_string(tree.leaf_count()));
  }
}

// Flat per-node vectors indexed 0..t(N); cell 0 is the empty-subset sentinel.
template <class V>
struct Tables {
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> t;
  std::vector<V> best;
  std::vector<V> worst;
  std::vector<std::int32_t> best_right;
  std::vector<std::int32_t> worst_right;
  std::vector<std::uint8_t> best_belongs;
  std::vector<std::uint8_t> worst_belongs;

  Tables(const Tree& tree, std::size_t k, bool with_worst, bool depth_pruning) {
    const std::size_t n = tree.node_count();
    offset.assign(n + 1, 0);
    t.assign(n, 0);
    std::size_t total = 0;
    for (NodeId node = 0; node < n; ++node) {
      std::size_t cap = std::min(k, tree.leaves_below(node));
      if (depth_pruning) cap = tree.depth(node) < k ? std::min(cap, k - tree.depth(node)) : 0;
      t[node] = static_cast<std::uint32_t>(cap);
      offset[node] = total;
      total += cap + 1;
    }
    offset[n] = total;
    best.assign(total, V{0});
    best_right.assign(total, 0);
    if (with_worst) {
      worst.assign(total, V{0});
      worst_right.assign(total, 0);
      best_belongs.assign(total, 0);
      worst_belongs.assign(total, 0);
    }
  }

  std::size_t at(NodeId node, std::size_t i) const { return offset[node] + i; }
};

template <class V>
std::vector<V> node_values(const Tree& tree, const Attribute& attribute) {
  std::vector<V> v(tree.node_count());
  for (NodeId n = 0; n < tree.node_count(); ++n) v[n] = static_cast<V>(attribute.scaled(n));
  return v;
}

// Cells hold sums of at most two benefits of valid selections, each bounded
// by (den + |num|) * pixel count.
bool fits_narrow(const Attribute& attribute, const Tree& tree) {
  Wide pixels = 0;
  for (NodeId leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    pixels += (attribute.f(leaf) < 0 ? -attribute.f(leaf) : attribute.f(leaf));
    pixels += (attribute.b(leaf) < 0 ? -attribute.b(leaf) : attribute.b(leaf));
  }
  const Wide num = attribute.omega().num() < 0 ? -static_cast<Wide>(attribute.omega().num()) : attribute.omega().num();
  const Wide bound = (static_cast<Wide>(attribute.omega().den()) + num) * (pixels + 1) * 4;
  return bound < (static_cast<Wide>(1) << 62);
}

std::vector<Wide> widen_root(const auto& values, std::size_t from, std::size_t count) {
  std::vector<Wide> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) out.push_back(static_cast<Wide>(values[from + i]));
  return out;
}

std::size_t extraction_size(const std::vector<Wide>& root_benefits, Extraction mode) {
  return mode == Extraction::full_budget ? root_benefits.size() : minimal_best(root_benefits);
}

void finish(SolverResult& result, const Attribute& attribute, bool positive_only_benefit) {
  std::vector<std::size_t> order(result.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return result.nodes[a] < result.nodes[b]; });
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> layers;
  for (const auto i : order) {
    nodes.push_back(result.nodes[i]);
    if (!result.layers.empty()) layers.push_back(result.layers[i]);
  }
  result.nodes = std::move(nodes);
  result.layers = std::move(layers);
  std::sort(result.positive_subset.begin(), result.positive_subset.end());
  result.size_used = result.nodes.size();

  result.benefit = {};
  const auto& summed = positive_only_benefit ? result.positive_subset : result.nodes;
  for (std::size_t i = 0; i < summed.size(); ++i) {
    const std::int64_t sign = (!result.layers.empty() && result.layers[i] % 2 == 1) ? -1 : 1;
    result.benefit.f += sign * attribute.f(summed[i]);
    result.benefit.b += sign * attribute.b(summed[i]);
  }
}

// ---------------------------------------------------------------------------
// b-consistency: B[1] = max(A(N), 0); B[i] = max_r B_right[r] + B_left[i-r].

template <class V>
SolverResult run_b(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options) {
  const auto value = node_values<V>(tree, attribute);
  Tables<V> tab(tree, k, false, options.depth_pruning);

  for (const NodeId node : tree.post_order()) {
    const std::size_t tn = tab.t[node];
    if (tn == 0) continue;
    tab.best[tab.at(node, 1)] = std::max(value[node], V{0});
    tab.best_right[tab.at(node, 1)] = 0;
    if (tn < 2) continue;
    const auto [left, right] = tree.children(node);
    const std::size_t tl = tab.t[left];
    const std::size_t tr = tab.t[right];
    for (std::size_t i = 2; i <= tn; ++i) {
      const std::size_t r_min = i > tl ? std::max<std::size_t>(1, i - tl) : 1;
      const std::size_t r_max = std::min(tr, i - 1);
      V best_value{};
      std::size_t best_r = 0;
      for (std::size_t r = r_min; r <= r_max; ++r) {
        const V candidate = tab.best[tab.at(right, r)] + tab.best[tab.at(left, i - r)];
        if (best_r == 0 || candidate > best_value) {
          best_value = candidate;
          best_r = r;
        }
      }
      tab.best[tab.at(node, i)] = best_value;
      tab.best_right[tab.at(node, i)] = static_cast<std::int32_t>(best_r);
    }
  }

  SolverResult result;
  const NodeId root = tree.root();
  result.root_benefits = widen_root(tab.best, tab.offset[root], tab.t[root]);
  std::deque<std::pair<NodeId, std::size_t>> queue{{root, extraction_size(result.root_benefits, options.extraction)}};
  while (!queue.empty()) {
    const auto [node, i] = queue.front();
    queue.pop_front();
    const auto r = static_cast<std::size_t>(tab.best_right[tab.at(node, i)]);
    if (r == 0) {
      if (value[node] > V{0}) result.positive_subset.push_back(node);
      result.nodes.push_back(node);
    } else {
      queue.emplace_back(tree.children(node).right, r);
      queue.emplace_back(tree.children(node).left, i - r);
    }
  }
  finish(result, attribute, true);
  return result;
}

// ---------------------------------------------------------------------------
// c-consistency: sizes start at 0; R = -1 marks "N itself".

template <class V>
SolverResult run_c(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options) {
  const auto value = node_values<V>(tree, attribute);
  Tables<V> tab(tree, k, false, false);

  for (const NodeId node : tree.post_order()) {
    const std::size_t tn = tab.t[node];
    if (!tree.is_leaf(node)) {
      const auto [left, right] = tree.children(node);
      const std::size_t tl = tab.t[left];
      const std::size_t tr = tab.t[right];
      for (std::size_t i = 1; i <= tn; ++i) {
        const std::size_t r_min = i > tl ? i - tl : 0;
        const std::size_t r_max = std::min(tr, i);
        V best_value{};
        std::size_t best_r = r_min;
        for (std::size_t r = r_min; r <= r_max; ++r) {
          const V candidate = tab.best[tab.at(right, r)] + tab.best[tab.at(left, i - r)];
          if (r == r_min || candidate > best_value) {
            best_value = candidate;
            best_r = r;
          }
        }
        tab.best[tab.at(node, i)] = best_value;
        tab.best_right[tab.at(node, i)] = static_cast<std::int32_t>(best_r);
      }
    }
    if (tree.is_leaf(node) || value[node] > tab.best[tab.at(node, 1)]) {
      tab.best[tab.at(node, 1)] = value[node];
      tab.best_right[tab.at(node, 1)] = -1;
    }
  }

  SolverResult result;
  const NodeId root = tree.root();
  result.root_benefits = widen_root(tab.best, tab.offset[root], tab.t[root]);
  std::deque<std::pair<NodeId, std::size_t>> queue{{root, extraction_size(result.root_benefits, options.extraction)}};
  while (!queue.empty()) {
    const auto [node, i] = queue.front();
    queue.pop_front();
    const std::int32_t r = tab.best_right[tab.at(node, i)];
    if (r == -1) {
      result.nodes.push_back(node);
      continue;
    }
    if (r > 0) queue.emplace_back(tree.children(node).right, static_cast<std::size_t>(r));
    if (static_cast<std::size_t>(r) < i) queue.emplace_back(tree.children(node).left, i - static_cast<std::size_t>(r));
  }
  finish(result, attribute, false);
  return result;
}

// ---------------------------------------------------------------------------
// d-consistency: best (+) and worst (-) tables. Selecting N swaps the roles of
// best and worst below it. The first pass combines children without N; the
// second pass, in decreasing i, considers N on top of the opposite-role
// first-pass cell at i-1, which never contains N itself.

template <class V>
SolverResult run_d(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options) {
  const auto value = node_values<V>(tree, attribute);
  Tables<V> tab(tree, k, true, false);
  const NodeId root = tree.root();

  for (const NodeId node : tree.post_order()) {
    const std::size_t tn = tab.t[node];
    if (tree.is_leaf(node)) {
      const auto cell = tab.at(node, 1);
      tab.best[cell] = tab.worst[cell] = value[node];
      tab.best_belongs[cell] = tab.worst_belongs[cell] = 1;
      continue;
    }
    const auto [left, right] = tree.children(node);
    const std::size_t tl = tab.t[left];
    const std::size_t tr = tab.t[right];
    for (std::size_t i = 1; i <= tn; ++i) {
      const std::size_t r_min = i > tl ? i - tl : 0;
      const std::size_t r_max = std::min(tr, i);
      V lo{}, hi{};
      std::size_t lo_r = r_min, hi_r = r_min;
      for (std::size_t r = r_min; r <= r_max; ++r) {
        const V worst = tab.worst[tab.at(right, r)] + tab.worst[tab.at(left, i - r)];
        const V best = tab.best[tab.at(right, r)] + tab.best[tab.at(left, i - r)];
        if (r == r_min || worst < lo) {
          lo = worst;
          lo_r = r;
        }
        if (r == r_min || best > hi) {
          hi = best;
          hi_r = r;
        }
      }
      const auto cell = tab.at(node, i);
      tab.worst[cell] = lo;
      tab.worst_right[cell] = static_cast<std::int32_t>(lo_r);
      tab.best[cell] = hi;
      tab.best_right[cell] = static_cast<std::int32_t>(hi_r);
    }

    if (node != root) {
      for (std::size_t i = tn; i >= 1; --i) {
        const auto cell = tab.at(node, i);
        const auto prev = tab.at(node, i - 1);
        const V with_node_worst = value[node] - tab.best[prev];
        if (with_node_worst >= tab.worst[cell]) {
          tab.worst_belongs[cell] = 0;
        } else {
          tab.worst[cell] = with_node_worst;
          tab.worst_right[cell] = tab.best_right[prev];
          tab.worst_belongs[cell] = 1;
        }
        const V with_node_best = value[node] - tab.worst[prev];
        if (with_node_best <= tab.best[cell]) {
          tab.best_belongs[cell] = 0;
        } else {
          tab.best[cell] = with_node_best;
          tab.best_right[cell] = tab.worst_right[prev];
          tab.best_belongs[cell] = 1;
        }
      }
    } else {
      const auto cell = tab.at(node, 1);
      if (value[node] <= tab.best[cell]) {
        tab.best_belongs[cell] = 0;
      } else {
        tab.best[cell] = value[node];
        tab.best_right[cell] = 0;
        tab.best_belongs[cell] = 1;
      }
    }
  }

  SolverResult result;
  result.root_benefits = widen_root(tab.best, tab.offset[root], tab.t[root]);
  std::deque<std::tuple<NodeId, std::size_t, std::uint32_t>> queue{
      {root, extraction_size(result.root_benefits, options.extraction), 0}};
  while (!queue.empty()) {
    auto [node, i, layer] = queue.front();
    queue.pop_front();
    const auto cell = tab.at(node, i);
    const bool even = layer % 2 == 0;
    const std::size_t belongs = even ? tab.best_belongs[cell] : tab.worst_belongs[cell];
    const auto r = static_cast<std::size_t>(even ? tab.best_right[cell] : tab.worst_right[cell]);
    if (belongs) {
      result.nodes.push_back(node);
      result.layers.push_back(layer++);
    }
    if (r > 0) queue.emplace_back(tree.children(node).right, r, layer);
    if (r + belongs < i) queue.emplace_back(tree.children(node).left, i - belongs - r, layer);
  }
  finish(result, attribute, false);
  return result;
}

}  // namespace

std::size_t minimal_best(std::span<const Wide> root_benefits) {
  if (root_benefits.empty()) throw Error(Errc::budget_out_of_range, "no root benefits");
  std::size_t best = 0;
  for (std::size_t i = 1; i < root_benefits.size(); ++i) {
    if (root_benefits[i] > root_benefits[best]) best = i;
  }
  return best + 1;
}

SolverResult solve_b(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options) {
  check_budget(tree, k);
  return fits_narrow(attribute, tree) ? run_b<std::int64_t>(tree, attribute, k, options)
                                      : run_b<Wide>(tree, attribute, k, options);
}

SolverResult solve_c(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options) {
  check_budget(tree, k);
  return fits_narrow(attribute, tree) ? run_c<std::int64_t>(tree, attribute, k, options)
                                      : run_c<Wide>(tree, attribute, k, options);
}

SolverResult solve_d(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options) {
  check_budget(tree, k);
  return fits_narrow(attribute, tree) ? run_d<std::int64_t>(tree, attribute, k, options)
                                      : run_d<Wide>(tree, attribute, k, options);
}

SolverResult solve_unlimited(const Tree& tree, const Attribute& attribute) {
  std::vector<Wide> best(tree.node_count(), 0);
  for (const NodeId node : tree.post_order()) {
    if (tree.is_leaf(node)) {
      best[node] = std::max<Wide>(attribute.scaled(node), 0);
    } else {
      best[node] = best[tree.children(node).right] + best[tree.children(node).left];
    }
  }
  SolverResult result;
  std::deque<NodeId> queue{tree.root()};
  while (!queue.empty()) {
    const NodeId node = queue.front();
    queue.pop_front();
    const Wide own = attribute.scaled(node);
    if (std::max<Wide>(own, 0) >= best[node]) {
      if (own > 0) result.positive_subset.push_back(node);
      result.nodes.push_back(node);
    } else {
      queue.push_back(tree.children(node).right);
      queue.push_back(tree.children(node).left);
    }
  }
  finish(result, attribute, true);
  return result;
}

SolverResult solve(Consistency consistency, const Tree& tree, const Attribute& attribute, std::size_t k,
                   SolveOptions options) {
  switch (consistency) {
    case Consistency::B: return solve_b(tree, attribute, k, options);
    case Consistency::C: return solve_c(tree, attribute, k, options);
    case Consistency::D: return solve_d(tree, attribute, k, options);
  }
  throw Error(Errc::inconsistent_selection, "unknown consistency");
}

}  // namespace hierj
