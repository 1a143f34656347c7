#include "hierj/oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "hierj/error.hpp"

namespace hierj {

namespace {

using Mask64 = std::uint64_t;

// Bitmask view of a small tree, indexed by node id.
struct SmallTree {
  std::vector<Mask64> ancestors;    // strict
  std::vector<Mask64> descendants;  // strict
  std::vector<NodeId> order;        // post-order
};

SmallTree small_tree(const Tree& tree) {
  SmallTree s;
  const std::size_t n = tree.node_count();
  s.ancestors.assign(n, 0);
  s.descendants.assign(n, 0);
  s.order.assign(tree.post_order().begin(), tree.post_order().end());
  for (auto it = s.order.rbegin(); it != s.order.rend(); ++it) {
    const NodeId node = *it;
    if (node != tree.root()) {
      const NodeId p = tree.parent(node);
      s.ancestors[node] = s.ancestors[p] | (Mask64{1} << p);
    }
  }
  for (const NodeId node : s.order) {
    if (!tree.is_leaf(node)) {
      const auto [l, r] = tree.children(node);
      s.descendants[node] = s.descendants[l] | s.descendants[r] | (Mask64{1} << l) | (Mask64{1} << r);
    }
  }
  return s;
}

void check_budget(const Tree& tree, std::size_t k, const EnumerationBudget& budget) {
  if (tree.leaf_count() > budget.max_leaves || tree.node_count() > 64) {
    throw Error(Errc::budget_exceeded, std::to_string(tree.leaf_count()) + " leaves exceed the enumeration budget of " +
                                           std::to_string(budget.max_leaves));
  }
  if (k > budget.max_k) {
    throw Error(Errc::budget_exceeded, "k = " + std::to_string(k) + " exceeds the enumeration budget of " +
                                           std::to_string(budget.max_k));
  }
  if (k < 1 || k > tree.leaf_count()) {
    throw Error(Errc::budget_out_of_range,
                "k = " + std::to_string(k) + " outside 1.." + std::to_string(tree.leaf_count()));
  }
}

// Visits (nodes, foreground, size) masks. For C and D foreground == nodes.
class Enumerator {
 public:
  using Visit = std::function<void(Mask64 nodes, Mask64 foreground, std::size_t size)>;

  Enumerator(const Tree& tree, Consistency consistency, std::size_t k, EnumerationBudget budget, DSpace d_space,
             bool b_assignments)
      : tree_(tree),
        small_(small_tree(tree)),
        consistency_(consistency),
        k_(k),
        budget_(budget),
        d_space_(d_space),
        b_assignments_(b_assignments) {
    check_budget(tree, k, budget);
  }

  void run(const Visit& visit) {
    visit_ = &visit;
    if (consistency_ == Consistency::B) {
      std::vector<NodeId> open{tree_.root()};
      cuts(open, 0, 0);
    } else {
      subsets(0, 0, 0);
    }
  }

 private:
  void count() {
    if (++visited_ > budget_.max_candidates) {
      throw Error(Errc::budget_exceeded, "more than " + std::to_string(budget_.max_candidates) + " candidates");
    }
  }

  void cuts(std::vector<NodeId>& open, Mask64 mask, std::size_t size) {
    if (open.empty()) {
      if (!b_assignments_) {
        count();
        (*visit_)(mask, mask, size);
        return;
      }
      // Every subset of the cut, from the empty assignment upward.
      Mask64 sub = 0;
      do {
        count();
        (*visit_)(mask, sub, size);
        sub = (sub - mask) & mask;
      } while (sub != 0);
      return;
    }
    const NodeId node = open.back();
    open.pop_back();
    if (size + 1 + open.size() <= k_) cuts(open, mask | (Mask64{1} << node), size + 1);
    if (!tree_.is_leaf(node)) {
      open.push_back(tree_.children(node).right);
      open.push_back(tree_.children(node).left);
      cuts(open, mask, size);
      open.pop_back();
      open.pop_back();
    }
    open.push_back(node);
  }

  void subsets(std::size_t from, Mask64 mask, std::size_t size) {
    for (std::size_t pos = from; pos < small_.order.size(); ++pos) {
      const NodeId node = small_.order[pos];
      if (consistency_ == Consistency::C && ((small_.ancestors[node] | small_.descendants[node]) & mask) != 0) continue;
      const Mask64 next = mask | (Mask64{1} << node);
      if (consistency_ == Consistency::D && d_space_ == DSpace::solver_space && !in_solver_space(node, next)) continue;
      count();
      (*visit_)(next, next, size + 1);
      if (size + 1 < k_) subsets(pos + 1, next, size + 1);
    }
  }

  // The root only alone; no subtree holding more selected nodes than leaves.
  // Counts only grow, so a violation prunes every extension too.
  bool in_solver_space(NodeId added, Mask64 next) const {
    if (added == tree_.root() && next != (Mask64{1} << added)) return false;
    if ((next >> tree_.root()) & 1) return next == (Mask64{1} << tree_.root());
    Mask64 check = small_.ancestors[added] | (Mask64{1} << added);
    while (check != 0) {
      const auto n = static_cast<NodeId>(std::countr_zero(check));
      check &= check - 1;
      const Mask64 within = (small_.descendants[n] | (Mask64{1} << n)) & next;
      if (static_cast<std::size_t>(std::popcount(within)) > tree_.leaves_below(n)) return false;
    }
    return true;
  }

  const Tree& tree_;
  SmallTree small_;
  Consistency consistency_;
  std::size_t k_;
  EnumerationBudget budget_;
  DSpace d_space_;
  bool b_assignments_;
  const Visit* visit_ = nullptr;
  std::uint64_t visited_ = 0;
};

std::vector<NodeId> bits(Mask64 mask) {
  std::vector<NodeId> out;
  while (mask != 0) {
    out.push_back(static_cast<NodeId>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

std::uint32_t layer_in(const SmallTree& s, NodeId node, Mask64 mask) {
  return static_cast<std::uint32_t>(std::popcount(s.ancestors[node] & mask));
}

SegmentDims dims_of(const SmallTree& s, const NodeDims& dims, Consistency consistency, Mask64 nodes,
                    Mask64 foreground) {
  SegmentDims out;
  Mask64 m = consistency == Consistency::B ? foreground : nodes;
  while (m != 0) {
    const auto n = static_cast<NodeId>(std::countr_zero(m));
    m &= m - 1;
    const std::int64_t sign = consistency == Consistency::D && layer_in(s, n, nodes) % 2 == 1 ? -1 : 1;
    out.b += sign * dims.b[n];
    out.f += sign * dims.f[n];
  }
  return out;
}

NodeSelection make_selection(const SmallTree& s, Consistency consistency, Mask64 nodes, Mask64 foreground,
                             SegmentDims dims, bool complemented) {
  NodeSelection sel;
  sel.consistency = consistency;
  sel.nodes = bits(nodes);
  if (consistency == Consistency::B) sel.foreground = bits(foreground);
  if (consistency == Consistency::D) {
    for (const NodeId n : sel.nodes) sel.layers.push_back(layer_in(s, n, nodes));
  }
  sel.dims = dims;
  sel.complemented = complemented;
  return sel;
}

// Exact fraction num/den with den > 0, compared by cross-multiplication.
struct Frac {
  std::int64_t num = -1;
  std::int64_t den = 1;
  bool operator>(const Frac& o) const { return static_cast<Wide>(num) * o.den > static_cast<Wide>(o.num) * den; }
};

struct Scored {
  Frac value;
  bool complemented = false;
};

Scored objective_value(SegmentDims d, const NodeDims& dims, Objective objective) {
  const std::int64_t F = dims.foreground_total;
  const std::int64_t B = dims.background_total;
  const Frac direct{d.f, F + d.b};
  const Frac complement{F - d.f, F + B - d.b};
  switch (objective) {
    case Objective::jaccard: return {direct, false};
    case Objective::complement: return {complement, true};
    case Objective::best_of_both:
      return complement > direct ? Scored{complement, true} : Scored{direct, false};
  }
  return {};
}

void require_foreground(const NodeDims& dims) {
  if (dims.foreground_total <= 0) throw Error(Errc::empty_ground_truth, "ground truth has no foreground pixel");
}

}  // namespace

void enumerate_selections(const Tree& tree, Consistency consistency, std::size_t k,
                          const std::function<void(const NodeSelection&)>& visit, EnumerationBudget budget,
                          DSpace d_space) {
  Enumerator e(tree, consistency, k, budget, d_space, true);
  const SmallTree s = small_tree(tree);
  e.run([&](Mask64 nodes, Mask64 foreground, std::size_t) {
    visit(make_selection(s, consistency, nodes, foreground, {}, false));
  });
}

OracleBest brute_force_best(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k,
                            Objective objective, EnumerationBudget budget, DSpace d_space) {
  require_foreground(dims);
  Enumerator e(tree, consistency, k, budget, d_space, true);
  const SmallTree s = small_tree(tree);
  Scored best;
  Mask64 best_nodes = 0, best_fg = 0;
  SegmentDims best_dims;
  bool found = false;
  e.run([&](Mask64 nodes, Mask64 foreground, std::size_t) {
    const SegmentDims d = dims_of(s, dims, consistency, nodes, foreground);
    const Scored v = objective_value(d, dims, objective);
    if (!found || v.value > best.value) {
      found = true;
      best = v;
      best_nodes = nodes;
      best_fg = foreground;
      best_dims = d;
    }
  });
  return {Rational(best.value.num, best.value.den),
          make_selection(s, consistency, best_nodes, best_fg, best_dims, best.complemented)};
}

std::vector<Rational> brute_force_curve(const Tree& tree, const NodeDims& dims, Consistency consistency,
                                        std::size_t k_max, Objective objective, EnumerationBudget budget,
                                        DSpace d_space) {
  require_foreground(dims);
  Enumerator e(tree, consistency, k_max, budget, d_space, true);
  const SmallTree s = small_tree(tree);
  std::vector<Frac> per_size(k_max + 1);
  std::vector<bool> seen(k_max + 1, false);
  e.run([&](Mask64 nodes, Mask64 foreground, std::size_t size) {
    const Scored v = objective_value(dims_of(s, dims, consistency, nodes, foreground), dims, objective);
    if (!seen[size] || v.value > per_size[size]) {
      seen[size] = true;
      per_size[size] = v.value;
    }
  });
  std::vector<Rational> out;
  Frac running;
  bool any = false;
  for (std::size_t m = 1; m <= k_max; ++m) {
    if (seen[m] && (!any || per_size[m] > running)) {
      running = per_size[m];
      any = true;
    }
    out.emplace_back(running.num, running.den);
  }
  return out;
}

OracleBenefit brute_force_benefit(const Tree& tree, const Attribute& attribute, Consistency consistency,
                                  std::size_t k, EnumerationBudget budget) {
  Enumerator e(tree, consistency, k, budget, DSpace::solver_space, false);
  const SmallTree s = small_tree(tree);
  Wide best = 0;
  std::size_t best_size = 0;
  e.run([&](Mask64 nodes, Mask64, std::size_t size) {
    Wide total = 0;
    Mask64 m = nodes;
    while (m != 0) {
      const auto n = static_cast<NodeId>(std::countr_zero(m));
      m &= m - 1;
      const Wide v = attribute.scaled(n);
      switch (consistency) {
        case Consistency::B: total += v > 0 ? v : 0; break;
        case Consistency::C: total += v; break;
        case Consistency::D: total += layer_in(s, n, nodes) % 2 == 0 ? v : -v; break;
      }
    }
    if (best_size == 0 || total > best || (total == best && size < best_size)) {
      best = total;
      best_size = size;
    }
  });
  return {Rational::from_wide(best, attribute.omega().den()), best_size};
}

Tree random_tree(std::size_t leaf_count, Rng& rng) {
  if (leaf_count == 0) throw Error(Errc::bad_length, "a tree needs at least one leaf");
  const std::size_t n = 2 * leaf_count - 1;
  std::vector<std::int64_t> parents(n, -1);
  std::vector<NodeId> active;
  for (NodeId leaf = 0; leaf < leaf_count; ++leaf) active.push_back(leaf);
  for (std::size_t next = leaf_count; next < n; ++next) {
    const auto a = rng.uniform(0, active.size() - 1);
    auto b = rng.uniform(0, active.size() - 2);
    if (b >= a) ++b;
    parents[active[a]] = static_cast<std::int64_t>(next);
    parents[active[b]] = static_cast<std::int64_t>(next);
    const auto hi = std::max(a, b), lo = std::min(a, b);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(hi));
    active[lo] = static_cast<NodeId>(next);
  }
  return build_tree(parents, leaf_count);
}

NodeDims random_dims(const Tree& tree, std::int64_t max_total, Rng& rng) {
  const std::size_t leaves = tree.leaf_count();
  std::vector<std::int64_t> b(leaves, 0), f(leaves, 0);
  const auto foreground = static_cast<std::int64_t>(rng.uniform(1, static_cast<std::uint64_t>(max_total)));
  const auto background = static_cast<std::int64_t>(rng.uniform(0, static_cast<std::uint64_t>(max_total)));
  for (std::int64_t i = 0; i < foreground; ++i) ++f[rng.uniform(0, leaves - 1)];
  for (std::int64_t i = 0; i < background; ++i) ++b[rng.uniform(0, leaves - 1)];
  return dims_from_leaves(tree, b, f);
}

}  // namespace hierj
