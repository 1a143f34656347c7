#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "fixtures.hpp"
#include "hierj/error.hpp"
#include "hierj/tree.hpp"

using namespace hierj;

namespace {

Errc build_error(std::vector<std::int64_t> parents, std::size_t leaves) {
  try {
    build_tree(parents, leaves);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::io_error;
}

std::vector<NodeId> leaves_of(const Tree& t, NodeId n) {
  std::vector<NodeId> out;
  for (NodeId l = 0; l < t.leaf_count(); ++l) {
    if (t.contains(n, l)) out.push_back(l);
  }
  return out;
}

}  // namespace

TEST_CASE("smallest tree") {
  const std::vector<std::int64_t> parents{2, 2, -1};
  const Tree t = build_tree(parents, 2);
  CHECK(t.root() == 2);
  CHECK(std::vector<NodeId>(t.post_order().begin(), t.post_order().end()) == std::vector<NodeId>{0, 1, 2});
  CHECK(t.children(2).left == 0);
  CHECK(t.children(2).right == 1);
}

TEST_CASE("balanced four leaves") {
  const std::vector<std::int64_t> parents{4, 4, 5, 5, 6, 6, -1};
  const Tree t = build_tree(parents, 4);
  CHECK(t.node_count() == 7);
  CHECK(t.leaves_below(6) == 4);
  CHECK(t.depth(0) == 2);
  CHECK(t.contains(6, 3));
  CHECK(!t.contains(4, 3));
  CHECK(t.contains(5, 5));
}

TEST_CASE("single node tree") {
  const std::vector<std::int64_t> parents{-1};
  const Tree t = build_tree(parents, 1);
  CHECK(t.root() == 0);
  CHECK(t.is_leaf(0));
}

TEST_CASE("invalid parent arrays") {
  CHECK(build_error({2, 2, 3}, 2) == Errc::not_binary);
  CHECK(build_error({2, 2}, 2) == Errc::bad_length);
  CHECK(build_error({3, 3, 4, -1, -1}, 3) == Errc::multiple_roots);
  CHECK(build_error({2, 2, 2}, 2) == Errc::cycle);
  CHECK(build_error({4, 4, 4, 6, 6, 6, -1}, 4) == Errc::not_binary);
  CHECK(build_error({1, -1, 1}, 2) == Errc::not_binary);
}

TEST_CASE("post order visits children first") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Tree t = random_tree(rng.uniform(1, 30), rng);
    std::vector<std::size_t> pos(t.node_count());
    for (std::size_t i = 0; i < t.node_count(); ++i) pos[t.post_order()[i]] = i;
    for (NodeId n = 0; n < t.node_count(); ++n) {
      if (n != t.root()) CHECK(pos[n] < pos[t.parent(n)]);
    }
    CHECK(t.post_order().back() == t.root());
  }
}

TEST_CASE("annotate two by two") {
  const std::vector<std::int64_t> parents{4, 4, 5, 5, 6, 6, -1};
  const Tree t = build_tree(parents, 4);
  const LabelMap labels{2, 2, {0, 1, 2, 3}};
  const Mask mask{2, 2, {1, 1, 0, 0}};
  const NodeDims d = annotate_dims(t, mask, labels);
  CHECK(d.b[6] == 2);
  CHECK(d.f[6] == 2);
  CHECK(d.b[4] == 0);
  CHECK(d.f[4] == 2);
  CHECK(d.foreground_total == 2);
  CHECK(d.background_total == 2);

  const NodeDims empty = annotate_dims(t, Mask{2, 2, {0, 0, 0, 0}}, labels);
  CHECK(empty.foreground_total == 0);
  CHECK(std::all_of(empty.f.begin(), empty.f.end(), [](auto v) { return v == 0; }));
}

TEST_CASE("annotate rejects bad inputs") {
  const std::vector<std::int64_t> parents{4, 4, 5, 5, 6, 6, -1};
  const Tree t = build_tree(parents, 4);
  CHECK_THROWS_AS(annotate_dims(t, Mask{2, 2, {1, 1, 0, 0}}, LabelMap{2, 2, {0, 1, 2, 7}}), Error);
  CHECK_THROWS_AS(annotate_dims(t, Mask{1, 4, {1, 1, 0, 0}}, LabelMap{2, 2, {0, 1, 2, 3}}), Error);
  try {
    validate_leaf_map(t, LabelMap{2, 2, {0, 1, 2, 2}});
    FAIL("leaf 3 owns no pixel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::label_out_of_range);
  }
}

TEST_CASE("annotate matches per-node recount") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Tree t = random_tree(16, rng);
    LabelMap labels{8, 8, std::vector<std::uint32_t>(64)};
    Mask mask{8, 8, std::vector<std::uint8_t>(64)};
    for (std::uint32_t i = 0; i < 64; ++i) {
      labels.labels[i] = i < 16 ? i : static_cast<std::uint32_t>(rng.uniform(0, 15));
      mask.values[i] = static_cast<std::uint8_t>(rng.uniform(0, 1));
    }
    const NodeDims d = annotate_dims(t, mask, labels);
    for (NodeId n = 0; n < t.node_count(); ++n) {
      std::int64_t b = 0, f = 0;
      for (std::size_t p = 0; p < 64; ++p) {
        if (!t.contains(n, labels.labels[p])) continue;
        (mask.values[p] ? f : b) += 1;
      }
      CHECK(d.b[n] == b);
      CHECK(d.f[n] == f);
    }
  }
}

TEST_CASE("layers of the nested example") {
  using fixtures::fig1::N;
  const Tree t = fixtures::fig1::tree();
  const std::vector<NodeId> nodes{N(4), N(7), N(10), N(14)};
  const auto la = layers(t, nodes);
  CHECK(la.max_layer == 2);
  CHECK(la.layer_of(N(4)) == 0);
  CHECK(la.layer_of(N(14)) == 0);
  CHECK(la.layer_of(N(10)) == 1);
  CHECK(la.layer_of(N(7)) == 2);
}

TEST_CASE("layers of disjoint and chained nodes") {
  const Tree t = fixtures::chain::tree();
  using namespace fixtures::chain;
  const std::vector<NodeId> disjoint{F1, F2, M1, H};
  for (const auto& [node, layer] : layers(t, disjoint).entries) CHECK(layer == 0);
  const std::vector<NodeId> nested{M3, M2, M1};
  const auto la = layers(t, nested);
  CHECK(la.layer_of(M3) == 0);
  CHECK(la.layer_of(M2) == 1);
  CHECK(la.layer_of(M1) == 2);
}

TEST_CASE("cuts") {
  const Tree t = fixtures::chain::tree();
  using namespace fixtures::chain;
  CHECK(is_cut(t, std::vector<NodeId>{Root}));
  CHECK(is_cut(t, std::vector<NodeId>{F1, F2, F3, G, H}));
  CHECK(is_cut(t, std::vector<NodeId>{M3, H}));
  CHECK(!is_cut(t, std::vector<NodeId>{Root, G}));
  CHECK(!is_cut(t, std::vector<NodeId>{M2, H}));
  CHECK(is_antichain(t, std::vector<NodeId>{M2, H}));
  CHECK(!is_antichain(t, std::vector<NodeId>{M2, F3}));
}

TEST_CASE("coarsest partition of a difference") {
  using fixtures::fig1::N;
  const Tree t = fixtures::fig1::tree();
  std::vector<NodeId> target;
  for (NodeId l = 0; l < t.leaf_count(); ++l) {
    if (t.contains(N(15), l) && !t.contains(N(11), l)) target.push_back(l);
  }
  CHECK(coarsest_partition(t, target) == std::vector<NodeId>{N(4), N(14)});

  std::vector<NodeId> all(t.leaf_count());
  for (NodeId l = 0; l < t.leaf_count(); ++l) all[l] = l;
  CHECK(coarsest_partition(t, all) == std::vector<NodeId>{t.root()});
  CHECK_THROWS_AS(coarsest_partition(t, std::vector<NodeId>{}), Error);
}

TEST_CASE("coarsest partition is the smallest exact antichain") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const Tree t = random_tree(12, rng);
    std::vector<NodeId> target;
    for (NodeId l = 0; l < 12; ++l) {
      if (rng.uniform(0, 1)) target.push_back(l);
    }
    if (target.empty()) target.push_back(0);
    const std::set<NodeId> wanted(target.begin(), target.end());

    std::size_t best = 0;
    enumerate_selections(t, Consistency::C, 12, [&](const NodeSelection& s) {
      std::set<NodeId> covered;
      for (const NodeId n : s.nodes) {
        for (const NodeId l : leaves_of(t, n)) covered.insert(l);
      }
      if (covered == wanted && (best == 0 || s.nodes.size() < best)) best = s.nodes.size();
    }, EnumerationBudget{12, 12, 50'000'000});
    const auto got = coarsest_partition(t, target);
    CHECK(got.size() == best);
    CHECK(is_antichain(t, got));
  }
}
