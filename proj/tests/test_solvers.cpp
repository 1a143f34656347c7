#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "hierj/error.hpp"
#include "hierj/oracle.hpp"
#include "hierj/solvers.hpp"

using namespace hierj;
namespace ch = fixtures::chain;

namespace {

Rational value_of(const SolverResult& r, const Attribute& a) { return r.benefit.at(a.omega()); }

Rational random_omega(Rng& rng) {
  const auto den = static_cast<std::int64_t>(rng.uniform(1, 12));
  return Rational(static_cast<std::int64_t>(rng.uniform(0, static_cast<std::uint64_t>(den))), den);
}

}  // namespace

TEST_CASE("b at full budget and zero omega keeps all foreground") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = fixtures::random_instance(rng, 1, 20);
    const Attribute a(inst.dims, Rational(0));
    const auto r = solve_b(inst.tree, a, inst.tree.leaf_count());
    CHECK(value_of(r, a) == Rational(inst.dims.foreground_total));
    CHECK(is_cut(inst.tree, r.nodes));
  }
}

TEST_CASE("b on the chain") {
  const Tree t = ch::tree();
  const NodeDims dims = ch::dims(t);
  const Attribute a(dims, Rational(0));

  const auto one = solve_b(t, a, 1);
  CHECK(one.nodes == std::vector<NodeId>{ch::Root});
  CHECK(value_of(one, a) == Rational(10));

  const auto full = solve_b(t, a, 2, {Extraction::full_budget, true});
  CHECK(full.nodes == std::vector<NodeId>{ch::H, ch::M3});
  CHECK(full.positive_subset == std::vector<NodeId>{ch::M3});
  CHECK(value_of(full, a) == Rational(10));

  // Same benefit is already reached by the root alone.
  const auto minimal = solve_b(t, a, 2);
  CHECK(minimal.size_used == 1);
  CHECK(value_of(minimal, a) == Rational(10));
}

TEST_CASE("c picks the best single node at k = 1") {
  const Tree t = ch::tree();
  const NodeDims dims = ch::dims(t);
  const Attribute a(dims, Rational(1, 3));
  const auto r = solve_c(t, a, 1);
  REQUIRE(r.nodes.size() == 1);
  for (NodeId n = 0; n < t.node_count(); ++n) CHECK(a.value(n) <= a.value(r.nodes[0]));

  const auto two = solve_c(t, Attribute(dims, Rational(0)), 2);
  CHECK(two.benefit.f == 10);
}

TEST_CASE("c with all attributes negative returns the best single node") {
  const Tree t = ch::tree();
  const std::vector<std::int64_t> b{5, 4, 7, 3, 6}, f{1, 0, 2, 0, 1};
  const NodeDims dims = dims_from_leaves(t, b, f);
  const Attribute a(dims, Rational(1));
  const auto r = solve_c(t, a, 4);
  CHECK(r.size_used == 1);
  Rational best = a.value(0);
  for (NodeId n = 0; n < t.node_count(); ++n) best = std::max(best, a.value(n));
  CHECK(value_of(r, a) == best);
  CHECK(value_of(r, a) == brute_force_benefit(t, a, Consistency::C, 4).value);
}

TEST_CASE("d at k = 1 equals c") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = fixtures::random_instance(rng, 1, 15);
    const Attribute a(inst.dims, random_omega(rng));
    const auto d = solve_d(inst.tree, a, 1);
    CHECK(value_of(d, a) == value_of(solve_c(inst.tree, a, 1), a));
    CHECK(d.layers == std::vector<std::uint32_t>{0});
  }
}

TEST_CASE("d on the chain nests the background leaf") {
  const Tree t = ch::tree();
  const NodeDims dims = ch::dims(t);
  const Attribute zero(dims, Rational(0));
  CHECK(solve_d(t, zero, 2).benefit.f == 10);

  const Attribute a(dims, Rational(5, 7));
  const auto r = solve_d(t, a, 2);
  CHECK(r.nodes == std::vector<NodeId>{ch::G, ch::M3});
  CHECK(r.layers == std::vector<std::uint32_t>{1, 0});
  CHECK(r.benefit == BenefitPair{10, 0});
}

TEST_CASE("d on the nested example shape") {
  const Tree t = fixtures::fig1::tree();
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const NodeDims dims = random_dims(t, 30, rng);
    const Attribute a(dims, random_omega(rng));
    for (std::size_t k = 1; k <= 5; ++k) {
      CHECK(value_of(solve_d(t, a, k), a) == brute_force_benefit(t, a, Consistency::D, k).value);
    }
  }
}

TEST_CASE("solvers reach the exhaustive optimum") {
  Rng rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const auto inst = fixtures::random_instance(rng, 1, 9);
    const Attribute a(inst.dims, random_omega(rng), rng.uniform(0, 1) == 1);
    const std::size_t k_max = std::min<std::size_t>(5, inst.tree.leaf_count());
    for (const Consistency c : {Consistency::B, Consistency::C, Consistency::D}) {
      for (std::size_t k = 1; k <= k_max; ++k) {
        const auto r = solve(c, inst.tree, a, k);
        const auto expected = brute_force_benefit(inst.tree, a, c, k);
        INFO("consistency ", consistency_letter(c), " k ", k, " trial ", trial);
        CHECK(value_of(r, a) == expected.value);
        CHECK(r.size_used == expected.min_size);
        CHECK(r.nodes.size() <= k);
        CHECK(benefit(inst.tree, r.nodes, a, c) == expected.value);
      }
    }
  }
}

TEST_CASE("b depth pruning does not change the optimum") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = fixtures::random_instance(rng, 1, 40, 200);
    const Attribute a(inst.dims, random_omega(rng));
    for (std::size_t k = 1; k <= std::min<std::size_t>(8, inst.tree.leaf_count()); ++k) {
      const auto pruned = solve_b(inst.tree, a, k, {Extraction::minimal_best, true});
      const auto full = solve_b(inst.tree, a, k, {Extraction::minimal_best, false});
      CHECK(value_of(pruned, a) == value_of(full, a));
      CHECK(pruned.size_used == full.size_used);
    }
  }
}

TEST_CASE("minimal best") {
  const std::vector<Wide> increasing{1, 2, 3, 4};
  CHECK(minimal_best(increasing) == 4);
  const std::vector<Wide> plateau{1, 2, 5, 5, 5};
  CHECK(minimal_best(plateau) == 3);
  const std::vector<Wide> peak{-3, 7, 2};
  CHECK(minimal_best(peak) == 2);
}

TEST_CASE("extraction at the minimal size matches the full budget value") {
  Rng rng(57);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = fixtures::random_instance(rng, 2, 30, 100);
    const Attribute a(inst.dims, random_omega(rng));
    const std::size_t k = std::min<std::size_t>(6, inst.tree.leaf_count());
    for (const Consistency c : {Consistency::B, Consistency::C, Consistency::D}) {
      const auto minimal = solve(c, inst.tree, a, k);
      const auto full = solve(c, inst.tree, a, k, {Extraction::full_budget, true});
      const Wide top = *std::max_element(full.root_benefits.begin(), full.root_benefits.end());
      CHECK(value_of(minimal, a) == Rational::from_wide(top, a.omega().den()));
      CHECK(minimal.size_used <= full.size_used);
      CHECK(Rational::from_wide(full.root_benefits.back(), a.omega().den()) == value_of(full, a));
    }
  }
}

TEST_CASE("unlimited solver") {
  const Tree t = ch::tree();
  const NodeDims dims = ch::dims(t);

  const auto everything = solve_unlimited(t, Attribute(dims, Rational(0)));
  CHECK(everything.benefit.f == 10);

  const Attribute a(dims, Rational(5, 7));
  const auto r = solve_unlimited(t, a);
  CHECK(value_of(r, a) == brute_force_benefit(t, a, Consistency::B, 5).value);
  CHECK(value_of(r, a) == Rational(10));
  CHECK(is_cut(t, r.nodes));

  const std::vector<std::int64_t> b{1, 1, 1, 1, 1}, f{1, 1, 1, 1, 1};
  const NodeDims flat = dims_from_leaves(t, b, f);
  const auto root_only = solve_unlimited(t, Attribute(flat, Rational(0)));
  CHECK(root_only.nodes == std::vector<NodeId>{ch::Root});
  CHECK(root_only.positive_subset == std::vector<NodeId>{ch::Root});

  const std::vector<std::int64_t> zero{0, 0, 0, 0, 0};
  const NodeDims background = dims_from_leaves(t, b, zero);
  const auto nothing = solve_unlimited(t, Attribute(background, Rational(1, 2)));
  CHECK(nothing.nodes == std::vector<NodeId>{ch::Root});
  CHECK(nothing.positive_subset.empty());
  CHECK(nothing.benefit == BenefitPair{});
}

TEST_CASE("unlimited solver matches every cut") {
  Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = fixtures::random_instance(rng, 1, 10);
    const Attribute a(inst.dims, random_omega(rng));
    const auto r = solve_unlimited(inst.tree, a);
    const auto expected = brute_force_benefit(inst.tree, a, Consistency::B, inst.tree.leaf_count(),
                                              EnumerationBudget{12, 12, 50'000'000});
    CHECK(value_of(r, a) == expected.value);
    CHECK(r.size_used == expected.min_size);
  }
}

TEST_CASE("large pixel counts stay exact") {
  const Tree t = ch::tree();
  const std::int64_t big = 400'000'000;
  const std::vector<std::int64_t> b{0, 3, 1, big, big - 7}, f{big, big - 1, 5, 0, 2};
  const NodeDims dims = dims_from_leaves(t, b, f);
  const Attribute a(dims, Rational(999'999'937, 1'000'000'007));
  for (const Consistency c : {Consistency::B, Consistency::C, Consistency::D}) {
    for (std::size_t k = 1; k <= 5; ++k) {
      CHECK(value_of(solve(c, t, a, k), a) == brute_force_benefit(t, a, c, k).value);
    }
  }
}

TEST_CASE("budget outside 1..leaf_count") {
  const Tree t = ch::tree();
  const Attribute a(ch::dims(t), Rational(0));
  for (const Consistency c : {Consistency::B, Consistency::C, Consistency::D}) {
    CHECK_THROWS_AS(solve(c, t, a, 0), Error);
    CHECK_THROWS_AS(solve(c, t, a, 6), Error);
  }
}
