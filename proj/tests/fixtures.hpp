#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hierj/oracle.hpp"
#include "hierj/tree.hpp"

namespace fixtures {

using hierj::NodeId;

// Chain T*: leaves F1, F2, F3, G, H; M1 = F3+G, M2 = M1+F2, M3 = M2+F1, root = M3+H.
namespace chain {
inline constexpr NodeId F1 = 0, F2 = 1, F3 = 2, G = 3, H = 4, M1 = 5, M2 = 6, M3 = 7, Root = 8;

inline hierj::Tree tree() {
  const std::vector<std::int64_t> parents{7, 6, 5, 5, 8, 6, 7, 8, -1};
  return hierj::build_tree(parents, 5);
}

inline hierj::NodeDims dims(const hierj::Tree& t) {
  const std::vector<std::int64_t> b{0, 0, 0, 4, 6};
  const std::vector<std::int64_t> f{3, 3, 4, 0, 0};
  return hierj::dims_from_leaves(t, b, f);
}
}  // namespace chain

// The 15-node example hierarchy: N1..N15 at indices 0..14.
namespace fig1 {
inline constexpr NodeId N(int j) { return static_cast<NodeId>(j - 1); }

inline hierj::Tree tree() {
  const std::vector<std::int64_t> parents{10, 8, 8, 12, 11, 9, 9, 11, 10, 13, 12, 13, 14, 14, -1};
  return hierj::build_tree(parents, 8);
}
}  // namespace fig1

inline std::string data_dir() { return HIERJ_TEST_DATA; }

struct Instance {
  hierj::Tree tree;
  hierj::NodeDims dims;
};

inline Instance random_instance(hierj::Rng& rng, std::size_t min_leaves, std::size_t max_leaves,
                                std::int64_t max_total = 50) {
  const auto leaves = rng.uniform(min_leaves, max_leaves);
  auto tree = hierj::random_tree(leaves, rng);
  auto dims = hierj::random_dims(tree, max_total, rng);
  return {std::move(tree), std::move(dims)};
}

}  // namespace fixtures
