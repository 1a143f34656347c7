#include "hierj/cooptimal.hpp"

#include <string>

#include "hierj/error.hpp"
#include "hierj/solvers.hpp"

namespace hierj {

namespace {

void check_inputs(const Tree& tree, const NodeDims& dims, std::size_t k, const Rational& omega0) {
  if (dims.foreground_total <= 0) throw Error(Errc::empty_ground_truth, "ground truth has no foreground pixel");
  if (k < 1 || k > tree.leaf_count()) {
    throw Error(Errc::budget_out_of_range,
                "k = " + std::to_string(k) + " outside 1.." + std::to_string(tree.leaf_count()));
  }
  if (omega0 < Rational(0) || omega0 > Rational(1)) {
    throw Error(Errc::budget_out_of_range, "starting omega " + omega0.str() + " outside [0, 1]");
  }
}

NodeSelection to_selection(Consistency consistency, const SolverResult& solved, const NodeDims& dims,
                           bool complemented) {
  NodeSelection s;
  s.consistency = consistency;
  s.nodes = solved.nodes;
  s.complemented = complemented;
  if (consistency == Consistency::B) s.foreground = solved.positive_subset;
  if (consistency == Consistency::D) s.layers = solved.layers;
  const auto& summed = consistency == Consistency::B ? s.foreground : s.nodes;
  for (std::size_t i = 0; i < summed.size(); ++i) {
    const std::int64_t sign = (consistency == Consistency::D && s.layers[i] % 2 == 1) ? -1 : 1;
    s.dims.b += sign * dims.b[summed[i]];
    s.dims.f += sign * dims.f[summed[i]];
  }
  return s;
}

// Generic co-optimality iteration over a solver that maximizes the projection
// for a given ω and reports the resulting selection.
template <class Solve>
OptimizationResult iterate(const NodeDims& dims, bool complemented, Rational omega0, Solve&& solve_at) {
  OptimizationResult out;
  out.complemented = complemented;

  auto step = [&](const Rational& omega) {
    out.omega_trace.push_back(omega);
    ++out.iterations;
    out.selection = solve_at(omega);
    return score(out.selection, dims);
  };

  Rational omega = step(omega0);
  Rational previous;
  do {
    const Rational next = step(omega);
    previous = omega;
    omega = next;
  } while (omega > previous);
  // On exit ω == previous: the last maximizer reproduces the ω it was solved at.
  out.jaccard = score(out.selection, dims);
  return out;
}

OptimizationResult optimize(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k,
                            Rational omega0, bool complemented) {
  check_inputs(tree, dims, k, omega0);
  return iterate(dims, complemented, omega0, [&](const Rational& omega) {
    const Attribute attribute(dims, omega, complemented);
    return to_selection(consistency, solve(consistency, tree, attribute, k), dims, complemented);
  });
}

}  // namespace

OptimizationResult optimize_jaccard(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k,
                                    Rational omega0) {
  return optimize(tree, dims, consistency, k, omega0, false);
}

OptimizationResult optimize_jaccard_complement(const Tree& tree, const NodeDims& dims, Consistency consistency,
                                               std::size_t k, Rational omega0) {
  return optimize(tree, dims, consistency, k, omega0, true);
}

OptimizationResult best_of_both(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k) {
  auto direct = optimize_jaccard(tree, dims, consistency, k);
  auto complement = optimize_jaccard_complement(tree, dims, consistency, k);
  return complement.jaccard > direct.jaccard ? std::move(complement) : std::move(direct);
}

OptimizationResult optimize_jaccard_unlimited(const Tree& tree, const NodeDims& dims) {
  check_inputs(tree, dims, 1, Rational(0));
  return iterate(dims, false, Rational(0), [&](const Rational& omega) {
    const Attribute attribute(dims, omega);
    return to_selection(Consistency::B, solve_unlimited(tree, attribute), dims, false);
  });
}

std::vector<CurvePoint> curve(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k_max,
                              bool with_complement) {
  if (k_max < 1 || k_max > tree.leaf_count()) {
    throw Error(Errc::budget_out_of_range,
                "k_max = " + std::to_string(k_max) + " outside 1.." + std::to_string(tree.leaf_count()));
  }
  std::vector<CurvePoint> points;
  points.reserve(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    points.push_back({k, with_complement ? best_of_both(tree, dims, consistency, k)
                                         : optimize_jaccard(tree, dims, consistency, k)});
  }
  return points;
}

}  // namespace hierj
