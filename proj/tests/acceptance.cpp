// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "hierj/builders.hpp"
#include "hierj/cooptimal.hpp"
#include "hierj/oracle.hpp"

using namespace hierj;
using Clock = std::chrono::steady_clock;

namespace {

constexpr Consistency kAll[] = {Consistency::B, Consistency::C, Consistency::D};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict oracle_exactness() {
  Rng rng(20240601);
  const auto start = Clock::now();
  const std::size_t instances = 600;
  std::size_t cells = 0, mismatches = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto inst = fixtures::random_instance(rng, 4, 12);
    const std::size_t k_max = std::min<std::size_t>(6, inst.tree.leaf_count());
    for (const Consistency c : kAll) {
      const auto expected = brute_force_curve(inst.tree, inst.dims, c, k_max);
      for (std::size_t k = 1; k <= k_max; ++k) {
        ++cells;
        if (best_of_both(inst.tree, inst.dims, c, k).jaccard != expected[k - 1]) ++mismatches;
      }
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << instances << " instances, " << cells - mismatches << "/" << cells << " exact, " << elapsed << " s";
  return {mismatches == 0 && elapsed < 60.0, d.str()};
}

std::vector<Rational> values(const std::vector<CurvePoint>& points) {
  std::vector<Rational> out;
  for (const auto& p : points) out.push_back(p.result.jaccard);
  return out;
}

Verdict chain_table() {
  const Tree t = fixtures::chain::tree();
  const NodeDims dims = fixtures::chain::dims(t);
  const Rational half(1, 2), five7(5, 7), one(1);
  const std::vector<std::vector<Rational>> plain{
      {half, five7, five7, five7, one}, {five7, five7, one, one, one}, {five7, one, one, one, one}};
  const std::vector<std::vector<Rational>> both{
      {half, five7, five7, five7, one}, {five7, one, one, one, one}, {five7, one, one, one, one}};
  bool ok = true;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto got = values(curve(t, dims, kAll[i], 5, false));
    ok = ok && got == plain[i];
    ok = ok && got == brute_force_curve(t, dims, kAll[i], 5, Objective::jaccard, {}, DSpace::solver_space);
    ok = ok && values(curve(t, dims, kAll[i], 5)) == both[i];
  }
  const auto b = values(curve(t, dims, Consistency::B, 5, false));
  const bool shape = std::all_of(b.begin(), b.end() - 1, [&](const Rational& r) { return r < one; }) &&
                     b.back() == one;
  return {ok && shape, "J_c[2] = 5/7, J_c[3] = 1, J_d[2] = 1, J_b[1..4] < 1, J_b[5] = 1"};
}

Verdict ordering() {
  Rng rng(77);
  std::size_t instances = 0, violations = 0;
  auto check = [&](const fixtures::Instance& inst, std::size_t k_max, bool with_complement) {
    ++instances;
    std::vector<std::vector<Rational>> j;
    for (const Consistency c : kAll) j.push_back(values(curve(inst.tree, inst.dims, c, k_max, with_complement)));
    for (std::size_t k = 0; k < k_max; ++k) {
      if (j[0][k] > j[1][k] || j[1][k] > j[2][k]) ++violations;
      for (std::size_t c = 0; c < 3; ++c) {
        if (k + 1 < k_max && j[c][k] > j[c][k + 1]) ++violations;
      }
    }
  };
  for (int i = 0; i < 200; ++i) {
    const auto inst = fixtures::random_instance(rng, 4, 12);
    check(inst, std::min<std::size_t>(6, inst.tree.leaf_count()), i % 2 == 0);
  }
  for (int i = 0; i < 40; ++i) {
    const auto inst = fixtures::random_instance(rng, 20, 120, 2000);
    check(inst, 12, i % 2 == 0);
  }
  return {violations == 0, std::to_string(instances) + " instances, " + std::to_string(violations) + " violations"};
}

Verdict convergence() {
  Rng rng(91);
  std::vector<std::size_t> iterations;
  std::size_t bad_traces = 0;
  auto record = [&](const OptimizationResult& r) {
    iterations.push_back(r.iterations);
    for (std::size_t i = 2; i < r.omega_trace.size(); ++i) {
      if (!(r.omega_trace[i - 1] < r.omega_trace[i])) ++bad_traces;
    }
  };
  for (int i = 0; i < 300; ++i) {
    const auto inst = fixtures::random_instance(rng, 4, 60, 500);
    const std::size_t k_max = std::min<std::size_t>(8, inst.tree.leaf_count());
    for (const Consistency c : kAll) {
      for (std::size_t k = 1; k <= k_max; ++k) {
        record(optimize_jaccard(inst.tree, inst.dims, c, k));
        record(optimize_jaccard_complement(inst.tree, inst.dims, c, k));
      }
    }
  }
  std::sort(iterations.begin(), iterations.end());
  const std::size_t median = iterations[iterations.size() / 2], worst = iterations.back();
  std::ostringstream d;
  d << iterations.size() << " runs, median " << median << " iterations, max " << worst << ", " << bad_traces
    << " non-increasing traces";
  return {bad_traces == 0 && worst <= 10, d.str()};
}

Verdict unlimited_agreement() {
  Rng rng(53);
  std::size_t trials = 0, mismatches = 0;
  for (int i = 0; i < 150; ++i) {
    const auto inst = fixtures::random_instance(rng, 1, 40, 300);
    const auto unlimited = optimize_jaccard_unlimited(inst.tree, inst.dims).jaccard;
    for (const Consistency c : kAll) {
      ++trials;
      if (optimize_jaccard(inst.tree, inst.dims, c, inst.tree.leaf_count()).jaccard != unlimited) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(trials - mismatches) + "/" + std::to_string(trials) + " agree"};
}

// Disk of foreground in a synthetic square image; min wall time over repetitions.
double timed_d_run(std::size_t side, int repetitions) {
  const auto built = geometric_tree(side, side);
  Mask mask{side, side, std::vector<std::uint8_t>(side * side)};
  const double c = side / 2.0, r = side / 3.0;
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const double dx = x + 0.5 - c, dy = y + 0.5 - c * 0.9;
      mask.values[y * side + x] = dx * dx + dy * dy < r * r ? 1 : 0;
    }
  }
  const NodeDims dims = annotate_dims(built.tree, mask, built.labels);
  double best = 1e9;
  for (int i = 0; i < repetitions; ++i) {
    const auto start = Clock::now();
    const auto result = best_of_both(built.tree, dims, Consistency::D, 20);
    best = std::min(best, seconds_since(start));
    if (result.jaccard <= Rational(0)) return 1e9;
  }
  return best;
}

Verdict performance() {
  const double small = timed_d_run(256, 3);
  const double large = timed_d_run(512, 2);
  std::ostringstream d;
  d << "256x256 " << small << " s, 512x512 " << large << " s, ratio " << large / small;
  return {small < 5.0 && large <= 12.0 * small, d.str()};
}

Verdict determinism() {
  auto chain = [](const std::string& f) { return fixtures::data_dir() + "/chain/" + f; };
  std::map<std::string, std::string> reference;
  bool same = true;
  std::size_t runs = 0;
  for (const char* cap : {"1", "2", "4", "8", "1"}) {
    ::setenv("HIERJ_THREADS", cap, 1);
    for (const std::string complement : {"auto", "off"}) {
      std::ostringstream out, err;
      const int code = cli::run({"curve", "--tree", chain("tree.txt"), "--labels", chain("labels.pgm"), "--gt",
                                 chain("gt.pgm"), "--consistency", "all", "--kmax", "5", "--complement", complement},
                                out, err);
      ++runs;
      const auto [it, first] = reference.emplace(complement, out.str());
      same = same && code == cli::kExitOk && it->second == out.str();
    }
  }
  ::unsetenv("HIERJ_THREADS");
  return {same, std::to_string(runs) + " runs under thread caps 1, 2, 4, 8"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"oracle exactness", oracle_exactness},
      {"chain golden table", chain_table},
      {"ordering and monotonicity", ordering},
      {"convergence", convergence},
      {"unlimited solver agreement", unlimited_agreement},
      {"performance", performance},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
