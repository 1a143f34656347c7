#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hierj/builders.hpp"
#include "hierj/cooptimal.hpp"
#include "hierj/error.hpp"
#include "hierj/io.hpp"
#include "hierj/oracle.hpp"

namespace hierj::cli {

namespace {

struct BuildArgs {
  std::string kind = "geometric";
  std::size_t width = 0;
  std::size_t height = 0;
  std::string input;
  std::string superpixels;
  std::uint64_t filter_area = 0;
  std::string out;
  std::string labels_out;
};

struct CurveArgs {
  std::string tree;
  std::string labels;
  std::string gt;
  std::string consistency = "all";
  std::size_t kmax = 0;
  std::string complement = "auto";
  std::string out;
  std::string image_id;
  bool timing = false;
};

struct VerifyArgs {
  std::size_t max_leaves = 12;
  std::size_t max_k = 6;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
};

struct AnnotateArgs {
  std::string tree;
  std::string labels;
  std::string gt;
  std::string out;
};

void emit(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << bytes;
  } else {
    io::write_file(path, bytes);
  }
}

LabelMap load_labels(const std::string& path) { return io::to_label_map(io::parse_pgm(io::read_file(path))); }

int cmd_build(const BuildArgs& a, std::ostream& out) {
  BuildRecipe recipe;
  recipe.area_filter_threshold = a.filter_area;
  if (a.kind == "geometric") {
    recipe.kind = BuildKind::geometric;
  } else if (a.kind == "l2") {
    recipe.kind = BuildKind::l2_mst;
  } else if (a.kind == "weights") {
    recipe.kind = BuildKind::external_weights;
  } else {
    throw Error(Errc::parse_error, "unknown --kind '" + a.kind + "'");
  }

  std::optional<LabelMap> superpixels;
  if (!a.superpixels.empty()) superpixels = load_labels(a.superpixels);

  BuiltTree built;
  switch (recipe.kind) {
    case BuildKind::geometric: {
      std::size_t w = a.width, h = a.height;
      if (!a.input.empty()) {
        const auto image = io::parse_ppm(io::read_file(a.input));
        w = image.width;
        h = image.height;
      }
      if (w == 0 || h == 0) throw Error(Errc::shape_mismatch, "geometric build needs --width/--height or --input");
      built = geometric_tree(w, h);
      break;
    }
    case BuildKind::l2_mst: {
      if (a.input.empty()) throw Error(Errc::parse_error, "l2 build needs --input image.ppm");
      const auto image = io::parse_ppm(io::read_file(a.input));
      built = l2_mst_tree(image, superpixels ? &*superpixels : nullptr);
      break;
    }
    case BuildKind::external_weights: {
      if (a.input.empty()) throw Error(Errc::parse_error, "weights build needs --input edges.txt");
      const auto graph = io::parse_edges(io::read_file(a.input));
      built.tree = external_weight_tree(graph);
      if (superpixels) built.labels = *superpixels;
      break;
    }
  }

  if (recipe.area_filter_threshold > 0) {
    std::vector<std::uint64_t> areas(built.tree.leaf_count(), 1);
    if (!built.labels.labels.empty()) areas = leaf_areas(built.tree, built.labels);
    built.tree = filter_small_areas(built.tree, areas, recipe.area_filter_threshold);
  }

  emit(a.out, io::tree_to_string(built.tree), out);
  if (!a.labels_out.empty()) {
    if (built.labels.labels.empty()) throw Error(Errc::shape_mismatch, "no label map for this kind of build");
    std::ostringstream pgm;
    io::write_pgm(pgm, io::from_label_map(built.labels));
    io::write_file(a.labels_out, pgm.str());
  }
  return kExitOk;
}

// Runs task(i) for i in [0, count) on up to `threads` workers. The first
// failure in index order is rethrown.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

int cmd_curve(const CurveArgs& a, std::ostream& out) {
  std::vector<Consistency> kinds;
  if (a.consistency == "all") {
    kinds = {Consistency::B, Consistency::C, Consistency::D};
  } else {
    kinds = {parse_consistency(a.consistency)};
  }
  if (a.complement != "auto" && a.complement != "off") {
    throw Error(Errc::parse_error, "--complement must be auto or off");
  }
  const bool with_complement = a.complement == "auto";

  const Tree tree = io::parse_tree(io::read_file(a.tree));
  const LabelMap labels = load_labels(a.labels);
  const Mask mask = io::to_mask(io::parse_pgm(io::read_file(a.gt)));
  if (a.kmax < 1 || a.kmax > tree.leaf_count()) {
    throw Error(Errc::budget_out_of_range,
                "--kmax " + std::to_string(a.kmax) + " outside 1.." + std::to_string(tree.leaf_count()));
  }
  const NodeDims dims = annotate_dims(tree, mask, labels);
  if (dims.foreground_total <= 0) throw Error(Errc::empty_ground_truth, "ground truth has no foreground pixel");

  const std::string image_id =
      a.image_id.empty() ? std::filesystem::path(a.gt).stem().string() : a.image_id;
  std::vector<io::CurveRecord> records(kinds.size() * a.kmax);
  parallel_for(records.size(), thread_cap(), [&](std::size_t cell) {
    const Consistency c = kinds[cell / a.kmax];
    const std::size_t k = cell % a.kmax + 1;
    const auto start = std::chrono::steady_clock::now();
    const auto result = with_complement ? best_of_both(tree, dims, c, k) : optimize_jaccard(tree, dims, c, k);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    auto& r = records[cell];
    r.image_id = image_id;
    r.consistency = c;
    r.k = k;
    r.jaccard = result.jaccard;
    r.complemented = result.complemented;
    r.iterations = result.iterations;
    r.millis = a.timing ? std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() : 0;
  });

  std::ostringstream csv;
  io::write_curve_csv(csv, records);
  emit(a.out, csv.str(), out);
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const EnumerationBudget budget;
  if (a.max_leaves < 1 || a.max_leaves > budget.max_leaves) {
    throw Error(Errc::budget_exceeded, "--max-leaves must be in 1.." + std::to_string(budget.max_leaves));
  }
  if (a.max_k < 1 || a.max_k > budget.max_k) {
    throw Error(Errc::budget_exceeded, "--max-k must be in 1.." + std::to_string(budget.max_k));
  }
  Rng rng(a.seed);
  std::size_t passed = 0;
  for (std::size_t trial = 0; trial < a.trials; ++trial) {
    const std::size_t leaves = rng.uniform(std::min<std::size_t>(4, a.max_leaves), a.max_leaves);
    const Tree tree = random_tree(leaves, rng);
    const NodeDims dims = random_dims(tree, 50, rng);
    const std::size_t k_max = std::min(a.max_k, leaves);
    std::optional<std::string> mismatch;
    for (const Consistency c : {Consistency::B, Consistency::C, Consistency::D}) {
      const auto expected = brute_force_curve(tree, dims, c, k_max, Objective::best_of_both, budget);
      for (std::size_t k = 1; k <= k_max && !mismatch; ++k) {
        const auto got = best_of_both(tree, dims, c, k).jaccard;
        if (got != expected[k - 1]) {
          std::ostringstream m;
          m << "consistency " << consistency_letter(c) << ", k = " << k << ": solver " << got << ", oracle "
            << expected[k - 1];
          mismatch = m.str();
        }
      }
      if (mismatch) break;
    }
    if (!mismatch) {
      ++passed;
      continue;
    }
    out << "mismatch in trial " << trial << ": " << *mismatch << '\n';
    io::write_tree(out, tree);
    out << "leaf b f\n";
    for (NodeId leaf = 0; leaf < tree.leaf_count(); ++leaf) {
      out << leaf << ' ' << dims.b[leaf] << ' ' << dims.f[leaf] << '\n';
    }
  }
  out << passed << '/' << a.trials << " exact matches\n";
  return passed == a.trials ? kExitOk : kExitMismatch;
}

int cmd_annotate(const AnnotateArgs& a, std::ostream& out) {
  const Tree tree = io::parse_tree(io::read_file(a.tree));
  const NodeDims dims =
      annotate_dims(tree, io::to_mask(io::parse_pgm(io::read_file(a.gt))), load_labels(a.labels));
  std::ostringstream text;
  text << "node b f\n";
  for (NodeId n = 0; n < tree.node_count(); ++n) text << n << ' ' << dims.b[n] << ' ' << dims.f[n] << '\n';
  emit(a.out, text.str(), out);
  return kExitOk;
}

}  // namespace

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HIERJ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return cap;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Jaccard optimization over binary partition trees", "hierj"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a tree file");
  b->add_option("--kind", build.kind, "geometric, l2 or weights")->check(CLI::IsMember({"geometric", "l2", "weights"}));
  b->add_option("--width", build.width, "Image width (geometric)");
  b->add_option("--height", build.height, "Image height (geometric)");
  b->add_option("--input", build.input, "PPM image (geometric, l2) or edge list (weights)");
  b->add_option("--superpixels", build.superpixels, "PGM superpixel map; its regions become the leaves");
  b->add_option("--filter-area", build.filter_area, "Contract merges that isolate regions below this area");
  b->add_option("--out", build.out, "Tree file (default stdout)");
  b->add_option("--labels-out", build.labels_out, "Leaf label map PGM");

  CurveArgs curve_args;
  auto* c = app.add_subcommand("curve", "Optimal Jaccard index against the node budget, as CSV");
  c->add_option("--tree", curve_args.tree, "Tree file")->required();
  c->add_option("--labels", curve_args.labels, "PGM leaf label map")->required();
  c->add_option("--gt", curve_args.gt, "PGM ground truth, nonzero is foreground")->required();
  c->add_option("--consistency", curve_args.consistency, "b, c, d or all");
  c->add_option("--kmax", curve_args.kmax, "Largest node budget")->required();
  c->add_option("--complement", curve_args.complement, "auto: best of segment and complement; off: segment only");
  c->add_option("--out", curve_args.out, "CSV file (default stdout)");
  c->add_option("--image-id", curve_args.image_id, "First CSV column (default: ground-truth file stem)");
  c->add_flag("--timing", curve_args.timing, "Fill the millis column");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Compare the solvers with exhaustive search on random trees");
  v->add_option("--max-leaves", verify.max_leaves, "Leaves per tree, drawn from min(4, max)..max");
  v->add_option("--max-k", verify.max_k, "Largest node budget checked");
  v->add_option("--trials", verify.trials, "Number of random instances");
  v->add_option("--seed", verify.seed, "Generator seed");

  AnnotateArgs annotate;
  auto* an = app.add_subcommand("annotate", "Print the ground-truth counts (b, f) of every node");
  an->add_option("--tree", annotate.tree, "Tree file")->required();
  an->add_option("--labels", annotate.labels, "PGM leaf label map")->required();
  an->add_option("--gt", annotate.gt, "PGM ground truth")->required();
  an->add_option("--out", annotate.out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (b->parsed()) return cmd_build(build, out);
    if (c->parsed()) return cmd_curve(curve_args, out);
    if (v->parsed()) return cmd_verify(verify, out);
    return cmd_annotate(annotate, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::empty_ground_truth ? kExitEmptyGroundTruth : kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace hierj::cli
