#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hierj/builders.hpp"
#include "hierj/consistency.hpp"
#include "hierj/rational.hpp"
#include "hierj/tree.hpp"

namespace hierj::io {

// Tree text: "bpt <node_count> <leaf_count>", then one parent per node, -1 for the root.
void write_tree(std::ostream& out, const Tree& tree);
std::string tree_to_string(const Tree& tree);
Tree read_tree(std::istream& in);
Tree parse_tree(std::string_view text);

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> values;
};

/// Netpbm P2/P5 with maxval up to 65535 (16-bit samples big-endian).
/// Parse errors report the byte offset.
GrayImage parse_pgm(std::string_view bytes);
/// Netpbm P3/P6, same rules.
RgbImage parse_ppm(std::string_view bytes);

void write_pgm(std::ostream& out, const GrayImage& image, bool binary = true);
void write_ppm(std::ostream& out, const RgbImage& image, std::uint32_t maxval = 255, bool binary = true);

/// Pixel value is the leaf index.
LabelMap to_label_map(const GrayImage& image);
/// Pixel value > 0 is foreground.
Mask to_mask(const GrayImage& image);
/// Writes labels as a PGM; fails with Overflow past 65535 labels.
GrayImage from_label_map(const LabelMap& labels);

/// Lines "u v w"; blank lines and lines starting with '#' are skipped.
/// The vertex count is one past the largest endpoint.
WeightedGraph parse_edges(std::string_view text);

struct CurveRecord {
  std::string image_id;
  Consistency consistency = Consistency::B;
  std::size_t k = 0;
  Rational jaccard;
  bool complemented = false;
  std::size_t iterations = 0;
  std::int64_t millis = 0;
};

inline constexpr std::string_view kCurveHeader =
    "image_id,consistency,k,jaccard_num,jaccard_den,jaccard_float,complemented,iterations,millis";

/// Header plus one LF-terminated row per record.
void write_curve_csv(std::ostream& out, std::span<const CurveRecord> records);
std::string format_curve_row(const CurveRecord& record);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace hierj::io
