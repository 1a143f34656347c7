#include "hierj/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "hierj/error.hpp"

namespace hierj::io {

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <class T>
bool parse_number(std::string_view token, T& value) {
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

// Iterates lines with 1-based numbers; strips a trailing CR.
template <class Visit>
void for_each_line(std::string_view text, Visit&& visit) {
  std::size_t number = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    visit(++number, line);
  }
}

class NetpbmReader {
 public:
  explicit NetpbmReader(std::string_view bytes) : bytes_(bytes) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::parse_error, "offset " + std::to_string(pos_) + ": " + what);
  }

  // Returns the magic digit if it is one of `accepted`.
  char magic(std::string_view accepted) {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || accepted.find(bytes_[1]) == std::string_view::npos) {
      fail("unsupported format (expected magic P" + std::string(1, accepted[0]) + " or P" +
           std::string(1, accepted[1]) + ")");
    }
    pos_ = 2;
    return bytes_[1];
  }

  std::uint64_t header_number(const char* what) {
    skip_space_and_comments();
    return number(what);
  }

  // Exactly one whitespace byte separates the header from binary data.
  void end_of_header() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) fail("expected whitespace after header");
    ++pos_;
  }

  std::uint32_t binary_sample(std::uint32_t maxval) {
    const std::size_t width = maxval > 255 ? 2 : 1;
    if (pos_ + width > bytes_.size()) fail("truncated pixel data");
    std::uint32_t v = static_cast<unsigned char>(bytes_[pos_]);
    if (width == 2) v = (v << 8) | static_cast<unsigned char>(bytes_[pos_ + 1]);
    if (v > maxval) fail("sample " + std::to_string(v) + " exceeds maxval");
    pos_ += width;
    return v;
  }

  std::uint32_t plain_sample(std::uint32_t maxval) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) fail("truncated pixel data");
    const auto v = number("sample");
    if (v > maxval) fail("sample " + std::to_string(v) + " exceeds maxval");
    return static_cast<std::uint32_t>(v);
  }

  std::uint32_t maxval() {
    const auto m = header_number("maxval");
    if (m < 1 || m > 65535) fail("maxval must be in 1..65535");
    return static_cast<std::uint32_t>(m);
  }

  std::size_t extent(const char* what) {
    const auto v = header_number(what);
    if (v == 0 || v > (1u << 20)) fail(std::string(what) + " out of range");
    return static_cast<std::size_t>(v);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number(const char* what) {
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
      if (v > (1ull << 40)) fail(std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected ") + what);
    return v;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void put_sample(std::ostream& out, std::uint32_t v, std::uint32_t maxval) {
  if (maxval > 255) out.put(static_cast<char>(v >> 8));
  out.put(static_cast<char>(v & 0xff));
}

}  // namespace

void write_tree(std::ostream& out, const Tree& tree) {
  out << "bpt " << tree.node_count() << ' ' << tree.leaf_count() << '\n';
  for (const NodeId p : tree.parents()) {
    if (p == kNoNode) {
      out << "-1\n";
    } else {
      out << p << '\n';
    }
  }
}

std::string tree_to_string(const Tree& tree) {
  std::ostringstream out;
  write_tree(out, tree);
  return out.str();
}

Tree read_tree(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_tree(text);
}

Tree parse_tree(std::string_view text) {
  bool have_header = false;
  std::size_t node_count = 0, leaf_count = 0;
  std::vector<std::int64_t> parents;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    const auto tokens = split_tokens(content);
    if (tokens.empty()) return;
    if (!have_header) {
      if (tokens.size() != 3 || tokens[0] != "bpt" || !parse_number(tokens[1], node_count) ||
          !parse_number(tokens[2], leaf_count)) {
        fail_line(line, "expected header 'bpt <node_count> <leaf_count>'");
      }
      have_header = true;
      parents.reserve(node_count);
      return;
    }
    std::int64_t p = 0;
    if (tokens.size() != 1 || !parse_number(tokens[0], p)) fail_line(line, "expected one parent index");
    if (parents.size() == node_count) fail_line(line, "more parent lines than the header's node count");
    parents.push_back(p);
  });
  if (!have_header) fail_line(1, "missing header");
  if (parents.size() != node_count) {
    throw Error(Errc::parse_error, "expected " + std::to_string(node_count) + " parent lines, found " +
                                       std::to_string(parents.size()));
  }
  return build_tree(parents, leaf_count);
}

GrayImage parse_pgm(std::string_view bytes) {
  NetpbmReader reader(bytes);
  const char kind = reader.magic("25");
  GrayImage image;
  image.width = reader.extent("width");
  image.height = reader.extent("height");
  image.maxval = reader.maxval();
  const std::size_t n = image.width * image.height;
  image.values.resize(n);
  if (kind == '5') {
    reader.end_of_header();
    for (auto& v : image.values) v = static_cast<std::uint16_t>(reader.binary_sample(image.maxval));
  } else {
    for (auto& v : image.values) v = static_cast<std::uint16_t>(reader.plain_sample(image.maxval));
  }
  return image;
}

RgbImage parse_ppm(std::string_view bytes) {
  NetpbmReader reader(bytes);
  const char kind = reader.magic("36");
  RgbImage image;
  image.width = reader.extent("width");
  image.height = reader.extent("height");
  const std::uint32_t maxval = reader.maxval();
  image.rgb.resize(3 * image.width * image.height);
  if (kind == '6') {
    reader.end_of_header();
    for (auto& v : image.rgb) v = static_cast<std::uint16_t>(reader.binary_sample(maxval));
  } else {
    for (auto& v : image.rgb) v = static_cast<std::uint16_t>(reader.plain_sample(maxval));
  }
  return image;
}

void write_pgm(std::ostream& out, const GrayImage& image, bool binary) {
  out << (binary ? "P5" : "P2") << '\n' << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
  for (std::size_t i = 0; i < image.values.size(); ++i) {
    if (binary) {
      put_sample(out, image.values[i], image.maxval);
    } else {
      out << image.values[i] << ((i + 1) % image.width == 0 ? '\n' : ' ');
    }
  }
}

void write_ppm(std::ostream& out, const RgbImage& image, std::uint32_t maxval, bool binary) {
  out << (binary ? "P6" : "P3") << '\n' << image.width << ' ' << image.height << '\n' << maxval << '\n';
  for (std::size_t i = 0; i < image.rgb.size(); ++i) {
    if (binary) {
      put_sample(out, image.rgb[i], maxval);
    } else {
      out << image.rgb[i] << ((i + 1) % (3 * image.width) == 0 ? '\n' : ' ');
    }
  }
}

LabelMap to_label_map(const GrayImage& image) {
  LabelMap labels{image.width, image.height, {}};
  labels.labels.assign(image.values.begin(), image.values.end());
  return labels;
}

Mask to_mask(const GrayImage& image) {
  Mask mask{image.width, image.height, {}};
  mask.values.reserve(image.values.size());
  for (const auto v : image.values) mask.values.push_back(v > 0 ? 1 : 0);
  return mask;
}

GrayImage from_label_map(const LabelMap& labels) {
  GrayImage image{labels.width, labels.height, 1, {}};
  const auto top = labels.labels.empty() ? 0u : *std::max_element(labels.labels.begin(), labels.labels.end());
  if (top > 65535) throw Error(Errc::overflow, "label " + std::to_string(top) + " does not fit a 16-bit PGM");
  image.maxval = std::max<std::uint32_t>(top, 1);
  image.values.assign(labels.labels.begin(), labels.labels.end());
  return image;
}

WeightedGraph parse_edges(std::string_view text) {
  WeightedGraph graph;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    const auto tokens = split_tokens(content);
    if (tokens.empty() || tokens[0].front() == '#') return;
    Edge e;
    if (tokens.size() != 3 || !parse_number(tokens[0], e.u) || !parse_number(tokens[1], e.v) ||
        !parse_number(tokens[2], e.weight)) {
      fail_line(line, "expected 'u v w'");
    }
    if (!(e.weight >= 0) || !std::isfinite(e.weight)) fail_line(line, "weight must be a nonnegative decimal");
    if (e.u == e.v) fail_line(line, "self-loop");
    graph.vertex_count = std::max<std::size_t>(graph.vertex_count, std::max(e.u, e.v) + std::size_t{1});
    graph.edges.push_back(e);
  });
  return graph;
}

std::string format_curve_row(const CurveRecord& r) {
  char value[64];
  std::snprintf(value, sizeof value, "%.6f", r.jaccard.to_double());
  std::ostringstream row;
  row << r.image_id << ',' << consistency_letter(r.consistency) << ',' << r.k << ',' << r.jaccard.num() << ','
      << r.jaccard.den() << ',' << value << ',' << (r.complemented ? "true" : "false") << ',' << r.iterations << ','
      << r.millis;
  return row.str();
}

void write_curve_csv(std::ostream& out, std::span<const CurveRecord> records) {
  out << kCurveHeader << '\n';
  for (const auto& r : records) out << format_curve_row(r) << '\n';
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

}  // namespace hierj::io
