#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hierj {

enum class Errc {
  bad_length,
  not_binary,
  multiple_roots,
  cycle,
  label_out_of_range,
  shape_mismatch,
  no_partition,
  inconsistent_selection,
  empty_ground_truth,
  budget_out_of_range,
  budget_exceeded,
  disconnected_graph,
  threshold_too_large,
  overflow,
  parse_error,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures surface as hierj::Error; code() names the violated contract.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hierj
