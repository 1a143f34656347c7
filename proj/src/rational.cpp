#include "hierj/rational.hpp"

#include <limits>
#include <ostream>

#include "hierj/error.hpp"

namespace hierj {

namespace {

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

Wide wide_gcd(Wide a, Wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(Wide v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::bad_length: return "BadLength";
    case Errc::not_binary: return "NotBinary";
    case Errc::multiple_roots: return "MultipleRoots";
    case Errc::cycle: return "Cycle";
    case Errc::label_out_of_range: return "LabelOutOfRange";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::no_partition: return "NoPartition";
    case Errc::inconsistent_selection: return "InconsistentSelection";
    case Errc::empty_ground_truth: return "EmptyGroundTruth";
    case Errc::budget_out_of_range: return "BudgetOutOfRange";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::disconnected_graph: return "DisconnectedGraph";
    case Errc::threshold_too_large: return "ThresholdTooLarge";
    case Errc::overflow: return "Overflow";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(Wide num, Wide den) {
  if (den == 0) throw Error(Errc::overflow, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (!fits64(num) || !fits64(den)) throw Error(Errc::overflow, "rational component exceeds 64 bits");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<Wide>(a.num_) * b.den_ - static_cast<Wide>(b.num_) * a.den_,
                             static_cast<Wide>(a.den_) * b.den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
                             static_cast<Wide>(a.den_) * b.den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace hierj
