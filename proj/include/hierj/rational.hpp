#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace hierj {

using Wide = __int128;

/// Exact fraction num/den kept in canonical form (gcd 1, den > 0).
///
/// Components are 64-bit; every product formed during comparison is
/// widened to 128 bits, so ordering and equality never round. Construction
/// from wide values reduces first and throws Errc::overflow if the reduced
/// fraction does not fit.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  static Rational from_wide(Wide num, Wide den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
    const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator+(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace hierj
