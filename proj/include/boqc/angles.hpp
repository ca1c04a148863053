#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace boqc {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PrecisionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

constexpr int kMaxPrecision = 30;

// Angle pi * k / 2^(b-1), i.e. k steps of a 2^b-point grid on [0, 2pi).
class DyadicAngle {
 public:
  DyadicAngle() = default;
  DyadicAngle(std::int64_t k, int b);

  static DyadicAngle zero(int b) { return DyadicAngle(0, b); }
  static DyadicAngle pi(int b);

  std::int64_t k() const { return k_; }
  int b() const { return b_; }
  std::int64_t modulus() const { return std::int64_t{1} << b_; }
  double radians() const;

  DyadicAngle operator+(const DyadicAngle& o) const;
  DyadicAngle operator-(const DyadicAngle& o) const;
  DyadicAngle operator-() const;
  // adds s*pi
  DyadicAngle plus_pi(int s) const;
  // (-1)^s * this
  DyadicAngle signed_by(int s) const;

  bool operator==(const DyadicAngle& o) const { return k_ == o.k_ && b_ == o.b_; }
  bool operator!=(const DyadicAngle& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  void require_same(const DyadicAngle& o) const;

  std::int64_t k_ = 0;
  int b_ = 1;
};

// ((-1)^sx * angle + sz * pi) mod 2pi
DyadicAngle correct_angle(const DyadicAngle& angle, int sx, int sz);

// all 2^b angles of the grid, ascending
std::vector<DyadicAngle> angle_grid(int b);

}  // namespace boqc
