#include "boqc/angles.hpp"

#include <numbers>

namespace boqc {

namespace {

std::int64_t wrap(std::int64_t k, int b) {
  const std::int64_t m = std::int64_t{1} << b;
  k %= m;
  return k < 0 ? k + m : k;
}

}  // namespace

DyadicAngle::DyadicAngle(std::int64_t k, int b) : b_(b) {
  if (b < 1 || b > kMaxPrecision) {
    throw ValidationError("angle precision must lie in [1, " + std::to_string(kMaxPrecision) +
                          "], got " + std::to_string(b));
  }
  k_ = wrap(k, b);
}

DyadicAngle DyadicAngle::pi(int b) { return DyadicAngle(std::int64_t{1} << (b - 1), b); }

double DyadicAngle::radians() const {
  return std::numbers::pi * static_cast<double>(k_) / static_cast<double>(std::int64_t{1} << (b_ - 1));
}

void DyadicAngle::require_same(const DyadicAngle& o) const {
  if (b_ != o.b_) {
    throw PrecisionMismatch("angle precisions differ: " + std::to_string(b_) + " vs " +
                            std::to_string(o.b_));
  }
}

DyadicAngle DyadicAngle::operator+(const DyadicAngle& o) const {
  require_same(o);
  return DyadicAngle(k_ + o.k_, b_);
}

DyadicAngle DyadicAngle::operator-(const DyadicAngle& o) const {
  require_same(o);
  return DyadicAngle(k_ - o.k_, b_);
}

DyadicAngle DyadicAngle::operator-() const { return DyadicAngle(-k_, b_); }

DyadicAngle DyadicAngle::plus_pi(int s) const {
  return (s & 1) ? DyadicAngle(k_ + (std::int64_t{1} << (b_ - 1)), b_) : *this;
}

DyadicAngle DyadicAngle::signed_by(int s) const { return (s & 1) ? -*this : *this; }

std::string DyadicAngle::to_string() const {
  return std::to_string(k_) + "/2^" + std::to_string(b_ - 1) + " pi";
}

DyadicAngle correct_angle(const DyadicAngle& angle, int sx, int sz) {
  return angle.signed_by(sx).plus_pi(sz);
}

std::vector<DyadicAngle> angle_grid(int b) {
  std::vector<DyadicAngle> out;
  const std::int64_t m = std::int64_t{1} << b;
  out.reserve(static_cast<std::size_t>(m));
  for (std::int64_t k = 0; k < m; ++k) out.emplace_back(k, b);
  return out;
}

}  // namespace boqc
