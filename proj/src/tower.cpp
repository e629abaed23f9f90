#include "diocap/tower.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "diocap/error.hpp"

namespace diocap {
namespace {

const double kLevelMax = std::exp(Tower::kLevelCut);

}  // namespace

Tower::Tower(double x) : level_(0), value_(std::abs(x)), negative_(x < 0) {
  if (!std::isfinite(x)) throw DomainError("tower numbers must be finite");
  normalize();
}

Tower::Tower(int level, double value, bool negative)
    : level_(level), value_(value), negative_(negative) {
  normalize();
}

Tower Tower::from_level(int level, double value, bool negative) {
  if (level < 0 || !(value >= 0) || !std::isfinite(value)) {
    throw DomainError("invalid tower representation");
  }
  return Tower(level, value, negative);
}

void Tower::normalize() {
  while (value_ > kLevelMax) {
    value_ = std::log(value_);
    ++level_;
  }
  while (level_ > 0 && value_ <= kLevelCut) {
    value_ = std::exp(value_);
    --level_;
  }
  if (value_ == 0.0) negative_ = false;
}

double Tower::to_double() const noexcept {
  const double mag = level_ == 0 ? value_ : std::numeric_limits<double>::infinity();
  return negative_ ? -mag : mag;
}

Tower Tower::log() const {
  if (negative_ || is_zero()) throw DomainError("log of a non-positive tower");
  if (level_ == 0) return Tower(std::log(value_));
  return Tower(level_ - 1, value_, false);
}

Tower Tower::exp() const {
  if (negative_) {
    // exp(-M) underflows for any M beyond level 0.
    return level_ == 0 ? Tower(std::exp(-value_)) : Tower(0.0);
  }
  if (level_ == 0) {
    if (value_ <= kLevelCut) return Tower(std::exp(value_));
    return Tower(1, value_, false);
  }
  return Tower(level_ + 1, value_, false);
}

Tower Tower::abs() const { return Tower(level_, value_, false); }

Tower Tower::operator-() const { return Tower(level_, value_, !negative_); }

Tower Tower::pow(double p) const {
  if (is_zero() && p > 0) return Tower(0.0);
  if (negative_ || is_zero()) throw DomainError("pow of a non-positive tower");
  if (level_ == 0) {
    const double direct = std::pow(value_, p);
    if (std::isfinite(direct) && direct <= kLevelMax) return Tower(direct);
  }
  return (Tower(p) * log()).exp();
}

std::partial_ordering Tower::compare_magnitude(const Tower& a, const Tower& b) {
  if (a.level_ != b.level_) return a.level_ <=> b.level_;
  return a.value_ <=> b.value_;
}

std::partial_ordering operator<=>(const Tower& a, const Tower& b) {
  if (a.negative_ != b.negative_) {
    if (a.is_zero() && b.is_zero()) return std::partial_ordering::equivalent;
    return a.negative_ ? std::partial_ordering::less : std::partial_ordering::greater;
  }
  const auto mag = Tower::compare_magnitude(a, b);
  if (!a.negative_) return mag;
  if (mag == std::partial_ordering::less) return std::partial_ordering::greater;
  if (mag == std::partial_ordering::greater) return std::partial_ordering::less;
  return mag;
}

bool operator==(const Tower& a, const Tower& b) {
  return a.level_ == b.level_ && a.value_ == b.value_ && a.negative_ == b.negative_;
}

Tower operator+(const Tower& a, const Tower& b) {
  if (a.level_ == 0 && b.level_ == 0) return Tower(a.to_double() + b.to_double());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const bool a_larger = Tower::compare_magnitude(a, b) != std::partial_ordering::less;
  const Tower& big = a_larger ? a : b;
  const Tower& small = a_larger ? b : a;
  // |small| / |big| in [0, 1], as a level-0 double.
  const double ratio = (small.abs().log() - big.abs().log()).exp().to_double();
  const double factor = big.negative_ == small.negative_ ? std::log1p(ratio) : std::log1p(-ratio);
  if (!std::isfinite(factor)) return Tower(0.0);  // exact cancellation
  Tower magnitude = (big.abs().log() + Tower(factor)).exp();
  magnitude.negative_ = big.negative_;
  return magnitude;
}

Tower operator-(const Tower& a, const Tower& b) { return a + (-b); }

Tower operator*(const Tower& a, const Tower& b) {
  if (a.is_zero() || b.is_zero()) return Tower(0.0);
  const bool negative = a.negative_ != b.negative_;
  if (a.level_ == 0 && b.level_ == 0) {
    const double direct = a.value_ * b.value_;
    if (std::isfinite(direct) && direct > 0) {
      Tower r(direct);
      r.negative_ = negative;
      return r;
    }
  }
  Tower r = (a.abs().log() + b.abs().log()).exp();
  if (!r.is_zero()) r.negative_ = negative;
  return r;
}

Tower operator/(const Tower& a, const Tower& b) {
  if (b.is_zero()) throw DomainError("tower division by zero");
  if (a.is_zero()) return Tower(0.0);
  const bool negative = a.negative_ != b.negative_;
  if (a.level_ == 0 && b.level_ == 0) {
    const double direct = a.value_ / b.value_;
    if (std::isfinite(direct) && direct > 0) {
      Tower r(direct);
      r.negative_ = negative;
      return r;
    }
  }
  Tower r = (a.abs().log() - b.abs().log()).exp();
  if (!r.is_zero()) r.negative_ = negative;
  return r;
}

std::string Tower::to_string() const {
  std::ostringstream out;
  out.precision(17);
  if (negative_) out << '-';
  if (level_ == 0) {
    out << value_;
  } else {
    out << "exp^" << level_ << "(" << value_ << ")";
  }
  return out.str();
}

}  // namespace diocap
