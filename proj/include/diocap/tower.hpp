#pragma once

#include <compare>
#include <string>

namespace diocap {

// Level-index number: sign * exp^level(value). Level 0 holds an ordinary
// double of magnitude <= e^700; level k >= 1 holds value in (700, e^700], so
// the representation is unique and ordering is lexicographic in (level, value).
//
// Used for ln Q_n of witnesses whose denominators are towers of exponentials.
// exp() and log() across levels are exact (they only move the level); the
// rounding of add/mul happens at the level where the operands meet.
class Tower {
 public:
  static constexpr double kLevelCut = 700.0;

  Tower() = default;
  Tower(double x);  // NOLINT(google-explicit-constructor): numeric literal use
  static Tower from_level(int level, double value, bool negative = false);

  int level() const noexcept { return level_; }
  double top() const noexcept { return value_; }
  bool negative() const noexcept { return negative_; }
  bool is_zero() const noexcept { return level_ == 0 && value_ == 0.0; }
  bool finite_double() const noexcept { return level_ == 0; }

  // Signed double value; +-inf when the magnitude exceeds level 0.
  double to_double() const noexcept;

  Tower log() const;  // requires a positive value
  Tower exp() const;
  Tower abs() const;
  Tower operator-() const;
  Tower pow(double p) const;  // requires a positive base, or zero with p > 0

  friend Tower operator+(const Tower& a, const Tower& b);
  friend Tower operator-(const Tower& a, const Tower& b);
  friend Tower operator*(const Tower& a, const Tower& b);
  friend Tower operator/(const Tower& a, const Tower& b);
  friend std::partial_ordering operator<=>(const Tower& a, const Tower& b);
  friend bool operator==(const Tower& a, const Tower& b);

  std::string to_string() const;

 private:
  Tower(int level, double value, bool negative);
  void normalize();
  static std::partial_ordering compare_magnitude(const Tower& a, const Tower& b);

  int level_ = 0;
  double value_ = 0.0;  // magnitude at this level
  bool negative_ = false;
};

}  // namespace diocap
