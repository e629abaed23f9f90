#pragma once

#include <mpfr.h>

#include <gmpxx.h>
#include <optional>
#include <string>
#include <utility>

namespace diocap {

// Owning handle to an mpfr_t.
class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t precision);
  MpfrValue(const MpfrValue& other);
  MpfrValue(MpfrValue&& other) noexcept;
  MpfrValue& operator=(const MpfrValue& other);
  MpfrValue& operator=(MpfrValue&& other) noexcept;
  ~MpfrValue();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

 private:
  mpfr_t value_;
};

// A closed interval [lower, upper] of binary floating-point numbers that is
// guaranteed to contain the real it stands for. Every operation rounds its
// lower endpoint down and its upper endpoint up, so containment survives any
// chain of operations.
class CertifiedReal {
 public:
  explicit CertifiedReal(mpfr_prec_t precision_bits = 128);

  static CertifiedReal from_integer(const mpz_class& z, mpfr_prec_t precision_bits);
  static CertifiedReal from_rational(const mpq_class& q, mpfr_prec_t precision_bits);
  static CertifiedReal from_double(double x, mpfr_prec_t precision_bits);
  // Interval hull of two rationals (in either order).
  static CertifiedReal hull(const mpq_class& a, const mpq_class& b, mpfr_prec_t precision_bits);
  static CertifiedReal pi(mpfr_prec_t precision_bits);
  static CertifiedReal euler_e(mpfr_prec_t precision_bits);

  mpfr_prec_t precision_bits() const noexcept { return lower_.precision(); }
  mpfr_srcptr lower() const noexcept { return lower_.get(); }
  mpfr_srcptr upper() const noexcept { return upper_.get(); }

  double lower_double() const;  // rounded down
  double upper_double() const;  // rounded up
  double mid_double() const;
  // Upper bound on upper - lower.
  double width() const;
  bool is_point() const;
  bool is_exact_zero() const;

  // floor(lower) if it equals floor(upper).
  std::optional<mpz_class> common_floor() const;

  // -1 if the whole interval lies strictly below q, +1 if strictly above,
  // 0 when the interval touches or contains q.
  int compare(const mpq_class& q) const;

  // Lower/upper endpoint split as hi + lo doubles with hi + lo <= lower
  // (respectively >= upper).
  std::pair<double, double> lower_double_double() const;
  std::pair<double, double> upper_double_double() const;

  CertifiedReal with_precision(mpfr_prec_t precision_bits) const;

  friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b);
  CertifiedReal operator-() const;

  CertifiedReal operator-(const mpq_class& q) const;
  CertifiedReal operator-(const mpz_class& z) const;

  CertifiedReal reciprocal() const;
  CertifiedReal abs() const;
  CertifiedReal square() const;
  CertifiedReal sqrt() const;
  CertifiedReal log() const;
  CertifiedReal exp() const;
  // x^p for x >= 0 and p > 0.
  CertifiedReal pow(double p) const;

  std::string to_string(int digits = 20) const;

 private:
  MpfrValue lower_;
  MpfrValue upper_;
};

}  // namespace diocap
