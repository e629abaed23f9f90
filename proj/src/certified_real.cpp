#include "diocap/certified_real.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>

#include "diocap/error.hpp"

namespace diocap {

MpfrValue::MpfrValue(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

MpfrValue::MpfrValue(const MpfrValue& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

MpfrValue::MpfrValue(MpfrValue&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

MpfrValue& MpfrValue::operator=(const MpfrValue& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

MpfrValue& MpfrValue::operator=(MpfrValue&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
  }
  return *this;
}

MpfrValue::~MpfrValue() { mpfr_clear(value_); }

namespace {

mpfr_prec_t joint(const CertifiedReal& a, const CertifiedReal& b) {
  return std::max(a.precision_bits(), b.precision_bits());
}

}  // namespace

CertifiedReal::CertifiedReal(mpfr_prec_t precision_bits)
    : lower_(precision_bits), upper_(precision_bits) {}

CertifiedReal CertifiedReal::from_integer(const mpz_class& z, mpfr_prec_t precision_bits) {
  CertifiedReal r(precision_bits);
  mpfr_set_z(r.lower_.get(), z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.upper_.get(), z.get_mpz_t(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::from_rational(const mpq_class& q, mpfr_prec_t precision_bits) {
  CertifiedReal r(precision_bits);
  mpfr_set_q(r.lower_.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.upper_.get(), q.get_mpq_t(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::from_double(double x, mpfr_prec_t precision_bits) {
  CertifiedReal r(std::max<mpfr_prec_t>(precision_bits, 53));
  mpfr_set_d(r.lower_.get(), x, MPFR_RNDD);
  mpfr_set_d(r.upper_.get(), x, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::hull(const mpq_class& a, const mpq_class& b,
                                  mpfr_prec_t precision_bits) {
  const mpq_class& lo = a < b ? a : b;
  const mpq_class& hi = a < b ? b : a;
  CertifiedReal r(precision_bits);
  mpfr_set_q(r.lower_.get(), lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.upper_.get(), hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::pi(mpfr_prec_t precision_bits) {
  CertifiedReal r(precision_bits);
  mpfr_const_pi(r.lower_.get(), MPFR_RNDD);
  mpfr_const_pi(r.upper_.get(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::euler_e(mpfr_prec_t precision_bits) {
  CertifiedReal r(precision_bits);
  mpfr_set_ui(r.lower_.get(), 1, MPFR_RNDN);
  mpfr_set_ui(r.upper_.get(), 1, MPFR_RNDN);
  mpfr_exp(r.lower_.get(), r.lower_.get(), MPFR_RNDD);
  mpfr_exp(r.upper_.get(), r.upper_.get(), MPFR_RNDU);
  return r;
}

double CertifiedReal::lower_double() const { return mpfr_get_d(lower_.get(), MPFR_RNDD); }
double CertifiedReal::upper_double() const { return mpfr_get_d(upper_.get(), MPFR_RNDU); }

double CertifiedReal::mid_double() const {
  MpfrValue mid(precision_bits() + 1);
  mpfr_add(mid.get(), lower_.get(), upper_.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  return mpfr_get_d(mid.get(), MPFR_RNDN);
}

double CertifiedReal::width() const {
  MpfrValue w(precision_bits());
  mpfr_sub(w.get(), upper_.get(), lower_.get(), MPFR_RNDU);
  return mpfr_get_d(w.get(), MPFR_RNDU);
}

bool CertifiedReal::is_point() const { return mpfr_equal_p(lower_.get(), upper_.get()) != 0; }

bool CertifiedReal::is_exact_zero() const {
  return mpfr_zero_p(lower_.get()) && mpfr_zero_p(upper_.get());
}

std::optional<mpz_class> CertifiedReal::common_floor() const {
  if (!mpfr_number_p(lower_.get()) || !mpfr_number_p(upper_.get())) return std::nullopt;
  mpz_class lo;
  mpz_class hi;
  mpfr_get_z(lo.get_mpz_t(), lower_.get(), MPFR_RNDD);
  mpfr_get_z(hi.get_mpz_t(), upper_.get(), MPFR_RNDD);
  if (lo != hi) return std::nullopt;
  return lo;
}

int CertifiedReal::compare(const mpq_class& q) const {
  if (mpfr_cmp_q(upper_.get(), q.get_mpq_t()) < 0) return -1;
  if (mpfr_cmp_q(lower_.get(), q.get_mpq_t()) > 0) return 1;
  return 0;
}

namespace {

std::pair<double, double> split(mpfr_srcptr x, mpfr_rnd_t direction) {
  const double hi = mpfr_get_d(x, MPFR_RNDN);
  MpfrValue rest(mpfr_get_prec(x) + 64);
  mpfr_sub_d(rest.get(), x, hi, MPFR_RNDN);  // exact: enough bits
  return {hi, mpfr_get_d(rest.get(), direction)};
}

}  // namespace

std::pair<double, double> CertifiedReal::lower_double_double() const {
  return split(lower_.get(), MPFR_RNDD);
}

std::pair<double, double> CertifiedReal::upper_double_double() const {
  return split(upper_.get(), MPFR_RNDU);
}

CertifiedReal CertifiedReal::with_precision(mpfr_prec_t precision_bits) const {
  CertifiedReal r(precision_bits);
  mpfr_set(r.lower_.get(), lower_.get(), MPFR_RNDD);
  mpfr_set(r.upper_.get(), upper_.get(), MPFR_RNDU);
  return r;
}

CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
  CertifiedReal r(joint(a, b));
  mpfr_add(r.lower_.get(), a.lower(), b.lower(), MPFR_RNDD);
  mpfr_add(r.upper_.get(), a.upper(), b.upper(), MPFR_RNDU);
  return r;
}

CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) {
  CertifiedReal r(joint(a, b));
  mpfr_sub(r.lower_.get(), a.lower(), b.upper(), MPFR_RNDD);
  mpfr_sub(r.upper_.get(), a.upper(), b.lower(), MPFR_RNDU);
  return r;
}

CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
  const mpfr_prec_t p = joint(a, b);
  CertifiedReal r(p);
  MpfrValue t(p);
  mpfr_srcptr as[2] = {a.lower(), a.upper()};
  mpfr_srcptr bs[2] = {b.lower(), b.upper()};
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), r.lower_.get())) mpfr_set(r.lower_.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), r.upper_.get())) mpfr_set(r.upper_.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b) { return a * b.reciprocal(); }

CertifiedReal CertifiedReal::operator-() const {
  CertifiedReal r(precision_bits());
  mpfr_neg(r.lower_.get(), upper_.get(), MPFR_RNDD);
  mpfr_neg(r.upper_.get(), lower_.get(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::operator-(const mpq_class& q) const {
  CertifiedReal r(precision_bits());
  mpfr_sub_q(r.lower_.get(), lower_.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_sub_q(r.upper_.get(), upper_.get(), q.get_mpq_t(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::operator-(const mpz_class& z) const {
  CertifiedReal r(precision_bits());
  mpfr_sub_z(r.lower_.get(), lower_.get(), z.get_mpz_t(), MPFR_RNDD);
  mpfr_sub_z(r.upper_.get(), upper_.get(), z.get_mpz_t(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::reciprocal() const {
  if (mpfr_sgn(lower_.get()) <= 0 && mpfr_sgn(upper_.get()) >= 0) {
    throw DomainError("reciprocal of an interval containing zero");
  }
  CertifiedReal r(precision_bits());
  mpfr_ui_div(r.lower_.get(), 1, upper_.get(), MPFR_RNDD);
  mpfr_ui_div(r.upper_.get(), 1, lower_.get(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::abs() const {
  if (mpfr_sgn(lower_.get()) >= 0) return *this;
  if (mpfr_sgn(upper_.get()) <= 0) return -*this;
  CertifiedReal r(precision_bits());
  mpfr_set_zero(r.lower_.get(), 1);
  mpfr_neg(r.upper_.get(), lower_.get(), MPFR_RNDU);
  mpfr_max(r.upper_.get(), r.upper_.get(), upper_.get(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::square() const {
  const CertifiedReal m = abs();
  CertifiedReal r(precision_bits());
  mpfr_sqr(r.lower_.get(), m.lower(), MPFR_RNDD);
  mpfr_sqr(r.upper_.get(), m.upper(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::sqrt() const {
  if (mpfr_sgn(lower_.get()) < 0) throw DomainError("sqrt of a negative interval");
  CertifiedReal r(precision_bits());
  mpfr_sqrt(r.lower_.get(), lower_.get(), MPFR_RNDD);
  mpfr_sqrt(r.upper_.get(), upper_.get(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::log() const {
  if (mpfr_sgn(lower_.get()) < 0) throw DomainError("log of a negative interval");
  CertifiedReal r(precision_bits());
  mpfr_log(r.lower_.get(), lower_.get(), MPFR_RNDD);
  mpfr_log(r.upper_.get(), upper_.get(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::exp() const {
  CertifiedReal r(precision_bits());
  mpfr_exp(r.lower_.get(), lower_.get(), MPFR_RNDD);
  mpfr_exp(r.upper_.get(), upper_.get(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::pow(double p) const {
  if (mpfr_sgn(lower_.get()) < 0) throw DomainError("power of a negative interval");
  if (!(p > 0)) throw DomainError("power exponent must be positive");
  MpfrValue e(53);
  mpfr_set_d(e.get(), p, MPFR_RNDN);
  CertifiedReal r(precision_bits());
  mpfr_pow(r.lower_.get(), lower_.get(), e.get(), MPFR_RNDD);
  mpfr_pow(r.upper_.get(), upper_.get(), e.get(), MPFR_RNDU);
  return r;
}

std::string CertifiedReal::to_string(int digits) const {
  auto render = [digits](mpfr_srcptr x, mpfr_rnd_t rnd) {
    char* buf = nullptr;
    mpfr_asprintf(&buf, rnd == MPFR_RNDD ? "%.*RDg" : "%.*RUg", digits, x);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  };
  return "[" + render(lower_.get(), MPFR_RNDD) + ", " + render(upper_.get(), MPFR_RNDU) + "]";
}

}  // namespace diocap
