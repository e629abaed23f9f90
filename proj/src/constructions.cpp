#include "diocap/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "diocap/certified_real.hpp"
#include "diocap/error.hpp"
#include "diocap/numeric.hpp"

namespace diocap::constructions {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLog10E = 0.43429448190325182765;
constexpr double kLog2E = 1.44269504088896340736;
constexpr unsigned long kLowerBoundBitsCap = 4096;

// Upper bound on expm1(x) for x >= 0.
Tower expm1_bound(const Tower& x) {
  if (x.level() == 0) {
    const double v = x.top();
    if (v <= Tower::kLevelCut) return Tower(std::expm1(v) * (1 + 4 * kEps));
  }
  return x.exp();
}

mpz_class pow2(unsigned long bits) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, bits);
  return r;
}

mpz_class rule_digit_exact(const GrowthRule& rule, std::size_t n, std::span<const mpz_class> q) {
  if (n <= rule.seed_digits.size()) return rule.seed_digits[n - 1];
  switch (rule.kind) {
    case RuleKind::Constant:
      return mpz_class(rule.constant);
    case RuleKind::Polynomial: {
      mpz_class r;
      mpz_ui_pow_ui(r.get_mpz_t(), n, rule.degree);
      return r;
    }
    case RuleKind::ExpOfQ:
      return ceil_exp(q.back());
    case RuleKind::ExpExpOfQ:
      return ceil_exp_exp(q.back());
    case RuleKind::Custom: {
      mpz_class d = rule.custom(n, q);
      if (d < 1) throw DomainError("custom growth rule produced a digit < 1");
      return d;
    }
  }
  throw DomainError("unknown rule kind");
}

// Estimated decimal digits of a_n for rules whose digits are too large to
// compute before checking the budget.
double digit_size_estimate(const GrowthRule& rule, std::size_t n, const mpz_class& q_prev) {
  if (n <= rule.seed_digits.size()) return 0;
  const double q = q_prev.get_d();
  switch (rule.kind) {
    case RuleKind::ExpOfQ:
      return q * kLog10E;
    case RuleKind::ExpExpOfQ:
      return std::exp(q) * kLog10E;
    default:
      return 0;
  }
}

mpz_class next_digit_lower_bound(const GrowthRule& rule, std::size_t n, const mpz_class& q_prev) {
  if (n <= rule.seed_digits.size()) return rule.seed_digits[n - 1];
  switch (rule.kind) {
    case RuleKind::Constant:
      return mpz_class(rule.constant);
    case RuleKind::Polynomial: {
      mpz_class r;
      mpz_ui_pow_ui(r.get_mpz_t(), n, rule.degree);
      return r;
    }
    case RuleKind::ExpOfQ: {
      // a_n >= e^Q >= 2^(Q log2 e); one bit of slack for the float product.
      const double bits = q_prev.get_d() * kLog2E - 1;
      return pow2(static_cast<unsigned long>(std::clamp(bits, 0.0, double(kLowerBoundBitsCap))));
    }
    case RuleKind::ExpExpOfQ: {
      const double bits = std::exp(q_prev.get_d()) * kLog2E - 1;
      return pow2(static_cast<unsigned long>(std::clamp(bits, 0.0, double(kLowerBoundBitsCap))));
    }
    case RuleKind::Custom:
      return 1;
  }
  return 1;
}

struct LogDigit {
  Tower value;
  Tower error;
};

}  // namespace

GrowthRule GrowthRule::constant_digits(unsigned long c, std::vector<mpz_class> seeds) {
  if (c < 1) throw DomainError("constant digit must be >= 1");
  GrowthRule r;
  r.kind = RuleKind::Constant;
  r.constant = c;
  r.seed_digits = std::move(seeds);
  r.name = "const:" + std::to_string(c);
  return r;
}

GrowthRule GrowthRule::polynomial(unsigned degree, std::vector<mpz_class> seeds) {
  GrowthRule r;
  r.kind = RuleKind::Polynomial;
  r.degree = degree;
  r.seed_digits = std::move(seeds);
  r.name = "poly:" + std::to_string(degree);
  return r;
}

GrowthRule GrowthRule::exp_of_q(std::vector<mpz_class> seeds) {
  GrowthRule r;
  r.kind = RuleKind::ExpOfQ;
  r.seed_digits = std::move(seeds);
  r.name = "exp";
  return r;
}

GrowthRule GrowthRule::exp_exp_of_q(std::vector<mpz_class> seeds) {
  GrowthRule r;
  r.kind = RuleKind::ExpExpOfQ;
  r.seed_digits = std::move(seeds);
  r.name = "expexp";
  return r;
}

GrowthRule GrowthRule::custom_rule(std::function<mpz_class(std::size_t, std::span<const mpz_class>)> fn,
                                   std::vector<mpz_class> seeds, std::string name) {
  GrowthRule r;
  r.kind = RuleKind::Custom;
  r.custom = std::move(fn);
  r.seed_digits = std::move(seeds);
  r.name = std::move(name);
  return r;
}

std::optional<double> GrowthRule::digit_upper_bound(std::size_t n) const {
  if (n >= 1 && n <= seed_digits.size()) return seed_digits[n - 1].get_d();
  switch (kind) {
    case RuleKind::Constant:
      return static_cast<double>(constant);
    case RuleKind::Polynomial:
      return std::pow(static_cast<double>(n), degree);
    default:
      return std::nullopt;
  }
}

GrowthRule parse_rule(const std::string& spec) {
  if (spec == "golden") {
    GrowthRule r = GrowthRule::constant_digits(1);
    r.name = "golden";
    return r;
  }
  if (spec == "nonbrjuno-exp") {
    GrowthRule r = GrowthRule::exp_of_q({2});
    r.name = "nonbrjuno-exp";
    return r;
  }
  if (spec == "nonpm-expexp") {
    GrowthRule r = GrowthRule::exp_exp_of_q({1});
    r.name = "nonpm-expexp";
    return r;
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("unknown growth rule: " + spec);
  const std::string head = spec.substr(0, colon);
  const std::string tail = spec.substr(colon + 1);
  auto parse_seeds = [&tail] {
    std::vector<mpz_class> seeds;
    std::stringstream in(tail);
    std::string item;
    while (std::getline(in, item, ',')) {
      mpz_class d;
      if (item.empty() || d.set_str(item, 10) != 0 || d < 1) {
        throw UsageError("invalid seed digit '" + item + "'");
      }
      seeds.push_back(d);
    }
    return seeds;
  };
  try {
    GrowthRule r;
    if (head == "const") {
      r = GrowthRule::constant_digits(std::stoul(tail));
    } else if (head == "poly") {
      r = GrowthRule::polynomial(static_cast<unsigned>(std::stoul(tail)));
    } else if (head == "exp") {
      r = GrowthRule::exp_of_q(parse_seeds());
    } else if (head == "expexp") {
      r = GrowthRule::exp_exp_of_q(parse_seeds());
    } else {
      throw UsageError("unknown growth rule: " + spec);
    }
    r.name = spec;
    return r;
  } catch (const DomainError& e) {
    throw UsageError(std::string(e.what()) + " in '" + spec + "'");
  } catch (const std::logic_error&) {
    throw UsageError("invalid growth rule parameter in '" + spec + "'");
  }
}

mpz_class ceil_exp(const mpz_class& x) {
  if (x < 1) throw DomainError("ceil_exp needs a positive integer");
  auto bits = static_cast<mpfr_prec_t>(x.get_d() * kLog2E) + 64;
  for (;; bits *= 2) {
    const auto value = CertifiedReal::from_integer(x, bits).exp();
    // e^x is irrational for integer x >= 1, so the ceiling is floor + 1.
    if (auto f = value.common_floor()) return *f + 1;
  }
}

mpz_class ceil_exp_exp(const mpz_class& x) {
  if (x < 1) throw DomainError("ceil_exp_exp needs a positive integer");
  auto bits = static_cast<mpfr_prec_t>(std::exp(x.get_d()) * kLog2E) + 64;
  for (;; bits *= 2) {
    const auto value = CertifiedReal::from_integer(x, bits).exp().exp();
    if (auto f = value.common_floor()) return *f + 1;
  }
}

Witness build(const GrowthRule& rule, std::size_t n_terms, const BuildOptions& options) {
  if (n_terms < 1) throw DomainError("build needs n_terms >= 1");
  Witness w;
  w.digits.a0 = 0;
  w.digits.source = contfrac::DigitSource::Prescribed;
  w.digits.rule = rule.name;

  // Exact prefix.
  std::vector<mpz_class> q{1};  // Q_0
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const mpz_class& q_prev = q.back();
    const double q_digits = static_cast<double>(mpz_sizeinbase(q_prev.get_mpz_t(), 10));
    if (digit_size_estimate(rule, n, q_prev) + q_digits > options.max_decimal_digits) break;
    mpz_class a = rule_digit_exact(rule, n, q);
    const mpz_class q_prev2 = q.size() >= 2 ? q[q.size() - 2] : mpz_class(0);
    mpz_class q_next = a * q_prev + q_prev2;
    if (static_cast<double>(mpz_sizeinbase(q_next.get_mpz_t(), 10)) > options.max_decimal_digits) break;
    w.digits.digits.push_back(std::move(a));
    q.push_back(std::move(q_next));
  }
  const std::size_t exact_len = w.digits.digits.size();
  w.exact = contfrac::convergents(w.digits, exact_len);
  w.digits.next_digit_lower_bound = next_digit_lower_bound(rule, exact_len + 1, q.back());
  if (rule.kind == RuleKind::Constant) {
    mpz_class m(rule.constant);
    for (const auto& s : rule.seed_digits) m = std::max(m, s);
    w.digits.digit_upper_bound = m;
  } else if (rule.kind == RuleKind::Polynomial && rule.degree == 0) {
    mpz_class m(1);
    for (const auto& s : rule.seed_digits) m = std::max(m, s);
    w.digits.digit_upper_bound = m;
  }

  // Log-space recurrence, run from n = 0 in floating arithmetic:
  // ln Q_n = ln a_n + ln Q_{n-1} + log1p(Q_{n-2} / (a_n Q_{n-1})).
  const Tower eps(4 * kEps);
  auto log_digit = [&](std::size_t n, const Tower& l_prev, const Tower& e_prev) -> std::optional<LogDigit> {
    if (n <= exact_len) {
      const Tower v(ln_mpz(w.digits.digits[n - 1]));
      return LogDigit{v, eps * v};
    }
    if (n <= rule.seed_digits.size()) {
      const Tower v(ln_mpz(rule.seed_digits[n - 1]));
      return LogDigit{v, eps * v};
    }
    // Q_{n-1} and its absolute error.
    Tower q_val, q_err;
    if (n - 1 <= exact_len) {
      q_val = tower_from_mpz(q[n - 1]);
      q_err = eps * q_val;
    } else {
      q_val = l_prev.exp();
      q_err = q_val * expm1_bound(e_prev);
    }
    switch (rule.kind) {
      case RuleKind::Constant: {
        const Tower v(std::log(static_cast<double>(rule.constant)));
        return LogDigit{v, eps * v};
      }
      case RuleKind::Polynomial: {
        const Tower v(rule.degree * std::log(static_cast<double>(n)));
        return LogDigit{v, eps * v};
      }
      case RuleKind::ExpOfQ:
        // ln ceil(e^Q) = Q + theta, 0 <= theta < e^-Q.
        return LogDigit{q_val, q_err + (-q_val).exp()};
      case RuleKind::ExpExpOfQ: {
        const Tower e_q = q_val.exp();
        return LogDigit{e_q, e_q * expm1_bound(q_err) + (-e_q).exp()};
      }
      case RuleKind::Custom:
        return std::nullopt;
    }
    return std::nullopt;
  };

  // x_n = Q_{n-1}/Q_n obeys x_n = 1/(a_n + x_{n-1}), which contracts errors,
  // so ln x_n is carried separately instead of differencing ln Q.
  Tower l_prev(0.0), e_prev(0.0);
  Tower lx_prev(0.0), elx_prev(0.0);
  bool have_x = false;  // x_0 = 0
  w.log_space.push_back({0, Tower(0.0), std::nullopt, 0.0});
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const auto digit = log_digit(n, l_prev, e_prev);
    if (!digit) break;
    double ratio = 0.0;
    Tower ratio_err(0.0);
    if (have_x) {
      ratio = (lx_prev - digit->value).exp().to_double();
      ratio_err = Tower(ratio) * expm1_bound(elx_prev + digit->error);
    }
    const double correction = std::log1p(ratio);
    const Tower step = digit->value + Tower(correction);  // -ln x_n
    const Tower step_err = digit->error + ratio_err + Tower(2 * kEps * correction) + eps * step;
    const Tower l = l_prev + step;
    if (l.level() > options.max_tower_level) {
      throw OverflowEvenInLogSpace("ln Q_" + std::to_string(n) + " exceeds tower level " +
                                   std::to_string(options.max_tower_level));
    }
    const Tower err = e_prev + step_err + eps * l;
    LogSpaceEntry entry;
    entry.n = n;
    entry.log_q = l;
    if (!l.is_zero()) entry.log_log_q = l.log();
    entry.rel_err = l.is_zero() ? 0.0 : (err / l).to_double() * (1 + 1e-9);
    w.log_space.push_back(entry);
    l_prev = l;
    e_prev = err;
    lx_prev = -step;
    elx_prev = step_err;
    have_x = true;
  }
  w.exact.log_q = w.log_space;
  return w;
}

}  // namespace diocap::constructions
