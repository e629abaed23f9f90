#include "diocap/contfrac.hpp"

#include <algorithm>
#include <utility>

#include "diocap/error.hpp"

namespace diocap::contfrac {
namespace {

// Guard bits added on top of the requested precision so that a source
// evaluated at p bits has width well below 2^-p.
constexpr mpfr_prec_t kGuardBits = 8;

CertifiedReal golden_fraction(mpfr_prec_t bits) {
  const auto five = CertifiedReal::from_integer(5, bits);
  const auto one = CertifiedReal::from_integer(1, bits);
  const auto two = CertifiedReal::from_integer(2, bits);
  return (five.sqrt() - one) / two;
}

mpz_class max_digit(const PartialQuotients& pq) {
  mpz_class m = 1;
  for (const auto& d : pq.digits) m = std::max(m, d);
  return m;
}

}  // namespace

RealSource named_constant(const std::string& name) {
  RealSource src;
  src.name = name;
  if (name == "golden") {
    src.evaluate = [](mpfr_prec_t p) { return golden_fraction(p + kGuardBits); };
    src.digit_upper_bound = mpz_class(1);
  } else if (name == "pi") {
    src.evaluate = [](mpfr_prec_t p) { return CertifiedReal::pi(p + kGuardBits); };
  } else if (name == "pi-frac") {
    src.evaluate = [](mpfr_prec_t p) { return CertifiedReal::pi(p + kGuardBits) - mpz_class(3); };
  } else if (name == "e") {
    src.evaluate = [](mpfr_prec_t p) { return CertifiedReal::euler_e(p + kGuardBits); };
  } else if (name == "e-frac") {
    src.evaluate = [](mpfr_prec_t p) { return CertifiedReal::euler_e(p + kGuardBits) - mpz_class(2); };
  } else if (name == "sqrt2") {
    src.evaluate = [](mpfr_prec_t p) { return CertifiedReal::from_integer(2, p + kGuardBits).sqrt(); };
    src.digit_upper_bound = mpz_class(2);
  } else if (name == "sqrt2-frac") {
    src.evaluate = [](mpfr_prec_t p) {
      return CertifiedReal::from_integer(2, p + kGuardBits).sqrt() - mpz_class(1);
    };
    src.digit_upper_bound = mpz_class(2);
  } else {
    throw DomainError("unknown named constant: " + name);
  }
  return src;
}

RealSource rational_source(const mpq_class& q) {
  RealSource src;
  src.name = q.get_str();
  src.exact = q;
  src.evaluate = [q](mpfr_prec_t p) { return CertifiedReal::from_rational(q, p + kGuardBits); };
  return src;
}

RealSource prescribed_source(const PartialQuotients& pq) {
  RealSource src;
  src.name = pq.rule.empty() ? "prescribed" : pq.rule;
  src.digit_upper_bound = max_digit(pq);
  const ConvergentTable table = convergents(pq, pq.digits.size());
  const std::size_t n = pq.digits.size();
  const mpz_class p_n = table[n].p;
  const mpz_class q_n = table[n].q;
  const mpz_class p_prev = n == 0 ? mpz_class(1) : table[n - 1].p;
  const mpz_class q_prev = n == 0 ? mpz_class(0) : table[n - 1].q;
  src.evaluate = [=](mpfr_prec_t p) {
    const mpfr_prec_t bits = p + kGuardBits + 16;
    // Tail x = [1; 1, 1, ...] = (1 + sqrt 5) / 2.
    const auto tail = golden_fraction(bits) + CertifiedReal::from_integer(1, bits);
    const auto num = CertifiedReal::from_integer(p_n, bits) * tail + CertifiedReal::from_integer(p_prev, bits);
    const auto den = CertifiedReal::from_integer(q_n, bits) * tail + CertifiedReal::from_integer(q_prev, bits);
    return num / den;
  };
  return src;
}

GaussStep gauss_step(const CertifiedReal& x) {
  const mpq_class one(1);
  if (x.compare(one) > 0) throw DomainError("Gauss map argument exceeds 1");
  if (mpfr_sgn(x.upper()) <= 0) throw DomainError("Gauss map argument is not positive");
  if (mpfr_sgn(x.lower()) <= 0 || mpfr_cmp_ui(x.upper(), 1) > 0) {
    throw AmbiguousDigit("interval reaches an endpoint of (0, 1]");
  }
  CertifiedReal r = x.reciprocal();
  auto digit = r.common_floor();
  if (!digit) throw AmbiguousDigit("interval straddles a reciprocal-integer boundary");
  CertifiedReal next = r - *digit;
  return {*digit, std::move(next)};
}

PartialQuotients expand(const mpq_class& alpha, std::size_t n_terms) {
  PartialQuotients pq;
  pq.source = DigitSource::ExpandedFromReal;
  mpz_fdiv_q(pq.a0.get_mpz_t(), alpha.get_num_mpz_t(), alpha.get_den_mpz_t());
  mpq_class frac = alpha - pq.a0;
  while (pq.digits.size() < n_terms) {
    if (frac == 0) {
      throw RationalInput("expansion of " + alpha.get_str() + " terminates after " +
                          std::to_string(pq.digits.size()) + " digits");
    }
    mpq_class r = 1 / frac;
    mpz_class d;
    mpz_fdiv_q(d.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    pq.digits.push_back(d);
    frac = r - d;
  }
  return pq;
}

PartialQuotients expand(const RealSource& alpha, std::size_t n_terms, const ExpandOptions& options) {
  if (alpha.exact) return expand(*alpha.exact, n_terms);
  for (mpfr_prec_t bits = options.initial_bits;; bits *= 2) {
    try {
      const CertifiedReal x = alpha.evaluate(bits);
      auto a0 = x.common_floor();
      if (!a0) throw AmbiguousDigit("integer part is ambiguous");
      PartialQuotients pq;
      pq.source = DigitSource::ExpandedFromReal;
      pq.a0 = *a0;
      CertifiedReal frac = x - *a0;
      while (pq.digits.size() < n_terms) {
        if (frac.is_exact_zero()) {
          throw RationalInput("expansion of " + alpha.name + " terminates after " +
                              std::to_string(pq.digits.size()) + " digits");
        }
        GaussStep step = gauss_step(frac);
        pq.digits.push_back(std::move(step.digit));
        frac = std::move(step.next);
      }
      return pq;
    } catch (const AmbiguousDigit&) {
      if (bits * 2 > options.max_bits) {
        throw PrecisionExhausted("could not resolve " + std::to_string(n_terms) + " digits of " +
                                 alpha.name + " within " + std::to_string(options.max_bits) + " bits");
      }
    }
  }
}

ConvergentTable convergents(const PartialQuotients& pq, std::size_t n_max) {
  if (n_max > pq.digits.size()) {
    throw InsufficientTable("requested " + std::to_string(n_max) + " convergents but only " +
                            std::to_string(pq.digits.size()) + " digits are available");
  }
  ConvergentTable table;
  table.entries.reserve(n_max + 1);
  mpz_class p_prev = 1, q_prev = 0;
  mpz_class p = pq.a0, q = 1;
  table.entries.push_back({0, p, q});
  for (std::size_t n = 1; n <= n_max; ++n) {
    const mpz_class& a = pq.digits[n - 1];
    mpz_class p_next = a * p + p_prev;
    mpz_class q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    table.entries.push_back({n, p, q});
  }
  return table;
}

mpq_class finite_value(const PartialQuotients& pq, std::size_t n) {
  if (n > pq.digits.size()) throw InsufficientTable("not enough digits for finite_value");
  mpq_class value = 0;
  bool any = false;
  for (std::size_t k = n; k >= 1; --k) {
    value = any ? mpq_class(pq.digits[k - 1]) + 1 / value : mpq_class(pq.digits[k - 1]);
    any = true;
  }
  return any ? mpq_class(pq.a0) + 1 / value : mpq_class(pq.a0);
}

std::vector<ApproximationCheck> check_approximation_bounds(const CertifiedReal& alpha,
                                                           const ConvergentTable& table) {
  std::vector<ApproximationCheck> out;
  for (std::size_t n = 1; n + 1 < table.size(); ++n) {
    const auto& cur = table[n];
    const auto& next = table[n + 1];
    const mpq_class approx(cur.p, cur.q);
    const mpz_class qq = cur.q * next.q;
    const mpq_class upper_bound(1, qq);
    const mpq_class lower_bound(1, 2 * qq);
    const CertifiedReal err = (alpha - approx).abs();
    ApproximationCheck check;
    check.n = n;
    const int lo = err.compare(lower_bound);
    const int hi = err.compare(upper_bound);
    if (lo == 0 || hi == 0) {
      throw Undecidable(n, "approximation bound undecidable at n = " + std::to_string(n));
    }
    check.lower_ok = lo > 0;
    check.upper_ok = hi < 0;
    out.push_back(check);
  }
  return out;
}

std::vector<ApproximationCheck> check_approximation_bounds(const RealSource& alpha,
                                                           const ConvergentTable& table,
                                                           const ExpandOptions& options) {
  for (mpfr_prec_t bits = options.initial_bits;; bits *= 2) {
    try {
      return check_approximation_bounds(alpha.evaluate(bits), table);
    } catch (const Undecidable&) {
      if (bits * 2 > options.max_bits) throw;
    }
  }
}

std::vector<std::size_t> growth_bound_violations(const ConvergentTable& table) {
  std::vector<std::size_t> bad;
  mpz_class lucas, fib, t;
  for (std::size_t n = 1; n < table.size(); ++n) {
    const unsigned long k = n - 1;
    mpz_lucnum_ui(lucas.get_mpz_t(), k);
    mpz_fib_ui(fib.get_mpz_t(), k);
    // 4 Q_n >= L_k + F_k sqrt 5
    t = 4 * table[n].q - lucas;
    const bool ok = t >= 0 && t * t >= 5 * fib * fib;
    if (!ok) bad.push_back(n);
  }
  return bad;
}

std::vector<std::string> table_violations(const PartialQuotients& pq, const ConvergentTable& table) {
  std::vector<std::string> issues;
  const mpz_class seed_p = 1, seed_q = 0;  // (P_-1, Q_-1)
  for (std::size_t n = 0; n < table.size(); ++n) {
    const auto& e = table[n];
    if (e.n != n) issues.push_back("entry index mismatch at " + std::to_string(n));
    mpz_class p_expect = pq.a0, q_expect = 1;
    if (n >= 1) {
      if (n - 1 >= pq.digits.size()) {
        issues.push_back("table longer than digit sequence");
        break;
      }
      const mpz_class& a = pq.digits[n - 1];
      if (a < 1) issues.push_back("digit a" + std::to_string(n) + " < 1");
      const mpz_class& p2 = n >= 2 ? table[n - 2].p : seed_p;
      const mpz_class& q2 = n >= 2 ? table[n - 2].q : seed_q;
      p_expect = a * table[n - 1].p + p2;
      q_expect = a * table[n - 1].q + q2;
    }
    if (e.p != p_expect || e.q != q_expect) {
      issues.push_back("recurrence fails at n = " + std::to_string(n));
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), e.p.get_mpz_t(), e.q.get_mpz_t());
    if (g != 1) issues.push_back("gcd(P, Q) != 1 at n = " + std::to_string(n));
    if (n >= 2 && !(e.q > table[n - 1].q)) {
      issues.push_back("Q not strictly increasing at n = " + std::to_string(n));
    }
  }
  return issues;
}

}  // namespace diocap::contfrac
