#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diocap/certified_real.hpp"
#include "diocap/tower.hpp"

namespace diocap::contfrac {

enum class DigitSource { ExpandedFromReal, Prescribed };

// Continued-fraction digits a0; a1, a2, ... of a real number. Only a finite
// prefix is ever materialized; what is known about the rest is carried in the
// two bound fields.
struct PartialQuotients {
  mpz_class a0 = 0;
  std::vector<mpz_class> digits;  // a1 .. aN, every entry >= 1
  DigitSource source = DigitSource::Prescribed;
  std::string rule;  // name of the generating rule, empty when expanded

  // Lower bound for the first digit that is not materialized (a_{N+1}).
  mpz_class next_digit_lower_bound = 1;
  // Upper bound on every digit a_k, k >= 1, when one is known.
  std::optional<mpz_class> digit_upper_bound;
};

struct Convergent {
  std::size_t n = 0;
  mpz_class p;
  mpz_class q;
};

// ln Q_n carried in level-index form once Q_n is too large to materialize.
struct LogSpaceEntry {
  std::size_t n = 0;
  Tower log_q;
  std::optional<Tower> log_log_q;  // empty when Q_n = 1
  double rel_err = 0.0;  // bound on |log_q - ln Q_n| / ln Q_n; +inf if unknown
};

using LogSpaceTable = std::vector<LogSpaceEntry>;

struct ConvergentTable {
  std::vector<Convergent> entries;  // n = 0, 1, ..., contiguous
  LogSpaceTable log_q;              // optional asymptotic continuation

  std::size_t size() const noexcept { return entries.size(); }
  const Convergent& operator[](std::size_t n) const { return entries.at(n); }
};

// A real number that can be re-evaluated at any requested precision. `exact`
// is set when the number is a known rational, which routes expansion through
// exact arithmetic.
struct RealSource {
  std::string name;
  std::function<CertifiedReal(mpfr_prec_t)> evaluate;
  std::optional<mpq_class> exact;
  std::optional<mpz_class> digit_upper_bound;
};

RealSource named_constant(const std::string& name);
RealSource rational_source(const mpq_class& q);
// Value of [a0; digits..., 1, 1, 1, ...]: the prescribed prefix followed by
// a golden-ratio tail, so the number is irrational and the prefix is exactly
// its leading digits.
RealSource prescribed_source(const PartialQuotients& pq);

struct GaussStep {
  mpz_class digit;
  CertifiedReal next;
};

// One application of the Gauss map x -> 1/x - floor(1/x) on x in (0, 1].
// Throws AmbiguousDigit if floor(1/x) is not constant on the interval.
GaussStep gauss_step(const CertifiedReal& x);

struct ExpandOptions {
  mpfr_prec_t initial_bits = 128;
  mpfr_prec_t max_bits = mpfr_prec_t{1} << 20;
};

// First n_terms digits of alpha. Precision is doubled and the expansion
// restarted whenever a digit is ambiguous.
PartialQuotients expand(const RealSource& alpha, std::size_t n_terms, const ExpandOptions& options = {});
PartialQuotients expand(const mpq_class& alpha, std::size_t n_terms);

ConvergentTable convergents(const PartialQuotients& pq, std::size_t n_max);

// [a0; a1, ..., an] evaluated as an exact rational.
mpq_class finite_value(const PartialQuotients& pq, std::size_t n);

struct ApproximationCheck {
  std::size_t n = 0;
  bool lower_ok = false;  // 1/(2 Q_n Q_{n+1}) < |alpha - P_n/Q_n|
  bool upper_ok = false;  // |alpha - P_n/Q_n| < 1/(Q_n Q_{n+1})
};

// Checks both approximation inequalities for every n >= 1 with n+1 in the
// table. Throws Undecidable when the interval cannot separate the sides.
std::vector<ApproximationCheck> check_approximation_bounds(const CertifiedReal& alpha,
                                                           const ConvergentTable& table);
// Same, re-evaluating alpha at doubled precision until every index decides.
std::vector<ApproximationCheck> check_approximation_bounds(const RealSource& alpha,
                                                           const ConvergentTable& table,
                                                           const ExpandOptions& options = {});

// Indices n >= 1 where Q_n >= (1/2) * phi^(n-1) fails; compared exactly via
// phi^k = (L_k + F_k sqrt 5) / 2.
std::vector<std::size_t> growth_bound_violations(const ConvergentTable& table);

// Recurrence, coprimality and monotonicity violations, as messages.
std::vector<std::string> table_violations(const PartialQuotients& pq, const ConvergentTable& table);

}  // namespace diocap::contfrac
