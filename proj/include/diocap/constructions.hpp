#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diocap/contfrac.hpp"

namespace diocap::constructions {

using contfrac::ConvergentTable;
using contfrac::LogSpaceEntry;
using contfrac::LogSpaceTable;
using contfrac::PartialQuotients;

enum class RuleKind { Constant, Polynomial, ExpOfQ, ExpExpOfQ, Custom };

// Digit law for a witness with a0 = 0. Seeds fix a1..ak; the law produces
// a_n for n > k:
//   Constant     a_n = c
//   Polynomial   a_n = n^d
//   ExpOfQ       a_n = ceil(e^{Q_{n-1}})
//   ExpExpOfQ    a_n = ceil(e^{e^{Q_{n-1}}})
//   Custom       a_n = custom(n, Q_0..Q_{n-1}); exact mode only
struct GrowthRule {
  RuleKind kind = RuleKind::Constant;
  unsigned long constant = 1;
  unsigned degree = 1;
  std::vector<mpz_class> seed_digits;
  std::function<mpz_class(std::size_t, std::span<const mpz_class>)> custom;
  std::string name;

  static GrowthRule constant_digits(unsigned long c, std::vector<mpz_class> seeds = {});
  static GrowthRule polynomial(unsigned degree, std::vector<mpz_class> seeds = {});
  static GrowthRule exp_of_q(std::vector<mpz_class> seeds = {2});
  static GrowthRule exp_exp_of_q(std::vector<mpz_class> seeds = {1});
  static GrowthRule custom_rule(std::function<mpz_class(std::size_t, std::span<const mpz_class>)> fn,
                                std::vector<mpz_class> seeds = {}, std::string name = "custom");

  // Upper bound on a_n when the law provides one (constant and polynomial).
  std::optional<double> digit_upper_bound(std::size_t n) const;
};

// Named witnesses: golden, nonbrjuno-exp, nonpm-expexp, and the parametric
// forms const:C, poly:D, exp:S1,S2,..., expexp:S1,... (seed digits).
GrowthRule parse_rule(const std::string& spec);

struct BuildOptions {
  // Exact big-integer convergents stop before Q_n would exceed this many
  // decimal digits.
  double max_decimal_digits = 1e6;
  int max_tower_level = 256;
};

struct Witness {
  PartialQuotients digits;       // materialized prefix plus tail bounds
  ConvergentTable exact;         // n = 0 .. exact prefix
  LogSpaceTable log_space;       // n = 0 .. n_terms, independent float recurrence
};

Witness build(const GrowthRule& rule, std::size_t n_terms, const BuildOptions& options = {});

// ceil(e^x) and ceil(e^{e^x}) for a positive integer x, certified.
mpz_class ceil_exp(const mpz_class& x);
mpz_class ceil_exp_exp(const mpz_class& x);

}  // namespace diocap::constructions
