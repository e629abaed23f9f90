#include <doctest.h>

#include <cmath>

#include "diocap/constructions.hpp"
#include "diocap/contfrac.hpp"
#include "diocap/error.hpp"
#include "diocap/parallel.hpp"
#include "diocap/sums.hpp"

using namespace diocap;
using namespace diocap::sums;

namespace {

LogDenominators golden_table(std::size_t n) {
  return LogDenominators(constructions::build(constructions::GrowthRule::constant_digits(1), n).exact);
}

LogDenominators exp_witness(std::size_t n) {
  return LogDenominators(constructions::build(constructions::GrowthRule::exp_of_q(), n).exact);
}

LogDenominators from_logs(std::vector<double> logs) {
  LogDenominators t;
  for (double x : logs) t.log_q.emplace_back(x);
  return t;
}

// Exact sum of the double terms, as a rational.
mpq_class exact_sum(const SeriesReport& r) {
  mpq_class s = 0;
  for (const auto& t : r.terms) s += mpq_class(t.term);
  return s;
}

}  // namespace

TEST_CASE("golden brjuno partial sums") {
  const auto r = brjuno_series(golden_table(10), 3);
  REQUIRE(r.terms.size() == 3);
  CHECK(r.terms[0].term == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(r.terms[1].term == doctest::Approx(std::log(3.0) / 2).epsilon(1e-14));
  CHECK(r.terms[2].term == doctest::Approx(std::log(5.0) / 3).epsilon(1e-14));
  CHECK(r.total() == doctest::Approx(std::log(2.0) + std::log(3.0) / 2 + std::log(5.0) / 3).epsilon(1e-14));
  CHECK(r.total() == doctest::Approx(1.778).epsilon(1e-3));
}

TEST_CASE("empty sums") {
  const auto r = brjuno_series(from_logs({0.0}), 0);
  CHECK(r.total() == 0.0);
  CHECK(r.partial_sums.size() == 1);
  CHECK(lemma1_series(golden_table(4), 1, 0.1).total() == 0.0);
}

TEST_CASE("tables that are too short are rejected") {
  CHECK_THROWS_AS(brjuno_series(from_logs({0.0, 0.5}), 3), InsufficientTable);
  CHECK_THROWS_AS(pm_series(from_logs({0.0, 0.5}), 3), InsufficientTable);
}

TEST_CASE("perez-marco terms") {
  const auto r = pm_series(golden_table(10), 4);
  // n = 1 has Q_2 = 2 < e and is skipped.
  CHECK(r.terms[0].skipped);
  CHECK(r.skipped >= 1);
  CHECK(r.terms[1].term == doctest::Approx(std::log(std::log(3.0)) / 2).epsilon(1e-13));
  CHECK(r.terms[1].term == doctest::Approx(0.0471).epsilon(1e-2));
}

TEST_CASE("exp-of-Q witness separates the two classes") {
  const auto table = exp_witness(41);
  const auto b = brjuno_series(table, 40);
  for (std::size_t n = 2; n <= 40; ++n) {
    CHECK(b.terms[n - 1].term >= 1.0);
    CHECK(b.terms[n - 1].term <= 1.5);
  }
  CHECK(b.diagnostics == Growth::LinearGrowth);
  CHECK(pm_series(table, 40).diagnostics == Growth::CauchyConverging);
}

TEST_CASE("exp-exp witness perez-marco terms are of order one") {
  const LogDenominators table(constructions::build(constructions::GrowthRule::exp_exp_of_q(), 21).exact);
  const auto r = pm_series(table, 20);
  for (std::size_t n = 2; n <= 20; ++n) {
    CHECK(r.terms[n - 1].term >= 0.9);
    CHECK(r.terms[n - 1].term <= 1.5);
  }
  CHECK(r.diagnostics == Growth::LinearGrowth);
  // The triple-log lemma series diverges as well.
  const auto l2 = lemma2_series(table, 20, 0.1);
  CHECK((l2.diagnostics == Growth::LinearGrowth || l2.diagnostics == Growth::Superlinear));
}

TEST_CASE("lemma1 term for the golden ratio") {
  const auto r = lemma1_series(golden_table(10), 5, 0.1);
  REQUIRE(r.terms.front().n == 2);
  const double l2 = std::log(2.0);
  const double l3 = std::log(3.0);
  const double expected = l3 * l3 * std::pow(std::log(l3), 2.4) / (4.0 * std::pow(l2, 1.1));
  CHECK(r.terms.front().term == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("lemma1 rejects a non-positive iterated log") {
  CHECK_THROWS_AS(lemma1_series(from_logs({0.0, 0.5, 0.6, 0.9, 2.0}), 3, 0.1), DomainError);
}

TEST_CASE("lemma2 on the golden ratio converges") {
  const auto r = lemma2_series(golden_table(50), 40, 0.1);
  CHECK(r.diagnostics == Growth::CauchyConverging);
  CHECK(r.terms.back().term < 1e-6);
}

TEST_CASE("lemma2 with every Q below e^e skips everything") {
  const auto r = lemma2_series(golden_table(7), 5, 0.1);
  CHECK(r.all_skipped);
  CHECK(r.total() == 0.0);
}

TEST_CASE("lemma1 on the exp-of-Q witness grows and its split decomposes") {
  const auto table = exp_witness(41);
  const auto r = lemma1_series(table, 40, 0.1);
  CHECK((r.diagnostics == Growth::LinearGrowth || r.diagnostics == Growth::Superlinear));
  REQUIRE(r.split);
  CHECK(relative_difference(r.split->tower_in + r.split->tower_out, r.tower_partial_sums.back()) <= 1e-12);
  // The complement of the split set carries the sum.
  CHECK(r.split->tower_out >= r.split->tower_in);
}

TEST_CASE("decomposition identity on the golden ratio") {
  const auto r = lemma1_series(golden_table(41), 40, 0.1);
  REQUIRE(r.split);
  CHECK(std::abs(r.split->sum_in + r.split->sum_out - r.total()) <= 1e-12 * r.total());
}

TEST_CASE("cauchy-bunyakovsky inequality") {
  const auto golden = lemma1_series(golden_table(21), 20, 0.1);
  for (std::size_t N = 0; N <= 20; ++N) CHECK(cauchy_bunyakovsky_check(golden, N).holds);

  const auto exp = lemma1_series(exp_witness(41), 40, 0.1);
  for (std::size_t N = 0; N <= 40; ++N) CHECK(cauchy_bunyakovsky_check(exp, N).holds);

  // One term outside the split set: Cauchy-Schwarz with equality.
  const auto single = lemma1_series(from_logs({0.0, 0.5, 1.0, std::exp(2.0)}), 2, 0.1);
  REQUIRE(single.split);
  CHECK(single.split->members.empty());
  const auto cs = cauchy_bunyakovsky_check(single, 2);
  CHECK(cs.lhs > 0.0);
  CHECK(cs.holds);
  CHECK(std::abs(cs.rhs - cs.lhs) <= 1e-12 * cs.lhs);
}

TEST_CASE("bound chain on split members") {
  for (const auto& table : {golden_table(41), exp_witness(41)}) {
    const auto r = lemma1_series(table, 40, 0.1);
    const auto chain = bound_chain_check(table, r);
    CHECK(chain.beta == doctest::Approx(2.3 / 2.4));
    CHECK(chain.threshold == doctest::Approx(std::pow(2.0, 1.0 / (1.0 - 2.3 / 2.4))));
    CHECK(chain.violations.empty());
  }
}

TEST_CASE("comparison series is cauchy") {
  const auto golden = comparison_series(golden_table(61), 60, 0.1);
  CHECK(golden.back().second > 0.0);
  const auto exp = comparison_series(exp_witness(41), 40, 0.1);
  CHECK(std::abs(exp[40].second - exp[20].second) < 1e-3);
}

TEST_CASE("partial sums are monotone and match exact rational summation") {
  const auto table = golden_table(12);
  for (auto kind : {SeriesKind::Brjuno, SeriesKind::PerezMarco, SeriesKind::Lemma1, SeriesKind::Lemma2}) {
    const auto r = series(kind, table, 10, 0.1);
    for (std::size_t k = 1; k < r.partial_sums.size(); ++k) CHECK(r.partial_sums[k].second >= r.partial_sums[k - 1].second);
    const double exact = exact_sum(r).get_d();
    CHECK(std::abs(r.total() - exact) <= 1e-12 * std::abs(exact));
  }
}

TEST_CASE("classification") {
  std::vector<Tower> flat{0.0, 1.0, 1.5, 1.75, 1.75, 1.75, 1.75};
  CHECK(classify(flat, 1e-6) == Growth::CauchyConverging);
  std::vector<Tower> linear;
  for (int k = 0; k <= 10; ++k) linear.emplace_back(static_cast<double>(k));
  CHECK(classify(linear, 1e-6) == Growth::LinearGrowth);
  std::vector<Tower> quadratic;
  for (int k = 0; k <= 10; ++k) quadratic.emplace_back(static_cast<double>(k * k));
  CHECK(classify(quadratic, 1e-6) == Growth::Superlinear);
  CHECK(to_string(Growth::CauchyConverging) == "cauchy-converging");
  CHECK(parse_kind("pm") == SeriesKind::PerezMarco);
  CHECK_THROWS_AS(parse_kind("zeta"), UsageError);
}

TEST_CASE("reports do not depend on the thread count") {
  const auto table = golden_table(61);
  set_thread_count(1);
  const auto a = lemma1_series(table, 60, 0.1);
  set_thread_count(8);
  const auto b = lemma1_series(table, 60, 0.1);
  for (std::size_t k = 0; k < a.partial_sums.size(); ++k) CHECK(a.partial_sums[k].second == b.partial_sums[k].second);
}
