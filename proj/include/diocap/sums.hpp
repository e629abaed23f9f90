#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "diocap/contfrac.hpp"
#include "diocap/tower.hpp"

namespace diocap::sums {

enum class SeriesKind { Brjuno, PerezMarco, Lemma1, Lemma2 };
enum class Growth { CauchyConverging, LinearGrowth, Superlinear, Inconclusive };

std::string to_string(SeriesKind kind);
std::string to_string(Growth growth);
SeriesKind parse_kind(const std::string& name);

// ln Q_0, ln Q_1, ... taken from an exact table (extended by its log-space
// continuation) or from a log-space table alone.
struct LogDenominators {
  std::vector<Tower> log_q;

  LogDenominators() = default;
  LogDenominators(const contfrac::ConvergentTable& table);  // NOLINT(google-explicit-constructor)
  LogDenominators(const contfrac::LogSpaceTable& table);    // NOLINT(google-explicit-constructor)

  std::size_t size() const noexcept { return log_q.size(); }
};

struct SeriesTerm {
  std::size_t n = 0;
  Tower value;            // exact-order magnitude, never overflows
  double term = 0.0;      // value as a double; +inf past double range
  bool underflow = false; // positive term that rounds to 0 as a double
  bool skipped = false;   // outside the series' domain; contributes 0
  bool in_split = false;  // n in the proof's index set (lemma kinds)
  // Cauchy-Schwarz factors for lemma1: ln^2 Q_{n+1} ln^{1+2e} Q_n / Q_n^2
  // and 1 / ln^{1+2e} Q_n. Their product is the squared Brjuno term.
  Tower cs_first;
  Tower cs_second;
};

struct SplitReport {
  std::vector<std::size_t> members;
  double sum_in = 0.0;
  double sum_out = 0.0;
  Tower tower_in;
  Tower tower_out;
};

struct SeriesReport {
  SeriesKind kind = SeriesKind::Brjuno;
  double epsilon = 0.0;
  std::size_t N = 0;
  std::vector<SeriesTerm> terms;
  // (N', S_N') for N' = 0..N; S_0 is the empty sum.
  std::vector<std::pair<std::size_t, double>> partial_sums;
  std::vector<Tower> tower_partial_sums;
  std::optional<SplitReport> split;
  Growth diagnostics = Growth::Inconclusive;
  std::size_t skipped = 0;
  bool all_skipped = false;
  bool any_underflow = false;

  double total() const { return partial_sums.back().second; }
};

struct SeriesOptions {
  double cauchy_tol = 1e-6;
};

SeriesReport brjuno_series(const LogDenominators& table, std::size_t N, const SeriesOptions& options = {});
SeriesReport pm_series(const LogDenominators& table, std::size_t N, const SeriesOptions& options = {});
SeriesReport lemma1_series(const LogDenominators& table, std::size_t N, double epsilon,
                           const SeriesOptions& options = {});
SeriesReport lemma2_series(const LogDenominators& table, std::size_t N, double epsilon,
                           const SeriesOptions& options = {});
SeriesReport series(SeriesKind kind, const LogDenominators& table, std::size_t N, double epsilon,
                    const SeriesOptions& options = {});

// Classification of S_N against S_{floor(N/2)}: cauchy-converging when the
// difference is below tol, linear-growth when the ratio lies in [1.8, 2.2],
// superlinear above.
Growth classify(const std::vector<Tower>& partial_sums, double tol);

struct CauchySchwarzCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  Tower tower_lhs;
  Tower tower_rhs;
};

// Sum over the complement of the split set for n <= N of the Brjuno terms,
// against the product bound built from cs_first and cs_second.
CauchySchwarzCheck cauchy_bunyakovsky_check(const SeriesReport& lemma1, std::size_t N);

struct BoundChainReport {
  double beta = 0.0;
  double threshold = 0.0;  // ln Q_n from which (ln Q_n)^beta < ln Q_n / 2
  std::size_t checked = 0;
  std::vector<std::size_t> violations;
};

// For n in the split set with ln Q_n >= threshold: ln Q_{n+1} < e^{(ln Q_n)^beta},
// beta = (2 + 3e) / (2 + 4e).
BoundChainReport bound_chain_check(const LogDenominators& table, const SeriesReport& lemma1);

// Partial sums of sum_{n >= 2, Q_n > 1} 1 / ln^{1 + 2e} Q_n, indexed like
// SeriesReport::partial_sums.
std::vector<std::pair<std::size_t, double>> comparison_series(const LogDenominators& table, std::size_t N,
                                                               double epsilon);

// |a - b| / max(|a|, |b|), 0 when both vanish.
double relative_difference(const Tower& a, const Tower& b);

}  // namespace diocap::sums
