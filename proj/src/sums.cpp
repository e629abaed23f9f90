#include "diocap/sums.hpp"

#include <cmath>
#include <limits>

#include "diocap/error.hpp"
#include "diocap/numeric.hpp"
#include "diocap/parallel.hpp"
#include "diocap/summation.hpp"

namespace diocap::sums {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Tower kE(std::exp(1.0));

struct TermSpec {
  std::size_t first_n;
  // Fills value/skipped/in_split/cs_* for index n; L = ln Q table.
  std::function<void(const std::vector<Tower>&, std::size_t, SeriesTerm&)> eval;
};

// Shared shape of the two lemma series: with g = ln Q_{n+1} (lemma1) or
// ln ln Q_{n+1} (lemma2), the term is g^2 (ln g)^{2+4e} / (Q_n^2 ln^{1+e} Q_n).
// Logs are regrouped so that the pieces which cancel at high tower levels meet
// first; a tower cannot tell c*x from x once x is beyond level 1.
void lemma_term(const Tower& log_g, const Tower& log_log_g, const Tower& ln_q, double epsilon, SeriesTerm& t) {
  const double c = 2 + 4 * epsilon;
  const Tower log_ln_q = ln_q.log();
  const Tower head = Tower(2.0) * (log_g - ln_q);  // ln(g^2 / Q_n^2)
  const Tower gap = log_log_g - log_ln_q;
  t.value = (head + Tower(c) * gap + Tower(c - (1 + epsilon)) * log_ln_q).exp();
  // (ln g)^{2+4e} < (ln Q_n)^{2+3e}
  t.in_split = Tower(c) * gap < -(Tower(epsilon) * log_ln_q);
  t.cs_first = (head + Tower(1 + 2 * epsilon) * log_ln_q).exp();
  t.cs_second = (-(Tower(1 + 2 * epsilon) * log_ln_q)).exp();
}

SeriesReport run(SeriesKind kind, const LogDenominators& table, std::size_t N, double epsilon,
                 const SeriesOptions& options) {
  if (table.size() < N + 2 && N > 0) {
    throw InsufficientTable("series needs ln Q_n up to n = " + std::to_string(N + 1) + ", table has " +
                            std::to_string(table.size()) + " entries");
  }
  const bool lemma = kind == SeriesKind::Lemma1 || kind == SeriesKind::Lemma2;
  if (lemma && !(epsilon > 0)) throw DomainError("epsilon must be positive");

  TermSpec spec{1, {}};
  switch (kind) {
    case SeriesKind::Brjuno:
      spec = {1, [](const std::vector<Tower>& L, std::size_t n, SeriesTerm& t) {
                t.value = (L[n + 1].log() - L[n]).exp();
              }};
      break;
    case SeriesKind::PerezMarco:
      spec = {1, [](const std::vector<Tower>& L, std::size_t n, SeriesTerm& t) {
                if (!(L[n + 1] > Tower(1.0))) {
                  t.skipped = true;
                  return;
                }
                t.value = (L[n + 1].log().log() - L[n]).exp();
              }};
      break;
    case SeriesKind::Lemma1:
      spec = {2, [epsilon](const std::vector<Tower>& L, std::size_t n, SeriesTerm& t) {
                if (!(L[n + 1] > Tower(1.0))) {
                  throw DomainError("ln ln Q_" + std::to_string(n + 1) + " <= 0");
                }
                if (L[n].is_zero()) throw DomainError("Q_" + std::to_string(n) + " = 1");
                const Tower g = L[n + 1].log();
                lemma_term(g, g.log(), L[n], epsilon, t);
              }};
      break;
    case SeriesKind::Lemma2:
      spec = {1, [epsilon](const std::vector<Tower>& L, std::size_t n, SeriesTerm& t) {
                if (!(L[n + 1] > kE) || L[n].is_zero()) {
                  t.skipped = true;
                  return;
                }
                const Tower g = L[n + 1].log().log();
                lemma_term(g, g.log(), L[n], epsilon, t);
              }};
      break;
  }

  SeriesReport report;
  report.kind = kind;
  report.epsilon = lemma ? epsilon : 0.0;
  report.N = N;
  const std::size_t count = N >= spec.first_n ? N - spec.first_n + 1 : 0;
  report.terms.resize(count);
  parallel_for(count, [&](std::size_t i) {
    SeriesTerm& t = report.terms[i];
    t.n = spec.first_n + i;
    spec.eval(table.log_q, t.n, t);
    if (t.skipped) {
      t.value = Tower(0.0);
      t.in_split = false;
      return;
    }
    t.term = t.value.to_double();
    t.underflow = t.term == 0.0;
  });

  CompensatedSum acc;
  bool infinite = false;
  Tower tower_sum(0.0);
  report.partial_sums.reserve(N + 1);
  report.tower_partial_sums.reserve(N + 1);
  std::size_t next = 0;
  for (std::size_t m = 0; m <= N; ++m) {
    if (next < report.terms.size() && report.terms[next].n == m) {
      const SeriesTerm& t = report.terms[next++];
      if (t.skipped) {
        ++report.skipped;
      } else {
        if (std::isinf(t.term)) infinite = true;
        else acc.add(t.term);
        tower_sum = tower_sum + t.value;
        report.any_underflow = report.any_underflow || t.underflow;
      }
    }
    report.partial_sums.emplace_back(m, infinite ? kInf : acc.value());
    report.tower_partial_sums.push_back(tower_sum);
  }
  report.all_skipped = !report.terms.empty() && report.skipped == report.terms.size();

  if (lemma) {
    SplitReport split;
    CompensatedSum in, out;
    bool in_inf = false, out_inf = false;
    split.tower_in = Tower(0.0);
    split.tower_out = Tower(0.0);
    for (const auto& t : report.terms) {
      if (t.skipped) continue;
      if (t.in_split) {
        split.members.push_back(t.n);
        if (std::isinf(t.term)) in_inf = true;
        else in.add(t.term);
        split.tower_in = split.tower_in + t.value;
      } else {
        if (std::isinf(t.term)) out_inf = true;
        else out.add(t.term);
        split.tower_out = split.tower_out + t.value;
      }
    }
    split.sum_in = in_inf ? kInf : in.value();
    split.sum_out = out_inf ? kInf : out.value();
    report.split = std::move(split);
  }
  report.diagnostics = classify(report.tower_partial_sums, options.cauchy_tol);
  return report;
}

}  // namespace

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Brjuno: return "brjuno";
    case SeriesKind::PerezMarco: return "pm";
    case SeriesKind::Lemma1: return "lemma1";
    case SeriesKind::Lemma2: return "lemma2";
  }
  return "?";
}

std::string to_string(Growth growth) {
  switch (growth) {
    case Growth::CauchyConverging: return "cauchy-converging";
    case Growth::LinearGrowth: return "linear-growth";
    case Growth::Superlinear: return "superlinear";
    case Growth::Inconclusive: return "inconclusive";
  }
  return "?";
}

SeriesKind parse_kind(const std::string& name) {
  if (name == "brjuno") return SeriesKind::Brjuno;
  if (name == "pm" || name == "perez-marco") return SeriesKind::PerezMarco;
  if (name == "lemma1") return SeriesKind::Lemma1;
  if (name == "lemma2") return SeriesKind::Lemma2;
  throw UsageError("unknown series kind: " + name);
}

LogDenominators::LogDenominators(const contfrac::ConvergentTable& table) {
  for (const auto& c : table.entries) log_q.push_back(Tower(ln_mpz(c.q)));
  for (const auto& e : table.log_q) {
    if (e.n == log_q.size()) log_q.push_back(e.log_q);
  }
}

LogDenominators::LogDenominators(const contfrac::LogSpaceTable& table) {
  for (const auto& e : table) {
    if (e.n != log_q.size()) throw InsufficientTable("log-space table is not contiguous from n = 0");
    log_q.push_back(e.log_q);
  }
}

SeriesReport brjuno_series(const LogDenominators& table, std::size_t N, const SeriesOptions& options) {
  return run(SeriesKind::Brjuno, table, N, 0.0, options);
}

SeriesReport pm_series(const LogDenominators& table, std::size_t N, const SeriesOptions& options) {
  return run(SeriesKind::PerezMarco, table, N, 0.0, options);
}

SeriesReport lemma1_series(const LogDenominators& table, std::size_t N, double epsilon,
                           const SeriesOptions& options) {
  return run(SeriesKind::Lemma1, table, N, epsilon, options);
}

SeriesReport lemma2_series(const LogDenominators& table, std::size_t N, double epsilon,
                           const SeriesOptions& options) {
  return run(SeriesKind::Lemma2, table, N, epsilon, options);
}

SeriesReport series(SeriesKind kind, const LogDenominators& table, std::size_t N, double epsilon,
                    const SeriesOptions& options) {
  return run(kind, table, N, epsilon, options);
}

Growth classify(const std::vector<Tower>& partial_sums, double tol) {
  if (partial_sums.size() < 3) return Growth::Inconclusive;
  const std::size_t N = partial_sums.size() - 1;
  const Tower& full = partial_sums[N];
  const Tower& half = partial_sums[N / 2];
  if ((full - half) < Tower(tol)) return Growth::CauchyConverging;
  if (half.is_zero()) return Growth::Inconclusive;
  const double ratio = (full / half).to_double();
  if (ratio >= 1.8 && ratio <= 2.2) return Growth::LinearGrowth;
  if (ratio > 2.2) return Growth::Superlinear;
  return Growth::Inconclusive;
}

CauchySchwarzCheck cauchy_bunyakovsky_check(const SeriesReport& lemma1, std::size_t N) {
  Tower lhs(0.0), first(0.0), second(0.0);
  for (const auto& t : lemma1.terms) {
    if (t.n > N || t.skipped || t.in_split) continue;
    lhs = lhs + (t.cs_first * t.cs_second).pow(0.5);
    first = first + t.cs_first;
    second = second + t.cs_second;
  }
  CauchySchwarzCheck check;
  check.tower_lhs = lhs;
  check.tower_rhs = (first.is_zero() || second.is_zero()) ? Tower(0.0) : first.pow(0.5) * second.pow(0.5);
  check.lhs = lhs.to_double();
  check.rhs = check.tower_rhs.to_double();
  check.holds = lhs <= check.tower_rhs * Tower(1 + 1e-12);
  return check;
}

BoundChainReport bound_chain_check(const LogDenominators& table, const SeriesReport& lemma) {
  BoundChainReport report;
  const double e = lemma.epsilon;
  report.beta = (2 + 3 * e) / (2 + 4 * e);
  report.threshold = std::pow(2.0, 1.0 / (1.0 - report.beta));
  if (!lemma.split) return report;
  for (std::size_t n : lemma.split->members) {
    const Tower& ln_q = table.log_q.at(n);
    if (ln_q < Tower(report.threshold)) continue;
    ++report.checked;
    // lemma1 bounds ln Q_{n+1}; lemma2 bounds ln ln Q_{n+1}.
    Tower bounded = table.log_q.at(n + 1);
    if (lemma.kind == SeriesKind::Lemma2) bounded = bounded.log();
    // ln bounded < (ln Q_n)^beta, compared as ln ln bounded - ln ln Q_n < (beta - 1) ln ln Q_n
    const Tower log_ln_q = ln_q.log();
    if (!(bounded.log().log() - log_ln_q < Tower(report.beta - 1) * log_ln_q)) report.violations.push_back(n);
  }
  return report;
}

std::vector<std::pair<std::size_t, double>> comparison_series(const LogDenominators& table, std::size_t N,
                                                               double epsilon) {
  if (table.size() < N + 1) throw InsufficientTable("comparison series needs ln Q_n up to n = N");
  std::vector<double> terms(N + 1, 0.0);
  parallel_for(N + 1, [&](std::size_t n) {
    if (n < 2 || table.log_q[n].is_zero()) return;
    terms[n] = (-(Tower(1 + 2 * epsilon) * table.log_q[n].log())).exp().to_double();
  });
  std::vector<std::pair<std::size_t, double>> sums;
  CompensatedSum acc;
  for (std::size_t n = 0; n <= N; ++n) {
    acc.add(terms[n]);
    sums.emplace_back(n, acc.value());
  }
  return sums;
}

double relative_difference(const Tower& a, const Tower& b) {
  if (a == b) return 0.0;
  const Tower scale = std::max(a.abs(), b.abs(), [](const Tower& x, const Tower& y) { return x < y; });
  return ((a - b).abs() / scale).to_double();
}

}  // namespace diocap::sums
