#include "io.hpp"

#include <charconv>
#include <cmath>

#include "diocap/error.hpp"

namespace diocap::io {

ordered_json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

ordered_json integer(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

ordered_json to_json(const contfrac::PartialQuotients& pq, const contfrac::ConvergentTable& table) {
  ordered_json j;
  j["a0"] = integer(pq.a0);
  ordered_json digits = ordered_json::array();
  for (const auto& d : pq.digits) digits.push_back(integer(d));
  j["digits"] = std::move(digits);
  ordered_json conv = ordered_json::array();
  for (const auto& c : table.entries) conv.push_back({c.n, c.p.get_str(), c.q.get_str()});
  j["convergents"] = std::move(conv);
  return j;
}

ordered_json to_json(const contfrac::LogSpaceTable& table) {
  ordered_json out = ordered_json::array();
  for (const auto& e : table) {
    ordered_json row;
    row["n"] = e.n;
    row["lnQ"] = number(e.log_q.to_double());
    row["lnlnQ"] = e.log_log_q ? number(e.log_log_q->to_double()) : ordered_json("-inf");
    row["rel_err"] = number(e.rel_err);
    if (!e.log_q.finite_double()) row["lnQ_tower"] = e.log_q.to_string();
    out.push_back(std::move(row));
  }
  return out;
}

ordered_json to_json(const sums::SeriesReport& report) {
  ordered_json j;
  j["kind"] = sums::to_string(report.kind);
  if (report.kind == sums::SeriesKind::Lemma1 || report.kind == sums::SeriesKind::Lemma2) {
    j["epsilon"] = report.epsilon;
  }
  j["N"] = report.N;
  j["total"] = number(report.total());
  j["total_tower"] = report.tower_partial_sums.back().to_string();
  j["diagnostics"] = sums::to_string(report.diagnostics);
  j["skipped"] = report.skipped;
  j["all_skipped"] = report.all_skipped;
  j["any_underflow"] = report.any_underflow;
  ordered_json terms = ordered_json::array();
  for (const auto& t : report.terms) {
    ordered_json row;
    row["n"] = t.n;
    row["term"] = number(t.term);
    if (!t.value.finite_double()) row["term_tower"] = t.value.to_string();
    if (t.skipped) row["skipped"] = true;
    if (t.underflow) row["underflow"] = true;
    if (report.split) row["in_split"] = t.in_split;
    terms.push_back(std::move(row));
  }
  j["terms"] = std::move(terms);
  ordered_json sums_json = ordered_json::array();
  for (const auto& [n, s] : report.partial_sums) sums_json.push_back({n, number(s)});
  j["partial_sums"] = std::move(sums_json);
  if (report.split) {
    j["split"] = {{"members", report.split->members},
                  {"sum_in", number(report.split->sum_in)},
                  {"sum_out", number(report.split->sum_out)}};
  }
  return j;
}

ordered_json to_json(const measures::AtomicMeasure& measure, bool with_atoms) {
  ordered_json j;
  j["epsilon"] = measure.epsilon ? number(*measure.epsilon) : ordered_json(nullptr);
  j["q_max"] = measure.q_max ? ordered_json(*measure.q_max) : ordered_json(nullptr);
  if (with_atoms) {
    ordered_json atoms = ordered_json::array();
    measure.for_each_atom([&](const mpq_class& x, double w) { atoms.push_back({x.get_str(), w}); });
    j["atoms"] = std::move(atoms);
  }
  return j;
}

ordered_json to_json(const capacity::CapacityEstimate& e) {
  ordered_json j;
  j["W"] = number(e.W);
  j["C"] = number(e.C);
  j["gap"] = number(e.duality_gap);
  j["iters"] = e.iterations;
  ordered_json w = ordered_json::array();
  for (double x : e.weights) w.push_back(number(x));
  j["weights"] = std::move(w);
  if (e.sigma_warning) j["warning"] = "sigma <= 2";
  return j;
}

ordered_json to_json(const capacity::PropertyReport& r) {
  auto violations = [](const std::vector<capacity::PropertyViolation>& v) {
    ordered_json out = ordered_json::array();
    for (const auto& x : v) out.push_back({x.first, x.second, number(x.excess)});
    return out;
  };
  ordered_json j;
  ordered_json caps = ordered_json::array();
  for (double c : r.capacities) caps.push_back(number(c));
  j["capacities"] = std::move(caps);
  j["monotonicity"] = {{"checked", r.monotonicity_checked}, {"violations", violations(r.monotonicity_violations)}};
  j["subadditivity"] = {{"checked", r.subadditivity_checked},
                        {"violations", violations(r.subadditivity_violations)},
                        {"skipped", r.unions_skipped}};
  j["notes"] = r.notes;
  return j;
}

ordered_json to_json(const capacity::CoverEstimate& cover) {
  ordered_json j;
  j["scale"] = number(cover.scale);
  j["count"] = cover.intervals.size();
  j["gauge_sum"] = number(cover.gauge_sum);
  ordered_json iv = ordered_json::array();
  for (const auto& i : cover.intervals) iv.push_back({i.center.get_str(), number(i.radius)});
  j["intervals"] = std::move(iv);
  return j;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("csv row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::string series_csv(const sums::SeriesReport& report) {
  CsvWriter csv({"n", "term", "partial_sum", "in_N_split"});
  for (const auto& t : report.terms) {
    csv.row({std::to_string(t.n), format_double(t.term), format_double(report.partial_sums[t.n].second),
             t.in_split ? "1" : "0"});
  }
  return csv.str();
}

}  // namespace diocap::io
