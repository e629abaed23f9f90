#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "diocap/capacity.hpp"
#include "diocap/constructions.hpp"
#include "diocap/contfrac.hpp"
#include "diocap/measures.hpp"
#include "diocap/sums.hpp"

namespace diocap::io {

using nlohmann::ordered_json;

// Finite doubles as numbers; inf and nan as the strings "inf", "-inf", "nan".
ordered_json number(double x);

// Integers that fit a long as numbers, larger ones as decimal strings.
ordered_json integer(const mpz_class& z);

// Shortest round-trip decimal, '.' separator regardless of locale.
std::string format_double(double x);

ordered_json to_json(const contfrac::PartialQuotients& pq, const contfrac::ConvergentTable& table);
ordered_json to_json(const contfrac::LogSpaceTable& table);
ordered_json to_json(const sums::SeriesReport& report);
ordered_json to_json(const measures::AtomicMeasure& measure, bool with_atoms);
ordered_json to_json(const capacity::CapacityEstimate& estimate);
ordered_json to_json(const capacity::PropertyReport& report);
ordered_json to_json(const capacity::CoverEstimate& cover);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

std::string series_csv(const sums::SeriesReport& report);

}  // namespace diocap::io
