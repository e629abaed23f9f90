#include "diocap/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "diocap/capacity.hpp"
#include "diocap/constructions.hpp"
#include "diocap/contfrac.hpp"
#include "diocap/error.hpp"
#include "diocap/kernels.hpp"
#include "diocap/measures.hpp"
#include "diocap/parallel.hpp"
#include "diocap/sums.hpp"
#include "io.hpp"

namespace diocap::cli {
namespace {

using io::format_double;
using io::number;
using io::ordered_json;

const std::vector<std::string> kConstants = {"golden", "pi", "pi-frac", "e", "e-frac", "sqrt2", "sqrt2-frac"};

bool is_constant(const std::string& s) { return std::find(kConstants.begin(), kConstants.end(), s) != kConstants.end(); }

// p/q, an integer, or a plain decimal such as -0.125.
std::optional<mpq_class> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  mpq_class q;
  if (s.find('/') != std::string::npos) {
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return q;
  }
  std::string digits = s;
  bool negative = false;
  if (digits[0] == '-' || digits[0] == '+') {
    negative = digits[0] == '-';
    digits.erase(0, 1);
  }
  const auto dot = digits.find('.');
  std::string frac;
  if (dot != std::string::npos) {
    frac = digits.substr(dot + 1);
    digits.erase(dot);
  }
  if (digits.empty() && frac.empty()) return std::nullopt;
  for (char c : digits + frac) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  mpz_class num(digits.empty() ? "0" : digits, 10);
  mpz_class den = 1;
  for (char c : frac) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  q = mpq_class(num, den);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

contfrac::RealSource parse_value(const std::string& s) {
  if (is_constant(s)) return contfrac::named_constant(s);
  if (auto q = parse_rational(s)) return contfrac::rational_source(*q);
  throw UsageError("value must be a named constant (" + CLI::detail::join(kConstants) + ") or a rational: " + s);
}

// "a:b:xk" geometric, "a:b:+s" arithmetic, or a comma list.
std::vector<std::uint64_t> parse_sweep(const std::string& s) {
  std::vector<std::uint64_t> out;
  const auto parts = CLI::detail::split(s, ':');
  try {
    if (parts.size() == 3) {
      const std::uint64_t a = std::stoull(parts[0]);
      const std::uint64_t b = std::stoull(parts[1]);
      const std::string& step = parts[2];
      if (step.size() < 2 || (step[0] != 'x' && step[0] != '+')) throw UsageError("sweep step must be xK or +S");
      const std::uint64_t k = std::stoull(step.substr(1));
      if (k < (step[0] == 'x' ? 2u : 1u)) throw UsageError("sweep step too small");
      for (std::uint64_t v = a; v <= b; v = step[0] == 'x' ? v * k : v + k) out.push_back(v);
    } else {
      for (const auto& p : CLI::detail::split(s, ',')) out.push_back(std::stoull(p));
    }
  } catch (const std::logic_error&) {
    throw UsageError("invalid sweep: " + s);
  }
  if (out.empty()) throw UsageError("empty sweep: " + s);
  return out;
}

// Comma list of doubles, or "a:b:n" for n equispaced points.
std::vector<double> parse_points(const std::string& s) {
  std::vector<double> out;
  const auto parts = CLI::detail::split(s, ':');
  try {
    if (parts.size() == 3) {
      const double a = std::stod(parts[0]);
      const double b = std::stod(parts[1]);
      const std::size_t n = std::stoul(parts[2]);
      if (n == 0) throw UsageError("grid needs at least one point");
      for (std::size_t i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
    } else {
      for (const auto& p : CLI::detail::split(s, ',')) out.push_back(std::stod(p));
    }
  } catch (const std::logic_error&) {
    throw UsageError("invalid point list: " + s);
  }
  return out;
}

mpq_class require_rational(const std::string& s, const std::string& what) {
  auto q = parse_rational(s);
  if (!q) throw UsageError(what + " must be a rational number: " + s);
  return *q;
}

struct Common {
  std::string format = "json";
  std::string output;
  std::size_t threads = 0;
  long precision_bits = 128;
};

struct Output {
  std::string text;
};

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---- subcommands -------------------------------------------------------

struct ExpandArgs {
  std::string value;
  std::size_t terms = 10;
};

Output do_expand(const ExpandArgs& a, const Common& c) {
  const auto src = parse_value(a.value);
  contfrac::ExpandOptions opts;
  opts.initial_bits = c.precision_bits;
  const auto pq = contfrac::expand(src, a.terms, opts);
  const auto table = contfrac::convergents(pq, a.terms);
  if (c.format == "csv") {
    io::CsvWriter csv({"n", "a", "P", "Q"});
    for (const auto& e : table.entries) {
      const mpz_class& digit = e.n == 0 ? pq.a0 : pq.digits[e.n - 1];
      csv.row({std::to_string(e.n), digit.get_str(), e.p.get_str(), e.q.get_str()});
    }
    return {csv.str()};
  }
  ordered_json j;
  j["value"] = a.value;
  j.update(io::to_json(pq, table));
  return {dump(j)};
}

struct ConstructArgs {
  std::string rule;
  std::size_t terms = 10;
  double max_digits = 1e6;
};

Output do_construct(const ConstructArgs& a, const Common& c) {
  const auto rule = constructions::parse_rule(a.rule);
  constructions::BuildOptions opts;
  opts.max_decimal_digits = a.max_digits;
  const auto w = constructions::build(rule, a.terms, opts);
  if (c.format == "csv") {
    io::CsvWriter csv({"n", "lnQ", "lnlnQ", "rel_err", "Q"});
    for (const auto& e : w.log_space) {
      csv.row({std::to_string(e.n), e.log_q.finite_double() ? format_double(e.log_q.to_double()) : e.log_q.to_string(),
               e.log_log_q ? format_double(e.log_log_q->to_double()) : "-inf", format_double(e.rel_err),
               e.n < w.exact.size() ? w.exact[e.n].q.get_str() : ""});
    }
    return {csv.str()};
  }
  ordered_json j;
  j["rule"] = rule.name;
  j.update(io::to_json(w.digits, w.exact));
  j["next_digit_lower_bound"] = io::integer(w.digits.next_digit_lower_bound);
  j["digit_upper_bound"] = w.digits.digit_upper_bound ? io::integer(*w.digits.digit_upper_bound) : ordered_json(nullptr);
  j["log_space"] = io::to_json(w.log_space);
  return {dump(j)};
}

struct SeriesArgs {
  std::string kind = "brjuno";
  std::string rule;
  std::string value;
  std::size_t N = 20;
  double epsilon = 0.1;
  double tol = 1e-6;
};

Output do_series(const SeriesArgs& a, const Common& c) {
  if (a.rule.empty() == a.value.empty()) throw UsageError("series needs exactly one of --rule or --value");
  const auto kind = sums::parse_kind(a.kind);
  sums::LogDenominators table;
  if (!a.rule.empty()) {
    table = sums::LogDenominators(constructions::build(constructions::parse_rule(a.rule), a.N + 1).exact);
  } else {
    contfrac::ExpandOptions opts;
    opts.initial_bits = c.precision_bits;
    const auto pq = contfrac::expand(parse_value(a.value), a.N + 1, opts);
    table = sums::LogDenominators(contfrac::convergents(pq, a.N + 1));
  }
  sums::SeriesOptions opts;
  opts.cauchy_tol = a.tol;
  const auto report = sums::series(kind, table, a.N, a.epsilon, opts);
  if (c.format == "csv") return {io::series_csv(report)};
  ordered_json j = io::to_json(report);
  if (report.split) {
    const auto cs = sums::cauchy_bunyakovsky_check(report, a.N);
    j["cauchy_bunyakovsky"] = {{"lhs", number(cs.lhs)}, {"rhs", number(cs.rhs)}, {"holds", cs.holds}};
    const auto chain = sums::bound_chain_check(table, report);
    j["bound_chain"] = {{"beta", chain.beta},
                        {"threshold_lnQ", number(chain.threshold)},
                        {"checked", chain.checked},
                        {"violations", chain.violations}};
    const auto cmp = sums::comparison_series(table, a.N, a.epsilon);
    j["comparison_series_total"] = number(cmp.back().second);
  }
  return {dump(j)};
}

struct KernelArgs {
  std::string family = "K1";
  double sigma = 2.4;
  std::string points = "0.001,0.01,0.1,0.25,0.5";
};

Output do_kernel(const KernelArgs& a, const Common& c) {
  const kernels::KernelSpec spec{kernels::parse_kernel_family(a.family), a.sigma};
  kernels::validate(spec);
  const auto d = parse_points(a.points);
  std::vector<double> v(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) v[i] = kernels::kernel_eval(spec, d[i]);
  if (c.format == "csv") {
    io::CsvWriter csv({"d", "value"});
    for (std::size_t i = 0; i < d.size(); ++i) csv.row({format_double(d[i]), format_double(v[i])});
    return {csv.str()};
  }
  ordered_json j;
  j["family"] = kernels::to_string(spec.family);
  j["sigma"] = spec.sigma;
  j["theorem_grade"] = spec.theorem_grade();
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < d.size(); ++i) rows.push_back({number(d[i]), number(v[i])});
  j["values"] = std::move(rows);
  return {dump(j)};
}

struct GaugeArgs {
  std::string family = "H1";
  double sigma = 3.0;
  double exponent = 1.0;
  std::string points = "0,0.001,0.01,0.1";
};

Output do_gauge(const GaugeArgs& a, const Common& c) {
  kernels::GaugeSpec spec{kernels::parse_gauge_family(a.family), a.sigma, a.exponent};
  const auto t = parse_points(a.points);
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = kernels::gauge_eval(spec, t[i]);
  if (c.format == "csv") {
    io::CsvWriter csv({"t", "value"});
    for (std::size_t i = 0; i < t.size(); ++i) csv.row({format_double(t[i]), format_double(v[i])});
    return {csv.str()};
  }
  ordered_json j;
  j["family"] = kernels::to_string(spec.family);
  if (spec.family == kernels::GaugeFamily::Power) j["exponent"] = spec.exponent;
  else j["sigma"] = spec.sigma;
  j["domain_max"] = spec.domain_max();
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < t.size(); ++i) rows.push_back({number(t[i]), number(v[i])});
  j["values"] = std::move(rows);
  return {dump(j)};
}

struct MeasureArgs {
  std::uint64_t q_max = 10;
  double epsilon = 0.1;
  bool reduced = false;
  bool no_atoms = false;
};

Output do_measure(const MeasureArgs& a, const Common& c) {
  const auto m = measures::build_paper_measure(a.q_max, a.epsilon, a.reduced);
  if (c.format == "csv") {
    io::CsvWriter csv({"point", "weight"});
    m.for_each_atom([&](const mpq_class& x, double w) { csv.row({x.get_str(), format_double(w)}); });
    return {csv.str()};
  }
  const auto cmp = measures::compare_mass_to_bound(m);
  ordered_json j = io::to_json(m, !a.no_atoms);
  j["reduced"] = a.reduced;
  j["count"] = m.size();
  j["mass"] = number(cmp.mass);
  j["mass_bound"] = number(cmp.bound);
  j["below_bound"] = cmp.below;
  return {dump(j)};
}

struct PotentialArgs {
  std::string alpha = "golden";
  std::string sweep;
  std::uint64_t q_max = 0;
  std::string family = "K1";
  double sigma = 2.4;
  double epsilon = 0.1;
  bool reduced = false;
  double rel_tol = 1e-9;
  std::size_t witness_terms = 40;
};

measures::Target parse_target(const std::string& alpha, const Common& c, std::size_t witness_terms) {
  if (is_constant(alpha)) return measures::Target::source(contfrac::named_constant(alpha), c.precision_bits * 2);
  if (auto q = parse_rational(alpha)) return measures::Target::rational(*q);
  try {
    const auto rule = constructions::parse_rule(alpha);
    return measures::Target::digits(constructions::build(rule, witness_terms).digits);
  } catch (const UsageError&) {
    throw UsageError("alpha must be a named constant, a rational, or a growth rule: " + alpha);
  }
}

Output do_potential(const PotentialArgs& a, const Common& c) {
  if (a.sweep.empty() == (a.q_max == 0)) throw UsageError("potential needs exactly one of --qmax or --qmax-sweep");
  const std::vector<std::uint64_t> qs = a.sweep.empty() ? std::vector<std::uint64_t>{a.q_max} : parse_sweep(a.sweep);
  const kernels::KernelSpec spec{kernels::parse_kernel_family(a.family), a.sigma};
  kernels::validate(spec);
  if (!(a.epsilon > 0)) throw DomainError("epsilon must be positive");
  const auto target = parse_target(a.alpha, c, a.witness_terms);
  measures::PotentialOptions opts;
  opts.rel_tol = a.rel_tol;
  const auto values = measures::potential_sweep(spec, target, a.epsilon, qs, a.reduced, opts);
  auto tail = [](const measures::PotentialValue& v) -> std::string {
    return v.truncation_tail_bound ? format_double(*v.truncation_tail_bound) : "unavailable";
  };
  if (c.format == "csv") {
    io::CsvWriter csv({"q_max", "potential", "tail_bound"});
    for (std::size_t i = 0; i < qs.size(); ++i) csv.row({std::to_string(qs[i]), format_double(values[i].value), tail(values[i])});
    return {csv.str()};
  }
  ordered_json j;
  j["alpha"] = a.alpha;
  j["target_kind"] = measures::to_string(target.kind);
  j["family"] = kernels::to_string(spec.family);
  j["sigma"] = spec.sigma;
  j["epsilon"] = a.epsilon;
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const auto& v = values[i];
    ordered_json row;
    row["q_max"] = qs[i];
    row["potential"] = number(v.value);
    row["lower"] = number(v.lower);
    row["upper"] = number(v.upper);
    row["tail_bound"] = v.truncation_tail_bound ? number(*v.truncation_tail_bound) : ordered_json("unavailable");
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return {dump(j)};
}

struct CapacityArgs {
  std::size_t nodes = 64;
  std::string from = "0";
  std::string to = "1/4";
  double clamp = 0.0;
  std::string family = "K1";
  double sigma = 2.4;
  double tol = 1e-8;
  std::size_t max_iters = 1'000'000;
  std::string diagonal = "clamp";
  bool properties = false;
};

Output do_capacity(const CapacityArgs& a, const Common& c) {
  const kernels::KernelSpec spec{kernels::parse_kernel_family(a.family), a.sigma};
  kernels::validate(spec);
  if (a.diagonal != "clamp" && a.diagonal != "exclude") throw UsageError("--diagonal must be clamp or exclude");
  const auto set = capacity::NodeSet::grid(a.nodes, require_rational(a.from, "--from"), require_rational(a.to, "--to"),
                                           a.clamp);
  capacity::CapacityOptions opts;
  opts.max_iterations = a.max_iters;
  opts.diagonal = a.diagonal == "clamp" ? capacity::Diagonal::Clamp : capacity::Diagonal::Exclude;
  const auto est = capacity::discrete_capacity(set, spec, a.tol, opts);
  if (c.format == "csv") {
    io::CsvWriter csv({"node", "weight"});
    for (std::size_t i = 0; i < set.size(); ++i) csv.row({set.nodes()[i].get_str(), format_double(est.weights[i])});
    return {csv.str()};
  }
  ordered_json j = io::to_json(est);
  if (a.properties) {
    // The grid, its every-second and every-fourth subgrids, and its two halves.
    std::vector<capacity::NodeSet> family{set};
    for (std::size_t stride : {2u, 4u}) {
      std::vector<mpq_class> sub;
      for (std::size_t i = 0; i < set.size(); i += stride) sub.push_back(set.nodes()[i]);
      family.emplace_back(std::move(sub), set.clamp_delta());
    }
    const std::size_t half = set.size() / 2;
    if (half >= 1) {
      family.emplace_back(std::vector<mpq_class>(set.nodes().begin(), set.nodes().begin() + half), set.clamp_delta());
      family.emplace_back(std::vector<mpq_class>(set.nodes().begin() + half, set.nodes().end()), set.clamp_delta());
    }
    j["properties"] = io::to_json(capacity::check_capacity_properties(family, spec, 1e-6, a.tol));
  }
  return {dump(j)};
}

struct CoverArgs {
  std::size_t samples = 1000;
  std::string from = "0";
  std::string to = "1/2";
  double epsilon = 1e-3;
  std::string gauge = "H1";
  double sigma = 3.0;
  double exponent = 1.0;
};

Output do_cover(const CoverArgs& a, const Common& c) {
  if (a.samples == 0) throw UsageError("--samples must be positive");
  const mpq_class lo = require_rational(a.from, "--from");
  const mpq_class hi = require_rational(a.to, "--to");
  std::vector<mpq_class> samples;
  for (std::size_t i = 0; i < a.samples; ++i) {
    samples.push_back(a.samples == 1 ? lo : mpq_class(lo + (hi - lo) * static_cast<unsigned long>(i) / (a.samples - 1)));
  }
  const kernels::GaugeSpec gauge{kernels::parse_gauge_family(a.gauge), a.sigma, a.exponent};
  const auto cover = capacity::greedy_cover(samples, a.epsilon, gauge);
  if (c.format == "csv") {
    io::CsvWriter csv({"center", "radius"});
    for (const auto& iv : cover.intervals) csv.row({iv.center.get_str(), format_double(iv.radius)});
    return {csv.str()};
  }
  ordered_json j = io::to_json(cover);
  j["gauge"] = kernels::to_string(gauge.family);
  j["valid"] = capacity::cover_is_valid(samples, cover);
  return {dump(j)};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continued fractions, small-divisor series and logarithmic capacities", "diocap"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", common.output, "Write to this file instead of standard output");
    sub->add_option("--threads", common.threads, "Worker threads (overrides DIOCAP_THREADS)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--precision-bits", common.precision_bits, "Initial working precision")
        ->check(CLI::Range(16L, 1L << 20));
  };

  ExpandArgs ea;
  auto* expand = app.add_subcommand("expand", "Continued fraction of a real number");
  expand->add_option("--value", ea.value, "Named constant or rational")->required();
  expand->add_option("--terms", ea.terms, "Number of digits after a0");
  add_common(expand);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Witness with prescribed digit growth");
  construct->add_option("--rule", ca.rule, "golden, nonbrjuno-exp, nonpm-expexp, const:C, poly:D, exp:S,.., expexp:S,..")
      ->required();
  construct->add_option("--terms", ca.terms, "Digits / log-space entries")->check(CLI::PositiveNumber);
  construct->add_option("--max-digits", ca.max_digits, "Decimal-digit budget of exact denominators")
      ->check(CLI::PositiveNumber);
  add_common(construct);

  SeriesArgs sa;
  auto* series = app.add_subcommand("series", "Brjuno, Perez-Marco and lemma series");
  series->add_option("--kind", sa.kind)->check(CLI::IsMember({"brjuno", "pm", "lemma1", "lemma2"}));
  series->add_option("--rule", sa.rule, "Growth rule of the witness");
  series->add_option("--value", sa.value, "Named constant or rational");
  series->add_option("--N", sa.N, "Truncation index");
  series->add_option("--epsilon", sa.epsilon)->check(CLI::PositiveNumber);
  series->add_option("--tol", sa.tol, "Cauchy tolerance of the growth classification")->check(CLI::PositiveNumber);
  add_common(series);

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "Tabulate a capacity kernel");
  kernel->add_option("--family", ka.family)->check(CLI::IsMember({"K1", "K2"}));
  kernel->add_option("--sigma", ka.sigma)->check(CLI::PositiveNumber);
  kernel->add_option("--d", ka.points, "Distances: comma list or a:b:n");
  add_common(kernel);

  GaugeArgs ga;
  auto* gauge = app.add_subcommand("gauge", "Tabulate a gauge function");
  gauge->add_option("--family", ga.family)->check(CLI::IsMember({"H1", "H2", "power"}));
  gauge->add_option("--sigma", ga.sigma)->check(CLI::PositiveNumber);
  gauge->add_option("--exponent", ga.exponent, "Exponent of the power test gauge")->check(CLI::PositiveNumber);
  gauge->add_option("--t", ga.points, "Arguments: comma list or a:b:n");
  add_common(gauge);

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Build the atomic measure on rationals");
  measure->add_option("--qmax", ma.q_max)->check(CLI::Range(std::uint64_t{10}, std::uint64_t{1} << 20));
  measure->add_option("--epsilon", ma.epsilon)->check(CLI::PositiveNumber);
  measure->add_flag("--reduced", ma.reduced, "Only reduced fractions");
  measure->add_flag("--no-atoms", ma.no_atoms, "Omit the atom list from JSON");
  add_common(measure);

  PotentialArgs pa;
  auto* potential = app.add_subcommand("potential", "Potential of the atomic measure at a point");
  potential->add_option("--alpha", pa.alpha, "Named constant, rational, or growth rule");
  potential->add_option("--qmax-sweep", pa.sweep, "a:b:xK, a:b:+S or a comma list");
  potential->add_option("--qmax", pa.q_max)->check(CLI::Range(std::uint64_t{10}, std::uint64_t{1} << 20));
  potential->add_option("--family", pa.family)->check(CLI::IsMember({"K1", "K2"}));
  potential->add_option("--sigma", pa.sigma)->check(CLI::PositiveNumber);
  potential->add_option("--epsilon", pa.epsilon)->check(CLI::PositiveNumber);
  potential->add_flag("--reduced", pa.reduced);
  potential->add_option("--rel-tol", pa.rel_tol)->check(CLI::PositiveNumber);
  add_common(potential);

  CapacityArgs cpa;
  auto* cap = app.add_subcommand("capacity", "Discrete capacity of a grid");
  cap->add_option("--nodes", cpa.nodes)->check(CLI::Range(std::size_t{2}, std::size_t{20000}));
  cap->add_option("--from", cpa.from, "Left end (rational)");
  cap->add_option("--to", cpa.to, "Right end (rational)");
  cap->add_option("--clamp", cpa.clamp, "Self-interaction clamp; default the grid spacing")
      ->check(CLI::NonNegativeNumber);
  cap->add_option("--family", cpa.family)->check(CLI::IsMember({"K1", "K2"}));
  cap->add_option("--sigma", cpa.sigma)->check(CLI::PositiveNumber);
  cap->add_option("--tol", cpa.tol)->check(CLI::PositiveNumber);
  cap->add_option("--max-iters", cpa.max_iters)->check(CLI::PositiveNumber);
  cap->add_option("--diagonal", cpa.diagonal)->check(CLI::IsMember({"clamp", "exclude"}));
  cap->add_flag("--properties", cpa.properties, "Also check monotonicity and subadditivity on sub-grids");
  add_common(cap);

  CoverArgs cva;
  auto* cover = app.add_subcommand("cover", "Greedy Hausdorff covering sum");
  cover->add_option("--samples", cva.samples)->check(CLI::PositiveNumber);
  cover->add_option("--from", cva.from);
  cover->add_option("--to", cva.to);
  cover->add_option("--epsilon", cva.epsilon)->check(CLI::PositiveNumber);
  cover->add_option("--gauge", cva.gauge)->check(CLI::IsMember({"H1", "H2", "power"}));
  cover->add_option("--sigma", cva.sigma)->check(CLI::PositiveNumber);
  cover->add_option("--exponent", cva.exponent)->check(CLI::PositiveNumber);
  add_common(cover);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (common.threads > 0) set_thread_count(common.threads);
    Output result;
    if (expand->parsed()) result = do_expand(ea, common);
    else if (construct->parsed()) result = do_construct(ca, common);
    else if (series->parsed()) result = do_series(sa, common);
    else if (kernel->parsed()) result = do_kernel(ka, common);
    else if (gauge->parsed()) result = do_gauge(ga, common);
    else if (measure->parsed()) result = do_measure(ma, common);
    else if (potential->parsed()) result = do_potential(pa, common);
    else if (cap->parsed()) result = do_capacity(cpa, common);
    else if (cover->parsed()) result = do_cover(cva, common);
    if (common.output.empty()) {
      out << result.text;
    } else {
      std::ofstream file(common.output, std::ios::binary);
      file << result.text;
      if (!file) throw Error("cannot write " + common.output);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const capacity::NonConvergence& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"diocap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace diocap::cli
