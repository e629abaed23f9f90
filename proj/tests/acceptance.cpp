// Acceptance suite: one pass/fail line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "diocap/capacity.hpp"
#include "diocap/cli.hpp"
#include "diocap/constructions.hpp"
#include "diocap/contfrac.hpp"
#include "diocap/measures.hpp"
#include "diocap/parallel.hpp"
#include "diocap/sums.hpp"
#include "oracles.hpp"

using namespace diocap;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] ";
    }
    detail << what << "; ";
  }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Random reals in (0, 1) given by 256 random bits, fed to the expansion as
// point intervals so digits come from the certified Gauss map.
std::vector<contfrac::RealSource> random_corpus(std::size_t count) {
  std::mt19937_64 rng(0x5eed);
  std::vector<contfrac::RealSource> out;
  const mpz_class scale = mpz_class(1) << 256;
  while (out.size() < count) {
    mpz_class m = 0;
    for (int k = 0; k < 4; ++k) m = (m << 64) + mpz_class(static_cast<unsigned long>(rng()));
    if (m == 0) continue;
    const mpq_class x(m, scale);
    contfrac::RealSource s;
    s.name = "random-" + std::to_string(out.size());
    s.evaluate = [x](mpfr_prec_t bits) { return CertifiedReal::from_rational(x, std::max<mpfr_prec_t>(bits, 320)); };
    out.push_back(std::move(s));
  }
  return out;
}

const std::size_t kCorpusTerms = 25;

Outcome ac1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::size_t mismatches = 0;
  for (const auto& src : random_corpus(500)) {
    const auto pq = contfrac::expand(src, kCorpusTerms);
    const auto table = contfrac::convergents(pq, kCorpusTerms);
    std::vector<mpz_class> digits{pq.a0};
    for (std::size_t n = 0; n <= kCorpusTerms; ++n) {
      if (n > 0) digits.push_back(pq.digits[n - 1]);
      if (mpq_class(table[n].p, table[n].q) != oracle::fold(digits)) ++mismatches;
    }
  }
  const double t = seconds_since(start);
  o.require(mismatches == 0, "recurrence vs exact evaluation mismatches = " + std::to_string(mismatches));
  o.require(t <= 30.0, "runtime " + fmt(t) + " s (limit 30 s)");
  return o;
}

Outcome ac2() {
  Outcome o;
  auto corpus = random_corpus(500);
  for (const char* name : {"pi", "e", "golden"}) corpus.push_back(contfrac::named_constant(name));
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (const auto& src : corpus) {
    const auto table = contfrac::convergents(contfrac::expand(src, kCorpusTerms), kCorpusTerms);
    for (const auto& c : contfrac::check_approximation_bounds(src, table)) {
      ++checked;
      if (!c.lower_ok || !c.upper_ok) ++violations;
    }
  }
  o.require(violations == 0, "violations = " + std::to_string(violations) + " over " + std::to_string(checked) +
                                 " certified indices");
  return o;
}

Outcome ac3() {
  Outcome o;
  std::vector<contfrac::ConvergentTable> tables;
  for (const auto& src : random_corpus(500)) tables.push_back(contfrac::convergents(contfrac::expand(src, kCorpusTerms), kCorpusTerms));
  for (const char* name : {"pi", "e", "golden", "sqrt2"}) {
    tables.push_back(contfrac::convergents(contfrac::expand(contfrac::named_constant(name), 60), 60));
  }
  for (const char* rule : {"golden", "const:2", "poly:2", "nonbrjuno-exp", "nonpm-expexp"}) {
    tables.push_back(constructions::build(constructions::parse_rule(rule), 40).exact);
  }
  std::size_t violations = 0;
  for (const auto& t : tables) violations += contfrac::growth_bound_violations(t).size();
  o.require(violations == 0, "growth-bound violations = " + std::to_string(violations) + " over " +
                                 std::to_string(tables.size()) + " tables");
  return o;
}

const constructions::Witness& exp_witness() {
  static const auto w = constructions::build(constructions::GrowthRule::exp_of_q(), 41);
  return w;
}

const constructions::Witness& exp_exp_witness() {
  static const auto w = constructions::build(constructions::GrowthRule::exp_exp_of_q(), 41);
  return w;
}

Outcome ac4() {
  Outcome o;
  const auto golden = constructions::build(constructions::GrowthRule::constant_digits(1), 61);
  const auto g = sums::brjuno_series(golden.exact, 60);
  const double diff = std::abs(g.partial_sums[60].second - g.partial_sums[30].second);
  o.require(diff < 1e-9, "golden |S60 - S30| = " + fmt(diff) + " (need < 1e-9)");

  const auto b = sums::brjuno_series(exp_witness().log_space, 40);
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t n = 2; n <= 40; ++n) {
    lo = std::min(lo, b.terms[n - 1].term);
    hi = std::max(hi, b.terms[n - 1].term);
  }
  o.require(lo >= 1.0 && hi <= 1.5, "exp-of-Q terms n=2..40 in [" + fmt(lo) + ", " + fmt(hi) + "]");
  o.require(b.diagnostics == sums::Growth::LinearGrowth, "exp-of-Q diagnostics " + sums::to_string(b.diagnostics));
  return o;
}

Outcome ac5() {
  Outcome o;
  const auto pm = sums::pm_series(exp_witness().log_space, 40);
  const auto br = sums::brjuno_series(exp_witness().log_space, 40);
  o.require(pm.diagnostics == sums::Growth::CauchyConverging, "exp-of-Q pm " + sums::to_string(pm.diagnostics));
  o.require(br.diagnostics == sums::Growth::LinearGrowth, "exp-of-Q brjuno " + sums::to_string(br.diagnostics));
  const auto pm2 = sums::pm_series(exp_exp_witness().log_space, 40);
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t n = 2; n <= 40; ++n) {
    lo = std::min(lo, pm2.terms[n - 1].term);
    hi = std::max(hi, pm2.terms[n - 1].term);
  }
  o.require(lo >= 0.9 && hi <= 1.5, "exp-exp pm terms n=2..40 in [" + fmt(lo) + ", " + fmt(hi) + "]");
  return o;
}

Outcome ac6() {
  Outcome o;
  const sums::LogDenominators table(exp_witness().exact);
  const auto r = sums::lemma1_series(table, 40, 0.1);
  const double rel = sums::relative_difference(r.split->tower_in + r.split->tower_out, r.tower_partial_sums.back());
  o.require(rel <= 1e-12, "(a) decomposition relative difference " + fmt(rel));
  std::size_t failures = 0;
  for (std::size_t N = 0; N <= 40; ++N) failures += sums::cauchy_bunyakovsky_check(r, N).holds ? 0 : 1;
  o.require(failures == 0, "(b) cauchy-bunyakovsky failures " + std::to_string(failures) + " of 41");
  o.require(r.diagnostics == sums::Growth::Superlinear || r.diagnostics == sums::Growth::LinearGrowth,
            "(c) lemma1 " + sums::to_string(r.diagnostics));
  const auto cmp = sums::comparison_series(table, 40, 0.1);
  const double d = std::abs(cmp[40].second - cmp[20].second);
  o.require(d < 1e-3, "(c) comparison |S40 - S20| = " + fmt(d));
  return o;
}

Outcome ac7() {
  Outcome o;
  std::size_t bad_counts = 0;
  for (std::uint64_t q : {10u, 11u, 50u, 100u, 1000u}) {
    std::uint64_t expected = 0;
    for (std::uint64_t k = 10; k <= q; ++k) expected += k - 1;
    if (measures::build_paper_measure(q, 0.1).size() != expected) ++bad_counts;
  }
  o.require(bad_counts == 0, "atom count mismatches " + std::to_string(bad_counts));
  const auto m10 = measures::build_paper_measure(10, 0.1);
  const double w = 1.0 / (100.0 * std::pow(std::log(10.0), 1.1));
  std::size_t atoms = 0;
  bool weights_ok = true;
  m10.for_each_atom([&](const mpq_class&, double weight) {
    ++atoms;
    weights_ok = weights_ok && std::abs(weight - w) <= 1e-15 * w;
  });
  o.require(atoms == 9 && weights_ok, "q_max=10: " + std::to_string(atoms) + " atoms of weight " + fmt(w));
  for (std::uint64_t q : {100u, 1000u, 10000u}) {
    const auto c = measures::compare_mass_to_bound(measures::build_paper_measure(q, 0.1));
    o.require(c.below, "q_max=" + std::to_string(q) + " mass " + fmt(c.mass) + " < bound " + fmt(c.bound));
  }
  return o;
}

Outcome ac8() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const kernels::KernelSpec spec{kernels::KernelFamily::K1, 2.4};
  const std::vector<std::uint64_t> qs{128, 256, 512, 1024, 2048, 4096};
  auto report = [&](const measures::Target& target, const std::string& label) {
    const auto v = measures::potential_sweep(spec, target, 0.1, qs);
    bool monotone = true;
    for (std::size_t i = 1; i < v.size(); ++i) monotone = monotone && v[i].value >= v[i - 1].value;
    const double ratio = v.back().value / v.front().value;
    o.detail << label << " U = " << fmt(v.front().value) << " -> " << fmt(v.back().value) << "; ";
    return std::pair{monotone, ratio};
  };
  const auto [g_mono, g_ratio] = report(measures::Target::source(contfrac::named_constant("golden")), "golden");
  o.require(g_mono, "golden nondecreasing");
  o.require(g_ratio < 1.2, "golden ratio " + fmt(g_ratio) + " (need < 1.2)");
  const auto [e_mono, e_ratio] = report(measures::Target::digits(exp_witness().digits), "exp-of-Q");
  o.require(e_ratio > 2.0, "exp-of-Q ratio " + fmt(e_ratio) + " (need > 2)");
  const double t = seconds_since(start);
  o.require(t <= 300.0, "runtime " + fmt(t) + " s (limit 300 s)");
  return o;
}

Outcome ac9() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(2, 500);
  std::uniform_int_distribution<long> num(0, 1L << 40);
  std::uniform_real_distribution<double> weight(0.01, 1.0);
  const std::vector<kernels::KernelSpec> specs{{kernels::KernelFamily::K1, 2.4}, {kernels::KernelFamily::K2, 3.0}};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<mpq_class> pts;
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) {
      mpq_class x(num(rng), 1L << 40);
      x.canonicalize();
      pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> w(pts.size());
    for (auto& x : w) x = weight(rng);
    const auto& spec = specs[trial % 2];
    const double fast = measures::energy(pts, w, spec).value;
    const double slow = oracle::naive_energy(pts, w, spec);
    worst = std::max(worst, std::abs(fast - slow) / slow);
  }
  o.require(worst <= 1e-12, "worst relative difference over 50 configurations " + fmt(worst));

  std::vector<mpq_class> big;
  for (long i = 0; i < 20000; ++i) big.emplace_back(i, 2 * 19999L);
  for (auto& x : big) x.canonicalize();
  const std::vector<double> w(big.size(), 1.0 / 20000);
  const auto start = std::chrono::steady_clock::now();
  const auto e = measures::energy(big, w, specs[0]);
  const double t = seconds_since(start);
  o.require(std::isfinite(e.value) && t <= 10.0,
            "N=20000 energy " + fmt(e.value) + " in " + fmt(t) + " s on " + std::to_string(thread_count()) +
                " threads (limit 10 s)");
  return o;
}

Outcome ac10() {
  Outcome o;
  const kernels::KernelSpec spec{kernels::KernelFamily::K1, 2.4};
  const auto two = capacity::discrete_capacity(capacity::NodeSet({mpq_class(1, 8), mpq_class(3, 8)}, 0.1), spec, 1e-13);
  const double dev = std::max(std::abs(two.weights[0] - 0.5), std::abs(two.weights[1] - 0.5));
  o.require(dev <= 1e-10, "two-node weight deviation " + fmt(dev));

  const auto grid = capacity::NodeSet::grid(256, 0, mpq_class(1, 4));
  const auto est = capacity::discrete_capacity(grid, spec, 1e-8);
  const auto ref = oracle::projected_gradient(capacity::kernel_matrix(grid, spec), grid.size(), 400000, 1e-13);
  const double rel = std::abs(est.W - ref.value) / ref.value;
  o.require(rel <= 1e-6, "256-node W " + fmt(est.W) + " vs projected gradient " + fmt(ref.value) + ", rel " + fmt(rel));

  // Ten sets sharing one clamp: nested grids on [0, 1/4], two disjoint
  // blocks, and their halves.
  const double clamp = 1.0 / 512;
  auto block = [&](std::size_t n, const mpq_class& a, const mpq_class& b) {
    std::vector<mpq_class> pts;
    for (std::size_t i = 0; i < n; ++i) {
      mpq_class x = a + (b - a) * static_cast<unsigned long>(i) / (n - 1);
      x.canonicalize();
      pts.push_back(x);
    }
    return capacity::NodeSet(pts, clamp);
  };
  std::vector<capacity::NodeSet> family{
      block(65, 0, mpq_class(1, 4)),          block(33, 0, mpq_class(1, 4)),
      block(17, 0, mpq_class(1, 4)),          block(9, 0, mpq_class(1, 4)),
      block(33, 0, mpq_class(1, 8)),          block(33, mpq_class(1, 8), mpq_class(1, 4)),
      block(41, 0, mpq_class(1, 10)),         block(41, mpq_class(3, 10), mpq_class(4, 10)),
      block(21, 0, mpq_class(1, 20)),         block(21, mpq_class(3, 10), mpq_class(7, 20)),
  };
  const auto props = capacity::check_capacity_properties(family, spec, 1e-6);
  o.require(props.monotonicity_violations.empty(),
            "monotonicity " + std::to_string(props.monotonicity_violations.size()) + " violations of " +
                std::to_string(props.monotonicity_checked));
  o.require(props.subadditivity_violations.empty(),
            "subadditivity " + std::to_string(props.subadditivity_violations.size()) + " violations of " +
                std::to_string(props.subadditivity_checked));
  return o;
}

Outcome ac11() {
  Outcome o;
  std::vector<mpq_class> samples;
  for (unsigned long i = 0; i < 1000; ++i) samples.push_back(mpq_class(i, 2 * 999UL));
  for (auto& x : samples) x.canonicalize();
  const kernels::GaugeSpec t{kernels::GaugeFamily::Power, 3.0, 1.0};
  const auto c = capacity::greedy_cover(samples, 1e-3, t);
  o.require(c.gauge_sum >= 0.5 && c.gauge_sum <= 1.0 && capacity::cover_is_valid(samples, c),
            "h(t)=t gauge sum " + fmt(c.gauge_sum) + " with " + std::to_string(c.intervals.size()) + " intervals");
  const kernels::GaugeSpec h1{kernels::GaugeFamily::H1, 3.0};
  const auto ch = capacity::greedy_cover(samples, 1e-3, h1);
  const double identity = static_cast<double>(ch.intervals.size()) * kernels::gauge_eval(h1, 5e-4);
  o.require(ch.gauge_sum == identity, "H1 gauge sum " + fmt(ch.gauge_sum) + " equals count * h1(eps/2)");
  return o;
}

Outcome ac12() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands{
      {"expand", "--value", "pi", "--terms", "30"},
      {"construct", "--rule", "nonbrjuno-exp", "--terms", "20"},
      {"series", "--kind", "lemma1", "--rule", "nonbrjuno-exp", "--N", "30"},
      {"series", "--kind", "pm", "--value", "golden", "--N", "30", "--format", "csv"},
      {"kernel", "--family", "K2", "--d", "0:0.5:101"},
      {"gauge", "--family", "H2", "--t", "0:0.0000453:50"},
      {"measure", "--qmax", "200", "--format", "csv"},
      {"potential", "--alpha", "golden", "--qmax-sweep", "128:2048:x2", "--format", "csv"},
      {"capacity", "--nodes", "128", "--properties"},
      {"cover", "--samples", "1000", "--gauge", "H1", "--epsilon", "0.001"},
  };
  std::size_t differing = 0;
  for (const auto& base : commands) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "1", "8", "8"}) {
      auto args = base;
      args.insert(args.end(), {"--threads", threads});
      std::ostringstream out;
      std::ostringstream err;
      const int code = cli::run(args, out, err);
      outputs.push_back(std::to_string(code) + "\n" + out.str());
    }
    bool same = true;
    for (const auto& s : outputs) same = same && s == outputs.front() && s.rfind("0\n", 0) == 0;
    if (!same) {
      ++differing;
      o.detail << base.front() << " differs; ";
    }
  }
  o.require(differing == 0, std::to_string(commands.size()) + " subcommand runs compared at 1 and 8 threads");
  return o;
}

const std::vector<std::function<Outcome()>> kCriteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11, ac12};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run one criterion (1-12)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (std::size_t k = 1; k <= kCriteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k) != only) continue;
    Outcome o;
    try {
      o = kCriteria[k - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::cout << "AC" << k << (o.pass ? " PASS " : " FAIL ") << o.detail.str() << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
