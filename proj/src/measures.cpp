#include "diocap/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "diocap/error.hpp"
#include "diocap/parallel.hpp"
#include "diocap/summation.hpp"

namespace diocap::measures {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kU = std::numeric_limits<double>::epsilon() / 2;
// Slack on library log/pow results inside the kernel, relative.
constexpr double kKernelSlack = 1e-13;
// Absolute error of a double-double difference of two numbers in [0, 1].
constexpr double kDdAbs = 1e-31;

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

DD rational_dd(std::uint64_t p, std::uint64_t q) {
  const double x = static_cast<double>(p) / static_cast<double>(q);
  const double r = std::fma(-x, static_cast<double>(q), static_cast<double>(p));
  return {x, r / static_cast<double>(q)};
}

DD rational_dd(const mpq_class& v) {
  const auto lo = CertifiedReal::from_rational(v, 160).lower_double_double();
  return {lo.first, lo.second};
}

// a - b, rounded once at the end.
double dd_diff(const DD& a, const DD& b) {
  const double s = a.hi - b.hi;
  const double bb = s - a.hi;
  const double e = (a.hi - (s - bb)) + (-b.hi - bb);
  return s + ((a.lo - b.lo) + e);
}

struct Range {
  double lower = 0.0;
  double upper = 0.0;
};

// Enclosure of |alpha - x| for alpha in [a_lo, a_hi].
Range distance(const DD& a_lo, const DD& a_hi, const DD& x) {
  const double below = dd_diff(a_lo, x);
  const double above = dd_diff(a_hi, x);
  if (below * (1 - 2 * kU) - kDdAbs > 0) {
    return {below * (1 - 2 * kU) - kDdAbs, std::min(1.0, above * (1 + 2 * kU) + kDdAbs)};
  }
  if (above * (1 - 2 * kU) + kDdAbs < 0) {
    return {-above * (1 - 2 * kU) - kDdAbs, std::min(1.0, -below * (1 + 2 * kU) + kDdAbs)};
  }
  return {0.0, std::min(1.0, std::max(std::abs(below), std::abs(above)) * (1 + 2 * kU) + kDdAbs)};
}

Range kernel_range(const kernels::KernelSpec& spec, const Range& d) {
  const double lo = kernels::kernel_eval(spec, d.upper) * (1 - kKernelSlack);
  const double hi = d.lower > 0 ? kernels::kernel_eval(spec, d.lower) * (1 + kKernelSlack) : kInf;
  return {std::max(lo, 0.0), hi};
}

struct Prepared {
  DD lo;
  DD hi;
  std::optional<mpq_class> exact;
  double inv_den = 0.0;  // 1 / denominator of the exact target
};

Prepared prepare(const Target& alpha) {
  Prepared p;
  const auto lo = alpha.enclosure.lower_double_double();
  const auto hi = alpha.enclosure.upper_double_double();
  p.lo = {lo.first, lo.second};
  p.hi = {hi.first, hi.second};
  p.exact = alpha.exact;
  if (p.exact) p.inv_den = 1.0 / p.exact->get_den().get_d();
  return p;
}

bool layer_contains(const Layer& layer, const mpq_class& a) {
  if (a <= 0 || a >= 1) return false;
  const mpz_class& b = a.get_den();
  if (layer.reduced) return b == layer.q;
  return mpz_class(layer.q) % b == 0;
}

// Unweighted kernel sum over one layer.
Range layer_kernel_sum(const Layer& layer, const kernels::KernelSpec& spec, const Prepared& t) {
  CompensatedSum lo, hi;
  bool infinite = false;
  const bool hit = t.exact && layer_contains(layer, *t.exact);
  const double exact_gap = t.exact ? t.inv_den / static_cast<double>(layer.q) * (1 - 4 * kU) : 0.0;
  for (std::uint64_t p = 1; p < layer.q; ++p) {
    if (layer.reduced && std::gcd(p, layer.q) != 1) continue;
    Range d = distance(t.lo, t.hi, rational_dd(p, layer.q));
    if (t.exact) {
      // Off-atom rationals a/b sit at least 1/(bq) from p/q.
      if (hit && mpq_class(p, layer.q) == *t.exact) {
        infinite = true;
        continue;
      }
      d.lower = std::max(d.lower, exact_gap);
    }
    const Range k = kernel_range(spec, d);
    lo.add(k.lower);
    if (std::isinf(k.upper)) infinite = true;
    else hi.add(k.upper);
  }
  return {lo.value(), infinite ? kInf : hi.value()};
}

PotentialValue finish(double lower, double upper, const Target& alpha, bool on_atom, const PotentialOptions& options) {
  PotentialValue v;
  v.target_kind = alpha.kind;
  v.on_atom = on_atom;
  if (on_atom) {
    v.value = v.lower = v.upper = kInf;
    return v;
  }
  v.lower = lower * (1 - 1e-14);
  v.upper = upper * (1 + 1e-14);
  if (!std::isfinite(v.upper) || v.upper - v.lower > options.rel_tol * v.lower) {
    throw PrecisionExhausted("potential enclosure [" + std::to_string(v.lower) + ", " + std::to_string(v.upper) +
                             "] misses relative tolerance " + std::to_string(options.rel_tol));
  }
  v.value = 0.5 * (v.lower + v.upper);
  return v;
}

double log_kernel_at_small(const kernels::KernelSpec& spec, double log_inv_delta) {
  // kernel at delta = exp(-log_inv_delta), for delta possibly below double range
  const double delta = std::exp(-log_inv_delta);
  if (delta > 0) return kernels::kernel_eval(spec, delta);
  const double L = log_inv_delta;
  if (spec.family == kernels::KernelFamily::K1) return L * L * std::pow(std::log(L), spec.sigma);
  const double ll = std::log(L);
  return ll * ll * std::pow(std::log(ll), spec.sigma);
}

}  // namespace

std::uint64_t Layer::size() const noexcept {
  if (q < 2) return 0;
  if (!reduced) return q - 1;
  std::uint64_t count = 0;
  for (std::uint64_t p = 1; p < q; ++p) count += std::gcd(p, q) == 1;
  return count;
}

void AtomicMeasure::add_atom(const mpq_class& point, double weight) {
  if (point < 0 || point > 1) throw DomainError("atom outside [0, 1]");
  if (!(weight > 0) || !std::isfinite(weight)) throw DomainError("atom weight must be positive and finite");
  mpq_class x = point;
  x.canonicalize();
  atoms_.push_back({std::move(x), weight});
}

void AtomicMeasure::add_layer(const Layer& layer) {
  if (layer.q < 2) throw DomainError("layer denominator must be >= 2");
  if (!(layer.weight > 0) || !std::isfinite(layer.weight)) throw DomainError("layer weight must be positive");
  layers_.push_back(layer);
}

std::uint64_t AtomicMeasure::size() const noexcept {
  std::uint64_t n = atoms_.size();
  for (const auto& l : layers_) n += l.size();
  return n;
}

double AtomicMeasure::total_mass() const {
  CompensatedSum acc;
  for (const auto& l : layers_) acc.add(static_cast<double>(l.size()) * l.weight);
  for (const auto& a : atoms_) acc.add(a.weight);
  return acc.value();
}

void AtomicMeasure::for_each_atom(const std::function<void(const mpq_class&, double)>& fn) const {
  for (const auto& l : layers_) {
    for (std::uint64_t p = 1; p < l.q; ++p) {
      if (l.reduced && std::gcd(p, l.q) != 1) continue;
      // mpq_class(p, q) would canonicalize; keep the literal p/q.
      mpq_class x;
      mpz_set_ui(mpq_numref(x.get_mpq_t()), p);
      mpz_set_ui(mpq_denref(x.get_mpq_t()), l.q);
      fn(x, l.weight);
    }
  }
  for (const auto& a : atoms_) fn(a.point, a.weight);
}

AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b) {
  AtomicMeasure r;
  r.layers_ = a.layers_;
  r.layers_.insert(r.layers_.end(), b.layers_.begin(), b.layers_.end());
  r.atoms_ = a.atoms_;
  r.atoms_.insert(r.atoms_.end(), b.atoms_.begin(), b.atoms_.end());
  return r;
}

double paper_weight(std::uint64_t q, double epsilon) {
  const double qd = static_cast<double>(q);
  return 1.0 / (qd * qd * std::pow(std::log(qd), 1 + epsilon));
}

AtomicMeasure build_paper_measure(std::uint64_t q_max, double epsilon, bool reduced) {
  if (q_max < 10) throw DomainError("q_max must be >= 10");
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  AtomicMeasure m;
  for (std::uint64_t q = 10; q <= q_max; ++q) m.add_layer({q, paper_weight(q, epsilon), reduced});
  m.epsilon = epsilon;
  m.q_max = q_max;
  m.paper_rule = true;
  return m;
}

MassComparison compare_mass_to_bound(const AtomicMeasure& measure) {
  CompensatedSum mass, bound, slack;
  double abs_sum = 0.0;
  for (const auto& l : measure.layers()) {
    const double qd = static_cast<double>(l.q);
    const double b = l.weight * qd;  // 1/(q ln^{1+e} q) up to one rounding
    const double m = static_cast<double>(l.size()) * l.weight;
    mass.add(m);
    bound.add(b);
    slack.add(b - m);
    abs_sum += b;
  }
  for (const auto& a : measure.atoms()) {
    mass.add(a.weight);
    slack.add(-a.weight);
    abs_sum += a.weight;
  }
  MassComparison c;
  c.mass = mass.value();
  c.bound = bound.value();
  c.slack = slack.value();
  c.below = c.slack > 8 * kU * abs_sum;
  return c;
}

std::string to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::ExactRational: return "exact-rational";
    case TargetKind::CertifiedReal: return "certified-real";
    case TargetKind::PrescribedDigits: return "prescribed-digits";
  }
  return "?";
}

Target Target::rational(const mpq_class& q) {
  if (q < 0 || q > 1) throw DomainError("potential target outside [0, 1]");
  Target t;
  t.kind = TargetKind::ExactRational;
  t.exact = q;
  t.enclosure = diocap::CertifiedReal::from_rational(q, 160);
  return t;
}

Target Target::interval(const diocap::CertifiedReal& x, std::optional<mpz_class> digit_bound) {
  Target t;
  t.kind = TargetKind::CertifiedReal;
  t.enclosure = x;
  t.digit_bound = std::move(digit_bound);
  return t;
}

Target Target::digits(const contfrac::PartialQuotients& pq) {
  const std::size_t n = pq.digits.size();
  const auto table = contfrac::convergents(pq, n);
  const mpz_class& p_n = table[n].p;
  const mpz_class& q_n = table[n].q;
  const mpz_class p_prev = n == 0 ? mpz_class(1) : table[n - 1].p;
  const mpz_class q_prev = n == 0 ? mpz_class(0) : table[n - 1].q;
  const mpz_class& x = pq.next_digit_lower_bound;
  const mpq_class near(p_n, q_n);
  const mpq_class far(p_n * x + p_prev, q_n * x + q_prev);
  Target t;
  t.kind = TargetKind::PrescribedDigits;
  t.enclosure = diocap::CertifiedReal::hull(std::min(near, far), std::max(near, far), 256);
  t.digit_bound = pq.digit_upper_bound;
  return t;
}

Target Target::source(const contfrac::RealSource& src, mpfr_prec_t bits) {
  if (src.exact) return rational(*src.exact);
  return interval(src.evaluate(bits), src.digit_upper_bound);
}

PotentialValue potential(const AtomicMeasure& measure, const kernels::KernelSpec& spec, const Target& alpha,
                         const PotentialOptions& options) {
  kernels::validate(spec);
  const Prepared t = prepare(alpha);
  const auto& layers = measure.layers();
  std::vector<Range> layer_sums(layers.size());
  parallel_for(layers.size(), [&](std::size_t i) {
    const Range s = layer_kernel_sum(layers[i], spec, t);
    layer_sums[i] = {s.lower * layers[i].weight, s.upper * layers[i].weight};
  });
  const auto& atoms = measure.atoms();
  std::vector<Range> atom_terms(atoms.size());
  bool on_atom = false;
  for (const auto& l : layers) on_atom = on_atom || (t.exact && layer_contains(l, *t.exact));
  for (const auto& a : atoms) on_atom = on_atom || (t.exact && a.point == *t.exact);
  parallel_for(atoms.size(), [&](std::size_t i) {
    Range d = distance(t.lo, t.hi, rational_dd(atoms[i].point));
    if (t.exact && atoms[i].point != *t.exact) {
      const mpq_class gap = abs(atoms[i].point - *t.exact);
      d.lower = std::max(d.lower, gap.get_d() * (1 - 4 * kU));
    }
    const Range k = kernel_range(spec, d);
    atom_terms[i] = {k.lower * atoms[i].weight, k.upper * atoms[i].weight};
  });
  std::vector<double> lo, hi;
  for (const auto& r : layer_sums) lo.push_back(r.lower), hi.push_back(r.upper);
  for (const auto& r : atom_terms) lo.push_back(r.lower), hi.push_back(r.upper);
  const bool hi_inf = std::any_of(hi.begin(), hi.end(), [](double x) { return std::isinf(x); });
  PotentialValue v = finish(pairwise_sum(lo), hi_inf ? kInf : pairwise_sum(hi), alpha, on_atom, options);
  if (!measure.paper_rule) {
    v.truncation_tail_bound = 0.0;
  } else if (!on_atom) {
    v.truncation_tail_bound = paper_tail_bound(spec, alpha, *measure.epsilon, *measure.q_max);
  }
  return v;
}

std::vector<PotentialValue> potential_sweep(const kernels::KernelSpec& spec, const Target& alpha, double epsilon,
                                            const std::vector<std::uint64_t>& q_max_values, bool reduced,
                                            const PotentialOptions& options) {
  kernels::validate(spec);
  if (q_max_values.empty()) return {};
  if (!std::is_sorted(q_max_values.begin(), q_max_values.end()) || q_max_values.front() < 10) {
    throw DomainError("q_max values must be increasing and >= 10");
  }
  const Prepared t = prepare(alpha);
  const std::uint64_t top = q_max_values.back();
  std::vector<Layer> layers;
  for (std::uint64_t q = 10; q <= top; ++q) layers.push_back({q, paper_weight(q, epsilon), reduced});
  std::vector<Range> sums(layers.size());
  // Largest layers first so the chunked scheduler balances.
  parallel_for(layers.size(), [&](std::size_t k) {
    const std::size_t i = layers.size() - 1 - k;
    const Range s = layer_kernel_sum(layers[i], spec, t);
    sums[i] = {s.lower * layers[i].weight, s.upper * layers[i].weight};
  });
  std::vector<PotentialValue> out;
  CompensatedSum lo, hi;
  bool hi_inf = false, on_atom = false;
  std::size_t next = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    lo.add(sums[i].lower);
    if (std::isinf(sums[i].upper)) hi_inf = true;
    else hi.add(sums[i].upper);
    on_atom = on_atom || (t.exact && layer_contains(layers[i], *t.exact));
    while (next < q_max_values.size() && q_max_values[next] == layers[i].q) {
      PotentialValue v = finish(lo.value(), hi_inf ? kInf : hi.value(), alpha, on_atom, options);
      if (!on_atom) v.truncation_tail_bound = paper_tail_bound(spec, alpha, epsilon, layers[i].q);
      out.push_back(v);
      ++next;
    }
  }
  return out;
}

double kernel_integral_bound(const kernels::KernelSpec& spec) {
  // (0, 2^-40] by dyadic blocks, each bounded by its length times the kernel
  // at its left end; [2^-40, 1] by a geometric left-endpoint sum.
  constexpr int kSplit = 40;
  CompensatedSum acc;
  double previous = kInf;
  for (int j = kSplit; j < 4000; ++j) {
    // block [2^-(j+1), 2^-j]
    const double block = std::ldexp(1.0, -(j + 1)) * log_kernel_at_small(spec, (j + 1) * std::log(2.0));
    acc.add(block);
    if (block < 1e-30 * acc.value() && block < 0.75 * previous) {
      acc.add(block * 3);  // ratio below 3/4 from here on
      break;
    }
    previous = block;
  }
  const double h = 1e-3;
  double x = std::ldexp(1.0, -kSplit);
  while (x < 1.0) {
    const double next = std::min(1.0, x * (1 + h));
    acc.add((next - x) * kernels::kernel_eval(spec, x));
    x = next;
  }
  return acc.value() * (1 + 1e-10);
}

std::optional<double> paper_tail_bound(const kernels::KernelSpec& spec, const Target& alpha, double epsilon,
                                       std::uint64_t q_max) {
  // ln(1/delta_q) = c0 + c1 ln q, where delta_q bounds the nearest atom of layer q.
  double c0 = 0.0, c1 = 0.0;
  if (alpha.exact) {
    if (*alpha.exact > 0 && *alpha.exact < 1) return kInf;  // atoms k b / (k q) recur past q_max
    c0 = 0.0;
    c1 = 1.0;
  } else if (alpha.digit_bound) {
    c0 = std::log(alpha.digit_bound->get_d() + 2);
    c1 = 2.0;
  } else {
    return std::nullopt;
  }
  const double integral = kernel_integral_bound(spec);
  const double lq = std::log(static_cast<double>(q_max));
  // sum_{q > q_max} 1/(q ln^{1+e} q) <= (ln q_max)^-e / e
  CompensatedSum acc;
  acc.add(2 * integral * std::pow(lq, -epsilon) / epsilon);
  // Near atoms, dyadic blocks [m, 2m).
  double m = static_cast<double>(q_max) + 1;
  double previous = kInf;
  for (int j = 0; j < 4000; ++j) {
    const double k = log_kernel_at_small(spec, c0 + c1 * std::log(2 * m));
    const double block = 2 * k / (m * std::pow(std::log(m), 1 + epsilon));
    acc.add(block);
    if (block < 1e-20 * acc.value() && block < 0.75 * previous) {
      acc.add(block * 3);
      break;
    }
    previous = block;
    m *= 2;
  }
  return acc.value() * (1 + 1e-10);
}

EnergyValue energy(const std::vector<mpq_class>& points, const std::vector<double>& weights,
                   const kernels::KernelSpec& spec) {
  kernels::validate(spec);
  if (points.size() != weights.size()) throw DomainError("points and weights differ in length");
  EnergyValue e;
  std::vector<mpq_class> canonical(points);
  for (auto& p : canonical) {
    p.canonicalize();
    if (p < 0 || p > 1) throw DomainError("energy points must lie in [0, 1]");
  }
  // Atoms sharing a point form one atom of the measure; their pairs lie on
  // the diagonal.
  std::vector<std::size_t> order(canonical.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return canonical[a] < canonical[b]; });
  std::vector<const mpq_class*> merged_points;
  std::vector<double> merged_weights;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (!merged_points.empty() && *merged_points.back() == canonical[i]) {
      merged_weights.back() += weights[i];
      e.coincident_atoms = true;
    } else {
      merged_points.push_back(&canonical[i]);
      merged_weights.push_back(weights[i]);
    }
  }
  const std::size_t n = merged_points.size();
  std::vector<DD> x(n);
  parallel_for(n, [&](std::size_t i) { x[i] = rational_dd(*merged_points[i]); });
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    thread_local std::vector<double> dist, kern;
    dist.resize(n - i - 1);
    kern.resize(n - i - 1);
    for (std::size_t j = i + 1; j < n; ++j) dist[j - i - 1] = std::abs(dd_diff(x[i], x[j]));
    kernels::kernel_eval_batch(spec, dist, kern);
    CompensatedSum acc;
    for (std::size_t j = i + 1; j < n; ++j) acc.add(merged_weights[j] * kern[j - i - 1]);
    rows[i] = merged_weights[i] * acc.value();
  });
  e.value = 2 * pairwise_sum(rows);
  return e;
}

EnergyValue energy(const AtomicMeasure& measure, const kernels::KernelSpec& spec) {
  std::vector<mpq_class> points;
  std::vector<double> weights;
  measure.for_each_atom([&](const mpq_class& x, double w) {
    points.push_back(x);
    points.back().canonicalize();
    weights.push_back(w);
  });
  return energy(points, weights, spec);
}

}  // namespace diocap::measures
