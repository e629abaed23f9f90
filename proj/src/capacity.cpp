#include "diocap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diocap/parallel.hpp"
#include "diocap/summation.hpp"

namespace diocap::capacity {
namespace {

double row_dot(const std::vector<double>& K, std::size_t n, std::size_t row, const std::vector<double>& w) {
  CompensatedSum acc;
  const double* k = K.data() + row * n;
  for (std::size_t j = 0; j < n; ++j) acc.add(k[j] * w[j]);
  return acc.value();
}

struct State {
  std::vector<double> w;
  std::vector<double> U;
  double E = 0.0;
};

void refresh(const std::vector<double>& K, std::size_t n, State& s) {
  for (double& x : s.w) x = std::max(x, 0.0);
  const double total = pairwise_sum(s.w);
  for (double& x : s.w) x /= total;
  parallel_for(n, [&](std::size_t i) { s.U[i] = row_dot(K, n, i, s.w); });
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = s.w[i] * s.U[i];
  s.E = pairwise_sum(terms);
}

std::size_t argmin(const std::vector<double>& U) {
  return static_cast<std::size_t>(std::min_element(U.begin(), U.end()) - U.begin());
}

double gap_of(const State& s) { return std::max(0.0, 2 * (s.E - s.U[argmin(s.U)])); }

CapacityEstimate to_estimate(const State& s, std::size_t iterations, std::vector<double> trace) {
  CapacityEstimate e;
  e.W = s.E;
  e.C = 1.0 / s.E;
  e.weights = s.w;
  e.duality_gap = gap_of(s);
  e.iterations = iterations;
  e.energy_trace = std::move(trace);
  return e;
}

}  // namespace

NodeSet::NodeSet(std::vector<mpq_class> nodes, double clamp_delta)
    : nodes_(std::move(nodes)), clamp_delta_(clamp_delta) {
  if (nodes_.empty()) throw DomainError("node set is empty");
  if (!(clamp_delta_ > 0) || !std::isfinite(clamp_delta_)) throw DomainError("clamp_delta must be positive");
  for (auto& x : nodes_) {
    x.canonicalize();
    if (x < 0 || x > 1) throw DomainError("nodes must lie in [0, 1]");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i - 1] < nodes_[i])) throw DomainError("nodes must be strictly increasing");
    if (mpq_class(clamp_delta_) > nodes_[i] - nodes_[i - 1]) {
      throw DomainError("clamp_delta exceeds the smallest node gap");
    }
  }
  if (nodes_.back() - nodes_.front() > mpq_class(1, 2)) throw DomainError("node set diameter exceeds 1/2");
}

NodeSet NodeSet::grid(std::size_t n, const mpq_class& a, const mpq_class& b, double clamp_delta) {
  if (n == 0) throw DomainError("grid needs at least one node");
  std::vector<mpq_class> nodes;
  nodes.reserve(n);
  const mpq_class step = n > 1 ? mpq_class((b - a) / (n - 1)) : mpq_class(0);
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(a + step * static_cast<unsigned long>(i));
  if (clamp_delta == 0.0) {
    clamp_delta = n > 1 ? step.get_d() : 1.0;
    if (n > 1 && mpq_class(clamp_delta) > step) clamp_delta = std::nextafter(clamp_delta, 0.0);
  }
  return NodeSet(std::move(nodes), clamp_delta);
}

double NodeSet::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < nodes_.size(); ++i) g = std::min(g, mpq_class(nodes_[i] - nodes_[i - 1]).get_d());
  return g;
}

bool NodeSet::subset_of(const NodeSet& other) const {
  return std::includes(other.nodes_.begin(), other.nodes_.end(), nodes_.begin(), nodes_.end());
}

NodeSet NodeSet::united(const NodeSet& other) const {
  if (clamp_delta_ != other.clamp_delta_) throw IncompatibleClamp("node sets use different clamp_delta");
  std::vector<mpq_class> merged;
  std::set_union(nodes_.begin(), nodes_.end(), other.nodes_.begin(), other.nodes_.end(), std::back_inserter(merged));
  return NodeSet(std::move(merged), clamp_delta_);
}

std::vector<double> kernel_matrix(const NodeSet& nodes, const kernels::KernelSpec& spec, Diagonal diagonal) {
  kernels::validate(spec);
  const std::size_t n = nodes.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = nodes.nodes()[i].get_d();
  const double floor_d = nodes.clamp_delta() / 2;
  std::vector<double> K(n * n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) {
      // Exact gaps for neighbours would matter only below double spacing.
      d[j] = std::max(std::abs(x[i] - x[j]), floor_d);
    }
    kernels::kernel_eval_batch(spec, d, std::span<double>(K.data() + i * n, n));
    if (diagonal == Diagonal::Exclude) K[i * n + i] = 0.0;
  });
  // Symmetrize: both triangles from the same evaluation.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) K[j * n + i] = K[i * n + j];
  }
  return K;
}

CapacityEstimate minimize_energy(const std::vector<double>& K, std::size_t n, double tol,
                                 const CapacityOptions& options) {
  if (n < 2) throw DomainError("capacity needs at least two nodes");
  if (K.size() != n * n) throw DomainError("kernel matrix has the wrong size");
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  State s{std::vector<double>(n, 1.0 / static_cast<double>(n)), std::vector<double>(n), 0.0};
  refresh(K, n, s);
  std::vector<double> trace;
  if (options.record_trace) trace.push_back(s.E);
  std::size_t since_refresh = 0;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    const std::size_t lo = argmin(s.U);
    if (2 * (s.E - s.U[lo]) <= tol) {
      refresh(K, n, s);
      since_refresh = 0;
      if (gap_of(s) <= tol) return to_estimate(s, iter, std::move(trace));
      continue;
    }
    std::size_t hi = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (s.w[i] > 0 && (hi == n || s.U[i] > s.U[hi])) hi = i;
    }
    const double delta = s.U[hi] - s.U[lo];
    if (hi == lo || !(delta > 0)) {
      refresh(K, n, s);
      since_refresh = 0;
      continue;
    }
    const double curvature = K[lo * n + lo] + K[hi * n + hi] - 2 * K[lo * n + hi];
    double gamma = curvature > 0 ? std::min(delta / curvature, s.w[hi]) : s.w[hi];
    const bool drop = gamma >= s.w[hi];
    if (drop) gamma = s.w[hi];
    s.w[lo] += gamma;
    s.w[hi] = drop ? 0.0 : s.w[hi] - gamma;
    const double* k_lo = K.data() + lo * n;
    const double* k_hi = K.data() + hi * n;
    for (std::size_t i = 0; i < n; ++i) s.U[i] += gamma * (k_lo[i] - k_hi[i]);
    s.E += gamma * (gamma * curvature - 2 * delta);
    if (++since_refresh >= options.refresh_every) {
      refresh(K, n, s);
      since_refresh = 0;
    }
    if (options.record_trace) trace.push_back(s.E);
  }
  refresh(K, n, s);
  CapacityEstimate best = to_estimate(s, options.max_iterations, std::move(trace));
  throw NonConvergence("conditional gradient stopped at gap " + std::to_string(best.duality_gap) + " after " +
                           std::to_string(options.max_iterations) + " iterations",
                       std::move(best));
}

CapacityEstimate discrete_capacity(const NodeSet& nodes, const kernels::KernelSpec& spec, double tol,
                                   const CapacityOptions& options) {
  const auto K = kernel_matrix(nodes, spec, options.diagonal);
  try {
    CapacityEstimate e = minimize_energy(K, nodes.size(), tol, options);
    e.sigma_warning = !spec.theorem_grade();
    return e;
  } catch (NonConvergence& nc) {
    CapacityEstimate best = nc.best();
    best.sigma_warning = !spec.theorem_grade();
    throw NonConvergence(nc.what(), std::move(best));
  }
}

PropertyReport check_capacity_properties(const std::vector<NodeSet>& family, const kernels::KernelSpec& spec,
                                         double tol, double solver_tol) {
  for (const auto& s : family) {
    if (s.clamp_delta() != family.front().clamp_delta()) {
      throw IncompatibleClamp("property checks need a shared clamp_delta");
    }
  }
  PropertyReport report;
  report.notes.push_back("inner and outer capacities coincide: not testable on finite node sets");
  const std::size_t m = family.size();
  report.capacities.resize(m);
  for (std::size_t i = 0; i < m; ++i) report.capacities[i] = discrete_capacity(family[i], spec, solver_tol).C;
  const auto& C = report.capacities;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || !family[i].subset_of(family[j])) continue;
      ++report.monotonicity_checked;
      if (C[i] > C[j] + tol) report.monotonicity_violations.push_back({i, j, C[i] - C[j]});
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double c_union = 0.0;
      try {
        const NodeSet u = family[i].united(family[j]);
        c_union = u.size() < 2 ? 0.0 : discrete_capacity(u, spec, solver_tol).C;
      } catch (const DomainError&) {
        report.unions_skipped.emplace_back(i, j);
        continue;
      }
      ++report.subadditivity_checked;
      if (c_union > C[i] + C[j] + tol) report.subadditivity_violations.push_back({i, j, c_union - C[i] - C[j]});
    }
  }
  return report;
}

CoverEstimate greedy_cover(const std::vector<mpq_class>& samples, double epsilon, const kernels::GaugeSpec& gauge) {
  if (samples.empty()) throw DomainError("cover needs at least one sample");
  if (!(epsilon > 0) || epsilon > 2 * gauge.domain_max()) {
    throw DomainError("cover scale must lie in (0, 2 * gauge domain_max]");
  }
  if (!std::is_sorted(samples.begin(), samples.end())) throw DomainError("cover samples must be sorted");
  CoverEstimate cover;
  cover.scale = epsilon;
  const double r = epsilon / 2;
  const mpq_class rq(r);
  std::size_t i = 0;
  while (i < samples.size()) {
    const mpq_class& c = samples[i];
    cover.intervals.push_back({c, r});
    const mpq_class right = c + rq;
    while (i < samples.size() && samples[i] < right) ++i;
  }
  cover.gauge_sum = static_cast<double>(cover.intervals.size()) * kernels::gauge_eval(gauge, r);
  return cover;
}

bool cover_is_valid(const std::vector<mpq_class>& samples, const CoverEstimate& cover) {
  for (const auto& s : samples) {
    const bool inside = std::any_of(cover.intervals.begin(), cover.intervals.end(), [&](const CoverInterval& iv) {
      return iv.radius < cover.scale && abs(s - iv.center) < mpq_class(iv.radius);
    });
    if (!inside) return false;
  }
  return true;
}

}  // namespace diocap::capacity
