#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "diocap/error.hpp"
#include "diocap/kernels.hpp"

namespace diocap::capacity {

// Discretization of a compact subset of [0, 1]: strictly increasing exact
// nodes, diameter <= 1/2, and a self-interaction clamp no larger than the
// smallest gap.
class NodeSet {
 public:
  NodeSet(std::vector<mpq_class> nodes, double clamp_delta);

  // n equispaced nodes from a to b inclusive; clamp defaults to the spacing.
  static NodeSet grid(std::size_t n, const mpq_class& a, const mpq_class& b, double clamp_delta = 0.0);

  const std::vector<mpq_class>& nodes() const noexcept { return nodes_; }
  double clamp_delta() const noexcept { return clamp_delta_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double min_gap() const;

  bool subset_of(const NodeSet& other) const;
  // Throws IncompatibleClamp if the clamps differ, DomainError if the union
  // breaks the diameter or gap invariants.
  NodeSet united(const NodeSet& other) const;

 private:
  std::vector<mpq_class> nodes_;
  double clamp_delta_;
};

enum class Diagonal { Clamp, Exclude };

// Row-major K[i][j] = kernel(max(|x_i - x_j|, clamp/2)); the diagonal is the
// clamped value, or 0 with Diagonal::Exclude.
std::vector<double> kernel_matrix(const NodeSet& nodes, const kernels::KernelSpec& spec,
                                  Diagonal diagonal = Diagonal::Clamp);

struct CapacityEstimate {
  double W = 0.0;
  double C = 0.0;
  std::vector<double> weights;
  double duality_gap = 0.0;
  std::size_t iterations = 0;
  std::vector<double> energy_trace;  // energy after each iteration, starting point first
  bool sigma_warning = false;        // sigma <= 2
};

struct CapacityOptions {
  std::size_t max_iterations = 1'000'000;
  std::size_t refresh_every = 256;
  Diagonal diagonal = Diagonal::Clamp;
  bool record_trace = false;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, CapacityEstimate best) : Error(what), best_(std::move(best)) {}
  const CapacityEstimate& best() const noexcept { return best_; }

 private:
  CapacityEstimate best_;
};

// Minimizes w^T K w over the probability simplex by pairwise conditional
// gradient with exact line search. Stops when 2 (E - min_i (K w)_i) <= tol.
CapacityEstimate discrete_capacity(const NodeSet& nodes, const kernels::KernelSpec& spec, double tol,
                                   const CapacityOptions& options = {});

// Same, on a precomputed symmetric matrix.
CapacityEstimate minimize_energy(const std::vector<double>& K, std::size_t n, double tol,
                                 const CapacityOptions& options = {});

struct PropertyViolation {
  std::size_t first = 0;
  std::size_t second = 0;
  double excess = 0.0;
};

struct PropertyReport {
  std::vector<double> capacities;
  std::size_t monotonicity_checked = 0;
  std::vector<PropertyViolation> monotonicity_violations;
  std::size_t subadditivity_checked = 0;
  std::vector<PropertyViolation> subadditivity_violations;
  std::vector<std::pair<std::size_t, std::size_t>> unions_skipped;  // union breaks the NodeSet invariants
  std::vector<std::string> notes;
};

// Monotonicity over every nested pair and subadditivity over every pair,
// each within tol on C.
PropertyReport check_capacity_properties(const std::vector<NodeSet>& family, const kernels::KernelSpec& spec,
                                         double tol = 1e-6, double solver_tol = 1e-10);

struct CoverInterval {
  mpq_class center;
  double radius = 0.0;
};

struct CoverEstimate {
  double scale = 0.0;
  std::vector<CoverInterval> intervals;
  double gauge_sum = 0.0;
};

// Left to right: an open interval of radius eps/2 centred on the leftmost
// uncovered sample. gauge_sum = count * h(eps/2).
CoverEstimate greedy_cover(const std::vector<mpq_class>& samples, double epsilon, const kernels::GaugeSpec& gauge);

// Every sample strictly inside some interval, checked exactly.
bool cover_is_valid(const std::vector<mpq_class>& samples, const CoverEstimate& cover);

}  // namespace diocap::capacity
