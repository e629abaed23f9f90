#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diocap/certified_real.hpp"
#include "diocap/contfrac.hpp"
#include "diocap/kernels.hpp"

namespace diocap::measures {

// Atoms p/q for p = 1..q-1 (only gcd(p, q) = 1 when reduced), all of one weight.
struct Layer {
  std::uint64_t q = 0;
  double weight = 0.0;
  bool reduced = false;

  std::uint64_t size() const noexcept;
};

struct Atom {
  mpq_class point;
  double weight = 0.0;
};

class AtomicMeasure {
 public:
  AtomicMeasure() = default;

  // Validates 0 <= point <= 1 and weight > 0.
  void add_atom(const mpq_class& point, double weight);
  void add_layer(const Layer& layer);

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  std::uint64_t size() const noexcept;
  double total_mass() const;

  // Every atom in a fixed order: layers by q then p, then explicit atoms.
  void for_each_atom(const std::function<void(const mpq_class&, double)>& fn) const;

  std::optional<double> epsilon;
  std::optional<std::uint64_t> q_max;
  bool paper_rule = false;

  friend AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b);

 private:
  std::vector<Layer> layers_;
  std::vector<Atom> atoms_;
};

// 1 / (q^2 ln^{1+e} q)
double paper_weight(std::uint64_t q, double epsilon);

// Sum over q = 10..q_max, p = 1..q-1 of weight 1/(q^2 ln^{1+e} q) at p/q.
AtomicMeasure build_paper_measure(std::uint64_t q_max, double epsilon, bool reduced = false);

struct MassComparison {
  double mass = 0.0;
  double bound = 0.0;  // sum_{q=10}^{q_max} 1 / (q ln^{1+e} q)
  double slack = 0.0;  // bound - mass, summed layer by layer
  bool below = false;  // slack exceeds the accumulated rounding error
};

MassComparison compare_mass_to_bound(const AtomicMeasure& measure);

enum class TargetKind { ExactRational, CertifiedReal, PrescribedDigits };

std::string to_string(TargetKind kind);

struct Target {
  TargetKind kind = TargetKind::CertifiedReal;
  std::optional<mpq_class> exact;
  diocap::CertifiedReal enclosure;
  // Every partial quotient a_n (n >= 1) is at most this, when known.
  std::optional<mpz_class> digit_bound;

  static Target rational(const mpq_class& q);
  static Target interval(const diocap::CertifiedReal& x, std::optional<mpz_class> digit_bound = std::nullopt);
  // Enclosure between P_n/Q_n and the value with a_{n+1} at its lower bound.
  static Target digits(const contfrac::PartialQuotients& pq);
  static Target source(const contfrac::RealSource& src, mpfr_prec_t bits = 256);
};

struct PotentialValue {
  double value = 0.0;  // midpoint of [lower, upper]; +inf on an atom
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> truncation_tail_bound;  // empty when unavailable
  TargetKind target_kind = TargetKind::CertifiedReal;
  bool on_atom = false;
};

struct PotentialOptions {
  double rel_tol = 1e-9;
};

// Sum of weight * kernel(|alpha - atom|). Throws PrecisionExhausted when the
// enclosure of alpha is too wide to meet rel_tol.
PotentialValue potential(const AtomicMeasure& measure, const kernels::KernelSpec& spec, const Target& alpha,
                         const PotentialOptions& options = {});

// Potentials of build_paper_measure(q_max, ...) for each q_max in the
// increasing list, sharing the per-layer sums.
std::vector<PotentialValue> potential_sweep(const kernels::KernelSpec& spec, const Target& alpha, double epsilon,
                                            const std::vector<std::uint64_t>& q_max_values, bool reduced = false,
                                            const PotentialOptions& options = {});

// Bound on the part sum_{q > q_max} that build_paper_measure(q_max) discards
// from the potential at alpha.
std::optional<double> paper_tail_bound(const kernels::KernelSpec& spec, const Target& alpha, double epsilon,
                                       std::uint64_t q_max);

// Upper bound on the integral of the kernel over (0, 1].
double kernel_integral_bound(const kernels::KernelSpec& spec);

struct EnergyValue {
  double value = 0.0;             // off-diagonal sum over i != j
  bool diagonal_divergent = true;  // the literal double integral includes i = j
  bool coincident_atoms = false;   // some atoms shared a point and were merged
};

EnergyValue energy(const AtomicMeasure& measure, const kernels::KernelSpec& spec);

// Off-diagonal energy of explicit points, each pair once and doubled. Atoms at
// the same point are merged first.
EnergyValue energy(const std::vector<mpq_class>& points, const std::vector<double>& weights,
                   const kernels::KernelSpec& spec);

}  // namespace diocap::measures
