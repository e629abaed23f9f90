#pragma once

#include <span>
#include <string>

#include "diocap/certified_real.hpp"

namespace diocap::kernels {

enum class KernelFamily { K1, K2 };

//   K1(d) = ln^2 d * (ln ln(e + 1/d))^sigma
//   K2(d) = (ln ln(e + 1/d))^2 * (ln ln ln(e^3 + 1/d))^sigma
// Both are +inf at d = 0. sigma > 2 is what the capacity-zero statements
// need; smaller positive sigma is allowed and reported by theorem_grade().
struct KernelSpec {
  KernelFamily family = KernelFamily::K1;
  double sigma = 2.4;

  bool theorem_grade() const noexcept { return sigma > 2; }
};

KernelFamily parse_kernel_family(const std::string& name);
std::string to_string(KernelFamily family);

// Throws DomainError for sigma <= 0 or non-finite sigma.
void validate(const KernelSpec& spec);

double kernel_eval(const KernelSpec& spec, double d);

// out[i] = kernel_eval(spec, d[i]) to within a few ulps. Uses the vector math
// library on AVX2 hardware; the split into vector and scalar lanes depends
// only on d.size().
void kernel_eval_batch(const KernelSpec& spec, std::span<const double> d, std::span<double> out);

// Outward-rounded enclosure of the kernel over an interval of distances with
// positive lower end.
CertifiedReal kernel_eval(const KernelSpec& spec, const CertifiedReal& d);

enum class GaugeFamily { H1, H2, Power };

//   H1(t) = ln^-2(1/t) * ln^-sigma ln(1/t)            on [0, e^-2]
//   H2(t) = ln^-2 ln(1/t) * ln^-sigma ln ln(1/t)      on [0, e^-10]
//   Power(t) = t^exponent                             on [0, 1], a test gauge
struct GaugeSpec {
  GaugeFamily family = GaugeFamily::H1;
  double sigma = 3.0;
  double exponent = 1.0;

  double domain_max() const noexcept;
};

GaugeFamily parse_gauge_family(const std::string& name);
std::string to_string(GaugeFamily family);

// h(0) = 0. DomainError outside [0, domain_max] or for H-gauges with sigma <= 2.
double gauge_eval(const GaugeSpec& spec, double t);

}  // namespace diocap::kernels
