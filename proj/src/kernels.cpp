#include "diocap/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "diocap/error.hpp"

namespace diocap::kernels {
namespace {

constexpr double kE = std::numbers::e;
constexpr double kE3 = kE * kE * kE;

// ln(c + 1/d) without forming 1/d, so subnormal d stays finite.
double ln_c_plus_inv(double c, double d) { return -std::log(d) + std::log1p(c * d); }

// ln ln(e + 1/d); past d = 1 the two-term form above cancels.
double ln_ln_e_plus_inv(double d) {
  return d > 1 ? std::log1p(std::log1p(1 / (kE * d))) : std::log(ln_c_plus_inv(kE, d));
}

const double kH1Max = std::exp(-2.0);
const double kH2Max = std::exp(-10.0);

}  // namespace

// glibc libmvec AVX2 entry points.
extern "C" {
__m256d _ZGVdN4v_log(__m256d);
__m256d _ZGVdN4v_log1p(__m256d);
__m256d _ZGVdN4v_exp(__m256d);
}

namespace {

__attribute__((target("avx2,fma"))) std::size_t batch_avx2(const KernelSpec& spec, const double* d, double* out,
                                                            std::size_t n) {
  const __m256d sigma = _mm256_set1_pd(spec.sigma);
  const __m256d e = _mm256_set1_pd(kE);
  const __m256d e3 = _mm256_set1_pd(kE3);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(d + i);
    const __m256d lx = _ZGVdN4v_log(x);
    const __m256d a = _ZGVdN4v_log(_mm256_sub_pd(_ZGVdN4v_log1p(_mm256_mul_pd(e, x)), lx));  // ln ln(e + 1/d)
    __m256d head, base;
    if (spec.family == KernelFamily::K1) {
      head = _mm256_mul_pd(lx, lx);
      base = a;
    } else {
      head = _mm256_mul_pd(a, a);
      base = _ZGVdN4v_log(_ZGVdN4v_log(_mm256_sub_pd(_ZGVdN4v_log1p(_mm256_mul_pd(e3, x)), lx)));
    }
    const __m256d tail = _ZGVdN4v_exp(_mm256_mul_pd(sigma, _ZGVdN4v_log(base)));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(head, tail));
  }
  return i;
}

const bool kHaveAvx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");

}  // namespace

void kernel_eval_batch(const KernelSpec& spec, std::span<const double> d, std::span<double> out) {
  if (out.size() < d.size()) throw DomainError("kernel batch output too short");
  for (double x : d) {
    if (!(x >= 0)) throw DomainError("kernel distance must be nonnegative");
  }
  std::size_t done = kHaveAvx2 ? batch_avx2(spec, d.data(), out.data(), d.size()) : 0;
  for (std::size_t i = 0; i < done; ++i) {
    if (d[i] == 0 || d[i] > 1) out[i] = kernel_eval(spec, d[i]);
  }
  for (; done < d.size(); ++done) out[done] = kernel_eval(spec, d[done]);
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "K1" || name == "k1") return KernelFamily::K1;
  if (name == "K2" || name == "k2") return KernelFamily::K2;
  throw UsageError("unknown kernel family: " + name);
}

std::string to_string(KernelFamily family) { return family == KernelFamily::K1 ? "K1" : "K2"; }

void validate(const KernelSpec& spec) {
  if (!(spec.sigma > 0) || !std::isfinite(spec.sigma)) throw DomainError("kernel sigma must be positive");
}

double kernel_eval(const KernelSpec& spec, double d) {
  if (!(d >= 0)) throw DomainError("kernel distance must be nonnegative");
  if (d == 0) return std::numeric_limits<double>::infinity();
  if (spec.family == KernelFamily::K1) {
    const double l = std::log(d);
    return l * l * std::pow(ln_ln_e_plus_inv(d), spec.sigma);
  }
  const double ll = ln_ln_e_plus_inv(d);
  return ll * ll * std::pow(std::log(std::log(ln_c_plus_inv(kE3, d))), spec.sigma);
}

CertifiedReal kernel_eval(const KernelSpec& spec, const CertifiedReal& d) {
  if (mpfr_sgn(d.lower()) <= 0) throw DomainError("certified kernel needs a positive distance");
  const mpfr_prec_t bits = d.precision_bits();
  const CertifiedReal e = CertifiedReal::euler_e(bits);
  const CertifiedReal inv = d.reciprocal();
  if (spec.family == KernelFamily::K1) {
    return d.log().square() * (e + inv).log().log().pow(spec.sigma);
  }
  const CertifiedReal e3 = e * e * e;
  return (e + inv).log().log().square() * (e3 + inv).log().log().log().pow(spec.sigma);
}

double GaugeSpec::domain_max() const noexcept {
  switch (family) {
    case GaugeFamily::H1: return kH1Max;
    case GaugeFamily::H2: return kH2Max;
    case GaugeFamily::Power: return 1.0;
  }
  return 0.0;
}

GaugeFamily parse_gauge_family(const std::string& name) {
  if (name == "H1" || name == "h1") return GaugeFamily::H1;
  if (name == "H2" || name == "h2") return GaugeFamily::H2;
  if (name == "power" || name == "t") return GaugeFamily::Power;
  throw UsageError("unknown gauge family: " + name);
}

std::string to_string(GaugeFamily family) {
  switch (family) {
    case GaugeFamily::H1: return "H1";
    case GaugeFamily::H2: return "H2";
    case GaugeFamily::Power: return "power";
  }
  return "?";
}

double gauge_eval(const GaugeSpec& spec, double t) {
  if (!(t >= 0) || t > spec.domain_max()) {
    throw DomainError("gauge argument outside [0, " + std::to_string(spec.domain_max()) + "]");
  }
  if (spec.family == GaugeFamily::Power) {
    if (!(spec.exponent > 0)) throw DomainError("power gauge exponent must be positive");
    return std::pow(t, spec.exponent);
  }
  if (!(spec.sigma > 2)) throw DomainError("gauge sigma must exceed 2");
  if (t == 0) return 0.0;
  const double l = -std::log(t);
  if (spec.family == GaugeFamily::H1) {
    return 1.0 / (l * l * std::pow(std::log(l), spec.sigma));
  }
  const double ll = std::log(l);
  return 1.0 / (ll * ll * std::pow(std::log(ll), spec.sigma));
}

}  // namespace diocap::kernels
