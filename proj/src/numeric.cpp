#include "diocap/numeric.hpp"

#include <cmath>
#include <numbers>

#include "diocap/error.hpp"

namespace diocap {

double ln_mpz(const mpz_class& z) {
  if (z < 1) throw DomainError("ln_mpz needs z >= 1");
  long e = 0;
  const double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::numbers::ln2;
}

Tower tower_from_mpz(const mpz_class& z) {
  if (z < 0) throw DomainError("tower_from_mpz needs z >= 0");
  if (mpz_sizeinbase(z.get_mpz_t(), 2) <= 1000) return Tower(z.get_d());
  return Tower(ln_mpz(z)).exp();
}

}  // namespace diocap
