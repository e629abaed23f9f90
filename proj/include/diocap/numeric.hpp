#pragma once

#include <gmpxx.h>

#include "diocap/tower.hpp"

namespace diocap {

// ln z for z >= 1, accurate to a few ulps for any size of z.
double ln_mpz(const mpz_class& z);

// z as a tower number (z >= 0).
Tower tower_from_mpz(const mpz_class& z);

}  // namespace diocap
