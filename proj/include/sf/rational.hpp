#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace sf {

// Exact rational scalar. GMP keeps numerator/denominator arbitrary precision;
// mpq_class canonicalizes on construction.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

inline bool rat_is_zero(const Rat& r) { return sgn(r) == 0; }

inline double rat_to_double(const Rat& r) { return r.get_d(); }

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

// base^e for integer e (e may be negative; base must be nonzero then).
Rat rat_pow(const Rat& base, long e);

// true when |r| fits in long (used by power folding guards)
bool rat_exponent_small(const Rat& r, long limit = 64);

std::uint64_t rat_hash(const Rat& r);

}  // namespace sf
