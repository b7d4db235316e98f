#pragma once

#include <vector>

#include "lwl/integer.hpp"

namespace lwl {

// A Lucas pair (P, Q): coprime nonzero integers with positive discriminant
// P^2 - 4Q, defining U_n = P U_{n-1} - Q U_{n-2} (U_0 = 0, U_1 = 1) and
// V_n = P V_{n-1} - Q V_{n-2} (V_0 = 2, V_1 = P).
struct LucasPair {
	Int P, Q;
	Int delta;  // P^2 - 4Q, always > 0

	LucasPair(Int p, Int q);  // validates; see errc::invalid_pair_*
};

struct LucasResidue {
	Int index;
	Int modulus;
	Int u, v;  // U_index and V_index reduced into [0, modulus)
};

Int lucas_u(const LucasPair& pair, unsigned long n);
Int lucas_v(const LucasPair& pair, unsigned long n);

// (U_n, V_n) mod m in O(log n) steps. Works for every modulus m >= 2,
// including even ones: only division-free doubling identities are used.
LucasResidue lucas_uv_mod(const LucasPair& pair, const Int& n, const Int& m);

struct GrowthCheck {
	unsigned long n;
	bool holds;  // |alpha|^(n/2) < |U_n| <= 2 |alpha|^n
};

// Two-sided growth bound check over an index range. Comparisons are exact:
// both sides are squared into integers of Q(sqrt(delta)) and compared by
// sign, never through floating point.
std::vector<GrowthCheck> growth_bounds_check(const LucasPair& pair, unsigned long n_lo,
                                             unsigned long n_hi);

// Smallest threshold t <= n_max such that the growth bound holds for every
// n in [t, n_max]; returns n_max + 1 if it fails even at n_max.
unsigned long growth_threshold(const LucasPair& pair, unsigned long n_max);

}  // namespace lwl
