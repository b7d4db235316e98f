#include "lwl/lucas.hpp"

#include <cstdint>

#include "lwl/errors.hpp"
#include "lwl/ntkit.hpp"

namespace lwl {

LucasPair::LucasPair(Int p, Int q) : P(std::move(p)), Q(std::move(q))
{
	if (P == 0 || Q == 0 || gcd(P, Q) != 1)
		throw error(errc::invalid_pair_gcd, "Lucas pair needs nonzero P, Q with gcd(P,Q) = 1");
	delta = P * P - 4 * Q;
	if (delta <= 0)
		throw error(errc::invalid_pair_discriminant, "Lucas pair needs P^2 - 4Q > 0");
}

// Division-free fast doubling on the pair (U_k, U_{k+1}):
//   U_{2k}   = U_k (2 U_{k+1} - P U_k)
//   U_{2k+1} = U_{k+1}^2 - Q U_k^2
// V follows from V_k = 2 U_{k+1} - P U_k.

Int lucas_u(const LucasPair& pair, unsigned long n)
{
	if (n == 0)
		return 0;
	Int u = 0, u1 = 1;  // (U_k, U_{k+1}) descending the bits of n
	unsigned long bit = 8 * sizeof(unsigned long);
	while (bit > 0 && !((n >> (bit - 1)) & 1))
		--bit;
	for (; bit > 0; --bit) {
		Int even = u * (2 * u1 - pair.P * u);
		Int odd = u1 * u1 - pair.Q * u * u;
		if ((n >> (bit - 1)) & 1) {
			u = odd;
			u1 = pair.P * odd - pair.Q * even;  // U_{2k+2} = P U_{2k+1} - Q U_{2k}
		} else {
			u = even;
			u1 = odd;
		}
	}
	return u;
}

Int lucas_v(const LucasPair& pair, unsigned long n)
{
	if (n == 0)
		return 2;
	// V_n = 2 U_{n+1} - P U_n
	Int un = lucas_u(pair, n);
	Int un1 = lucas_u(pair, n + 1);
	return 2 * un1 - pair.P * un;
}

// ---------------------------------------------------------------------------
// Modular evaluation: same doubling ladder, reduced mod m at every step.
// A fixed-width path handles moduli below 2^64 (products fit __uint128_t);
// everything larger goes through mpz.

namespace {

struct ModU64 {
	uint64_t m;
	uint64_t mul(uint64_t a, uint64_t b) const { return (uint64_t)((__uint128_t)a * b % m); }
	uint64_t add(uint64_t a, uint64_t b) const
	{
		uint64_t s = a + b;
		if (s < a || s >= m)
			s -= m;
		return s;
	}
	uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + (m - b); }
};

uint64_t reduce_u64(const Int& x, uint64_t m)
{
	Int r = x % from_u64(m);
	if (r < 0)
		r += from_u64(m);
	return to_u64(r);
}

void uv_mod_u64(const LucasPair& pair, const Int& n, uint64_t m, Int& u_out, Int& v_out)
{
	ModU64 md{m};
	uint64_t P = reduce_u64(pair.P, m), Q = reduce_u64(pair.Q, m);
	uint64_t u = 0, u1 = 1 % m;
	long bits = (long)mpz_sizeinbase(n.get_mpz_t(), 2);
	for (long i = bits - 1; i >= 0; --i) {
		uint64_t even = md.mul(u, md.sub(md.add(u1, u1), md.mul(P, u)));
		uint64_t odd = md.sub(md.mul(u1, u1), md.mul(Q, md.mul(u, u)));
		if (mpz_tstbit(n.get_mpz_t(), i)) {
			u = odd;
			u1 = md.sub(md.mul(P, odd), md.mul(Q, even));
		} else {
			u = even;
			u1 = odd;
		}
	}
	uint64_t un1 = u1;
	uint64_t v = md.sub(md.add(un1, un1), md.mul(P, u));
	u_out = from_u64(u);
	v_out = from_u64(v);
}

void uv_mod_mpz(const LucasPair& pair, const Int& n, const Int& m, Int& u_out, Int& v_out)
{
	auto mod = [&](Int x) {
		x %= m;
		if (x < 0)
			x += m;
		return x;
	};
	Int P = mod(pair.P), Q = mod(pair.Q);
	Int u = 0, u1 = mod(1);
	long bits = (long)mpz_sizeinbase(n.get_mpz_t(), 2);
	for (long i = bits - 1; i >= 0; --i) {
		Int even = mod(u * mod(2 * u1 - P * u));
		Int odd = mod(u1 * u1 - Q * u * u);
		if (mpz_tstbit(n.get_mpz_t(), i)) {
			u = odd;
			u1 = mod(P * odd - Q * even);
		} else {
			u = even;
			u1 = odd;
		}
	}
	u_out = u;
	v_out = mod(2 * u1 - P * u);
}

}  // namespace

LucasResidue lucas_uv_mod(const LucasPair& pair, const Int& n, const Int& m)
{
	if (n < 0)
		throw error(errc::precondition, "lucas_uv_mod: index must be nonnegative");
	if (m < 2)
		throw error(errc::precondition, "lucas_uv_mod: modulus must be >= 2");
	LucasResidue res;
	res.index = n;
	res.modulus = m;
	if (n == 0) {
		res.u = 0;
		res.v = Int(2) % m;
		return res;
	}
	if (fits_u64(m))
		uv_mod_u64(pair, n, to_u64(m), res.u, res.v);
	else
		uv_mod_mpz(pair, n, m, res.u, res.v);
	return res;
}

// ---------------------------------------------------------------------------
// Growth bounds. With W_n = U_n(|P|, Q) and T_n = V_n(|P|, Q):
//   |alpha|^n = (T_n + W_n sqrt(delta)) / 2,
// so every comparison against a rational reduces to integer sign tests.

namespace {

// |alpha|^(n/2) < |U_n|  <=>  |alpha|^n < U_n^2
//   <=>  T_n + W_n sqrt(delta) < 2 U_n^2
bool lower_bound_holds(const Int& t, const Int& w, const Int& delta, const Int& u)
{
	Int rhs = 2 * u * u - t;
	if (rhs <= 0)
		return false;
	return w * w * delta < rhs * rhs;
}

// |U_n| <= 2 |alpha|^n  <=>  U_n^2 <= 4 |alpha|^{2n} = 2 (T_2n + W_2n sqrt(delta))
bool upper_bound_holds(const Int& t2, const Int& w2, const Int& delta, const Int& u)
{
	Int lhs = u * u - 2 * t2;
	if (lhs <= 0)
		return true;
	return lhs * lhs <= 4 * w2 * w2 * delta;
}

}  // namespace

std::vector<GrowthCheck> growth_bounds_check(const LucasPair& pair, unsigned long n_lo,
                                             unsigned long n_hi)
{
	if (n_lo < 1 || n_lo > n_hi)
		throw error(errc::precondition, "growth_bounds_check: need 1 <= n_lo <= n_hi");
	LucasPair abs_pair(abs(pair.P), pair.Q);
	std::vector<GrowthCheck> out;
	out.reserve(n_hi - n_lo + 1);

	// run the three recurrences up to the indices the comparisons need
	std::vector<Int> w_all{0, 1}, t_all{2, abs_pair.P}, u_all{0, 1};
	for (unsigned long i = 2; i <= 2 * n_hi; ++i) {
		w_all.push_back(abs_pair.P * w_all[i - 1] - abs_pair.Q * w_all[i - 2]);
		t_all.push_back(abs_pair.P * t_all[i - 1] - abs_pair.Q * t_all[i - 2]);
	}
	for (unsigned long i = 2; i <= n_hi; ++i)
		u_all.push_back(pair.P * u_all[i - 1] - pair.Q * u_all[i - 2]);
	for (unsigned long n = n_lo; n <= n_hi; ++n) {
		bool lower = lower_bound_holds(t_all[n], w_all[n], pair.delta, u_all[n]);
		bool upper = upper_bound_holds(t_all[2 * n], w_all[2 * n], pair.delta, u_all[n]);
		out.push_back({n, lower && upper});
	}
	return out;
}

unsigned long growth_threshold(const LucasPair& pair, unsigned long n_max)
{
	auto checks = growth_bounds_check(pair, 1, n_max);
	unsigned long threshold = n_max + 1;
	for (auto it = checks.rbegin(); it != checks.rend(); ++it) {
		if (!it->holds)
			break;
		threshold = it->n;
	}
	return threshold;
}

}  // namespace lwl
