#pragma once

#include <cstdint>
#include <string>
#include <gmpxx.h>

namespace lwl {

// Arbitrary-precision integers and rationals. GMP does the heavy lifting;
// these aliases keep signatures readable.
using Int = mpz_class;
using Rat = mpq_class;

inline Int make_int(const std::string& decimal) { return Int(decimal, 10); }

inline Rat make_rat(const Int& num, const Int& den)
{
	Rat r(num, den);
	r.canonicalize();
	return r;
}

inline bool fits_u64(const Int& n)
{
	return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

inline uint64_t to_u64(const Int& n)
{
	// mpz_get_ui truncates to an unsigned long, which is 64-bit on this ABI
	return mpz_get_ui(n.get_mpz_t());
}

inline Int from_u64(uint64_t v)
{
	Int n;
	mpz_import(n.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
	return n;
}

inline Int pow_int(const Int& base, unsigned long e)
{
	Int r;
	mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
	return r;
}

// p-adic valuation of n != 0
inline unsigned long valuation(const Int& n, const Int& p)
{
	Int rest;
	return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

// p-adic valuation of a nonzero rational (negative when p divides the denominator)
inline long valuation(const Rat& r, const Int& p)
{
	long vn = r.get_num() == 0 ? 0 : (long)valuation(Int(r.get_num()), p);
	long vd = (long)valuation(Int(r.get_den()), p);
	return vn - vd;
}

inline std::string dec(const Int& n) { return n.get_str(10); }
inline std::string dec(const Rat& r) { return r.get_str(10); }

}  // namespace lwl
