#include "lwl/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "lwl/errors.hpp"
#include "lwl/ntkit.hpp"

namespace lwl {

namespace {

void require_same_field(const QuadElem& x, const QuadElem& y)
{
	if (x.delta != y.delta)
		throw error(errc::precondition, "quadfield: mixed discriminants");
}

}  // namespace

bool QuadElem::is_rational_value() const
{
	if (b == 0)
		return true;
	return mpz_perfect_square_p(delta.get_mpz_t());
}

QuadElem operator+(const QuadElem& x, const QuadElem& y)
{
	require_same_field(x, y);
	return {x.delta, x.a + y.a, x.b + y.b};
}

QuadElem operator-(const QuadElem& x, const QuadElem& y)
{
	require_same_field(x, y);
	return {x.delta, x.a - y.a, x.b - y.b};
}

QuadElem operator*(const QuadElem& x, const QuadElem& y)
{
	require_same_field(x, y);
	Rat delta_r(x.delta);
	return {x.delta, x.a * y.a + delta_r * x.b * y.b, x.a * y.b + x.b * y.a};
}

QuadElem operator/(const QuadElem& x, const QuadElem& y)
{
	require_same_field(x, y);
	Rat n = norm(y);
	if (n == 0)
		throw error(errc::division_by_zero, "quadfield: division by zero or zero-norm element");
	QuadElem t = x * conjugate(y);
	return {x.delta, t.a / n, t.b / n};
}

QuadElem operator-(const QuadElem& x) { return {x.delta, -x.a, -x.b}; }

QuadElem operator*(const Rat& s, const QuadElem& x) { return {x.delta, s * x.a, s * x.b}; }

bool operator==(const QuadElem& x, const QuadElem& y)
{
	return x.delta == y.delta && x.a == y.a && x.b == y.b;
}

QuadElem conjugate(const QuadElem& x) { return {x.delta, x.a, -x.b}; }

Rat norm(const QuadElem& x) { return x.a * x.a - Rat(x.delta) * x.b * x.b; }

Rat trace(const QuadElem& x) { return 2 * x.a; }

QuadElem qpow(const QuadElem& x, unsigned long n)
{
	QuadElem result(x.delta, Rat(1), Rat(0));
	QuadElem base = x;
	while (n > 0) {
		if (n & 1)
			result = result * base;
		base = base * base;
		n >>= 1;
	}
	return result;
}

QuadElem sqrt_delta_elem(const Int& delta) { return {delta, Rat(0), Rat(1)}; }

QuadElem rational_elem(const Int& delta, const Rat& r) { return {delta, r, Rat(0)}; }

std::pair<QuadElem, QuadElem> roots_of_pair(const LucasPair& pair)
{
	// the sign on sqrt(delta) keeps |alpha| > |beta| for negative P as well
	Rat half_p = make_rat(pair.P, 2);
	Rat half_sigma = make_rat(pair.P > 0 ? 1 : -1, 2);
	QuadElem alpha(pair.delta, half_p, half_sigma);
	QuadElem beta(pair.delta, half_p, -half_sigma);
	return {alpha, beta};
}

// ---------------------------------------------------------------------------
// Exact sign machinery

int sign_emb(const QuadElem& x, int emb)
{
	Rat b = emb == 1 ? x.b : Rat(-x.b);
	int sa = sgn(x.a), sb = sgn(b);
	if (sb == 0)
		return sa;
	if (sa == 0)
		return sb;
	if (sa == sb)
		return sa;
	// opposite signs: compare a^2 against b^2 delta
	Rat lhs = x.a * x.a, rhs = b * b * Rat(x.delta);
	int c = cmp(lhs, rhs);
	if (c == 0)
		return 0;  // only reachable when delta is a perfect square
	return c > 0 ? sa : sb;
}

int cmp_abs_emb(const QuadElem& x, const QuadElem& y, int emb)
{
	require_same_field(x, y);
	return sign_emb(x * x - y * y, emb);
}

Rat rational_value(const QuadElem& x)
{
	if (x.b == 0)
		return x.a;
	Int root;
	if (mpz_perfect_square_p(x.delta.get_mpz_t())) {
		mpz_sqrt(root.get_mpz_t(), x.delta.get_mpz_t());
		return x.a + x.b * Rat(root);
	}
	throw error(errc::precondition, "rational_value: element is irrational");
}

namespace {

size_t coord_bits(const Rat& r)
{
	return mpz_sizeinbase(r.get_num().get_mpz_t(), 2) +
	       mpz_sizeinbase(r.get_den().get_mpz_t(), 2);
}

// Evaluate psi_emb(x) as an mpf with enough precision that the value is
// correct to ~32 bits relative, growing precision to beat cancellation.
mpf_class eval_emb(const QuadElem& x, int emb)
{
	if (x.is_zero())
		return mpf_class(0);
	if (sign_emb(x, emb) == 0)
		return mpf_class(0);
	size_t bits = std::max(coord_bits(x.a), coord_bits(x.b)) +
	              mpz_sizeinbase(x.delta.get_mpz_t(), 2) + 16;
	for (size_t prec = bits + 96;; prec *= 2) {
		mpf_class root(0, prec), av(0, prec), bv(0, prec), val(0, prec);
		root = mpf_class(x.delta, prec);
		mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
		av = mpf_class(x.a, prec);
		bv = mpf_class(x.b, prec);
		val = emb == 1 ? av + bv * root : av - bv * root;
		// absolute error is ~2^(magnitude - prec + small); accept once the
		// value safely clears it
		long mag;
		mpf_get_d_2exp(&mag, val.get_mpf_t());
		if (val != 0 && mag > (long)bits - (long)prec + 64)
			return val;
		if (prec > (size_t)1 << 26)
			throw error(errc::internal, "quadfield: embedding evaluation failed to converge");
	}
}

}  // namespace

double log_abs_emb(const QuadElem& x, int emb)
{
	if (sign_emb(x, emb) == 0)
		throw error(errc::precondition, "log_abs_emb: value is zero");
	mpf_class val = eval_emb(x, emb);
	long e;
	double m = mpf_get_d_2exp(&e, val.get_mpf_t());
	return std::log(std::fabs(m)) + (double)e * std::log(2.0);
}

double approx_emb(const QuadElem& x, int emb)
{
	if (x.is_zero() || sign_emb(x, emb) == 0)
		return 0.0;
	return mpf_get_d(eval_emb(x, emb).get_mpf_t());
}

// ---------------------------------------------------------------------------
// Field data: square-free part, field discriminant

namespace {

std::mutex field_mutex;
std::map<Int, FieldData> field_cache;

}  // namespace

const FieldData& field_data(const Int& delta)
{
	if (delta <= 0)
		throw error(errc::precondition, "field_data: delta must be positive");
	std::lock_guard<std::mutex> lock(field_mutex);
	auto it = field_cache.find(delta);
	if (it != field_cache.end())
		return it->second;

	Factorization f = factor(delta);
	if (!f.complete)
		throw error(errc::budget_exhausted, "field_data: could not factor the discriminant");
	FieldData data;
	data.delta = delta;
	data.d = 1;
	data.s = 1;
	for (const auto& e : f.factors) {
		if (e.exp % 2 == 1)
			data.d *= e.p;
		data.s *= pow_int(e.p, e.exp / 2);
	}
	data.rational = data.d == 1;
	data.disc = mpz_fdiv_ui(data.d.get_mpz_t(), 4) == 1 ? data.d : 4 * data.d;
	return field_cache.emplace(delta, std::move(data)).first->second;
}

Splitting splitting_type(const Int& delta, const Int& p)
{
	const FieldData& fd = field_data(delta);
	if (fd.rational)
		throw error(errc::precondition, "splitting_type: discriminant is a perfect square");
	if (!is_prime(p))
		throw error(errc::composite_input, "splitting_type: p must be prime");
	int k = kronecker(fd.disc, p);
	if (k == 1)
		return Splitting::split;
	if (k == -1)
		return Splitting::inert;
	return Splitting::ramified;
}

// ---------------------------------------------------------------------------
// Square roots mod p^M (Tonelli-Shanks at p, then quadratic Hensel lifting)

namespace {

Int powmod(const Int& b, const Int& e, const Int& m)
{
	Int r;
	mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
	return r;
}

// r with r^2 = a (mod p), p odd prime, (a/p) = 1
Int tonelli_shanks(const Int& a_in, const Int& p)
{
	Int a = a_in % p;
	if (a < 0)
		a += p;
	if (a == 0)
		return 0;
	if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 3)
		return powmod(a, (p + 1) / 4, p);
	// write p - 1 = q 2^s with q odd
	Int q = p - 1;
	unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
	mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
	// find a quadratic non-residue z
	Int z = 2;
	while (kronecker(z, p) != -1)
		++z;
	Int m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
	while (t != 1) {
		Int tt = t;
		unsigned long i = 0;
		while (tt != 1) {
			tt = tt * tt % p;
			++i;
		}
		Int b = c;
		for (Int j = 0; j < m - (long)i - 1; ++j)
			b = b * b % p;
		m = (long)i;
		c = b * b % p;
		t = t * c % p;
		r = r * b % p;
	}
	return r;
}

// r with r^2 = d (mod p^prec_exp); requires p split, i.e. the root exists
Int sqrt_mod_prime_power(const Int& d, const Int& p, unsigned long prec_exp)
{
	Int pk, r;
	unsigned long k;
	if (p == 2) {
		// d = 1 (mod 8): lift bit by bit from r = 1
		r = 1;
		for (k = 3; k < prec_exp; ++k) {
			Int rem = r * r - d;
			if (mpz_tstbit(rem.get_mpz_t(), k))
				r += Int(1) << (k - 1);
		}
		pk = Int(1) << prec_exp;
	} else {
		r = tonelli_shanks(d, p);
		if (r == 0 || (r * r - d) % p != 0)
			throw error(errc::internal, "sqrt_mod_prime_power: no square root found");
		pk = p;
		k = 1;
		while (k < prec_exp) {
			// Newton step doubles the precision: r' = (r + d/r)/2 mod p^2k
			k = std::min(2 * k, prec_exp);
			Int pk2;
			mpz_pow_ui(pk2.get_mpz_t(), p.get_mpz_t(), k);
			Int inv_r;
			if (mpz_invert(inv_r.get_mpz_t(), r.get_mpz_t(), pk2.get_mpz_t()) == 0)
				throw error(errc::internal, "sqrt_mod_prime_power: lost invertibility");
			Int inv2;
			mpz_invert(inv2.get_mpz_t(), Int(2).get_mpz_t(), pk2.get_mpz_t());
			r = (r + d * inv_r) % pk2 * inv2 % pk2;
			pk = pk2;
		}
	}
	if (r < 0)
		r += pk;
	// canonical choice between the two roots
	if (r > pk - r)
		r = pk - r;
	return r;
}

}  // namespace

std::vector<PlaceValue> ideal_valuations(const QuadElem& x, const Int& p)
{
	if (x.is_zero())
		throw error(errc::precondition, "ideal_valuations: x must be nonzero");
	if (!is_prime(p))
		throw error(errc::composite_input, "ideal_valuations: p must be prime");

	const FieldData& fd = field_data(x.delta);
	if (fd.rational) {
		Rat value = rational_value(x);
		if (value == 0)
			throw error(errc::precondition, "ideal_valuations: zero rational value");
		return {{PlaceTag::rational, p, 1, valuation(value, p), 0.0}};
	}

	// coordinates over sqrt(d): x = A + B sqrt(d)
	Rat A = x.a, B = x.b * Rat(fd.s);
	Rat nrm = A * A - Rat(fd.d) * B * B;
	long w = valuation(nrm, p);

	int k = kronecker(fd.disc, p);
	if (k == -1) {
		if (w % 2 != 0)
			throw error(errc::internal, "ideal_valuations: odd norm valuation at inert prime");
		return {{PlaceTag::inert, p, 2, w / 2, 0.0}};
	}
	if (k == 0)
		return {{PlaceTag::ramified, p, 1, w, 0.0}};

	// split: map sqrt(d) to each lifted root of t^2 = d (mod p^M)
	if (B == 0) {
		long v = valuation(A, p);
		return {{PlaceTag::split1, p, 1, v, 0.0}, {PlaceTag::split2, p, 1, v, 0.0}};
	}
	if (A == 0) {
		long v = valuation(B, p);
		return {{PlaceTag::split1, p, 1, v, 0.0}, {PlaceTag::split2, p, 1, v, 0.0}};
	}
	long t = std::min(valuation(A, p), valuation(B, p));
	unsigned long M = (unsigned long)std::max<long>(w - 2 * std::min<long>(t, 0) + 16, 24);
	for (int attempt = 0; attempt < 4; ++attempt, M *= 2) {
		Int r = sqrt_mod_prime_power(fd.d, p, M);
		Rat plus = A + B * Rat(r), minus = A - B * Rat(r);
		if (plus == 0 || minus == 0)
			continue;  // truncated root collided with -A/B; retry wider
		long ord1 = valuation(plus, p), ord2 = valuation(minus, p);
		if (ord1 + ord2 == w)
			return {{PlaceTag::split1, p, 1, ord1, 0.0}, {PlaceTag::split2, p, 1, ord2, 0.0}};
	}
	throw error(errc::internal, "ideal_valuations: split valuation did not stabilize");
}

bool divisible_by_rational_prime(const QuadElem& x, const Int& p)
{
	if (x.is_zero())
		throw error(errc::precondition, "divisible_by_rational_prime: x must be nonzero");
	for (const auto& pv : ideal_valuations(x, p))
		if (pv.ord > 0)
			return true;
	return false;
}

std::string to_string(const QuadElem& x)
{
	std::ostringstream os;
	if (x.b == 0) {
		os << x.a.get_str();
		return os.str();
	}
	os << x.a.get_str() << (sgn(x.b) < 0 ? " - " : " + ") << abs(x.b).get_str() << "*sqrt("
	   << x.delta.get_str() << ")";
	return os.str();
}

}  // namespace lwl
