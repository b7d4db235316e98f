#include "lwl/abc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include "lwl/errors.hpp"

namespace lwl {

BinetTriple binet_triple(const LucasPair& pair, unsigned long n)
{
	if (n < 1)
		throw error(errc::precondition, "binet_triple: n must be >= 1");
	auto [alpha, beta] = roots_of_pair(pair);
	BinetTriple t;
	Rat sigma(pair.P > 0 ? 1 : -1);
	t.a = QuadElem(pair.delta, Rat(0), sigma * Rat(lucas_u(pair, n)));
	t.b = -qpow(alpha, n);
	t.c = qpow(beta, n);
	if (!(t.a + t.b + t.c).is_zero())
		throw error(errc::internal, "binet_triple: a + b + c != 0");
	return t;
}

// ---------------------------------------------------------------------------
// Heights and radicals

namespace {

double log_rat(const Rat& r)
{
	long en, ed;
	double mn = mpz_get_d_2exp(&en, r.get_num().get_mpz_t());
	double md = mpz_get_d_2exp(&ed, r.get_den().get_mpz_t());
	return std::log(std::fabs(mn / md)) + (double)(en - ed) * std::log(2.0);
}

// rational primes that can carry a nonzero valuation of x: the factors of
// the norm's numerator and of the coordinate denominators
void support_primes(const QuadElem& x, const FactorBudget& budget, std::set<Int>& out,
                    bool& complete)
{
	Int den = lcm(Int(x.a.get_den()), Int(x.b.get_den()));
	Rat nrm = norm(x);
	Int norm_num = nrm.get_num();
	for (const Int& v : {norm_num, den}) {
		if (abs(v) <= 1)
			continue;
		Factorization f = factor(v, budget);
		if (!f.complete)
			complete = false;
		for (const auto& e : f.factors)
			if (e.certified)
				out.insert(e.p);
	}
}

int argmax_abs(const QuadElem* xs[3], int emb)
{
	int best = 0;
	for (int i = 1; i < 3; ++i)
		if (cmp_abs_emb(*xs[i], *xs[best], emb) > 0)
			best = i;
	return best;
}

}  // namespace

double HeightValue::log_value() const { return log_abs_emb(arch, 1) + log_rat(finite); }

bool HeightValue::at_least(const Rat& r) const
{
	// |psi_1(arch)| * finite >= r  <=>  |psi_1(arch)| >= r / finite
	Rat rhs = r / finite;
	QuadElem bound = rational_elem(arch.delta, rhs);
	return cmp_abs_emb(arch, bound, 1) >= 0;
}

HeightValue height_K(const QuadElem& a, const QuadElem& b, const QuadElem& c,
                     const FactorBudget& budget)
{
	if (a.is_zero() || b.is_zero() || c.is_zero())
		throw error(errc::precondition, "height_K: zero element");
	if (a.delta != b.delta || a.delta != c.delta)
		throw error(errc::precondition, "height_K: mixed discriminants");

	HeightValue h;
	h.finite = 1;

	// archimedean part: the max is located by exact comparison per embedding
	const QuadElem* xs[3] = {&a, &b, &c};
	const QuadElem& m1 = *xs[argmax_abs(xs, 1)];
	const QuadElem& m2 = *xs[argmax_abs(xs, 2)];
	// |psi_1(m1)| * |psi_2(m2)| = |psi_1(m1 * conj(m2))|
	h.arch = m1 * conjugate(m2);

	// finite part: max(N^-ord) per place over the support
	std::set<Int> primes;
	support_primes(a, budget, primes, h.complete);
	support_primes(b, budget, primes, h.complete);
	support_primes(c, budget, primes, h.complete);
	for (const Int& p : primes) {
		auto va = ideal_valuations(a, p);
		auto vb = ideal_valuations(b, p);
		auto vc = ideal_valuations(c, p);
		for (size_t i = 0; i < va.size(); ++i) {
			long min_ord = std::min({va[i].ord, vb[i].ord, vc[i].ord});
			if (min_ord == 0)
				continue;
			Int contrib = pow_int(p, (unsigned long)(va[i].f * std::labs(min_ord)));
			if (min_ord > 0)
				h.finite /= Rat(contrib);
			else
				h.finite *= Rat(contrib);
		}
	}
	return h;
}

RadicalValue radical_K(const QuadElem& a, const QuadElem& b, const QuadElem& c,
                       const FactorBudget& budget)
{
	if (a.is_zero() || b.is_zero() || c.is_zero())
		throw error(errc::precondition, "radical_K: zero element");
	if (a.delta != b.delta || a.delta != c.delta)
		throw error(errc::precondition, "radical_K: mixed discriminants");

	RadicalValue rv;
	std::set<Int> primes;
	support_primes(a, budget, primes, rv.complete);
	support_primes(b, budget, primes, rv.complete);
	support_primes(c, budget, primes, rv.complete);
	for (const Int& p : primes) {
		auto va = ideal_valuations(a, p);
		auto vb = ideal_valuations(b, p);
		auto vc = ideal_valuations(c, p);
		for (size_t i = 0; i < va.size(); ++i) {
			bool all_equal = va[i].ord == vb[i].ord && vb[i].ord == vc[i].ord;
			if (!all_equal)
				rv.rad *= pow_int(p, va[i].f);
		}
	}
	return rv;
}

BinetTripleReport triple_report(const LucasPair& pair, unsigned long n, const FactorBudget& budget)
{
	BinetTripleReport rep;
	rep.n = n;
	rep.triple = binet_triple(pair, n);
	rep.U = lucas_u(pair, n);
	rep.H = height_K(rep.triple.a, rep.triple.b, rep.triple.c, budget);
	rep.rad = radical_K(rep.triple.a, rep.triple.b, rep.triple.c, budget);

	SqfSplit split = squarefree_powerful_split(abs(rep.U), budget);
	rep.X = split.X;
	rep.Y = split.Y;
	rep.split_complete = split.complete;

	rep.bound_h_ok = rep.H.at_least(Rat(Int(pair.delta * rep.U * rep.U)));
	if (rep.rad.complete && rep.split_complete)
		rep.bound_r_ok = rep.rad.rad <= pair.Q * pair.Q * pair.delta * rep.X * rep.X * rep.Y;

	if (rep.rad.rad > 1) {
		long e;
		double m = mpz_get_d_2exp(&e, rep.rad.rad.get_mpz_t());
		double log_rad = std::log(m) + (double)e * std::log(2.0);
		rep.quality = rep.H.log_value() / log_rad;
	}
	return rep;
}

// ---------------------------------------------------------------------------
// Ding's density lemma

EulerC euler_c(uint64_t k, uint64_t prime_bound)
{
	if (prime_bound < 100)
		throw error(errc::precondition, "euler_c: prime_bound must be >= 100");
	EulerC c;
	c.value = 1.0;
	PrimeStream primes(2, prime_bound);
	while (auto p = primes.next()) {
		double g = (double)std::gcd(*p, k);
		c.value *= 1.0 - g / ((double)*p * (double)*p);
	}
	// tail factors lie in [1 - k/bound, 1): sum_{n > B} 1/n^2 < 1/B
	double tail_lo = 1.0 - (double)k / (double)prime_bound;
	c.lo = c.value * std::max(0.0, tail_lo);
	c.hi = c.value;
	return c;
}

namespace {

// exact sum of phi(nk)/(nk) over n in [lo, hi); pairwise to keep the
// rational additions near the top of the tree where they are few
Rat phi_ratio_sum(uint64_t k, uint64_t lo, uint64_t hi)
{
	if (hi - lo <= 32) {
		Rat s(0);
		for (uint64_t n = lo; n < hi; ++n) {
			uint64_t nk = n * k;
			s += make_rat(from_u64(euler_phi(nk)), from_u64(nk));
		}
		return s;
	}
	uint64_t mid = lo + (hi - lo) / 2;
	return phi_ratio_sum(k, lo, mid) + phi_ratio_sum(k, mid, hi);
}

}  // namespace

DensityReport density_check(uint64_t k, uint64_t x)
{
	if (k < 1)
		throw error(errc::precondition, "density_check: k must be >= 1");
	if (x < 10)
		throw error(errc::precondition, "density_check: x must be >= 10");

	DensityReport rep;
	rep.k = k;
	rep.x = x;
	EulerC c = euler_c(k, 1'000'000);
	rep.c_k = c.value;
	rep.c_k_lo = c.lo;
	rep.c_k_hi = c.hi;

	std::vector<uint64_t> marks;
	for (uint64_t m = 16; m < x; m *= 2)
		marks.push_back(m);
	marks.push_back(x);

	Rat prefix(0);
	uint64_t done = 1;  // next n to add
	for (uint64_t m : marks) {
		prefix += phi_ratio_sum(k, done, m + 1);
		done = m + 1;
		double sum_d = mpq_get_d(prefix.get_mpq_t());
		double residual = sum_d - rep.c_k * (double)m;
		double ratio = std::fabs(residual) / std::log((double)m);
		rep.checkpoints.push_back({m, residual, ratio});
		rep.sup_residual_over_log = std::max(rep.sup_residual_over_log, ratio);
	}
	rep.partial_sum = prefix;
	rep.residual = rep.checkpoints.back().residual;
	return rep;
}

SDensityReport s_density(const LucasPair& pair, uint64_t k, uint64_t x, const FactorBudget& budget)
{
	if (x < 2)
		throw error(errc::precondition, "s_density: x must be >= 2");
	SDensityReport rep;
	rep.k = k;
	rep.x = x;
	for (uint64_t n = 1; n <= x; ++n) {
		if (n * k < 2)
			continue;
		SplitRecord rec = split_record(pair, k, n, budget);
		switch (rec.in_S) {
		case Tri::yes:
			rep.s_count++;
			break;
		case Tri::no:
			rep.not_in_s++;
			break;
		case Tri::unknown:
			rep.unknown++;
			break;
		}
		if (rec.boundary)
			rep.boundary_flagged++;
		rep.records.push_back(std::move(rec));
	}
	rep.ratio = (double)rep.s_count / (double)x;
	return rep;
}

}  // namespace lwl
