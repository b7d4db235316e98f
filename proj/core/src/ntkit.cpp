#include "lwl/ntkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "lwl/errors.hpp"

namespace lwl {

Int Factorization::reassemble() const
{
	Int prod = 1;
	for (const auto& f : factors)
		prod *= pow_int(f.p, f.exp);
	return prod;
}

Int Factorization::squarefree_part() const
{
	Int prod = 1;
	for (const auto& f : factors)
		if (f.certified && f.exp == 1)
			prod *= f.p;
	return prod;
}

Int gcd(const Int& a, const Int& b)
{
	Int g;
	mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
	return g;
}

Int lcm(const Int& a, const Int& b)
{
	Int l;
	mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
	return l;
}

int kronecker(const Int& a, const Int& n)
{
	if (n == 0)
		throw error(errc::precondition, "kronecker: n must be nonzero");
	return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

// ---------------------------------------------------------------------------
// Primality

namespace {

const uint32_t small_primes[] = {
	2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
	59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

// one Miller-Rabin round; n odd, n > 3, d odd with n - 1 = d * 2^s
bool mr_round(const Int& n, const Int& a, const Int& d, unsigned long s)
{
	Int x;
	mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
	Int nm1 = n - 1;
	if (x == 1 || x == nm1)
		return true;
	for (unsigned long r = 1; r < s; ++r) {
		x = x * x % n;
		if (x == nm1)
			return true;
	}
	return false;
}

}  // namespace

bool is_prime(const Int& n)
{
	if (n < 2)
		return false;
	for (uint32_t p : small_primes) {
		if (n == p)
			return true;
		if (mpz_divisible_ui_p(n.get_mpz_t(), p))
			return false;
	}

	Int d = n - 1;
	unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
	mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

	// Sorenson & Webster: the first 13 prime bases decide primality for all
	// n < 3.317e24.
	static const Int det_limit("3317044064679887385961981");
	if (n < det_limit) {
		for (uint32_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41})
			if (!mr_round(n, a, d, s))
				return false;
		return true;
	}

	// Beyond the deterministic range: 64 rounds with bases drawn from a
	// generator seeded by n itself, so the answer is a pure function of n.
	gmp_randstate_t state;
	gmp_randinit_mt(state);
	gmp_randseed(state, n.get_mpz_t());
	Int span = n - 3;
	bool probably = true;
	for (int i = 0; i < 64 && probably; ++i) {
		Int a;
		mpz_urandomm(a.get_mpz_t(), state, span.get_mpz_t());
		a += 2;  // a in [2, n-2]
		probably = mr_round(n, a, d, s);
	}
	gmp_randclear(state);
	return probably;
}

// ---------------------------------------------------------------------------
// Segmented sieve

PrimeStream::PrimeStream(uint64_t lo, uint64_t hi, size_t segment_size)
    : lo_(lo), hi_(hi), segment_size_(std::max<size_t>(segment_size, 64))
{
	if (hi_ < lo_ || hi_ < 2) {
		done_ = true;
		return;
	}
	uint64_t root = (uint64_t)std::sqrt((double)hi_) + 2;
	std::vector<bool> sieve(root + 1, false);
	for (uint64_t i = 3; i * i <= root; i += 2)
		if (!sieve[i])
			for (uint64_t j = i * i; j <= root; j += 2 * i)
				sieve[j] = true;
	for (uint64_t i = 3; i <= root; i += 2)
		if (!sieve[i])
			base_primes_.push_back((uint32_t)i);

	segment_base_ = std::max<uint64_t>(lo_, 3) | 1;  // first odd candidate
	fill_segment();
}

void PrimeStream::fill_segment()
{
	if (segment_base_ > hi_) {
		done_ = true;
		return;
	}
	// composite_[i] marks segment_base_ + 2*i
	size_t len = std::min<uint64_t>(segment_size_, (hi_ - segment_base_) / 2 + 1);
	composite_.assign(len, false);
	uint64_t seg_end = segment_base_ + 2 * (len - 1);
	for (uint32_t p : base_primes_) {
		uint64_t pp = (uint64_t)p * p;
		if (pp > seg_end)
			break;
		uint64_t start = std::max<uint64_t>(pp, ((segment_base_ + p - 1) / p) * p);
		if (start % 2 == 0)
			start += p;
		for (uint64_t j = start; j <= seg_end; j += 2 * p)
			composite_[(j - segment_base_) / 2] = true;
	}
	cursor_ = 0;
}

std::optional<uint64_t> PrimeStream::next()
{
	if (!emitted_two_) {
		emitted_two_ = true;
		if (lo_ <= 2 && 2 <= hi_)
			return 2;
	}
	while (!done_) {
		if (cursor_ >= composite_.size()) {
			segment_base_ += 2 * composite_.size();
			fill_segment();
			continue;
		}
		size_t i = cursor_++;
		if (!composite_[i]) {
			uint64_t cand = segment_base_ + 2 * i;
			if (cand == 1)
				continue;
			return cand;
		}
	}
	return std::nullopt;
}

// ---------------------------------------------------------------------------
// Factoring: trial division, then Brent's variant of Pollard rho.
// Brent, "An improved Monte Carlo factorization algorithm", BIT 20 (1980).

namespace {

// deterministic Brent rho; returns a nontrivial factor of odd composite n, or 0
Int brent_rho(const Int& n, unsigned long c, uint64_t max_iters)
{
	const unsigned long m = 128;
	Int y = 2, q = 1, g = 1, x, ys;
	uint64_t r = 1, iters = 0;
	while (g == 1 && iters < max_iters) {
		x = y;
		for (uint64_t i = 0; i < r && iters < max_iters; ++i, ++iters)
			y = (y * y + c) % n;
		uint64_t k = 0;
		while (k < r && g == 1 && iters < max_iters) {
			ys = y;
			uint64_t chunk = std::min<uint64_t>(m, r - k);
			for (uint64_t i = 0; i < chunk && iters < max_iters; ++i, ++iters) {
				y = (y * y + c) % n;
				q = q * abs(x - y) % n;
			}
			g = gcd(q, n);
			k += m;
		}
		r *= 2;
	}
	if (g == n) {
		// backtrack: the batched gcd collapsed several factors at once
		uint64_t guard = 0;
		do {
			ys = (ys * ys + c) % n;
			g = gcd(abs(x - ys), n);
		} while (g == 1 && ++guard < max_iters);
	}
	if (g == n || g == 1)
		return 0;
	return g;
}

void push_factor(std::vector<FactorEntry>& out, const Int& p, unsigned exp, bool certified)
{
	for (auto& f : out)
		if (f.p == p && f.certified == certified) {
			f.exp += exp;
			return;
		}
	out.push_back({p, exp, certified});
}

}  // namespace

Factorization factor(const Int& n, const FactorBudget& budget)
{
	if (n == 0)
		throw error(errc::zero_input, "factor: n must be nonzero");

	Factorization result;
	result.value = n;
	Int rest = abs(n);
	if (rest == 1)
		return result;

	// trial division by 2, 3 and a 2-4 wheel
	for (uint64_t d : {2, 3}) {
		if (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
			Int dd = from_u64(d);
			unsigned long e = valuation(rest, dd);
			mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), pow_int(dd, e).get_mpz_t());
			push_factor(result.factors, dd, e, true);
		}
	}
	uint64_t d = 5;
	int step = 2;
	while (d <= budget.trial_bound && rest > 1) {
		Int dd = from_u64(d);
		if (dd * dd > rest)
			break;
		if (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
			unsigned long e = valuation(rest, dd);
			mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), pow_int(dd, e).get_mpz_t());
			push_factor(result.factors, dd, e, true);
		}
		d += step;
		step = 6 - step;  // alternate +2 / +4
	}
	if (rest > 1 && from_u64(budget.trial_bound) * from_u64(budget.trial_bound) >= rest) {
		// everything below trial_bound was removed, so this cofactor is prime
		push_factor(result.factors, rest, 1, true);
		rest = 1;
	}

	// rho phase on the remaining cofactor(s)
	std::vector<Int> pending;
	if (rest > 1)
		pending.push_back(rest);
	while (!pending.empty()) {
		Int c = pending.back();
		pending.pop_back();
		if (is_prime(c)) {
			push_factor(result.factors, c, 1, true);
			continue;
		}
		// perfect powers trip up rho's expected running time; peel them first
		if (mpz_perfect_power_p(c.get_mpz_t())) {
			for (unsigned long k = 2; k <= mpz_sizeinbase(c.get_mpz_t(), 2); ++k) {
				Int root;
				if (mpz_root(root.get_mpz_t(), c.get_mpz_t(), k) != 0) {
					for (unsigned long i = 0; i < k; ++i)
						pending.push_back(root);
					c = 1;
					break;
				}
			}
			if (c == 1)
				continue;
		}
		Int g = 0;
		for (unsigned attempt = 0; attempt < budget.rho_restarts && g == 0; ++attempt)
			g = brent_rho(c, 2 * attempt + 1, budget.rho_iterations);
		if (g == 0) {
			push_factor(result.factors, c, 1, false);
			result.complete = false;
		} else {
			pending.push_back(g);
			pending.push_back(c / g);
		}
	}

	std::sort(result.factors.begin(), result.factors.end(),
	          [](const FactorEntry& a, const FactorEntry& b) { return a.p < b.p; });
	return result;
}

// ---------------------------------------------------------------------------
// Multiplicative functions, sharing one synchronized factorization cache.

namespace {

std::mutex cache_mutex;
std::map<uint64_t, std::vector<std::pair<uint64_t, unsigned>>> u64_factor_cache;

std::vector<std::pair<uint64_t, unsigned>> factor_u64(uint64_t n)
{
	{
		std::lock_guard<std::mutex> lock(cache_mutex);
		auto it = u64_factor_cache.find(n);
		if (it != u64_factor_cache.end())
			return it->second;
	}
	Factorization f = factor(from_u64(n));
	std::vector<std::pair<uint64_t, unsigned>> out;
	for (const auto& e : f.factors)
		out.emplace_back(to_u64(e.p), e.exp);
	{
		std::lock_guard<std::mutex> lock(cache_mutex);
		if (u64_factor_cache.size() < (1 << 20))
			u64_factor_cache.emplace(n, out);
	}
	return out;
}

}  // namespace

int moebius(uint64_t n)
{
	if (n == 0)
		throw error(errc::precondition, "moebius: n must be positive");
	if (n == 1)
		return 1;
	auto fs = factor_u64(n);
	for (const auto& [p, e] : fs)
		if (e >= 2)
			return 0;
	return fs.size() % 2 == 0 ? 1 : -1;
}

uint64_t euler_phi(uint64_t n)
{
	if (n == 0)
		throw error(errc::precondition, "euler_phi: n must be positive");
	uint64_t phi = n;
	for (const auto& [p, e] : factor_u64(n)) {
		(void)e;
		phi -= phi / p;
	}
	return phi;
}

std::vector<uint64_t> divisors(uint64_t n)
{
	if (n == 0)
		throw error(errc::precondition, "divisors: n must be positive");
	std::vector<uint64_t> divs{1};
	for (const auto& [p, e] : factor_u64(n)) {
		size_t sz = divs.size();
		uint64_t pw = 1;
		for (unsigned i = 1; i <= e; ++i) {
			pw *= p;
			for (size_t j = 0; j < sz; ++j)
				divs.push_back(divs[j] * pw);
		}
	}
	std::sort(divs.begin(), divs.end());
	return divs;
}

std::vector<Int> divisors(const Factorization& f)
{
	if (!f.complete)
		throw error(errc::budget_exhausted, "divisors: factorization incomplete");
	std::vector<Int> divs{1};
	for (const auto& e : f.factors) {
		size_t sz = divs.size();
		Int pw = 1;
		for (unsigned i = 1; i <= e.exp; ++i) {
			pw *= e.p;
			for (size_t j = 0; j < sz; ++j)
				divs.push_back(divs[j] * pw);
		}
	}
	std::sort(divs.begin(), divs.end());
	return divs;
}

}  // namespace lwl
