#include "lwl/wieferich.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "lwl/cyclotomic.hpp"
#include "lwl/errors.hpp"

namespace lwl {

namespace {

WieferichRecord classify_prime_unchecked(const LucasPair& pair, const Int& p)
{
	WieferichRecord rec;
	rec.p = p;
	rec.legendre_index = kronecker(pair.delta, p);
	if (gcd(p, 2 * pair.Q * pair.delta) != 1) {
		// p | 2 Q delta falls outside every lemma; (delta/p) = 0 lands here too
		rec.cls = WiefClass::excluded;
		rec.u_residue = 0;
		return rec;
	}
	Int index = p - rec.legendre_index;
	LucasResidue lr = lucas_uv_mod(pair, index, p * p);
	rec.u_residue = lr.u;
	rec.cls = lr.u == 0 ? WiefClass::wieferich : WiefClass::non_wieferich;
	return rec;
}

}  // namespace

WieferichRecord classify_prime(const LucasPair& pair, const Int& p)
{
	if (!is_prime(p))
		throw error(errc::composite_input, "classify_prime: p must be prime");
	return classify_prime_unchecked(pair, p);
}

Int rank_of_apparition(const LucasPair& pair, const Int& p, const FactorBudget& budget)
{
	if (!is_prime(p))
		throw error(errc::composite_input, "rank_of_apparition: p must be prime");
	if (mpz_divisible_p(pair.Q.get_mpz_t(), p.get_mpz_t()))
		throw error(errc::precondition, "rank_of_apparition: no rank exists when p | Q");
	if (p == 2) {
		// tiny period: scan directly
		for (unsigned long n = 1; n <= 4; ++n)
			if (lucas_u(pair, n) % 2 == 0)
				return n;
		throw error(errc::internal, "rank_of_apparition: 2 has no rank though 2 does not divide Q");
	}
	Int e = p - kronecker(pair.delta, p);
	if (lucas_uv_mod(pair, e, p).u != 0)
		throw error(errc::internal, "rank_of_apparition: p does not divide U_{p - (delta/p)}");
	Factorization f = factor(e, budget);
	if (!f.complete)
		throw error(errc::budget_exhausted, "rank_of_apparition: could not factor p - (delta/p)");
	Int rank = e;
	for (const auto& entry : f.factors) {
		for (unsigned i = 0; i < entry.exp; ++i) {
			Int candidate = rank / entry.p;
			if (!mpz_divisible_p(rank.get_mpz_t(), entry.p.get_mpz_t()))
				break;
			if (lucas_uv_mod(pair, candidate, p).u == 0)
				rank = candidate;
			else
				break;
		}
	}
	return rank;
}

bool nonwief_via_squarefree(const LucasPair& pair, const Int& p, unsigned long n)
{
	if (!is_prime(p))
		throw error(errc::composite_input, "nonwief_via_squarefree: p must be prime");
	if (gcd(p, 2 * pair.Q * pair.delta) != 1)
		throw error(errc::precondition, "nonwief_via_squarefree: p must be coprime to 2 Q delta");
	LucasResidue lr = lucas_uv_mod(pair, n, p * p);
	if (lr.u % p != 0)
		throw error(errc::precondition, "nonwief_via_squarefree: p does not divide U_n");
	if (lr.u == 0)
		throw error(errc::precondition, "nonwief_via_squarefree: p^2 divides U_n");
	WieferichRecord rec = classify_prime_unchecked(pair, p);
	if (rec.cls != WiefClass::non_wieferich)
		throw error(errc::internal,
		            "nonwief_via_squarefree: square-free divisor certificate contradicted");
	return true;
}

SqfSplit squarefree_powerful_split(const Int& N, const FactorBudget& budget)
{
	if (N < 1)
		throw error(errc::precondition, "squarefree_powerful_split: N must be >= 1");
	SqfSplit split;
	split.X = 1;
	if (N == 1) {
		split.Y = 1;
		return split;
	}
	Factorization f = factor(N, budget);
	split.complete = f.complete;
	for (const auto& e : f.factors)
		if (e.certified && e.exp == 1)
			split.X *= e.p;
	// the powerful part; an unresolved cofactor lands here and is what the
	// complete flag warns about
	split.Y = N / split.X;
	return split;
}

namespace {

// strip from g every prime it shares with q
Int strip_shared_factors(Int g, const Int& q)
{
	Int t = gcd(g, q);
	while (t > 1) {
		while (mpz_divisible_p(g.get_mpz_t(), t.get_mpz_t()))
			g /= t;
		t = gcd(g, q);
	}
	return g;
}

}  // namespace

SplitRecord split_record(const LucasPair& pair, unsigned long k, unsigned long n,
                         const FactorBudget& budget)
{
	unsigned long nk = n * k;
	if (nk < 2)
		throw error(errc::precondition, "split_record: need n*k >= 2");

	SplitRecord rec;
	rec.n = n;
	rec.k = k;
	rec.U = lucas_u(pair, nk);
	rec.phi_nk = phi_hom(pair, nk);

	SqfSplit split = squarefree_powerful_split(abs(rec.U), budget);
	rec.X = split.X;
	rec.Y = split.Y;
	rec.complete = split.complete;

	Int abs_phi = abs(rec.phi_nk);
	rec.X_prime = strip_shared_factors(gcd(rec.X, abs_phi), pair.Q);
	rec.Y_prime = strip_shared_factors(gcd(rec.Y, abs_phi), pair.Q);

	if (rec.complete) {
		Int lhs = pow_int(abs(pair.Q), euler_phi(nk)) * rec.X_prime;
		rec.in_S = lhs > nk ? Tri::yes : Tri::no;
		// membership decided by the integer surrogate X'; flag indices where
		// a delta-sized discrepancy against the field version could flip it
		rec.boundary = (lhs * pair.delta > nk) && (lhs < nk * pair.delta);
	}
	return rec;
}

std::optional<Witness> witness_from_S(const LucasPair& pair, unsigned long k, unsigned long n,
                                      const FactorBudget& budget)
{
	return witness_from_S(pair, split_record(pair, k, n, budget));
}

std::optional<Witness> witness_from_S(const LucasPair& pair, const SplitRecord& record)
{
	if (record.in_S != Tri::yes || !record.complete)
		throw error(errc::precondition, "witness_from_S: record is not a complete member of S");
	unsigned long nk = record.n * record.k;

	Factorization f = factor(record.X_prime);
	if (!f.complete)
		throw error(errc::budget_exhausted, "witness_from_S: could not refactor X'");
	Int pqd = pair.P * pair.Q * pair.delta;
	for (const auto& e : f.factors) {  // ascending: smallest qualifying prime wins
		const Int& p = e.p;
		if (from_u64(nk) % p == 0 || pqd % p == 0)
			continue;
		Witness w;
		w.p = p;
		w.record = classify_prime_unchecked(pair, p);
		w.record.progression_residue = p % nk;
		unsigned long residue = mpz_fdiv_ui(p.get_mpz_t(), nk);
		if (residue != 1 && residue != nk - 1)
			throw error(errc::internal, "witness_from_S: witness not congruent to +-1 mod nk");
		if (w.record.cls != WiefClass::non_wieferich)
			throw error(errc::internal, "witness_from_S: witness classified other than non-Wieferich");
		return w;
	}
	return std::nullopt;
}

// ---------------------------------------------------------------------------
// Progression search

namespace {

bool passes_filter(uint64_t p, uint64_t k, ResidueFilter filter)
{
	if (filter == ResidueFilter::any)
		return true;
	uint64_t r = p % k;
	if (filter == ResidueFilter::one)
		return r == 1;
	return r == 1 || r == k - 1;
}

}  // namespace

SearchResult search_progression(const LucasPair& pair, uint64_t x, uint64_t k,
                                ResidueFilter filter, unsigned threads)
{
	if (x < 3)
		throw error(errc::precondition, "search_progression: x must be >= 3");
	if (k < 2 && filter != ResidueFilter::any)
		throw error(errc::precondition, "search_progression: k = 1 only supports filter any");
	if (k < 1)
		throw error(errc::precondition, "search_progression: k must be >= 1");
	if (threads == 0)
		threads = 1;

	// fixed segmentation, independent of the thread count, so the merged
	// output is deterministic
	const uint64_t segment_span = 1 << 22;
	uint64_t num_segments = (x - 2 + segment_span - 1) / segment_span;
	std::vector<std::vector<WieferichRecord>> per_segment(num_segments);
	std::atomic<uint64_t> next_segment{0};

	auto worker = [&]() {
		for (;;) {
			uint64_t seg = next_segment.fetch_add(1);
			if (seg >= num_segments)
				return;
			uint64_t lo = 2 + seg * segment_span;
			uint64_t hi = std::min(x, lo + segment_span - 1);
			PrimeStream stream(lo, hi);
			auto& out = per_segment[seg];
			while (auto p = stream.next()) {
				if (!passes_filter(*p, k, filter))
					continue;
				WieferichRecord rec = classify_prime_unchecked(pair, from_u64(*p));
				rec.progression_residue = from_u64(*p % k);
				out.push_back(std::move(rec));
			}
		}
	};

	if (threads == 1) {
		worker();
	} else {
		std::vector<std::thread> pool;
		for (unsigned t = 0; t < threads; ++t)
			pool.emplace_back(worker);
		for (auto& th : pool)
			th.join();
	}

	SearchResult result;
	result.summary.log_x = std::log((double)x);
	for (auto& seg : per_segment) {
		for (auto& rec : seg) {
			switch (rec.cls) {
			case WiefClass::wieferich:
				result.summary.wieferich++;
				result.summary.wieferich_primes.push_back(rec.p);
				break;
			case WiefClass::non_wieferich:
				result.summary.non_wieferich++;
				break;
			case WiefClass::excluded:
				result.summary.excluded++;
				break;
			}
			result.records.push_back(std::move(rec));
		}
		seg.clear();
		seg.shrink_to_fit();
	}
	result.summary.ratio = result.summary.non_wieferich / result.summary.log_x;
	return result;
}

}  // namespace lwl
