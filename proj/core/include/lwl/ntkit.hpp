#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lwl/integer.hpp"

namespace lwl {

// Work limits for the factoring pipeline: trial division up to trial_bound,
// then Brent-cycle Pollard rho, restarted with fresh polynomial constants.
struct FactorBudget {
	uint64_t trial_bound = 1'000'000;
	uint64_t rho_iterations = 2'000'000;  // per restart
	unsigned rho_restarts = 4;
};

struct FactorEntry {
	Int p;
	unsigned exp = 1;
	// true once p passed is_prime; unresolved composite cofactors are kept
	// as entries with certified = false so nothing is silently dropped
	bool certified = true;
};

struct Factorization {
	Int value;
	std::vector<FactorEntry> factors;  // sorted by p, strictly increasing
	bool complete = true;

	// |value| reassembled from the entries (includes uncertified cofactors)
	Int reassemble() const;
	// product of primes with exponent exactly one (certified entries only)
	Int squarefree_part() const;
};

bool is_prime(const Int& n);

// Segmented enumeration of primes in [lo, hi]; memory is bounded by
// segment_size, not by hi.
class PrimeStream {
public:
	PrimeStream(uint64_t lo, uint64_t hi, size_t segment_size = 1 << 20);
	std::optional<uint64_t> next();
	uint64_t lo() const { return lo_; }
	uint64_t hi() const { return hi_; }

private:
	void fill_segment();

	uint64_t lo_, hi_;
	size_t segment_size_;
	uint64_t segment_base_ = 0;
	std::vector<uint32_t> base_primes_;
	std::vector<bool> composite_;
	size_t cursor_ = 0;
	bool emitted_two_ = false;
	bool done_ = false;
};

inline PrimeStream primes_up_to(uint64_t x, size_t segment_size = 1 << 20)
{
	return PrimeStream(2, x, segment_size);
}

Factorization factor(const Int& n, const FactorBudget& budget = {});

int moebius(uint64_t n);
uint64_t euler_phi(uint64_t n);
std::vector<uint64_t> divisors(uint64_t n);

// All divisors of the (complete) factorization, ascending.
std::vector<Int> divisors(const Factorization& f);

// Kronecker symbol (a/n), n != 0; equals the Legendre symbol for odd prime n.
int kronecker(const Int& a, const Int& n);

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

}  // namespace lwl
