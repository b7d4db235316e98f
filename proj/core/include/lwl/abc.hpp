#pragma once

#include <optional>
#include <vector>

#include "lwl/integer.hpp"
#include "lwl/lucas.hpp"
#include "lwl/ntkit.hpp"
#include "lwl/quadfield.hpp"
#include "lwl/wieferich.hpp"

namespace lwl {

struct BinetTriple {
	QuadElem a;  // (alpha - beta) U_n
	QuadElem b;  // -alpha^n
	QuadElem c;  // beta^n
};

// Exact triple with a + b + c = 0 (checked).
BinetTriple binet_triple(const LucasPair& pair, unsigned long n);

// Height of a nonzero triple: product over the two real embeddings of the
// max |psi(.)|, times the finite-place factors. The archimedean part is the
// exact element arch (H = |psi_1(arch)| * finite); finite is an exact
// rational. complete is false when a support factorization ran out of
// budget, in which case unseen primes may be missing from finite.
struct HeightValue {
	QuadElem arch;
	Rat finite;
	bool complete = true;

	double log_value() const;
	// exact comparison H >= r
	bool at_least(const Rat& r) const;
};

HeightValue height_K(const QuadElem& a, const QuadElem& b, const QuadElem& c,
                     const FactorBudget& budget = {});

// Radical (conductor) of the triple: product of N(p-ideal) over the prime
// ideals where the three absolute values differ.
struct RadicalValue {
	Int rad = 1;
	bool complete = true;
};

RadicalValue radical_K(const QuadElem& a, const QuadElem& b, const QuadElem& c,
                       const FactorBudget& budget = {});

struct BinetTripleReport {
	unsigned long n = 0;
	BinetTriple triple;
	HeightValue H;
	RadicalValue rad;
	std::optional<double> quality;  // log H / log rad; absent when rad <= 1
	bool bound_h_ok = false;        // H >= delta U_n^2, exact
	bool bound_r_ok = false;        // rad <= Q^2 delta X^2 Y, exact (complete only)
	Int U, X, Y;
	bool split_complete = true;
};

BinetTripleReport triple_report(const LucasPair& pair, unsigned long n,
                                const FactorBudget& budget = {});

// Truncated Euler product c(k) = prod_p (1 - gcd(p, k)/p^2) over p <= bound,
// with a rigorous enclosure of the full product.
struct EulerC {
	double value = 0;  // truncation
	double lo = 0, hi = 0;
};

EulerC euler_c(uint64_t k, uint64_t prime_bound);

struct DensityCheckpoint {
	uint64_t x;
	double residual;           // partial_sum(x) - c(k) x
	double residual_over_log;  // |residual| / log x
};

struct DensityReport {
	uint64_t k = 0, x = 0;
	Rat partial_sum;  // exact sum of phi(nk)/nk for n <= x
	double c_k = 0, c_k_lo = 0, c_k_hi = 0;
	double residual = 0;
	double sup_residual_over_log = 0;  // over all checkpoints <= x
	std::vector<DensityCheckpoint> checkpoints;
};

DensityReport density_check(uint64_t k, uint64_t x);

struct SDensityReport {
	uint64_t k = 0, x = 0;
	uint64_t s_count = 0, not_in_s = 0, unknown = 0, boundary_flagged = 0;
	double ratio = 0;  // s_count / x
	std::vector<SplitRecord> records;
};

SDensityReport s_density(const LucasPair& pair, uint64_t k, uint64_t x,
                         const FactorBudget& budget = {});

}  // namespace lwl
