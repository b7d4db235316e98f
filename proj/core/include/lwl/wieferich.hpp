#pragma once

#include <optional>
#include <vector>

#include "lwl/integer.hpp"
#include "lwl/lucas.hpp"
#include "lwl/ntkit.hpp"

namespace lwl {

enum class WiefClass { wieferich, non_wieferich, excluded };

// Per-prime classification record. A prime p coprime to 2 Q delta is
// Lucas-Wieferich for (P, Q) iff U_{p - (delta/p)} = 0 (mod p^2); primes
// dividing 2 Q delta fall outside the theory and are marked excluded.
struct WieferichRecord {
	Int p;
	int legendre_index = 0;  // Kronecker symbol (delta/p)
	Int u_residue;           // U_{p - (delta/p)} mod p^2; 0 when excluded (unevaluated)
	WiefClass cls = WiefClass::excluded;
	std::optional<Int> rank;                  // rank of apparition, when computed
	std::optional<Int> progression_residue;   // p mod k, when a modulus is attached
};

WieferichRecord classify_prime(const LucasPair& pair, const Int& p);

// Least m >= 1 with p | U_m. Found by factoring p - (delta/p) and descending
// the divisor lattice (Lehmer: p | U_n iff rank | n).
Int rank_of_apparition(const LucasPair& pair, const Int& p, const FactorBudget& budget = {});

// Square-free-divisor certificate: p | U_n with p^2 not dividing U_n forces
// U_{p - (delta/p)} != 0 (mod p^2). Returns true after cross-checking that
// classify_prime agrees; precondition failures throw.
bool nonwief_via_squarefree(const LucasPair& pair, const Int& p, unsigned long n);

struct SqfSplit {
	Int X;  // square-free part: primes with exponent exactly one
	Int Y;  // powerful part (carries any unresolved cofactor, flagged below)
	bool complete = true;
};

SqfSplit squarefree_powerful_split(const Int& N, const FactorBudget& budget = {});

enum class Tri { yes, no, unknown };

// The section-6 record for one index: U_{nk} = X Y, the integer surrogate
// X' = gcd(X, Phi_nk(alpha, beta)) with Q-factors stripped, and membership
// in S = { n : |Q|^phi(nk) |X'_nk| > nk }.
struct SplitRecord {
	unsigned long n = 0, k = 0;
	Int U;
	Int X, Y;
	Int X_prime, Y_prime;
	Int phi_nk;
	Tri in_S = Tri::unknown;
	bool boundary = false;  // |Q|^phi(nk) X' within a factor of delta of nk
	bool complete = true;
};

SplitRecord split_record(const LucasPair& pair, unsigned long k, unsigned long n,
                         const FactorBudget& budget = {});

struct Witness {
	Int p;
	WieferichRecord record;
};

// For n in S with complete factorization: the smallest prime p | X' with
// p coprime to nk and to P Q delta. Stewart forces p = +-1 (mod nk) and the
// square-free certificate forces non-Wieferich; both are re-checked.
std::optional<Witness> witness_from_S(const LucasPair& pair, unsigned long k, unsigned long n,
                                      const FactorBudget& budget = {});
std::optional<Witness> witness_from_S(const LucasPair& pair, const SplitRecord& record);

enum class ResidueFilter { plus_minus_one, one, any };

struct SearchSummary {
	uint64_t wieferich = 0;
	uint64_t non_wieferich = 0;
	uint64_t excluded = 0;
	double log_x = 0;
	double ratio = 0;  // non_wieferich / log x
	std::vector<Int> wieferich_primes;
};

struct SearchResult {
	std::vector<WieferichRecord> records;  // sorted by p
	SearchSummary summary;
};

// Classify every prime p <= x with p mod k in the filtered residue set.
// Partitioning into segments is fixed, so the output is identical for any
// thread count.
SearchResult search_progression(const LucasPair& pair, uint64_t x, uint64_t k,
                                ResidueFilter filter, unsigned threads = 1);

}  // namespace lwl
