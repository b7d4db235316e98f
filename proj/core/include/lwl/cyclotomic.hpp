#pragma once

#include <vector>

#include "lwl/integer.hpp"
#include "lwl/lucas.hpp"
#include "lwl/ntkit.hpp"
#include "lwl/quadfield.hpp"

namespace lwl {

// Homogeneous cyclotomic value Phi_m(alpha, beta), an exact integer for
// m >= 2, computed as the Moebius product of U_d values over d | m with
// exact division at every step.
Int phi_hom(const LucasPair& pair, unsigned long m);

// Phi_m(alpha/beta) = phi_hom / beta^phi(m), an exact field element.
QuadElem phi_ratio(const LucasPair& pair, unsigned long m);

// U_m = prod_{d | m, d > 1} Phi_d(alpha, beta), exactly.
bool product_identity_check(const LucasPair& pair, unsigned long m);

struct StewartFactor {
	Int p;
	unsigned exp;
	int residue_class;  // +1 or -1 when p = +-1 (mod m), 0 otherwise
};

struct StewartViolation {
	Int p;
	std::string reason;
};

// Prime-divisor classification of Phi_m(alpha, beta): the designated
// exceptional prime P(m / gcd(3, m)) may appear to the first power; every
// other prime factor must be congruent to +-1 (mod m).
struct StewartReport {
	unsigned long m = 0;
	Int phi_value;
	Int exceptional_prime;  // 1 when m / gcd(3, m) = 1
	unsigned exceptional_exponent = 0;
	std::vector<StewartFactor> regular;
	std::vector<StewartViolation> violations;
	bool complete = true;
	Int unresolved_cofactor;  // 1 when fully factored

	// A factor = +-1 (mod m) is known to exist: either one was exhibited, or
	// the unresolved cofactor is itself = +-1 (mod m) and coprime to m and
	// to the exceptional prime (all its prime factors exceed the trial
	// bound, hence m, so each is regular and so each is = +-1).
	bool has_pm1_factor = false;
};

StewartReport stewart_classify(const LucasPair& pair, unsigned long m,
                               const FactorBudget& budget = {});

// The worked (7, 3), m = 6 example: Phi_6(alpha/beta) = (860 + 140 sqrt 37)/9
// is divisible by 5 even though 5 does not divide 6 and 5 != 1 (mod 6); the
// congruence survives only in the +-1 form, 5 = -1 (mod 6).
struct CounterexampleDemo {
	QuadElem ratio;       // Phi_6(alpha/beta)
	Int hom;              // Phi_6(alpha, beta) = 40
	bool divisible_by_5;
	bool five_divides_six;
	Int five_mod_six;
	bool five_is_minus_one_mod_six;
	bool hom_divisible_by_5;
	bool prime_divisor_sets_match;  // primes of hom (coprime to Q) divide ratio and back
};

CounterexampleDemo counterexample_demo();

}  // namespace lwl
