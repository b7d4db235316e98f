#include "lwl/cyclotomic.hpp"

#include <numeric>
#include <string>

#include "lwl/errors.hpp"

namespace lwl {

Int phi_hom(const LucasPair& pair, unsigned long m)
{
	if (m < 2)
		throw error(errc::precondition, "phi_hom: m must be >= 2 (Phi_1 = sqrt(delta) is irrational)");
	// Phi_m(alpha, beta) = prod_{d | m} U_d^{mu(m/d)}; numerator/denominator
	// sweep with exactness checked on every division
	Int num = 1, den = 1;
	for (uint64_t d : divisors(m)) {
		int mu = moebius(m / d);
		if (mu == 0)
			continue;
		Int u = lucas_u(pair, (unsigned long)d);
		if (mu > 0)
			num *= u;
		else
			den *= u;
	}
	if (den == 0 || !mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
		throw error(errc::internal, "phi_hom: Moebius product is not an exact integer");
	Int out;
	mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
	return out;
}

QuadElem phi_ratio(const LucasPair& pair, unsigned long m)
{
	Int hom = phi_hom(pair, m);
	auto [alpha, beta] = roots_of_pair(pair);
	(void)alpha;
	QuadElem beta_pow = qpow(beta, euler_phi(m));
	return rational_elem(pair.delta, Rat(hom)) / beta_pow;
}

bool product_identity_check(const LucasPair& pair, unsigned long m)
{
	if (m < 2)
		throw error(errc::precondition, "product_identity_check: m must be >= 2");
	Int prod = 1;
	for (uint64_t d : divisors(m))
		if (d > 1)
			prod *= phi_hom(pair, (unsigned long)d);
	return prod == lucas_u(pair, m);
}

namespace {

Int greatest_prime_factor(unsigned long r)
{
	// P(r) with P(1) = 1
	if (r <= 1)
		return 1;
	auto divs = divisors(r);
	for (auto it = divs.rbegin(); it != divs.rend(); ++it)
		if (is_prime(from_u64(*it)))
			return from_u64(*it);
	return 1;
}

}  // namespace

StewartReport stewart_classify(const LucasPair& pair, unsigned long m, const FactorBudget& budget)
{
	if (m <= 4 || m == 6 || m == 12)
		throw error(errc::precondition, "stewart_classify: requires m > 4 and m != 6, 12");

	StewartReport report;
	report.m = m;
	report.phi_value = phi_hom(pair, m);
	report.exceptional_prime = greatest_prime_factor(m / std::gcd(m, 3ul));
	report.unresolved_cofactor = 1;

	if (abs(report.phi_value) == 1)
		return report;

	Factorization f = factor(report.phi_value, budget);
	report.complete = f.complete;
	for (const auto& e : f.factors) {
		if (!e.certified) {
			report.unresolved_cofactor *= pow_int(e.p, e.exp);
			continue;
		}
		if (e.p == report.exceptional_prime) {
			report.exceptional_exponent = e.exp;
			if (e.exp > 1)
				report.violations.push_back({e.p, "exceptional prime divides beyond the first power"});
			continue;
		}
		unsigned long residue = mpz_fdiv_ui(e.p.get_mpz_t(), m);
		int cls = residue == 1 ? 1 : (residue == m - 1 ? -1 : 0);
		report.regular.push_back({e.p, e.exp, cls});
		if (cls == 0)
			report.violations.push_back({e.p, "regular prime not congruent to +-1 mod m"});
	}

	for (const auto& rf : report.regular)
		if (rf.residue_class != 0)
			report.has_pm1_factor = true;
	if (!report.has_pm1_factor && report.unresolved_cofactor > 1) {
		const Int& c = report.unresolved_cofactor;
		unsigned long residue = mpz_fdiv_ui(c.get_mpz_t(), m);
		bool coprime = gcd(c, from_u64(m) * report.exceptional_prime) == 1;
		if (coprime && (residue == 1 || residue == m - 1))
			report.has_pm1_factor = true;
	}
	return report;
}

CounterexampleDemo counterexample_demo()
{
	LucasPair pair(7, 3);
	CounterexampleDemo demo;
	demo.hom = phi_hom(pair, 6);
	demo.ratio = phi_ratio(pair, 6);
	demo.divisible_by_5 = divisible_by_rational_prime(demo.ratio, 5);
	demo.five_divides_six = mpz_divisible_ui_p(Int(6).get_mpz_t(), 5);
	demo.five_mod_six = Int(5) % 6;
	demo.five_is_minus_one_mod_six = demo.five_mod_six == 5;
	demo.hom_divisible_by_5 = mpz_divisible_ui_p(demo.hom.get_mpz_t(), 5);

	// the prime divisors of Phi_6(alpha/beta) coprime to Q match those of
	// Phi_6(alpha, beta)
	demo.prime_divisor_sets_match = true;
	Factorization f = factor(demo.hom);
	for (const auto& e : f.factors) {
		if (gcd(e.p, pair.Q) != 1)
			continue;
		if (!divisible_by_rational_prime(demo.ratio, e.p))
			demo.prime_divisor_sets_match = false;
	}
	return demo;
}

}  // namespace lwl
