#pragma once

#include <utility>
#include <vector>

#include "lwl/integer.hpp"
#include "lwl/lucas.hpp"

namespace lwl {

// Element a + b*sqrt(delta) of Q(sqrt(delta)), delta > 0 the raw pair
// discriminant (square parts allowed; a perfect square collapses the field
// to the rationals). Coordinates are exact rationals, so arithmetic,
// conjugation and sign decisions are all exact.
struct QuadElem {
	Int delta;
	Rat a, b;

	QuadElem() : delta(1), a(0), b(0) {}
	QuadElem(Int delta_, Rat a_, Rat b_) : delta(std::move(delta_)), a(std::move(a_)), b(std::move(b_)) {}

	bool is_zero() const { return a == 0 && b == 0; }
	bool is_rational_value() const;  // b == 0, or delta a perfect square
};

QuadElem operator+(const QuadElem& x, const QuadElem& y);
QuadElem operator-(const QuadElem& x, const QuadElem& y);
QuadElem operator*(const QuadElem& x, const QuadElem& y);
QuadElem operator/(const QuadElem& x, const QuadElem& y);
QuadElem operator-(const QuadElem& x);
QuadElem operator*(const Rat& s, const QuadElem& x);
bool operator==(const QuadElem& x, const QuadElem& y);

QuadElem conjugate(const QuadElem& x);
Rat norm(const QuadElem& x);   // x * conjugate(x) = a^2 - delta b^2
Rat trace(const QuadElem& x);  // 2a
QuadElem qpow(const QuadElem& x, unsigned long n);

QuadElem sqrt_delta_elem(const Int& delta);
QuadElem rational_elem(const Int& delta, const Rat& r);

// alpha = (P + sign(P) sqrt(delta))/2 and its conjugate; |alpha| > |beta|
// under the first real embedding, and alpha - beta = sign(P) sqrt(delta).
std::pair<QuadElem, QuadElem> roots_of_pair(const LucasPair& pair);

// Exact sign of the image of x under real embedding 1 (sqrt(delta) -> +)
// or 2 (sqrt(delta) -> -).
int sign_emb(const QuadElem& x, int emb);

// Exact three-way comparison of |psi_emb(x)| against |psi_emb(y)|.
int cmp_abs_emb(const QuadElem& x, const QuadElem& y, int emb);

// log |psi_emb(x)| for x != 0, evaluated to double accuracy with enough
// working precision to survive cancellation in a - b*sqrt(delta).
double log_abs_emb(const QuadElem& x, int emb);
double approx_emb(const QuadElem& x, int emb);

// If the value is rational (b == 0 or square delta), the exact value under
// embedding 1.
Rat rational_value(const QuadElem& x);

// Square-free decomposition data of the ambient discriminant.
struct FieldData {
	Int delta;
	Int d;        // square-free part
	Int s;        // delta = d * s^2
	Int disc;     // field discriminant of Q(sqrt(d)); unused when rational
	bool rational;  // d == 1
};
const FieldData& field_data(const Int& delta);

enum class Splitting { split, inert, ramified };

// Splitting of the rational prime p in Q(sqrt(d)), d the square-free part
// of delta. p = 2 follows the field-discriminant-mod-8 law, which the
// Kronecker symbol (disc/2) encodes.
Splitting splitting_type(const Int& delta, const Int& p);

enum class PlaceTag { real1, real2, split1, split2, inert, ramified, rational };

struct PlaceValue {
	PlaceTag tag;
	Int p;           // finite places only
	int f = 0;       // residue degree: N(p-ideal) = p^f
	long ord = 0;    // ||x||_v = N(p-ideal)^(-ord)
	double approx = 0;  // |psi(x)| for the real embeddings
};

// Valuations of x != 0 at every prime ideal above p. Split primes yield two
// places (orders summing to v_p(norm x)); inert and ramified yield one. A
// perfect-square delta yields the single rational place with ord = v_p(x).
std::vector<PlaceValue> ideal_valuations(const QuadElem& x, const Int& p);

// True iff ord(x) > 0 at some prime ideal above p, with x taken exactly as
// given (denominators make valuations negative, not divisible).
bool divisible_by_rational_prime(const QuadElem& x, const Int& p);

std::string to_string(const QuadElem& x);

}  // namespace lwl
