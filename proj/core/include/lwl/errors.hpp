#pragma once

#include <stdexcept>
#include <string>

namespace lwl {

// Every rejected input carries one of these codes so callers (and the CLI
// exit-code mapping) can tell validation failures apart.
enum class errc {
	invalid_pair_discriminant,  // P^2 - 4Q <= 0
	invalid_pair_gcd,           // gcd(P, Q) != 1 or P*Q == 0
	zero_input,
	division_by_zero,
	composite_input,            // a prime was required
	precondition,               // documented operation precondition violated
	degenerate_message,         // LUC: M^2 == 4 (mod N)
	shared_factor,              // LUC: gcd(M^2-4, N) > 1 would leak a factor
	budget_exhausted,           // factorization budget ran out where completeness was required
	io,
	internal,                   // invariant the theory guarantees was violated: a bug
};

class error : public std::runtime_error {
public:
	error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
	errc code() const { return code_; }

private:
	errc code_;
};

}  // namespace lwl
