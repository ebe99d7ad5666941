#pragma once

#include <gmpxx.h>

#include <string>

namespace relsched {

// All quantities with semantic meaning (sizes, speeds, works, loads, bids,
// payments) are exact rationals in lowest terms with positive denominator.
// mpq_class keeps results of arithmetic canonical as long as the operands
// are canonical, so construction is funneled through the helpers below.
using Rat = mpq_class;
using Int = mpz_class;

// num/den in lowest terms; throws ParseError on den == 0.
Rat rat(long num, long den = 1);
Rat rat(const Int& num, const Int& den);

// Accepts "num", "num/den" and an optional leading '-'.
Rat parse_rat(const std::string& text);

// Canonical text form: "num" when den == 1, else "num/den".
std::string rat_str(const Rat& q);

// 2^k for any integer k (negative gives 1/2^-k).
Rat pow2(long k);

// base^e by repeated squaring, exact.
Rat rat_pow(const Rat& base, unsigned long e);

// Smallest integer a with q <= 2^a. Requires q > 0.
long ceil_log2(const Rat& q);

// The unique k with 2^k < q <= 2^{k+1}. Requires q > 0.
long floor_log2_strict(const Rat& q);

bool is_integer(const Rat& q);

}  // namespace relsched
