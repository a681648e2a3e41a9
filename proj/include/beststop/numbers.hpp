#pragma once

#include <cstdint>

#include "beststop/tally.hpp"

namespace beststop {

// binom(n, k); zero whenever n < 0, k < 0 or k > n.
BigInt binomial(std::int64_t n, std::int64_t k);

// C_N = binom(2N, N) / (N + 1).
BigInt catalan(std::int64_t n);

// Ballot number C(N, k) = (k+1)/(N+1) * binom(2N-k, N) for 0 <= k <= N.
// Throws InvalidInput when k > N or either index is negative.
BigInt ballot(std::int64_t n, std::int64_t k);

// Ballot formula with N replaced by N - shift; any out-of-range index gives 0.
BigInt shifted_ballot(std::int64_t shift, std::int64_t n, std::int64_t k);

}  // namespace beststop
