#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "beststop/permutation.hpp"
#include "beststop/tally.hpp"

namespace beststop {

// Strike probability of a 321-avoiding prefix at rank N, by removing minima
// until the prefix is increasing and applying binom(N-1,k-1)/C(N,k).
Tally strike_prob_321(const Permutation& p, std::size_t n);
// Trigger probability; nullopt is the null prefix (k = 0).
Tally trigger_prob_321(const std::optional<Permutation>& p, std::size_t n);

// C_{N-1}/C_N
Tally optimal_success_231(std::size_t n);
// Reject N-3 candidates then take the next left-to-right maximum, Av(321).
Tally positional_success_321(std::size_t n);

struct ClosedForm {
    std::string strategy;  // descriptor accepted by parse_strategy
    Tally value;
};

// Accept the second left-to-right maximum: C(N,2)/C_N.
ClosedForm closed_123(std::size_t n);
// Accept the first (or second) left-to-right maximum: C_{N-1}/C_N.
ClosedForm closed_213(std::size_t n);

// Per-prefix strike probabilities in Av(123) and for increasing prefixes of Av(213).
ExactRational strike_prob_123(const Permutation& p, std::size_t n);
Tally strike_prob_213_increasing(std::size_t k, std::size_t n);

}  // namespace beststop
