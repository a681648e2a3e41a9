#include "beststop/closed_form.hpp"

#include "beststop/error.hpp"
#include "beststop/numbers.hpp"

namespace beststop {
namespace {

using i64 = std::int64_t;

void require_321(const Permutation& p, std::size_t n) {
    if (p.size() > n) throw InvalidInput("prefix longer than the rank");
    if (contains_pattern(p, Permutation{3, 2, 1})) throw InvalidInput("prefix contains 321");
}

// Strips minima while an inversion remains; returns the increasing size and rank.
std::pair<std::size_t, std::size_t> reduce(Permutation p, std::size_t n) {
    while (has_inversion(p)) {
        p = remove_min(p);
        --n;
    }
    return {p.size(), n};
}

}  // namespace

Tally strike_prob_321(const Permutation& p, std::size_t n) {
    require_321(p, n);
    if (p.empty()) throw InvalidInput("empty prefix");
    const auto [k, m] = reduce(p, n);
    const BigInt total = ballot(static_cast<i64>(m), static_cast<i64>(k));
    if (!is_eligible(p)) return Tally(0, total);
    return Tally(binomial(static_cast<i64>(m) - 1, static_cast<i64>(k) - 1), total);
}

Tally trigger_prob_321(const std::optional<Permutation>& p, std::size_t n) {
    std::size_t k = 0, m = n;
    if (p) {
        require_321(*p, n);
        std::tie(k, m) = reduce(*p, n);
    }
    const auto mm = static_cast<i64>(m), kk = static_cast<i64>(k);
    return Tally(kk * binomial(mm - 1, kk + 1) + binomial(mm - 1, kk), ballot(mm, kk));
}

Tally optimal_success_231(std::size_t n) {
    if (n == 0) throw InvalidInput("rank must be positive");
    return Tally(catalan(static_cast<i64>(n) - 1), catalan(static_cast<i64>(n)));
}

Tally positional_success_321(std::size_t n) {
    if (n < 4) throw InvalidInput("positional formula needs N >= 4");
    const auto m = static_cast<i64>(n);
    return Tally(3 * catalan(m - 1) - 4 * catalan(m - 2) - catalan(m - 3), catalan(m));
}

ClosedForm closed_123(std::size_t n) {
    if (n < 2) throw InvalidInput("Av(123) closed form needs N >= 2");
    const auto m = static_cast<i64>(n);
    return {"ltrmax:2", Tally(ballot(m, 2), catalan(m))};
}

ClosedForm closed_213(std::size_t n) {
    if (n == 0) throw InvalidInput("rank must be positive");
    return {"ltrmax:1", optimal_success_231(n)};
}

ExactRational strike_prob_123(const Permutation& p, std::size_t n) {
    if (p.empty() || p.size() > n) throw InvalidInput("prefix size out of range");
    if (contains_pattern(p, Permutation{1, 2, 3})) throw InvalidInput("prefix contains 123");
    const std::size_t k = p.size();
    if (k == 1) {
        const auto m = static_cast<i64>(n);
        return ExactRational(catalan(m - 1), catalan(m));
    }
    // (k-1)(k-2)...1 k
    for (std::size_t i = 1; i < k; ++i)
        if (p.at(i) != static_cast<int>(k - i)) return ExactRational(0, 1);
    return p.last() == static_cast<int>(k) ? ExactRational(1, 1) : ExactRational(0, 1);
}

Tally strike_prob_213_increasing(std::size_t k, std::size_t n) {
    if (k == 0 || k > n) throw InvalidInput("prefix size out of range");
    const auto m = static_cast<i64>(n), kk = static_cast<i64>(k);
    return Tally(ballot(m - 1, kk - 1), ballot(m, kk));
}

}  // namespace beststop
