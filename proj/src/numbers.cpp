#include "beststop/numbers.hpp"

#include "beststop/error.hpp"

namespace beststop {
namespace {

// Ballot formula on a possibly out-of-range index pair; zero outside 0 <= k <= n.
BigInt ballot_or_zero(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    BigInt b = binomial(2 * n - k, n) * (k + 1);
    mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(n + 1));
    return b;
}

}  // namespace

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

BigInt catalan(std::int64_t n) {
    if (n < 0) throw InvalidInput("catalan index must be nonnegative");
    BigInt c = binomial(2 * n, n);
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(n + 1));
    return c;
}

BigInt ballot(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0) throw InvalidInput("ballot indices must be nonnegative");
    if (k > n) throw InvalidInput("ballot number requires k <= N");
    return ballot_or_zero(n, k);
}

BigInt shifted_ballot(std::int64_t shift, std::int64_t n, std::int64_t k) {
    if (shift < 0) throw InvalidInput("shift must be nonnegative");
    return ballot_or_zero(n - shift, k);
}

}  // namespace beststop
