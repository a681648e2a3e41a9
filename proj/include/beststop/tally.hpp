#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace beststop {

using BigInt = mpz_class;

// Exact rational in lowest terms with positive denominator.
class ExactRational {
public:
    ExactRational() = default;
    ExactRational(const BigInt& numerator, const BigInt& denominator);
    explicit ExactRational(const mpq_class& q);

    BigInt numerator() const { return value_.get_num(); }
    BigInt denominator() const { return value_.get_den(); }
    const mpq_class& value() const { return value_; }

    // "a/b" (always with a denominator, "3/1" for integers).
    std::string to_string() const;
    static ExactRational parse(std::string_view text);
    // Truncated decimal expansion with `digits` fractional digits; display only.
    std::string to_decimal(int digits = 10) const;

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b);
    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b);

private:
    mpq_class value_{0};
};

// Unreduced (wins, total) pair. Two tallies with equal ratio are different
// values: the mediant sum depends on the representation.
class Tally {
public:
    Tally() : wins_(0), total_(0) {}
    Tally(BigInt wins, BigInt total);

    const BigInt& wins() const { return wins_; }
    const BigInt& total() const { return total_; }

    ExactRational to_rational() const;
    std::string to_string() const;
    static Tally parse(std::string_view text);

    // Mediant sum: (a/b) + (c/d) = (a+c)/(b+d).
    Tally& operator+=(const Tally& other);
    friend Tally operator+(Tally a, const Tally& b) { return a += b; }
    // Pair identity, not rational equality.
    friend bool operator==(const Tally& a, const Tally& b) { return a.wins_ == b.wins_ && a.total_ == b.total_; }

private:
    BigInt wins_;
    BigInt total_;
};

inline Tally oplus(const Tally& x, const Tally& y) { return x + y; }

// Compares wins_x * total_y with wins_y * total_x. A zero total compares as 0.
std::strong_ordering cmp_as_rational(const Tally& x, const Tally& y);

std::string to_decimal(const mpq_class& q, int digits);

}  // namespace beststop
