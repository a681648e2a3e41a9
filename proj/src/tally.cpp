#include "beststop/tally.hpp"

#include "beststop/error.hpp"

namespace beststop {
namespace {

BigInt parse_big(std::string_view text) {
    if (text.empty()) throw InvalidInput("empty integer");
    std::size_t start = (text[0] == '-') ? 1 : 0;
    if (start == text.size()) throw InvalidInput("bad integer");
    for (std::size_t i = start; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9') throw InvalidInput("bad integer: " + std::string(text));
    return BigInt(std::string(text));
}

std::pair<BigInt, BigInt> split_fraction(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) throw InvalidInput("expected a/b, got " + std::string(text));
    return {parse_big(text.substr(0, slash)), parse_big(text.substr(slash + 1))};
}

std::strong_ordering to_ordering(int c) {
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace

std::string to_decimal(const mpq_class& q, int digits) {
    BigInt num = q.get_num();
    const BigInt& den = q.get_den();
    std::string out;
    if (num < 0) {
        out += '-';
        num = -num;
    }
    BigInt whole = num / den;
    BigInt rest = num % den;
    out += whole.get_str();
    if (digits > 0) {
        out += '.';
        for (int i = 0; i < digits; ++i) {
            rest *= 10;
            BigInt d = rest / den;
            out += d.get_str();
            rest %= den;
        }
    }
    return out;
}

ExactRational::ExactRational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) throw InvalidInput("zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
}

ExactRational::ExactRational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

std::string ExactRational::to_string() const { return value_.get_num().get_str() + "/" + value_.get_den().get_str(); }

ExactRational ExactRational::parse(std::string_view text) {
    auto [n, d] = split_fraction(text);
    return ExactRational(n, d);
}

std::string ExactRational::to_decimal(int digits) const { return beststop::to_decimal(value_, digits); }

ExactRational operator+(const ExactRational& a, const ExactRational& b) { return ExactRational(mpq_class(a.value_ + b.value_)); }
ExactRational operator-(const ExactRational& a, const ExactRational& b) { return ExactRational(mpq_class(a.value_ - b.value_)); }
ExactRational operator*(const ExactRational& a, const ExactRational& b) { return ExactRational(mpq_class(a.value_ * b.value_)); }
ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.value_ == 0) throw InvalidInput("division by zero");
    return ExactRational(mpq_class(a.value_ / b.value_));
}

std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) { return to_ordering(cmp(a.value_, b.value_)); }

Tally::Tally(BigInt wins, BigInt total) : wins_(std::move(wins)), total_(std::move(total)) {
    if (wins_ < 0 || total_ < 0) throw InvalidInput("tally entries must be nonnegative");
    if (wins_ > total_) throw InvalidInput("tally wins exceed total");
}

ExactRational Tally::to_rational() const {
    if (total_ == 0) throw InvalidInput("tally with zero total has no rational value");
    return ExactRational(wins_, total_);
}

std::string Tally::to_string() const { return wins_.get_str() + "/" + total_.get_str(); }

Tally Tally::parse(std::string_view text) {
    auto [w, t] = split_fraction(text);
    return Tally(w, t);
}

Tally& Tally::operator+=(const Tally& other) {
    wins_ += other.wins_;
    total_ += other.total_;
    return *this;
}

std::strong_ordering cmp_as_rational(const Tally& x, const Tally& y) {
    const BigInt lhs = x.wins() * y.total();
    const BigInt rhs = y.wins() * x.total();
    return to_ordering(cmp(lhs, rhs));
}

}  // namespace beststop
