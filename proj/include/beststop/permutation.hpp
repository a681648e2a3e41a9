#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace beststop {

// A permutation of {1, ..., n} in one-line notation. Positions and values are
// 1-based in every public function; entries are stored as bytes so n <= 255.
class Permutation {
public:
    static constexpr std::size_t kMaxSize = 255;

    Permutation() = default;
    // Validates that entries form a bijection on {1..n}.
    explicit Permutation(std::vector<std::uint8_t> entries);
    Permutation(std::initializer_list<int> entries);

    static Permutation identity(std::size_t n);
    // Trusted constructor for hot paths; caller guarantees the invariant.
    static Permutation from_trusted(std::span<const std::uint8_t> entries);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    // 1-based access: at(1) is the first interview.
    int at(std::size_t position) const { return entries_.at(position - 1); }
    int last() const { return entries_.back(); }
    std::span<const std::uint8_t> entries() const { return entries_; }
    // 1-based position of `value`.
    std::size_t position_of(int value) const;

    // "2516374" when n <= 9, "10,2,..." otherwise.
    std::string to_string() const;
    // Accepts both compact digit form and comma-separated form.
    static Permutation parse(std::string_view text);

    auto operator<=>(const Permutation&) const = default;
    bool operator==(const Permutation&) const = default;

private:
    std::vector<std::uint8_t> entries_;
};

// Relative-order pattern of a sequence of distinct integers.
Permutation flatten(std::span<const int> sequence);
Permutation flatten(std::initializer_list<int> sequence);

// Flattening of the first i entries, 1 <= i <= size.
Permutation prefix_flattening(const Permutation& pi, std::size_t i);

bool contains_pattern(const Permutation& pi, const Permutation& pattern);
inline bool avoids(const Permutation& pi, const Permutation& pattern) { return !contains_pattern(pi, pattern); }
// True iff some occurrence of `pattern` uses the last entry of `pi`.
bool contains_pattern_at_end(const Permutation& pi, const Permutation& pattern);

// Positions (1-based, increasing) of left-to-right maxima.
std::vector<std::size_t> ltr_maxima(const Permutation& pi);
// Last entry is a left-to-right maximum.
bool is_eligible(const Permutation& p);
// Largest i such that values k-i+1..k are all left-to-right maxima (k = size).
std::size_t value_saturated_count(const Permutation& p);
bool has_inversion(const Permutation& p);

// Child of p in a generating tree: append value c in {1..k+1}, bumping
// existing values >= c.
Permutation append_child(const Permutation& p, int c);

// Removes value 1 and flattens (the "p-check" map).
Permutation remove_min(const Permutation& p);

}  // namespace beststop
