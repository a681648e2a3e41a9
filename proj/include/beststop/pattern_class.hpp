#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beststop/permutation.hpp"

namespace beststop {

// A set of forbidden patterns; the empty set is the unrestricted class.
class PatternClass {
public:
    PatternClass() = default;
    explicit PatternClass(std::vector<Permutation> forbidden);

    static PatternClass unrestricted() { return PatternClass(); }
    // Singleton class Av(pattern).
    static PatternClass avoiding(const Permutation& pattern);
    // "none", "231", "321,4123", ...
    static PatternClass parse(std::string_view name);

    const std::vector<Permutation>& forbidden() const { return forbidden_; }
    bool is_unrestricted() const { return forbidden_.empty(); }
    // The single size-3 pattern when this is one of the six Catalan classes.
    std::optional<Permutation> single_size3() const;
    bool contains(const Permutation& pi) const;
    // "none" or comma-joined patterns.
    std::string name() const;

    bool operator==(const PatternClass&) const = default;

private:
    std::vector<Permutation> forbidden_;
};

// Values c in {1..k+1} whose appended child stays in the class. Closed forms
// for Av(321) and Av(312); everything else tests each candidate child.
std::vector<int> child_indices(const Permutation& p, const PatternClass& cls);
// Membership test of every candidate child; the oracle for the closed forms.
std::vector<int> child_indices_generic(const Permutation& p, const PatternClass& cls);

struct EnumerationLimits {
    // Maximum number of class members a single enumeration may produce.
    std::uint64_t max_members = 50'000'000;
};

// Depth-first walk of the generating tree; visits each member of size n once.
// Throws LimitError once more than limits.max_members members are produced.
void enumerate(const PatternClass& cls, std::size_t n, const std::function<void(const Permutation&)>& visit,
               EnumerationLimits limits = {});
std::vector<Permutation> enumerate_all(const PatternClass& cls, std::size_t n, EnumerationLimits limits = {});

}  // namespace beststop
