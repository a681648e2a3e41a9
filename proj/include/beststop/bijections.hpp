#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "beststop/pattern_class.hpp"
#include "beststop/permutation.hpp"
#include "beststop/prefix_tree.hpp"

namespace beststop {

// Slides N right one step at a time (at least once) until the result avoids 231.
// DomainError if N is last; InvalidInput if pi contains 231.
Permutation phi(const Permutation& pi);

// Removes value 1 and flattens. DomainError on increasing input.
Permutation pcheck(const Permutation& p);
// Inserts a new minimum at the given 1-based position (inverse of pcheck).
Permutation insert_min(const Permutation& p, std::size_t position);

// Recursive block map Av(231)_N -> Av(132)_N fixing the position of N.
Permutation upsilon(const Permutation& pi);

// Child pairing between the Av(321) and Av(312) generating trees: with
// children c_1 < ... < c_m on both sides, c_m pairs with c~_m and c_i with
// c~_{m-i}. Inputs are partner nodes; returns the partner child value.
int west_child_312(const Permutation& p321, const Permutation& p312, int c321);
int west_child_321(const Permutation& p321, const Permutation& p312, int c312);

// Partner in the Av(321) tree of a growing Av(312) prefix, updated one entry at a time.
class WestTracker {
public:
    WestTracker() = default;
    // `prefix312` must extend the previous prefix by one entry (or be [1]).
    const Permutation& advance(const Permutation& prefix312);
    const Permutation& image() const { return image_; }

private:
    Permutation last_;
    Permutation image_;
};

// map[id in the 321 tree] = id in the 312 tree.
std::vector<NodeId> west_map(const PrefixTree& t321, const PrefixTree& t312);

// Partner table for the nodes at depth N-1 and their children, in the layout
// "321-avoiding,,312-avoiding," with parent rows followed by child rows.
std::string west_table_csv(const PrefixTree& t321, const PrefixTree& t312, const std::vector<NodeId>& map);

struct TreeIsomorphismReport {
    PatternClass a;
    PatternClass b;
    std::size_t n = 0;
    std::string method;  // "upsilon", "west" or "canonical-search"
    bool structure_ok = false;
    bool strike_values_ok = false;
    std::optional<std::pair<Permutation, Permutation>> first_mismatch;

    bool ok() const { return structure_ok && strike_values_ok; }
    nlohmann::json to_json() const;
};

// Checks the explicit map for {231,132} and {321,312}; other pairs fall back
// to a canonical-form comparison limited to small ranks.
TreeIsomorphismReport verify_tree_isomorphism(const PatternClass& a, const PatternClass& b, std::size_t n);

inline constexpr std::size_t kCanonicalSearchMaxRank = 8;

struct PhiTransferReport {
    std::size_t prefixes_checked = 0;
    bool ok = true;
    std::optional<Permutation> first_failure;
};

// For every eligible internal prefix p of an Av(231) tree: phi maps the
// p-winnable members bijectively onto the winnable members of p's successors.
PhiTransferReport check_phi_transfer(const PrefixTree& t231);

}  // namespace beststop
