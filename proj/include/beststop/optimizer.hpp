#pragma once

#include <vector>

#include "beststop/prefix_tree.hpp"

namespace beststop {

struct OptimalResult {
    StrikeSet strike_set;
    Tally value;
    // Best achievable tally on the closed subtree at each node, indexed by NodeId.
    std::vector<Tally> per_node_values;
};

struct OptimalTriggerResult {
    TriggerSet trigger_set;
    Tally value;
    std::vector<Tally> per_node_values;
};

// Backwards induction over eligible prefixes, deepest first. A prefix replaces
// the strategy below it only when its strike probability is strictly larger.
OptimalResult optimal_strike_set(const PrefixTree& tree);

// Same sweep over trigger tallies; every node (and the null prefix) may trigger.
OptimalTriggerResult optimal_trigger_set(const PrefixTree& tree);

// Mediant sum of the members' strike tallies. Requires a complete antichain.
Tally evaluate_strike(const PrefixTree& tree, const StrikeSet& set);
Tally evaluate_trigger(const PrefixTree& tree, const TriggerSet& set);

}  // namespace beststop
