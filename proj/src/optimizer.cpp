#include "beststop/optimizer.hpp"

#include <algorithm>

#include "beststop/error.hpp"

namespace beststop {
namespace {

// Shared sweep: `own` picks the tally a node contributes when selected,
// `selectable` says whether it may be selected at all.
template <typename Own, typename Selectable>
std::pair<std::vector<Tally>, std::vector<bool>> sweep(const PrefixTree& tree, Own own, Selectable selectable) {
    const std::size_t n = tree.size();
    std::vector<Tally> best(n);
    std::vector<bool> chosen(n, false);
    for (std::size_t i = n; i-- > 0;) {
        const auto id = static_cast<NodeId>(i);
        const TreeNode& node = tree.node(id);
        if (tree.is_leaf(id)) {
            best[i] = own(node);
            chosen[i] = true;
            continue;
        }
        Tally below;
        for (NodeId c : node.children) below += best[c];
        if (selectable(node) && cmp_as_rational(own(node), below) > 0) {
            best[i] = own(node);
            chosen[i] = true;
        } else {
            best[i] = std::move(below);
        }
    }
    return {std::move(best), std::move(chosen)};
}

std::vector<NodeId> collect(const PrefixTree& tree, const std::vector<bool>& chosen) {
    std::vector<NodeId> out;
    std::vector<NodeId> stack{tree.root()};
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        if (chosen[id]) {
            out.push_back(id);
            continue;
        }
        const auto& ch = tree.node(id).children;
        stack.insert(stack.end(), ch.rbegin(), ch.rend());
    }
    std::sort(out.begin(), out.end());
    return out;
}

BigInt covered_total(const PrefixTree& tree, const std::vector<NodeId>& ids) {
    BigInt sum = 0;
    for (NodeId id : ids) sum += tree.node(id).strike.total();
    return sum;
}

}  // namespace

OptimalResult optimal_strike_set(const PrefixTree& tree) {
    auto [best, chosen] = sweep(
        tree, [](const TreeNode& n) -> const Tally& { return n.strike; }, [](const TreeNode& n) { return n.eligible; });
    OptimalResult result;
    result.strike_set = StrikeSet{tree.prefixes_of(collect(tree, chosen)), true};
    result.value = best[tree.root()];
    result.per_node_values = std::move(best);
    return result;
}

OptimalTriggerResult optimal_trigger_set(const PrefixTree& tree) {
    auto [best, chosen] = sweep(
        tree, [](const TreeNode& n) -> const Tally& { return n.trigger; }, [](const TreeNode&) { return true; });
    OptimalTriggerResult result;
    if (cmp_as_rational(tree.null_trigger(), best[tree.root()]) > 0 || tree.rank() == 1) {
        result.trigger_set = TriggerSet{true, {}, true};
        result.value = tree.null_trigger();
    } else {
        result.trigger_set = TriggerSet{false, tree.prefixes_of(collect(tree, chosen)), true};
        result.value = best[tree.root()];
    }
    result.per_node_values = std::move(best);
    return result;
}

Tally evaluate_strike(const PrefixTree& tree, const StrikeSet& set) {
    const std::vector<NodeId> ids = tree.ids_of(set.members);
    tree.check_antichain(ids);
    if (covered_total(tree, ids) != tree.class_size()) throw InvalidInput("strike set is not complete");
    Tally sum;
    for (NodeId id : ids) sum += tree.node(id).strike;
    return sum;
}

Tally evaluate_trigger(const PrefixTree& tree, const TriggerSet& set) {
    if (set.includes_null) {
        if (!set.members.empty()) throw InvalidInput("trigger set is not an antichain: null prefix plus others");
        return tree.null_trigger();
    }
    const std::vector<NodeId> ids = tree.ids_of(set.members);
    tree.check_antichain(ids);
    if (covered_total(tree, ids) != tree.class_size()) throw InvalidInput("trigger set is not complete");
    Tally sum;
    for (NodeId id : ids) sum += tree.node(id).trigger;
    return sum;
}

}  // namespace beststop
