#include "beststop/prefix_tree.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "beststop/error.hpp"
#include "beststop/kernels.hpp"

namespace beststop {
namespace {

constexpr std::size_t kAbsoluteMaxRank = 16;

std::string key_of(const Permutation& p) {
    const auto e = p.entries();
    return std::string(reinterpret_cast<const char*>(e.data()), e.size());
}

nlohmann::json node_json(const PrefixTree& tree, NodeId id) {
    const TreeNode& n = tree.node(id);
    nlohmann::json children = nlohmann::json::array();
    for (NodeId c : n.children) children.push_back(node_json(tree, c));
    return {{"prefix", n.prefix.to_string()},
            {"eligible", n.eligible},
            {"strike", n.strike.to_string()},
            {"trigger", n.trigger.to_string()},
            {"children", std::move(children)}};
}

}  // namespace

PrefixTree PrefixTree::build(const PatternClass& cls, std::size_t rank, TreeLimits limits) {
    if (rank < 1) throw InvalidInput("tree rank must be at least 1");
    if (rank > limits.max_rank || rank > kAbsoluteMaxRank)
        throw LimitError("rank " + std::to_string(rank) + " exceeds the tree cap of " +
                         std::to_string(std::min(limits.max_rank, kAbsoluteMaxRank)) +
                         "; use formula mode for larger ranks");
    const Permutation unit{1};
    if (!cls.contains(unit)) throw InvalidInput("class " + cls.name() + " is empty");

    PrefixTree tree;
    tree.class_ = cls;
    tree.rank_ = rank;

    std::vector<std::uint64_t> total, strike_wins, trigger_wins;
    std::uint64_t null_wins = 0;
    std::vector<NodeId> path(rank);

    auto add_node = [&](Permutation prefix, std::optional<NodeId> parent) {
        if (tree.nodes_.size() >= limits.max_nodes)
            throw LimitError("prefix tree exceeds " + std::to_string(limits.max_nodes) + " nodes");
        const auto id = static_cast<NodeId>(tree.nodes_.size());
        TreeNode node;
        node.eligible = is_eligible(prefix);
        node.parent = parent;
        tree.index_.emplace(key_of(prefix), id);
        node.prefix = std::move(prefix);
        tree.nodes_.push_back(std::move(node));
        total.push_back(0);
        strike_wins.push_back(0);
        trigger_wins.push_back(0);
        return id;
    };

    std::function<void(NodeId, std::size_t)> dfs = [&](NodeId id, std::size_t depth) {
        path[depth - 1] = id;
        if (depth == rank) {
            const auto e = tree.nodes_[id].prefix.entries();
            const std::uint32_t mask = kernels::ltr_max_mask(e.data(), e.size());
            // Positions of the last and second-to-last left-to-right maxima (0 = none).
            const std::size_t last = 32 - static_cast<std::size_t>(std::countl_zero(mask));
            const std::uint32_t rest = mask & ~(std::uint32_t{1} << (last - 1));
            const std::size_t second = rest ? 32 - static_cast<std::size_t>(std::countl_zero(rest)) : 0;
            for (std::size_t d = 1; d <= rank; ++d) ++total[path[d - 1]];
            ++strike_wins[path[last - 1]];
            for (std::size_t d = second; d < last; ++d) {
                if (d == 0)
                    ++null_wins;
                else
                    ++trigger_wins[path[d - 1]];
            }
            tree.nodes_[id].subtree_end = id + 1;
            return;
        }
        const std::vector<int> indices = child_indices(tree.nodes_[id].prefix, cls);
        for (int c : indices) {
            const NodeId child = add_node(append_child(tree.nodes_[id].prefix, c), id);
            tree.nodes_[id].children.push_back(child);
            dfs(child, depth + 1);
        }
        tree.nodes_[id].subtree_end = static_cast<NodeId>(tree.nodes_.size());
    };

    add_node(unit, std::nullopt);
    dfs(0, 1);

    for (std::size_t i = 0; i < tree.nodes_.size(); ++i) {
        tree.nodes_[i].strike = Tally(strike_wins[i], total[i]);
        tree.nodes_[i].trigger = Tally(trigger_wins[i], total[i]);
    }
    tree.null_trigger_ = Tally(null_wins, total[0]);
    return tree;
}

std::optional<NodeId> PrefixTree::find(const Permutation& prefix) const {
    auto it = index_.find(key_of(prefix));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId PrefixTree::require(const Permutation& prefix) const {
    auto id = find(prefix);
    if (!id) throw NotFound("prefix " + prefix.to_string() + " is not a node of the tree");
    return *id;
}

Tally PrefixTree::strike_prob(const Permutation& prefix) const { return nodes_[require(prefix)].strike; }

Tally PrefixTree::trigger_prob(const std::optional<Permutation>& prefix) const {
    if (!prefix) return null_trigger_;
    return nodes_[require(*prefix)].trigger;
}

std::vector<NodeId> PrefixTree::successors(NodeId p) const {
    if (!nodes_.at(p).eligible) throw InvalidInput("successors are defined for eligible prefixes only");
    std::vector<NodeId> out;
    std::vector<NodeId> stack(nodes_[p].children.rbegin(), nodes_[p].children.rend());
    while (!stack.empty()) {
        const NodeId q = stack.back();
        stack.pop_back();
        if (nodes_[q].eligible || is_leaf(q)) {
            out.push_back(q);
            continue;
        }
        stack.insert(stack.end(), nodes_[q].children.rbegin(), nodes_[q].children.rend());
    }
    return out;
}

std::vector<NodeId> PrefixTree::successors(const Permutation& p) const { return successors(require(p)); }

std::vector<NodeId> PrefixTree::leaves() const { return nodes_at_depth(rank_); }

std::vector<NodeId> PrefixTree::nodes_at_depth(std::size_t depth) const {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].prefix.size() == depth) out.push_back(i);
    return out;
}

void PrefixTree::check_antichain(std::vector<NodeId> ids) const {
    std::sort(ids.begin(), ids.end());
    // In preorder, any comparable pair shows up between neighbours.
    for (std::size_t i = 0; i + 1 < ids.size(); ++i)
        if (is_ancestor(ids[i], ids[i + 1]))
            throw InvalidInput("strike set is not an antichain: " + nodes_[ids[i]].prefix.to_string() + " is a prefix of " +
                               nodes_[ids[i + 1]].prefix.to_string());
}

std::vector<NodeId> PrefixTree::ids_of(const std::vector<Permutation>& prefixes) const {
    std::vector<NodeId> ids;
    ids.reserve(prefixes.size());
    for (const auto& p : prefixes) ids.push_back(require(p));
    return ids;
}

std::vector<Permutation> PrefixTree::prefixes_of(const std::vector<NodeId>& ids) const {
    std::vector<Permutation> out;
    out.reserve(ids.size());
    for (NodeId id : ids) out.push_back(nodes_.at(id).prefix);
    return out;
}

StrikeSet PrefixTree::completion(const std::vector<Permutation>& members) const {
    std::vector<NodeId> ids = ids_of(members);
    check_antichain(ids);
    std::sort(ids.begin(), ids.end());
    std::vector<NodeId> out = ids;
    std::size_t next = 0;
    for (NodeId leaf : leaves()) {
        while (next < ids.size() && nodes_[ids[next]].subtree_end <= leaf) ++next;
        const bool covered = next < ids.size() && is_ancestor(ids[next], leaf);
        if (!covered) out.push_back(leaf);
    }
    std::sort(out.begin(), out.end());
    return StrikeSet{prefixes_of(out), true};
}

TriggerSet PrefixTree::trigger_completion(const TriggerSet& triggers) const {
    if (triggers.includes_null) {
        if (!triggers.members.empty()) throw InvalidInput("trigger set is not an antichain: null prefix plus others");
        return TriggerSet{true, {}, true};
    }
    std::vector<NodeId> ids = ids_of(triggers.members);
    check_antichain(ids);
    std::sort(ids.begin(), ids.end());
    std::vector<NodeId> out = ids;
    if (rank_ == 1) {
        // The only trigger that can ever fire is the null prefix.
        if (ids.empty()) return TriggerSet{true, {}, true};
        return TriggerSet{false, prefixes_of(out), true};
    }
    for (NodeId q : nodes_at_depth(rank_ - 1)) {
        const bool above = std::any_of(ids.begin(), ids.end(), [&](NodeId a) { return is_ancestor(a, q); });
        if (above) continue;
        const bool below = std::any_of(ids.begin(), ids.end(), [&](NodeId a) { return is_ancestor(q, a); });
        if (!below) {
            out.push_back(q);
            continue;
        }
        // Some leaves under q are members; the rest are padded as (losing) leaf triggers.
        for (NodeId leaf : nodes_[q].children)
            if (!std::binary_search(ids.begin(), ids.end(), leaf)) out.push_back(leaf);
    }
    std::sort(out.begin(), out.end());
    return TriggerSet{false, prefixes_of(out), true};
}

nlohmann::json PrefixTree::to_json() const {
    return {{"class", class_.name()},
            {"rank", rank_},
            {"null_trigger", null_trigger_.to_string()},
            {"root", node_json(*this, root())}};
}

nlohmann::json to_json(const StrikeSet& set, const Tally& value) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& p : set.members) members.push_back(p.to_string());
    return {{"strike_set", members}, {"complete", set.complete}, {"value", value.to_string()}};
}

nlohmann::json to_json(const TriggerSet& set, const Tally& value) {
    nlohmann::json members = nlohmann::json::array();
    if (set.includes_null) members.push_back(nullptr);
    for (const auto& p : set.members) members.push_back(p.to_string());
    return {{"trigger_set", members}, {"complete", set.complete}, {"value", value.to_string()}};
}

}  // namespace beststop
