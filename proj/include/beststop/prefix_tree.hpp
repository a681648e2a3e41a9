#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "beststop/pattern_class.hpp"
#include "beststop/permutation.hpp"
#include "beststop/tally.hpp"

namespace beststop {

using NodeId = std::uint32_t;

struct TreeNode {
    Permutation prefix;
    std::optional<NodeId> parent;
    std::vector<NodeId> children;  // ordered by increasing child index
    NodeId subtree_end = 0;        // one past the last preorder id below this node
    bool eligible = false;
    Tally strike;
    Tally trigger;
};

// An antichain of prefixes used as a stopping rule.
struct StrikeSet {
    std::vector<Permutation> members;
    bool complete = false;
};

// Trigger prefixes; the null prefix means "accept the first candidate".
struct TriggerSet {
    bool includes_null = false;
    std::vector<Permutation> members;
    bool complete = false;
};

struct TreeLimits {
    std::size_t max_rank = 12;
    std::size_t max_nodes = 20'000'000;
};

// All prefix flattenings of the class members of size N, with strike and
// trigger tallies counted in one enumeration pass. Immutable after build.
class PrefixTree {
public:
    static PrefixTree build(const PatternClass& cls, std::size_t rank, TreeLimits limits = {});

    const PatternClass& pattern_class() const { return class_; }
    std::size_t rank() const { return rank_; }
    std::size_t size() const { return nodes_.size(); }
    NodeId root() const { return 0; }
    const TreeNode& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    // Number of class members of size N.
    const BigInt& class_size() const { return nodes_.front().strike.total(); }

    std::optional<NodeId> find(const Permutation& prefix) const;
    // Throws NotFound when the prefix is not a node.
    NodeId require(const Permutation& prefix) const;

    // ancestor == descendant counts as an ancestor.
    bool is_ancestor(NodeId ancestor, NodeId descendant) const {
        return ancestor <= descendant && descendant < nodes_[ancestor].subtree_end;
    }
    bool is_leaf(NodeId id) const { return nodes_[id].prefix.size() == rank_; }

    Tally strike_prob(const Permutation& prefix) const;
    // nullopt is the null prefix (virtual parent of the root).
    Tally trigger_prob(const std::optional<Permutation>& prefix) const;
    const Tally& null_trigger() const { return null_trigger_; }

    // Minimal eligible strict descendants together with leaves that have no
    // eligible node strictly between p and themselves.
    std::vector<NodeId> successors(NodeId p) const;
    std::vector<NodeId> successors(const Permutation& p) const;

    std::vector<NodeId> leaves() const;
    std::vector<NodeId> nodes_at_depth(std::size_t depth) const;

    // Throws InvalidInput when the ids are not an antichain.
    void check_antichain(std::vector<NodeId> ids) const;
    std::vector<NodeId> ids_of(const std::vector<Permutation>& prefixes) const;
    std::vector<Permutation> prefixes_of(const std::vector<NodeId>& ids) const;

    // S together with every leaf not below a member of S.
    StrikeSet completion(const std::vector<Permutation>& members) const;
    // Trigger sets are padded with size N-1 nodes (leaf triggers never win).
    TriggerSet trigger_completion(const TriggerSet& triggers) const;

    nlohmann::json to_json() const;

private:
    PrefixTree() = default;

    PatternClass class_;
    std::size_t rank_ = 0;
    std::vector<TreeNode> nodes_;
    std::unordered_map<std::string, NodeId> index_;
    Tally null_trigger_;
};

nlohmann::json to_json(const StrikeSet& set, const Tally& value);
nlohmann::json to_json(const TriggerSet& set, const Tally& value);

}  // namespace beststop
