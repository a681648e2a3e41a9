#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "beststop/bijections.hpp"
#include "beststop/pattern_class.hpp"
#include "beststop/permutation.hpp"
#include "beststop/prefix_tree.hpp"
#include "beststop/tally.hpp"
#include "beststop/triangle.hpp"

namespace beststop {

// Accept at the first prefix flattening found in `members`. With `completion`
// the player also accepts at position N when nothing fired earlier.
struct StrikeRule {
    std::set<Permutation> members;
    bool completion = false;
};

// Reject at a trigger prefix, then accept the next left-to-right maximum.
struct TriggerRule {
    bool null_prefix = false;
    std::set<Permutation> members;
    std::optional<std::size_t> size;  // every prefix of this size triggers
};

// Reject the first k candidates, then accept the next left-to-right maximum.
struct PositionalRule {
    std::size_t k = 0;
};

// Accept the j-th left-to-right maximum.
struct LtrMaxRule {
    std::size_t j = 1;
};

// Select at the first (eligible, for strike) prefix of size k whose
// value-saturated count reaches sigma(N - k). With `west`, the statistic is
// read off the 321-avoiding preimage of a 312-avoiding prefix.
struct ThresholdRule {
    Mode mode = Mode::strike;
    SigmaTable sigma;
    bool west = false;
    // Applied to a class the table was not derived for (experiments only).
    bool direct = false;
};

struct Strategy {
    std::variant<StrikeRule, TriggerRule, PositionalRule, LtrMaxRule, ThresholdRule> rule;

    std::string describe() const;
};

// "strike:{12,213}", "strike:{12,213}+completion", "trigger:{null}",
// "trigger:{1,21}", "trigger:{size=2}", "positional:3", "ltrmax:2",
// "threshold:strike", "threshold:trigger", "threshold:strike:direct".
// Threshold descriptors need the class (321 or 312) and the rank.
Strategy parse_strategy(std::string_view descriptor, const PatternClass& cls, std::size_t n);
Strategy threshold_strategy(Mode mode, const PatternClass& cls, std::size_t n);

enum class Action { pass, accept, trigger };
std::string_view to_string(Action a);

struct Decision {
    Permutation prefix;
    bool eligible = false;
    std::size_t statistic = 0;  // value-saturated count, LTR-max count, or prefix size
    Action action = Action::pass;
};

struct PlayTrace {
    std::optional<std::size_t> stop_position;  // nullopt: nobody was hired
    bool win = false;
    std::vector<Decision> decisions;
};

// Incremental play: receives prefix flattenings one at a time and never
// sees the rest of the permutation.
class Player {
public:
    Player(const Strategy& strategy, std::size_t n);

    // Prefix of size (steps so far) + 1.
    Decision observe(const Permutation& prefix);
    bool stopped() const { return stop_.has_value(); }
    std::optional<std::size_t> stop_position() const { return stop_; }
    bool triggered() const { return triggered_; }

private:
    std::size_t statistic_of(const Permutation& prefix) const;

    const Strategy* strategy_;
    std::size_t n_;
    std::size_t step_ = 0;
    std::size_t ltr_count_ = 0;
    bool triggered_ = false;
    std::optional<std::size_t> stop_;
    std::optional<WestTracker> west_;
};

// Throws IncompleteStrategy when a strike rule without completion never fires.
PlayTrace play(const Strategy& strategy, const Permutation& pi, bool record = true);

// Exhaustive play over the class.
Tally exact_success(const Strategy& strategy, const PatternClass& cls, std::size_t n, EnumerationLimits limits = {});

// 64-bit Mersenne twister with exact rejection sampling for ranges.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    explicit Rng(std::seed_seq& seq) : engine_(seq) {}
    std::uint64_t next() { return engine_(); }
    // Uniform on [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound);
    BigInt below(const BigInt& bound);

private:
    std::mt19937_64 engine_;
};

// Uniform sampling by descending the prefix tree, choosing each child with
// probability proportional to the number of class members below it.
class Sampler {
public:
    explicit Sampler(const PrefixTree& tree);
    Permutation sample(Rng& rng) const;
    const PrefixTree& tree() const { return *tree_; }

private:
    const PrefixTree* tree_;
    std::vector<std::vector<std::uint64_t>> cumulative_;
};

Permutation sample_uniform(const PrefixTree& tree, Rng& rng);

struct SimReport {
    std::uint64_t trials = 0;
    std::uint64_t wins = 0;
    ExactRational estimate;
    std::string std_error;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
};

// Trials are split into fixed blocks; block b draws from seed_seq{seed, b},
// so the report does not depend on the number of threads.
SimReport simulate(const Strategy& strategy, const Sampler& sampler, std::uint64_t trials, std::uint64_t seed,
                   unsigned threads = 0);

}  // namespace beststop
