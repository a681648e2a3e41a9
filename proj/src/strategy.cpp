#include "beststop/strategy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "beststop/error.hpp"

namespace beststop {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::set<Permutation>& members) {
    const bool wide = std::any_of(members.begin(), members.end(), [](const Permutation& p) { return p.size() > 9; });
    std::string out = "{";
    bool first = true;
    for (const auto& p : members) {
        if (!first) out += wide ? ";" : ",";
        out += p.to_string();
        first = false;
    }
    return out + "}";
}

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

// "{a,b,c}" -> items; ';' separates when present so comma-form permutations work.
std::vector<std::string> braced_items(std::string_view text) {
    text = std::string_view(text);
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        throw InvalidInput("expected a braced list, got '" + std::string(text) + "'");
    text = text.substr(1, text.size() - 2);
    const char sep = text.find(';') != std::string_view::npos ? ';' : ',';
    std::vector<std::string> items;
    while (!text.empty()) {
        const auto cut = text.find(sep);
        std::string item = trim(text.substr(0, cut));
        if (!item.empty()) items.push_back(std::move(item));
        if (cut == std::string_view::npos) break;
        text.remove_prefix(cut + 1);
    }
    return items;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    if (text.empty()) throw InvalidInput("missing " + std::string(what));
    for (char c : text) {
        if (c < '0' || c > '9') throw InvalidInput("bad " + std::string(what) + " '" + std::string(text) + "'");
        value = value * 10 + static_cast<std::size_t>(c - '0');
        if (value > 1'000'000) throw InvalidInput(std::string(what) + " too large");
    }
    return value;
}

}  // namespace

std::string Strategy::describe() const {
    return std::visit(
        overloaded{
            [](const StrikeRule& r) { return "strike:" + join(r.members) + (r.completion ? "+completion" : ""); },
            [](const TriggerRule& r) {
                if (r.null_prefix) return std::string("trigger:{null}");
                if (r.size) return "trigger:{size=" + std::to_string(*r.size) + "}";
                return "trigger:" + join(r.members);
            },
            [](const PositionalRule& r) { return "positional:" + std::to_string(r.k); },
            [](const LtrMaxRule& r) { return "ltrmax:" + std::to_string(r.j); },
            [](const ThresholdRule& r) {
                return "threshold:" + std::string(to_string(r.mode)) + (r.direct ? ":direct" : "");
            },
        },
        rule);
}

Strategy threshold_strategy(Mode mode, const PatternClass& cls, std::size_t n) {
    const auto p = cls.single_size3();
    const bool is321 = p && *p == Permutation{3, 2, 1};
    const bool is312 = p && *p == Permutation{3, 1, 2};
    if (!is321 && !is312) throw InvalidInput("threshold strategies are defined for classes 321 and 312");
    if (n == 0) throw InvalidInput("rank must be positive");
    BTriangle t(mode);
    t.extend_to(n + 1);
    return Strategy{ThresholdRule{mode, boundary_sigma(t), is312, false}};
}

Strategy parse_strategy(std::string_view descriptor, const PatternClass& cls, std::size_t n) {
    const std::string text = trim(descriptor);
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidInput("strategy descriptor needs 'kind:argument': " + text);
    const std::string kind = text.substr(0, colon);
    std::string arg = text.substr(colon + 1);

    if (kind == "strike") {
        StrikeRule r;
        constexpr std::string_view suffix = "+completion";
        if (arg.size() >= suffix.size() && arg.compare(arg.size() - suffix.size(), suffix.size(), suffix) == 0) {
            r.completion = true;
            arg.resize(arg.size() - suffix.size());
        }
        for (const auto& item : braced_items(arg)) r.members.insert(Permutation::parse(item));
        return Strategy{std::move(r)};
    }
    if (kind == "trigger") {
        TriggerRule r;
        const auto items = braced_items(arg);
        if (items.size() == 1 && items[0] == "null") {
            r.null_prefix = true;
        } else if (items.size() == 1 && items[0].rfind("size=", 0) == 0) {
            r.size = parse_count(std::string_view(items[0]).substr(5), "trigger size");
            if (*r.size == 0) r.null_prefix = true, r.size.reset();
        } else {
            for (const auto& item : items) {
                if (item == "null") throw InvalidInput("null prefix cannot be combined with other triggers");
                r.members.insert(Permutation::parse(item));
            }
        }
        return Strategy{std::move(r)};
    }
    if (kind == "positional") return Strategy{PositionalRule{parse_count(arg, "positional k")}};
    if (kind == "ltrmax") {
        const std::size_t j = parse_count(arg, "maximum index");
        if (j == 0) throw InvalidInput("ltrmax index starts at 1");
        return Strategy{LtrMaxRule{j}};
    }
    if (kind == "threshold") {
        const auto second = arg.find(':');
        const Mode mode = parse_mode(arg.substr(0, second));
        Strategy s;
        if (second != std::string::npos) {
            if (arg.substr(second + 1) != "direct") throw InvalidInput("unknown threshold option in " + text);
            // Use the 321 table on the prefixes themselves.
            s = threshold_strategy(mode, PatternClass::avoiding(Permutation{3, 2, 1}), n);
            std::get<ThresholdRule>(s.rule).direct = true;
        } else {
            s = threshold_strategy(mode, cls, n);
        }
        return s;
    }
    throw InvalidInput("unknown strategy kind '" + kind + "'");
}

std::string_view to_string(Action a) {
    switch (a) {
        case Action::pass: return "pass";
        case Action::accept: return "accept";
        case Action::trigger: return "trigger";
    }
    return "?";
}

Player::Player(const Strategy& strategy, std::size_t n) : strategy_(&strategy), n_(n) {
    if (n == 0) throw InvalidInput("rank must be positive");
    std::visit(overloaded{
                   [&](const TriggerRule& r) { triggered_ = r.null_prefix; },
                   [&](const PositionalRule& r) { triggered_ = r.k == 0; },
                   [&](const ThresholdRule& r) {
                       if (r.sigma.depth() <= n)
                           throw DepthError("threshold table depth " + std::to_string(r.sigma.depth()) +
                                            " is too small for rank " + std::to_string(n));
                       if (r.mode == Mode::trigger) triggered_ = r.sigma.fires(n, 0);
                       if (r.west) west_.emplace();
                   },
                   [](const auto&) {},
               },
               strategy.rule);
}

std::size_t Player::statistic_of(const Permutation& prefix) const {
    return std::visit(overloaded{
                          [&](const ThresholdRule&) {
                              return value_saturated_count(west_ ? west_->image() : prefix);
                          },
                          [&](const LtrMaxRule&) { return ltr_count_; },
                          [&](const auto&) { return prefix.size(); },
                      },
                      strategy_->rule);
}

Decision Player::observe(const Permutation& prefix) {
    if (stop_) throw InvalidInput("player already stopped");
    if (prefix.size() != step_ + 1 || prefix.size() > n_) throw InvalidInput("prefixes must arrive one entry at a time");
    const std::size_t k = ++step_;
    if (west_) west_->advance(prefix);

    Decision d;
    d.prefix = prefix;
    d.eligible = is_eligible(prefix);
    if (d.eligible) ++ltr_count_;
    d.statistic = statistic_of(prefix);

    auto follow_trigger = [&](bool fires_here) {
        if (triggered_) {
            if (d.eligible) d.action = Action::accept;
        } else if (fires_here) {
            triggered_ = true;
            d.action = Action::trigger;
        }
    };

    std::visit(overloaded{
                   [&](const StrikeRule& r) {
                       if (r.members.contains(prefix) || (r.completion && k == n_)) d.action = Action::accept;
                   },
                   [&](const TriggerRule& r) {
                       follow_trigger(r.members.contains(prefix) || (r.size && *r.size == k));
                   },
                   [&](const PositionalRule& r) { follow_trigger(r.k == k); },
                   [&](const LtrMaxRule& r) {
                       if (d.eligible && ltr_count_ == r.j) d.action = Action::accept;
                   },
                   [&](const ThresholdRule& r) {
                       const bool fires = r.sigma.fires(n_ - k, d.statistic);
                       if (r.mode == Mode::strike) {
                           if (d.eligible && fires) d.action = Action::accept;
                       } else {
                           follow_trigger(fires);
                       }
                   },
               },
               strategy_->rule);
    if (d.action == Action::accept) stop_ = k;
    return d;
}

PlayTrace play(const Strategy& strategy, const Permutation& pi, bool record) {
    const std::size_t n = pi.size();
    Player player(strategy, n);
    PlayTrace trace;
    for (std::size_t i = 1; i <= n && !player.stopped(); ++i) {
        Decision d = player.observe(prefix_flattening(pi, i));
        if (record) trace.decisions.push_back(std::move(d));
    }
    if (!player.stopped() && std::holds_alternative<StrikeRule>(strategy.rule))
        throw IncompleteStrategy("strike set never fires on " + pi.to_string());
    trace.stop_position = player.stop_position();
    trace.win = trace.stop_position && pi.at(*trace.stop_position) == static_cast<int>(n);
    return trace;
}

Tally exact_success(const Strategy& strategy, const PatternClass& cls, std::size_t n, EnumerationLimits limits) {
    std::uint64_t wins = 0, total = 0;
    enumerate(
        cls, n,
        [&](const Permutation& pi) {
            ++total;
            if (play(strategy, pi, false).win) ++wins;
        },
        limits);
    return Tally(wins, total);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw InvalidInput("empty sampling range");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

BigInt Rng::below(const BigInt& bound) {
    if (bound <= 0) throw InvalidInput("empty sampling range");
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    for (;;) {
        BigInt r = 0;
        for (std::size_t got = 0; got < bits; got += 64) {
            r <<= 64;
            r += BigInt(static_cast<unsigned long>(next()));
        }
        const std::size_t excess = (bits + 63) / 64 * 64 - bits;
        r >>= static_cast<mp_bitcnt_t>(excess);
        if (r < bound) return r;
    }
}

Sampler::Sampler(const PrefixTree& tree) : tree_(&tree), cumulative_(tree.size()) {
    if (!tree.class_size().fits_ulong_p()) throw LimitError("class too large to sample");
    for (NodeId id = 0; id < tree.size(); ++id) {
        std::uint64_t acc = 0;
        for (NodeId c : tree.node(id).children) {
            acc += tree.node(c).strike.total().get_ui();
            cumulative_[id].push_back(acc);
        }
    }
}

Permutation Sampler::sample(Rng& rng) const {
    NodeId id = tree_->root();
    while (!tree_->is_leaf(id)) {
        const auto& cum = cumulative_[id];
        const std::uint64_t r = rng.below(cum.back());
        const auto at = std::upper_bound(cum.begin(), cum.end(), r) - cum.begin();
        id = tree_->node(id).children[static_cast<std::size_t>(at)];
    }
    return tree_->node(id).prefix;
}

Permutation sample_uniform(const PrefixTree& tree, Rng& rng) { return Sampler(tree).sample(rng); }

nlohmann::json SimReport::to_json() const {
    return {{"trials", trials},
            {"wins", wins},
            {"estimate", estimate.to_string()},
            {"estimate_decimal", estimate.to_decimal(10)},
            {"std_error", std_error},
            {"seed", seed}};
}

SimReport simulate(const Strategy& strategy, const Sampler& sampler, std::uint64_t trials, std::uint64_t seed,
                   unsigned threads) {
    if (trials == 0) throw InvalidInput("trials must be at least 1");
    constexpr std::uint64_t kBlock = 8192;
    const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));

    std::vector<std::uint64_t> block_wins(blocks, 0);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;

    auto worker = [&] {
        try {
            for (std::uint64_t b = next++; b < blocks; b = next++) {
                std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                  static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
                Rng rng(seq);
                const std::uint64_t count = std::min(kBlock, trials - b * kBlock);
                std::uint64_t w = 0;
                for (std::uint64_t t = 0; t < count; ++t)
                    if (play(strategy, sampler.sample(rng), false).win) ++w;
                block_wins[b] = w;
            }
        } catch (...) {
            std::lock_guard lock(failure_lock);
            if (!failure) failure = std::current_exception();
            next = blocks;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    SimReport report;
    report.trials = trials;
    for (auto w : block_wins) report.wins += w;
    report.estimate = ExactRational(BigInt(static_cast<unsigned long>(report.wins)),
                                    BigInt(static_cast<unsigned long>(trials)));
    const double p = static_cast<double>(report.wins) / static_cast<double>(trials);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8f", std::sqrt(p * (1 - p) / static_cast<double>(trials)));
    report.std_error = buf;
    report.seed = seed;
    return report;
}

}  // namespace beststop
