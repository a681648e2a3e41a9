#include <doctest.h>

#include <map>
#include <set>

#include "beststop/closed_form.hpp"
#include "beststop/error.hpp"
#include "beststop/numbers.hpp"
#include "beststop/optimizer.hpp"
#include "beststop/strategy.hpp"

using namespace beststop;

namespace {

Permutation P(const char* s) { return Permutation::parse(s); }
ExactRational R(long a, long b) { return ExactRational(BigInt(a), BigInt(b)); }
const PatternClass kAv321 = PatternClass::parse("321");
const PatternClass kAv231 = PatternClass::parse("231");

Strategy parse(const char* d, const PatternClass& cls = PatternClass::unrestricted(), std::size_t n = 0) {
    return parse_strategy(d, cls, n);
}

// Prefixes where play stops, plus the full permutation when it never does.
std::set<Permutation> induced_set(const Strategy& s, const PatternClass& cls, std::size_t n) {
    std::set<Permutation> out;
    for (const auto& pi : enumerate_all(cls, n)) {
        const auto trace = play(s, pi, false);
        out.insert(prefix_flattening(pi, trace.stop_position.value_or(n)));
    }
    return out;
}

bool within(const SimReport& r, const ExactRational& exact, double sigmas) {
    const double p = mpq_class(exact.value()).get_d();
    const double est = static_cast<double>(r.wins) / static_cast<double>(r.trials);
    return std::abs(est - p) <= sigmas * std::sqrt(p * (1 - p) / static_cast<double>(r.trials));
}

}  // namespace

TEST_CASE("play examples") {
    const auto first = parse("strike:{1}");
    for (const auto& pi : enumerate_all(PatternClass::unrestricted(), 4)) {
        const auto trace = play(first, pi);
        CHECK(trace.stop_position == 1u);
        CHECK(trace.win == (pi.at(1) == 4));
    }

    const auto reject_one = play(parse("positional:1"), P("231"));
    CHECK(reject_one.stop_position == 2u);
    CHECK(reject_one.win);
    REQUIRE(reject_one.decisions.size() == 2);
    CHECK(reject_one.decisions[0].action == Action::trigger);
    CHECK(reject_one.decisions[1].action == Action::accept);

    const auto threshold = threshold_strategy(Mode::strike, kAv321, 6);
    const auto trace = play(threshold, P("123456"));
    CHECK(trace.stop_position == 4u);
    CHECK_FALSE(trace.win);
    CHECK(trace.decisions.back().statistic == 4);

    const auto t2 = threshold_strategy(Mode::strike, kAv321, 2);
    CHECK(play(t2, P("12")).stop_position == 1u);
    CHECK(play(t2, P("21")).stop_position == 1u);

    const auto never = play(parse("positional:2"), P("321"));
    CHECK_FALSE(never.stop_position.has_value());
    CHECK_FALSE(never.win);

    CHECK_THROWS_AS(play(parse("strike:{12}"), P("213")), IncompleteStrategy);
    CHECK(play(parse("strike:{12}+completion"), P("213")).stop_position == 3u);
}

TEST_CASE("unrestricted N=4 strike play") {
    const auto s = parse("strike:{12,213,3124,3214}+completion");
    CHECK(exact_success(s, PatternClass::unrestricted(), 4).to_string() == "11/24");
    CHECK(exact_success(parse("positional:1"), PatternClass::unrestricted(), 4).to_string() == "11/24");
}

TEST_CASE("positional equals trigger at every prefix of size k") {
    for (const auto& name : {"none", "123", "132", "213", "231", "312", "321"}) {
        const auto cls = PatternClass::parse(name);
        for (std::size_t n = 1; n <= (cls.is_unrestricted() ? 6u : 8u); ++n) {
            const auto members = enumerate_all(cls, n);
            for (std::size_t k = 0; k <= n; ++k) {
                const auto pos = parse_strategy("positional:" + std::to_string(k), cls, n);
                const auto trig = parse_strategy("trigger:{size=" + std::to_string(k) + "}", cls, n);
                for (const auto& pi : members) {
                    const auto a = play(pos, pi), b = play(trig, pi);
                    CHECK(a.stop_position == b.stop_position);
                    CHECK(a.win == b.win);
                    REQUIRE(a.decisions.size() == b.decisions.size());
                    for (std::size_t i = 0; i < a.decisions.size(); ++i) CHECK(a.decisions[i].action == b.decisions[i].action);
                }
            }
        }
    }
}

TEST_CASE("every positional strategy is optimal on 231") {
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto target = optimal_success_231(n).to_rational();
        for (std::size_t k = 0; k < n; ++k)
            CHECK(exact_success(Strategy{PositionalRule{k}}, kAv231, n).to_rational() == target);
    }
}

TEST_CASE("threshold strategy is optimal on 321 and 312") {
    for (std::size_t n = 2; n <= 9; ++n) {
        const auto tree = PrefixTree::build(kAv321, n);
        const auto opt = optimal_strike_set(tree);
        const auto strike = threshold_strategy(Mode::strike, kAv321, n);
        CHECK(exact_success(strike, kAv321, n) == opt.value);
        CHECK(exact_success(threshold_strategy(Mode::trigger, kAv321, n), kAv321, n) == opt.value);
        CHECK(exact_success(strike, kAv321, n).total() == ballot(static_cast<long>(n), 1));

        const auto induced = induced_set(strike, kAv321, n);
        const StrikeSet as_set{{induced.begin(), induced.end()}, true};
        CHECK(evaluate_strike(tree, as_set) == opt.value);
        if (n >= 3) CHECK(induced == std::set<Permutation>(opt.strike_set.members.begin(), opt.strike_set.members.end()));

        const auto av312 = PatternClass::parse("312");
        const auto opt312 = optimal_strike_set(PrefixTree::build(av312, n)).value;
        CHECK(opt312 == opt.value);
        CHECK(exact_success(threshold_strategy(Mode::strike, av312, n), av312, n) == opt312);
        CHECK(exact_success(threshold_strategy(Mode::trigger, av312, n), av312, n) == opt312);
    }
    CHECK(exact_success(threshold_strategy(Mode::strike, kAv321, 5), kAv321, 5).to_string() == "23/42");
    CHECK(exact_success(threshold_strategy(Mode::strike, kAv321, 9), kAv321, 9).to_string() == "2568/4862");
    CHECK_THROWS_AS(threshold_strategy(Mode::strike, kAv231, 5), InvalidInput);
}

TEST_CASE("threshold tables too shallow are rejected") {
    auto s = threshold_strategy(Mode::strike, kAv321, 5);
    CHECK_THROWS_AS(play(s, P("1234567")), DepthError);
}

TEST_CASE("the direct statistic on 312 falls short from N = 7") {
    const auto av312 = PatternClass::parse("312");
    for (std::size_t n = 3; n <= 9; ++n) {
        const auto direct = exact_success(parse_strategy("threshold:strike:direct", av312, n), av312, n);
        const auto opt = exact_success(parse_strategy("threshold:strike", av312, n), av312, n);
        if (n <= 6)
            CHECK(direct == opt);
        else
            CHECK(direct.to_rational() < opt.to_rational());
    }
}

TEST_CASE("positional N-3 on 321 matches the closed form") {
    for (std::size_t n = 5; n <= 10; ++n)
        CHECK(exact_success(Strategy{PositionalRule{n - 3}}, kAv321, n) == positional_success_321(n));
    CHECK(exact_success(Strategy{PositionalRule{5}}, kAv321, 8).to_string() == "717/1430");
}

TEST_CASE("left-to-right maximum strategies on 123 and 213") {
    CHECK(exact_success(parse("ltrmax:2"), PatternClass::parse("123"), 4).to_string() == "9/14");
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto c123 = closed_123(n), c213 = closed_213(n);
        CHECK(exact_success(parse(c123.strategy.c_str()), PatternClass::parse("123"), n).to_rational() ==
              c123.value.to_rational());
        CHECK(exact_success(parse(c213.strategy.c_str()), PatternClass::parse("213"), n).to_rational() ==
              c213.value.to_rational());
        CHECK(exact_success(parse("ltrmax:2"), PatternClass::parse("213"), n).to_rational() ==
              c213.value.to_rational());
    }
}

TEST_CASE("decisions depend only on the prefix seen so far") {
    const std::vector<Strategy> strategies{threshold_strategy(Mode::strike, kAv321, 7),
                                           threshold_strategy(Mode::trigger, kAv321, 7), parse("positional:3"),
                                           parse("ltrmax:2"), parse("trigger:{1,21}"),
                                           parse("strike:{12,213}+completion")};
    const auto members = enumerate_all(kAv321, 7);
    for (const auto& s : strategies) {
        // Two members with the same prefix of size i must get identical decisions through step i.
        std::map<Permutation, std::vector<Action>> seen;
        for (const auto& pi : members) {
            const auto trace = play(s, pi);
            for (std::size_t i = 1; i <= trace.decisions.size(); ++i) {
                std::vector<Action> acts;
                for (std::size_t j = 0; j < i; ++j) acts.push_back(trace.decisions[j].action);
                const auto key = prefix_flattening(pi, i);
                const auto [it, fresh] = seen.emplace(key, acts);
                if (!fresh) CHECK(it->second == acts);
            }
        }
        // Fed incrementally, the player reaches the same stop without the full permutation.
        for (const auto& pi : members) {
            Player player(s, 7);
            for (std::size_t i = 1; i <= 7 && !player.stopped(); ++i) player.observe(prefix_flattening(pi, i));
            CHECK(player.stop_position() == play(s, pi, false).stop_position);
        }
    }
    Player player(parse("positional:1"), 4);
    CHECK_THROWS_AS(player.observe(P("12")), InvalidInput);
}

TEST_CASE("descriptors") {
    CHECK(parse("strike:{12,213,3124,3214}").describe() == "strike:{12,213,3124,3214}");
    CHECK(parse("strike:{ 12 , 213 }+completion").describe() == "strike:{12,213}+completion");
    CHECK(parse("positional:3").describe() == "positional:3");
    CHECK(parse("trigger:{size=2}").describe() == "trigger:{size=2}");
    CHECK(parse("trigger:{null}").describe() == "trigger:{null}");
    CHECK(parse("trigger:{1,21}").describe() == "trigger:{1,21}");
    CHECK(parse("ltrmax:2").describe() == "ltrmax:2");
    CHECK(parse_strategy("threshold:strike", kAv321, 5).describe() == "threshold:strike");
    CHECK(parse_strategy("threshold:trigger", kAv321, 5).describe() == "threshold:trigger");
    CHECK(parse("strike:{1,2,3,4,5,6,7,8,9,10;1}").describe() == "strike:{1;1,2,3,4,5,6,7,8,9,10}");

    for (const char* bad : {"strike", "strike:12", "strike:{12", "bogus:1", "positional:x", "positional:-1",
                            "trigger:{null,1}", "ltrmax:0", "strike:{113}", "threshold:sideways"})
        CHECK_THROWS_AS(parse_strategy(bad, kAv321, 5), InvalidInput);
    CHECK_THROWS_AS(parse_strategy("threshold:strike", kAv231, 5), InvalidInput);
}

TEST_CASE("uniform sampling") {
    const auto t1 = PrefixTree::build(kAv231, 1);
    Rng r1(1);
    for (int i = 0; i < 10; ++i) CHECK(sample_uniform(t1, r1) == P("1"));

    const auto t = PrefixTree::build(kAv231, 3);
    const Sampler sampler(t);
    Rng rng(12345);
    std::map<Permutation, int> freq;
    const int draws = 50'000;
    for (int i = 0; i < draws; ++i) ++freq[sampler.sample(rng)];
    CHECK(freq.size() == 5);
    const double p = 0.2, se = std::sqrt(p * (1 - p) / draws);
    for (const auto& [pi, c] : freq) {
        CHECK(kAv231.contains(pi));
        CHECK(std::abs(c / double(draws) - p) <= 4 * se);
    }

    const auto t8 = PrefixTree::build(kAv321, 8);
    BigInt sum = 0;
    for (auto c : t8.node(t8.root()).children) sum += t8.node(c).strike.total();
    CHECK(sum == catalan(8));
}

TEST_CASE("bounded draws") {
    Rng rng(9);
    for (int i = 0; i < 2000; ++i) CHECK(rng.below(std::uint64_t{7}) < 7);
    const BigInt big("123456789012345678901234567890");
    for (int i = 0; i < 200; ++i) {
        const auto v = rng.below(big);
        CHECK(v >= 0);
        CHECK(v < big);
    }
    CHECK_THROWS_AS(rng.below(std::uint64_t{0}), InvalidInput);
    CHECK_THROWS_AS(rng.below(BigInt(0)), InvalidInput);
}

TEST_CASE("simulation") {
    const auto t5 = PrefixTree::build(kAv321, 5);
    const Sampler s5(t5);
    const auto threshold = threshold_strategy(Mode::strike, kAv321, 5);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto r = simulate(threshold, s5, 100'000, seed);
        CHECK(r.trials == 100'000);
        CHECK(r.wins <= r.trials);
        CHECK(within(r, R(23, 42), 4));
    }

    const auto t8 = PrefixTree::build(kAv231, 8);
    const Sampler s8(t8);
    CHECK(within(simulate(Strategy{PositionalRule{0}}, s8, 100'000, 5), R(429, 1430), 4));
    CHECK(within(simulate(Strategy{PositionalRule{1}}, s8, 100'000, 6), R(429, 1430), 4));

    SUBCASE("reproducible and independent of threads") {
        const auto a = simulate(threshold, s5, 50'000, 42, 1);
        const auto b = simulate(threshold, s5, 50'000, 42, 4);
        const auto c = simulate(threshold, s5, 50'000, 42, 0);
        CHECK(a.to_json().dump() == b.to_json().dump());
        CHECK(a.to_json().dump() == c.to_json().dump());
        CHECK(a.estimate == R(static_cast<long>(a.wins), 50'000));
        CHECK(simulate(threshold, s5, 50'000, 43).to_json().dump() != a.to_json().dump());
        const auto j = a.to_json();
        for (const char* key : {"trials", "wins", "estimate", "std_error", "seed"}) CHECK(j.contains(key));
    }
    CHECK_THROWS_AS(simulate(threshold, s5, 0, 1), InvalidInput);
}
