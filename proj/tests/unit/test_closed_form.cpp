#include <doctest.h>

#include "beststop/closed_form.hpp"
#include "beststop/error.hpp"
#include "beststop/numbers.hpp"
#include "beststop/optimizer.hpp"
#include "beststop/triangle.hpp"

using namespace beststop;

namespace {

Permutation P(const char* s) { return Permutation::parse(s); }
ExactRational R(long a, long b) { return ExactRational(BigInt(a), BigInt(b)); }

const std::vector<std::vector<long>> kStrikeRows{
    {1},
    {3, 1},
    {8, 5, 1},
    {23, 15, 7, 1},
    {71, 48, 25, 9, 1},
    {229, 158, 87, 39, 11, 1},
    {759, 530, 301, 143, 56, 13, 1},
    {2568, 1809, 1050, 520, 219, 76, 15, 1},
    {8833, 6265, 3697, 1888, 838, 318, 99, 17, 1},
    {30797, 21964, 13131, 6866, 3169, 1281, 443, 125, 19, 1},
    {108613, 77816, 47019, 25055, 11924, 5058, 1889, 608, 154, 21, 1},
    {386804, 278191, 169578, 91762, 44743, 19688, 7764, 2706, 817, 186, 23, 1},
    {1389109, 1002305, 615501, 337310, 167732, 75970, 31227, 11539, 3775, 1069, 221, 25, 1},
    {5024945, 3635836, 2246727, 1244422, 628921, 291611, 123879, 47909, 16682, 5143, 1368, 259, 27, 1},
    {18292738, 13267793, 8242848, 4607012, 2360285, 1115863, 486942, 195331, 71452, 23543, 6861, 1718, 300, 29, 1},
};
// leftmost optimal column of rows 2..16
const std::vector<std::size_t> kBoundary{1, 2, 3, 4, 4, 5, 6, 7, 8, 9, 9, 10, 11, 12, 13};

const std::vector<std::vector<long>> kCombinationRows{
    {4},
    {-1, 4},
    {2, 3, 4},
    {13, 9, 7, 4},
    {151, 33, 20, 11, 4},
    {164, 219, 68, 35, 15, 4},
    {764, 505, 341, 122, 54, 19, 4},
    {2568, 1809, 1045, 540, 199, 77, 23, 4},
    {8833, 6265, 3697, 1888, 843, 303, 104, 27, 4},
    {30797, 21964, 13131, 6866, 3169, 1281, 438, 135, 31, 4},
    {108613, 77816, 47019, 25055, 11924, 5058, 1889, 608, 170, 35, 4},
    {386804, 278191, 169578, 91762, 44743, 19688, 7764, 2706, 817, 209, 39, 4},
    {1389109, 1002305, 615501, 337310, 167732, 75970, 31227, 11539, 3775, 1069, 252, 43, 4},
    {5024945, 3635836, 2246727, 1244422, 628921, 291611, 123879, 47909, 16682, 5143, 1368, 299, 47, 4},
    {18292738, 13267793, 8242848, 4607012, 2360285, 1115863, 486942, 195331, 71452, 23543, 6861, 1718, 350, 51, 4},
};

const FrozenRules kStrike149{1, 1, 4, 9};
const FrozenRules kTrigger{std::nullopt, 0, 1, 3, 8};

std::vector<int> range(int a, int b) {
    std::vector<int> v;
    for (int i = a; i <= b; ++i) v.push_back(i);
    return v;
}

Coefficients ints(const std::vector<int>& shifts, const std::vector<long>& c) {
    Coefficients out;
    for (std::size_t i = 0; i < c.size(); ++i) out.emplace_back(shifts[i], R(c[i], 1));
    return out;
}

}  // namespace

TEST_CASE("strike probabilities of 321-avoiding prefixes") {
    CHECK(strike_prob_321(P("123"), 5).to_string() == "6/14");
    CHECK(strike_prob_321(P("1324"), 5).to_string() == "2/3");
    CHECK(strike_prob_321(P("2314"), 5).to_string() == "3/4");
    CHECK(strike_prob_321(P("21"), 5).to_string() == "0/14");
    for (std::size_t n = 1; n <= 12; ++n) CHECK(strike_prob_321(Permutation::identity(n), n).to_string() == "1/1");
    CHECK_THROWS_AS(strike_prob_321(P("321"), 5), InvalidInput);
    CHECK_THROWS_AS(strike_prob_321(P("123"), 2), InvalidInput);

    SUBCASE("equal to counted tallies at every node, N <= 9") {
        for (std::size_t n = 1; n <= 9; ++n) {
            const auto t = PrefixTree::build(PatternClass::parse("321"), n);
            for (const auto& node : t.nodes()) {
                CHECK(strike_prob_321(node.prefix, n) == node.strike);
                CHECK(trigger_prob_321(node.prefix, n) == node.trigger);
            }
            CHECK(trigger_prob_321(std::nullopt, n) == t.null_trigger());
        }
    }
}

TEST_CASE("trigger probabilities of 321-avoiding prefixes") {
    CHECK(trigger_prob_321(std::nullopt, 4).to_string() == "1/14");
    for (std::size_t n = 2; n <= 10; ++n) CHECK(trigger_prob_321(Permutation::identity(n - 1), n).wins() == 1);
    const auto t = PrefixTree::build(PatternClass::parse("321"), 5);
    CHECK(trigger_prob_321(P("213"), 5) == t.trigger_prob(P("213")));
    CHECK(trigger_prob_321(P("213"), 5).total() == 9);
    CHECK_THROWS_AS(trigger_prob_321(P("4321"), 5), InvalidInput);
}

TEST_CASE("strike triangle rows 2..16") {
    BTriangle t(Mode::strike);
    t.extend_to(16);
    for (std::size_t n = 2; n <= 16; ++n) {
        const auto& expected = kStrikeRows[n - 2];
        for (std::size_t k = 1; k < n; ++k) CHECK_MESSAGE(t.numerator(n, k) == expected[k - 1], n << "," << k);
        std::size_t leftmost = 0;
        for (std::size_t k = n; k >= 1; --k)
            if (t.optimal(n, k)) leftmost = k;
        CHECK_MESSAGE(leftmost == kBoundary[n - 2], "row " << n);
        CHECK(t.denominator(n, 1) == catalan(static_cast<long>(n)));
    }
    CHECK(t.numerator(16, 13) == 300);
    CHECK(t.optimal(16, 13));
    CHECK_FALSE(t.optimal(16, 12));
    CHECK(t.numerator(5, 0) == t.numerator(5, 1));
    CHECK(t.optimal_value(5).to_string() == "23/42");
    CHECK_THROWS_AS(t.row(17), DepthError);
    CHECK_FALSE(boundary_violation(t).has_value());
}

TEST_CASE("triangle first column equals the tree optimum, N <= 9") {
    BTriangle s(Mode::strike), g(Mode::trigger);
    s.extend_to(9);
    g.extend_to(9);
    for (std::size_t n = 2; n <= 9; ++n) {
        const auto tree = PrefixTree::build(PatternClass::parse("321"), n);
        CHECK(s.optimal_value(n) == optimal_strike_set(tree).value);
        CHECK(g.optimal_value(n).to_rational() == optimal_trigger_set(tree).value.to_rational());
    }
}

TEST_CASE("base diagonals") {
    std::size_t checked = 0;
    for_each_row(Mode::strike, 400, [&](const TriangleRow& r) {
        if (r.n < 3) return;
        CHECK(r.b[r.n - 1] == 1);
        CHECK(r.b[r.n - 2] == 2 * static_cast<long>(r.n) - 3);
        ++checked;
    });
    CHECK(checked == 398);
}

TEST_CASE("boundary structure holds in both triangles") {
    for (auto mode : {Mode::strike, Mode::trigger}) {
        BTriangle t(mode);
        t.extend_to(150);
        CHECK_FALSE(boundary_violation(t).has_value());
    }
}

TEST_CASE("optimal boundary sigma") {
    BTriangle s(Mode::strike);
    s.extend_to(60);
    const auto sigma = boundary_sigma(s);
    const std::vector<std::size_t> first{1, 1, 4, 9, 16};
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(sigma.at(i) == first[i]);
    for (std::size_t i = 1; i <= 6; ++i) CHECK(sigma.at(i) == i * i);
    for (std::size_t i = 1; i < 7; ++i) CHECK(*sigma.at(i - 1) <= *sigma.at(i));
    CHECK_THROWS_AS(sigma.at(60), DepthError);

    BTriangle g(Mode::trigger);
    g.extend_to(80);
    const auto tau = boundary_sigma(g);
    const std::vector<std::size_t> tfirst{1, 3, 8, 15, 25, 36};
    for (std::size_t i = 0; i < tfirst.size(); ++i) CHECK(tau.at(i + 2) == tfirst[i]);
    CHECK(tau.at(1) == 0u);
    for (std::size_t i = 2; i < 8; ++i) CHECK(*tau.at(i - 1) <= *tau.at(i));

    CHECK(sigma.to_csv().rfind("i,sigma\n0,1\n1,1\n2,4\n", 0) == 0);
}

TEST_CASE("frozen rules") {
    const auto from_rules = sigma_from_rules(Mode::strike, kStrike149, 20);
    CHECK(from_rules.at(2) == 4u);
    CHECK_FALSE(from_rules.at(4).has_value());
    CHECK(from_rules.fires(3, 9));
    CHECK_FALSE(from_rules.fires(3, 8));
    CHECK_FALSE(from_rules.fires(5, 20));

    BTriangle frozen(Mode::strike, kStrike149), plain(Mode::strike);
    frozen.extend_to(16);
    plain.extend_to(16);
    // The rules agree with the optimal boundary up to row 16.
    for (std::size_t n = 2; n <= 16; ++n)
        for (std::size_t k = 1; k < n; ++k) CHECK(frozen.numerator(n, k) == plain.numerator(n, k));
    frozen.extend_to(30);
    plain.extend_to(30);
    CHECK(frozen.numerator(30, 1) < plain.numerator(30, 1));
}

TEST_CASE("shifted ballot fit of the (1,4,9) triangle") {
    BTriangle t(Mode::strike, kStrike149);
    t.extend_to(30);
    const auto fit = fit_shifted_ballot(t, FitSpec{5, 11, range(1, 8), 8, 30});
    const std::vector<long> expected{4, -9, 0, 2, 105, -206, 95, -5};
    REQUIRE(fit.coefficients.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(fit.coefficients[i].first == static_cast<int>(i + 1));
        CHECK(fit.coefficients[i].second == R(expected[i], 1));
    }
    CHECK(fit.verified_from == 11);
    CHECK(fit.verified_to == 30);
    CHECK(limit_of_combination(fit.coefficients) == R(32983, 65536));

    for (std::size_t n = 2; n <= 16; ++n) {
        const auto& row = kCombinationRows[n - 2];
        for (std::size_t k = 1; k < n; ++k)
            CHECK_MESSAGE(combination_value(fit.coefficients, n, k) == R(row[k - 1], 1), n << "," << k);
    }
}

TEST_CASE("fit errors and degenerate input") {
    const auto zero = fit_shifted_ballot([](std::size_t, std::size_t) { return BigInt(0); },
                                         FitSpec{5, 11, range(1, 8), 8, 30});
    for (const auto& [i, c] : zero.coefficients) CHECK(c == R(0, 1));

    BTriangle t(Mode::strike, kStrike149);
    t.extend_to(30);
    CHECK_THROWS_AS(fit_shifted_ballot(t, FitSpec{5, 11, {1, 1, 2}, 8, 30}), FitError);
    CHECK_THROWS_AS(fit_shifted_ballot(t, FitSpec{5, 11, range(1, 3), 8, 30}), InconsistencyError);
    // the optimal triangle has no frozen boundary, so no fit of this size holds
    BTriangle plain(Mode::strike);
    plain.extend_to(40);
    CHECK_THROWS_AS(fit_shifted_ballot(plain, FitSpec{5, 11, range(1, 8), 8, 40}), InconsistencyError);
}

TEST_CASE("trigger fit") {
    BTriangle t(Mode::trigger, kTrigger);
    t.extend_to(50);
    const auto fit = fit_shifted_ballot(t, FitSpec{6, 10, range(1, 8), 8, 50});
    const std::vector<long> expected{4, -9, 0, -1, 126, -251, 125, -8};
    REQUIRE(fit.coefficients.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(fit.coefficients[i].second == R(expected[i], 1));
    CHECK(limit_of_combination(fit.coefficients) == R(8239, 16384));
    CHECK(limit_of_combination(fit.coefficients).to_decimal(8) == "0.50286865");
}

TEST_CASE("limits of combinations") {
    CHECK(limit_of_combination({{0, R(1, 1)}}) == R(1, 1));
    CHECK(limit_of_combination(ints({1, 2}, {4, -9})) == R(7, 16));
    CHECK(limit_of_combination(ints({1, 2, 3}, {3, -4, -1})) == R(31, 64));
    CHECK(R(31, 64).to_decimal(6) == "0.484375");
    CHECK(R(32983, 65536).to_decimal(13) == "0.5032806396484");
    CHECK(limit_of_combination({}) == R(0, 1));
}

TEST_CASE("231 optimum") {
    CHECK(optimal_success_231(4).to_string() == "5/14");
    CHECK(optimal_success_231(6).to_string() == "42/132");
    CHECK(optimal_success_231(1).to_string() == "1/1");
    for (std::size_t n = 2; n <= 9; ++n)
        CHECK(optimal_success_231(n) == optimal_strike_set(PrefixTree::build(PatternClass::parse("231"), n)).value);
}

TEST_CASE("positional transition after N-3 in 321") {
    CHECK(positional_success_321(8).to_string() == "717/1430");
    CHECK(positional_success_321(5).to_string() == "20/42");
    for (std::size_t n = 4; n <= 40; ++n) CHECK(positional_success_321(n).wins() >= 0);
    CHECK_THROWS_AS(positional_success_321(3), InvalidInput);
}

TEST_CASE("123 and 213") {
    CHECK(closed_123(4).value.to_rational() == R(9, 14));
    CHECK(closed_123(2).value.to_string() == "1/2");
    CHECK(closed_213(4).value.to_string() == "5/14");
    CHECK(closed_213(1).value.to_string() == "1/1");
    CHECK(strike_prob_213_increasing(2, 4).to_string() == "5/9");
    CHECK(closed_123(5).strategy == "ltrmax:2");
    CHECK(closed_213(5).strategy == "ltrmax:1");

    for (std::size_t n = 2; n <= 8; ++n) {
        const auto t123 = PrefixTree::build(PatternClass::parse("123"), n);
        CHECK(closed_123(n).value.to_rational() == optimal_strike_set(t123).value.to_rational());
        for (const auto& node : t123.nodes()) CHECK(strike_prob_123(node.prefix, n) == node.strike.to_rational());

        const auto t213 = PrefixTree::build(PatternClass::parse("213"), n);
        CHECK(closed_213(n).value.to_rational() == optimal_strike_set(t213).value.to_rational());
        for (std::size_t k = 1; k <= n; ++k)
            CHECK(strike_prob_213_increasing(k, n) == t213.strike_prob(Permutation::identity(k)));
    }

    SUBCASE("asymptotes") {
        // 3N(N-1) / (2N(2N-1)) and C_{N-1}/C_N = (N+1)/(2(2N-1))
        for (std::size_t n = 2; n <= 60; ++n) {
            const long N = static_cast<long>(n);
            CHECK(closed_123(n).value.to_rational() == R(3 * N * (N - 1), 2 * N * (2 * N - 1)));
            CHECK(closed_213(n).value.to_rational() == R(N + 1, 2 * (2 * N - 1)));
        }
        const auto far123 = closed_123(4000).value.to_rational();
        const auto far213 = closed_213(4000).value.to_rational();
        CHECK(far123.to_decimal(3) == "0.749");
        CHECK(far213.to_decimal(3) == "0.250");
        CHECK(R(3, 4).to_decimal(2) == "0.75");
        CHECK(R(1, 4).to_decimal(2) == "0.25");
    }
}
