// beststop: command-line front end for the best-choice toolkit.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beststop/bijections.hpp"
#include "beststop/cache.hpp"
#include "beststop/closed_form.hpp"
#include "beststop/error.hpp"
#include "beststop/numbers.hpp"
#include "beststop/optimizer.hpp"
#include "beststop/strategy.hpp"
#include "beststop/triangle.hpp"

using namespace beststop;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kUsage = 1, kCap = 2, kMismatch = 3;
constexpr int kDigits = 13;

struct Common {
    std::string format = "text";
    std::string cache_dir;
    std::size_t max_rank = 12;
    std::uint64_t cap = 50'000'000;
};

// Verification failure carrying its report.
struct Mismatch {
    std::string message;
};

std::string approx(const ExactRational& q) { return "~" + q.to_decimal(kDigits); }
std::string approx(const Tally& t) { return approx(t.to_rational()); }

const Permutation& pattern(const std::string& name) {
    static const std::map<std::string, Permutation> known{
        {"231", {2, 3, 1}}, {"132", {1, 3, 2}}, {"321", {3, 2, 1}},
        {"312", {3, 1, 2}}, {"123", {1, 2, 3}}, {"213", {2, 1, 3}}};
    return known.at(name);
}

PatternClass class_of(const std::string& name) {
    return name == "none" ? PatternClass::unrestricted() : PatternClass::avoiding(pattern(name));
}

TreeLimits limits_of(const Common& c) {
    TreeLimits limits;
    limits.max_rank = c.max_rank;
    limits.max_nodes = c.cap;
    return limits;
}

std::optional<TriangleCache> cache_of(const Common& c) {
    if (c.cache_dir.empty()) return std::nullopt;
    return TriangleCache(c.cache_dir);
}

std::unique_ptr<BTriangle> triangle(const Common& c, Mode mode, const std::optional<FrozenRules>& frozen,
                                    std::size_t rows) {
    if (auto cache = cache_of(c)) {
        std::string warning;
        auto t = cache->get(mode, frozen, rows, &warning);
        if (!warning.empty()) std::cerr << "warning: " << warning << " (rebuilt)\n";
        return t;
    }
    auto t = std::make_unique<BTriangle>(mode, frozen);
    t->extend_to(rows);
    return t;
}

// Members shown to the user: everything except losing leaves, which are the completion.
std::pair<std::vector<Permutation>, bool> core_of(const PrefixTree& tree, const std::vector<Permutation>& members) {
    std::vector<Permutation> core;
    bool padded = false;
    for (const auto& p : members) {
        const NodeId id = tree.require(p);
        if (tree.is_leaf(id) && tree.node(id).strike.wins() == 0)
            padded = true;
        else
            core.push_back(p);
    }
    std::sort(core.begin(), core.end(), [](const Permutation& a, const Permutation& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return {core, padded};
}

std::string braced(const std::vector<Permutation>& ps) {
    std::string out = "{";
    for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? "," : "") + ps[i].to_string();
    return out + "}";
}

json strings(const std::vector<Permutation>& ps) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(p.to_string());
    return out;
}

// ---- solve

struct SolveArgs {
    std::string cls;
    std::size_t n = 0;
    std::string mode = "strike";
    std::string method = "auto";
};

std::optional<std::pair<std::string, Tally>> formula_solution(const Common& c, const std::string& cls, Mode mode,
                                                              std::size_t n) {
    if (cls == "321" || cls == "312") {
        auto t = triangle(c, mode, std::nullopt, n + 1);
        return std::pair{"threshold:" + std::string(to_string(mode)), t->optimal_value(n)};
    }
    if (mode == Mode::trigger) return std::nullopt;
    if (cls == "231" || cls == "132") return std::pair{std::string("ltrmax:1"), optimal_success_231(n)};
    if (cls == "123" && n >= 2) {
        auto f = closed_123(n);
        return std::pair{f.strategy, f.value};
    }
    if (cls == "213") {
        auto f = closed_213(n);
        return std::pair{f.strategy, f.value};
    }
    return std::nullopt;
}

int cmd_solve(const Common& c, const SolveArgs& a) {
    const Mode mode = parse_mode(a.mode);
    const PatternClass cls = class_of(a.cls);
    if (a.n == 0) throw InvalidInput("--n must be at least 1");
    const bool fits = a.n <= c.max_rank;
    const bool use_tree = a.method == "tree" || (a.method == "auto" && fits);

    json out = {{"class", a.cls}, {"n", a.n}, {"mode", a.mode}};
    std::ostringstream text;
    text << "class " << a.cls << ", N = " << a.n << ", " << a.mode << " mode\n";

    if (use_tree) {
        PrefixTree tree = [&] {
            try {
                return PrefixTree::build(cls, a.n, limits_of(c));
            } catch (const LimitError& e) {
                throw LimitError(std::string(e.what()) + " (try --method formula)");
            }
        }();
        out["method"] = "tree";
        Tally value;
        if (mode == Mode::strike) {
            auto r = optimal_strike_set(tree);
            auto [core, padded] = core_of(tree, r.strike_set.members);
            value = r.value;
            out["strike_set"] = strings(core);
            out["completion"] = padded;
            text << "strike set: " << braced(core) << (padded ? "+completion" : "") << '\n';
        } else {
            auto r = optimal_trigger_set(tree);
            value = r.value;
            if (r.trigger_set.includes_null) {
                out["trigger_set"] = json::array({nullptr});
                text << "trigger set: {null}\n";
            } else {
                out["trigger_set"] = strings(r.trigger_set.members);
                text << "trigger set: " << braced(r.trigger_set.members) << '\n';
            }
        }
        out["value"] = value.to_string();
        out["value_decimal"] = approx(value);
        text << "value: " << value.to_string() << " (" << approx(value) << ")\n";
    } else {
        auto f = formula_solution(c, a.cls, mode, a.n);
        if (!f)
            throw LimitError("no formula mode for class " + a.cls + " in " + a.mode + " mode; tree mode is capped at N = " +
                             std::to_string(c.max_rank));
        out["method"] = "formula";
        out["strategy"] = f->first;
        out["value"] = f->second.to_string();
        out["value_decimal"] = approx(f->second);
        text << "strategy: " << f->first << '\n'
             << "value: " << f->second.to_string() << " (" << approx(f->second) << ")\n";
    }
    if (c.format == "json")
        std::cout << out.dump(2) << '\n';
    else
        std::cout << text.str();
    return kOk;
}

// ---- triangle

struct TriangleArgs {
    std::string mode = "strike";
    std::size_t rows = 16;
    std::string emit = "triangle";
    std::string frozen;
};

int cmd_triangle(const Common& c, const TriangleArgs& a) {
    const Mode mode = parse_mode(a.mode);
    if (a.rows < 2) throw InvalidInput("--rows must be at least 2");
    std::optional<FrozenRules> frozen;
    if (!a.frozen.empty()) frozen = parse_frozen(a.frozen);
    auto t = triangle(c, mode, frozen, a.rows);
    const bool tri = a.emit == "triangle" || a.emit == "both";
    const bool sig = a.emit == "sigma" || a.emit == "both";
    const SigmaTable sigma = boundary_sigma(*t);

    if (c.format == "json") {
        json out = {{"mode", a.mode}, {"rows", a.rows}, {"frozen", frozen_to_string(frozen)}};
        if (tri) {
            json entries = json::array();
            for (std::size_t n = 2; n <= t->rows(); ++n)
                for (std::size_t k = t->first_column(); k < n; ++k)
                    entries.push_back({{"N", n},
                                       {"k", k},
                                       {"numerator", t->numerator(n, k).get_str()},
                                       {"denominator", t->denominator(n, k).get_str()},
                                       {"optimal", t->optimal(n, k)}});
            out["triangle"] = std::move(entries);
        }
        if (sig) {
            json s = json::object();
            for (std::size_t i = 0; i < sigma.depth(); ++i)
                if (auto v = sigma.at(i)) s[std::to_string(i)] = *v;
            out["sigma"] = std::move(s);
        }
        std::cout << out.dump(2) << '\n';
        return kOk;
    }
    if (tri) std::cout << triangle_csv(*t);
    if (tri && sig) std::cout << '\n';
    if (sig) std::cout << sigma.to_csv();
    return kOk;
}

// ---- verify

struct VerifyArgs {
    std::string target;
    std::size_t n = 8;
    std::size_t rows = 0;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw Mismatch{what};
}

json verify_asymptote(const Common& c, bool trigger) {
    const Mode mode = trigger ? Mode::trigger : Mode::strike;
    const FrozenRules rules = trigger ? parse_frozen("-,0,1,3,8") : parse_frozen("1,1,4,9");
    const FitSpec spec = trigger ? FitSpec{6, 10, {1, 2, 3, 4, 5, 6, 7, 8}, 8, 50}
                                 : FitSpec{5, 11, {1, 2, 3, 4, 5, 6, 7, 8}, 8, 30};
    const ExactRational expected = trigger ? ExactRational(8239, 16384) : ExactRational(32983, 65536);
    auto t = triangle(c, mode, rules, spec.verify_to);
    FitResult fit;
    try {
        fit = fit_shifted_ballot(*t, spec);
    } catch (const FitError& e) {
        throw Mismatch{e.what()};
    } catch (const InconsistencyError& e) {
        throw Mismatch{e.what()};
    }
    json coeffs = json::object();
    std::string listed;
    for (const auto& [s, v] : fit.coefficients) {
        coeffs[std::to_string(s)] = v.to_string();
        listed += (listed.empty() ? "" : ",") + (v.denominator() == 1 ? v.numerator().get_str() : v.to_string());
    }
    const ExactRational limit = limit_of_combination(fit.coefficients);
    std::cout << "frozen rules: " << frozen_to_string(rules) << '\n'
              << "coefficients (shifts 1..8): " << listed << '\n'
              << "verified for " << fit.verified_from << " <= N <= " << fit.verified_to << ", k <= N-" << fit.diagonal
              << '\n'
              << "limit: " << limit.to_string() << " (" << approx(limit) << ")\n";
    expect(limit == expected, "limit " + limit.to_string() + " differs from " + expected.to_string());
    return {{"frozen", frozen_to_string(rules)}, {"coefficients", coeffs}, {"limit", limit.to_string()}};
}

json verify_isomorphism(const std::string& a, const std::string& b, std::size_t n) {
    const auto r = verify_tree_isomorphism(class_of(a), class_of(b), n);
    std::cout << r.to_json().dump() << '\n';
    expect(r.ok(), "trees differ at " +
                       (r.first_mismatch ? r.first_mismatch->first.to_string() + " / " +
                                               r.first_mismatch->second.to_string()
                                         : std::string("?")));
    return r.to_json();
}

json verify_west(std::size_t n) {
    const auto a = PrefixTree::build(class_of("321"), n);
    const auto b = PrefixTree::build(class_of("312"), n);
    std::vector<NodeId> map;
    try {
        map = west_map(a, b);
    } catch (const InconsistencyError& e) {
        throw Mismatch{e.what()};
    }
    if (n >= 2) std::cout << west_table_csv(a, b, map);
    return verify_isomorphism("321", "312", n);
}

json verify_phi(std::size_t n) {
    json checked = json::array();
    for (std::size_t m = 2; m <= n; ++m) {
        const auto r = check_phi_transfer(PrefixTree::build(class_of("231"), m));
        std::cout << "N = " << m << ": " << r.prefixes_checked << " eligible prefixes, "
                  << (r.ok ? "bijective" : "FAILED") << '\n';
        expect(r.ok, "phi transfer fails at N = " + std::to_string(m) + " below " +
                         (r.first_failure ? r.first_failure->to_string() : std::string("?")));
        checked.push_back({{"n", m}, {"prefixes", r.prefixes_checked}});
    }
    return checked;
}

json verify_sigma(const Common& c, std::size_t rows) {
    if (rows == 0) rows = 60;
    auto t = triangle(c, Mode::strike, std::nullopt, rows);
    const SigmaTable s = boundary_sigma(*t);
    std::cout << s.to_csv();
    if (auto bad = boundary_violation(*t))
        throw Mismatch{"boundary is not a staircase at (" + std::to_string(bad->first) + "," +
                       std::to_string(bad->second) + ")"};
    json out = json::object();
    for (std::size_t i = 1; i * i + i <= rows && i < s.depth(); ++i) {
        const auto v = s.at(i);
        expect(v && *v == i * i, "sigma(" + std::to_string(i) + ") is not " + std::to_string(i * i));
        out[std::to_string(i)] = *v;
    }
    return out;
}

json verify_diagonals(std::size_t rows) {
    if (rows == 0) rows = 2000;
    for_each_row(Mode::strike, rows, [&](const TriangleRow& r) {
        const std::size_t n = r.n;
        if (n >= 2) expect(r.b[n - 1] == 1, "B(N,N-1) != 1 at N = " + std::to_string(n));
        if (n >= 3)
            expect(r.b[n - 2] == BigInt(static_cast<unsigned long>(2 * n - 3)),
                   "B(N,N-2) != 2N-3 at N = " + std::to_string(n));
    });
    std::cout << "B(N,N-1) = 1 and B(N,N-2) = 2N-3 for N <= " << rows << '\n';
    return {{"rows", rows}};
}

json verify_threshold(std::size_t n) {
    json out = json::array();
    for (const std::string name : {"321", "312"}) {
        for (std::size_t m = 2; m <= n; ++m) {
            const PatternClass cls = class_of(name);
            const Tally tree = optimal_strike_set(PrefixTree::build(cls, m)).value;
            const Tally thr = exact_success(threshold_strategy(Mode::strike, cls, m), cls, m);
            std::cout << name << " N = " << m << ": threshold " << thr.to_string() << ", optimizer " << tree.to_string()
                      << '\n';
            expect(thr == tree, "threshold strategy is not optimal for " + name + " at N = " + std::to_string(m));
            out.push_back({{"class", name}, {"n", m}, {"value", thr.to_string()}});
        }
    }
    return out;
}

// Optimal values split the six classes three ways; tree isomorphism splits
// 213 off from 231 and 132.
json verify_wilf(std::size_t n) {
    const std::vector<std::string> names{"231", "132", "321", "312", "123", "213"};
    const std::vector<std::vector<std::string>> by_value_expected{{"123"}, {"132", "213", "231"}, {"312", "321"}};
    const std::vector<std::pair<std::string, std::string>> isomorphic{{"231", "132"}, {"321", "312"}};
    json out = json::array();
    for (std::size_t m = 4; m <= n; ++m) {
        std::map<std::string, std::vector<std::string>> by_value;
        for (const auto& name : names)
            by_value[optimal_strike_set(PrefixTree::build(class_of(name), m)).value.to_rational().to_string()]
                .push_back(name);
        std::vector<std::vector<std::string>> groups;
        for (auto& [v, g] : by_value) {
            std::sort(g.begin(), g.end());
            groups.push_back(g);
        }
        std::sort(groups.begin(), groups.end());
        std::cout << "N = " << m << ":";
        for (const auto& [v, g] : by_value) {
            std::cout << " {";
            for (std::size_t i = 0; i < g.size(); ++i) std::cout << (i ? "," : "") << g[i];
            std::cout << "} " << v;
        }
        expect(groups == by_value_expected, "unexpected optimal-value classes at N = " + std::to_string(m));
        for (const auto& [a, b] : isomorphic)
            expect(verify_tree_isomorphism(class_of(a), class_of(b), m).ok(),
                   a + " and " + b + " trees differ at N = " + std::to_string(m));
        if (m <= kCanonicalSearchMaxRank) {
            expect(!verify_tree_isomorphism(class_of("231"), class_of("213"), m).ok(),
                   "231 and 213 trees are isomorphic at N = " + std::to_string(m));
            std::cout << "; 213 tree not isomorphic to 231";
        }
        std::cout << '\n';
        out.push_back({{"n", m}, {"value_groups", groups}, {"tree_classes", {{"123"}, {"132", "231"}, {"213"}, {"312", "321"}}}});
    }
    return out;
}

int cmd_verify(const Common& c, const VerifyArgs& a) {
    json detail;
    try {
        if (a.target == "asymptote-321")
            detail = verify_asymptote(c, false);
        else if (a.target == "asymptote-trigger")
            detail = verify_asymptote(c, true);
        else if (a.target == "west")
            detail = verify_west(a.n);
        else if (a.target == "upsilon")
            detail = verify_isomorphism("231", "132", a.n);
        else if (a.target == "phi")
            detail = verify_phi(a.n);
        else if (a.target == "sigma")
            detail = verify_sigma(c, a.rows);
        else if (a.target == "diagonals")
            detail = verify_diagonals(a.rows);
        else if (a.target == "threshold")
            detail = verify_threshold(a.n);
        else if (a.target == "wilf")
            detail = verify_wilf(a.n);
        else
            throw InvalidInput("unknown verify target '" + a.target + "'");
    } catch (const Mismatch& m) {
        std::cout << "FAIL " << a.target << ": " << m.message << '\n';
        return kMismatch;
    }
    if (c.format == "json")
        std::cout << json{{"target", a.target}, {"pass", true}, {"detail", detail}}.dump(2) << '\n';
    std::cout << "PASS " << a.target << '\n';
    return kOk;
}

// ---- simulate

struct SimulateArgs {
    std::string cls;
    std::size_t n = 0;
    std::string strategy;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

int cmd_simulate(const Common& c, const SimulateArgs& a) {
    if (a.trials == 0) throw InvalidInput("--trials must be at least 1");
    const PatternClass cls = class_of(a.cls);
    const PrefixTree tree = PrefixTree::build(cls, a.n, limits_of(c));
    const Strategy s = parse_strategy(a.strategy, cls, a.n);
    const SimReport r = simulate(s, Sampler(tree), a.trials, a.seed, a.threads);
    if (c.format == "text") {
        std::cout << "strategy " << s.describe() << " on class " << a.cls << ", N = " << a.n << '\n'
                  << "wins " << r.wins << " / " << r.trials << " = " << r.estimate.to_decimal(6) << " (std error "
                  << r.std_error << ", seed " << r.seed << ")\n";
    } else {
        json out = r.to_json();
        out["strategy"] = s.describe();
        out["class"] = a.cls;
        out["n"] = a.n;
        std::cout << out.dump(2) << '\n';
    }
    return kOk;
}

// ---- tree

struct TreeArgs {
    std::string cls;
    std::size_t n = 0;
};

int cmd_tree(const Common& c, const TreeArgs& a) {
    const PrefixTree tree = PrefixTree::build(class_of(a.cls), a.n, limits_of(c));
    std::cout << tree.to_json().dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver for the best-choice game on pattern-avoiding permutations"};
    app.require_subcommand(1);

    Common common;
    const std::vector<std::string> classes{"231", "132", "321", "312", "123", "213", "none"};
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--cache-dir", common.cache_dir, "Directory for cached triangle rows")->envname("BESTSTOP_CACHE");
    app.add_option("--max-rank", common.max_rank, "Largest N for materialized prefix trees")
        ->check(CLI::Range(1, 16));
    app.add_option("--cap", common.cap, "Largest prefix tree, in nodes")->check(CLI::PositiveNumber);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format)->check(CLI::IsMember({"text", "json", "csv"}));
        sub->add_option("--cache-dir", common.cache_dir)->envname("BESTSTOP_CACHE");
        sub->add_option("--max-rank", common.max_rank)->check(CLI::Range(1, 16));
        sub->add_option("--cap", common.cap)->check(CLI::PositiveNumber);
    };

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Optimal strike or trigger set and its value");
    s->add_option("--class", solve.cls)->required()->check(CLI::IsMember(classes));
    s->add_option("--n", solve.n)->required()->check(CLI::PositiveNumber);
    s->add_option("--mode", solve.mode)->check(CLI::IsMember({"strike", "trigger"}));
    s->add_option("--method", solve.method)->check(CLI::IsMember({"auto", "tree", "formula"}));
    add_common(s);

    TriangleArgs tri;
    auto* t = app.add_subcommand("triangle", "B-triangle rows and the sigma boundary");
    t->add_option("--mode", tri.mode)->check(CLI::IsMember({"strike", "trigger"}));
    t->add_option("--rows", tri.rows)->check(CLI::Range(2, 5000));
    t->add_option("--emit", tri.emit)->check(CLI::IsMember({"triangle", "sigma", "both"}));
    t->add_option("--frozen", tri.frozen, "Frozen thresholds by N-k, e.g. 1,1,4,9 or -,0,1,3,8");
    add_common(t);

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Check a theorem over computed ranges");
    v->add_option("--target", ver.target)
        ->required()
        ->description(
            "asymptote-321, asymptote-trigger, west, upsilon, phi, sigma, diagonals, threshold, wilf");
    v->add_option("--n", ver.n)->check(CLI::Range(1, 12));
    v->add_option("--rows", ver.rows)->check(CLI::Range(2, 5000));
    add_common(v);

    SimulateArgs sim;
    auto* m = app.add_subcommand("simulate", "Monte Carlo estimate of a strategy");
    m->add_option("--class", sim.cls)->required()->check(CLI::IsMember(classes));
    m->add_option("--n", sim.n)->required()->check(CLI::PositiveNumber);
    m->add_option("--strategy", sim.strategy)->required();
    m->add_option("--trials", sim.trials);
    m->add_option("--seed", sim.seed);
    m->add_option("--threads", sim.threads);
    add_common(m);

    TreeArgs tr;
    auto* w = app.add_subcommand("tree", "Dump a prefix tree as JSON");
    w->add_option("--class", tr.cls)->required()->check(CLI::IsMember(classes));
    w->add_option("--n", tr.n)->required()->check(CLI::PositiveNumber);
    add_common(w);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (m->parsed() && common.format == "text" && !m->get_option("--format")->count() &&
        !app.get_option("--format")->count())
        common.format = "json";

    try {
        if (s->parsed()) return cmd_solve(common, solve);
        if (t->parsed()) return cmd_triangle(common, tri);
        if (v->parsed()) return cmd_verify(common, ver);
        if (m->parsed()) return cmd_simulate(common, sim);
        if (w->parsed()) return cmd_tree(common, tr);
    } catch (const LimitError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCap;
    } catch (const DepthError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCap;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
