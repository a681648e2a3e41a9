#include "beststop/bijections.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "beststop/error.hpp"

namespace beststop {
namespace {

const Permutation k231{2, 3, 1};

const PatternClass& av321() {
    static const PatternClass c = PatternClass::avoiding(Permutation{3, 2, 1});
    return c;
}
const PatternClass& av312() {
    static const PatternClass c = PatternClass::avoiding(Permutation{3, 1, 2});
    return c;
}

bool is_class(const PatternClass& cls, const Permutation& p) {
    const auto s = cls.single_size3();
    return s && *s == p;
}

// Values sub+1..sub+len in `in` are written as add+1..add+len in `out`.
void upsilon_into(const std::uint8_t* in, std::size_t len, int sub, std::uint8_t* out, int add) {
    if (len == 0) return;
    const std::size_t pos = static_cast<std::size_t>(std::max_element(in, in + len) - in);
    const std::size_t l = pos, r = len - pos - 1;
    out[pos] = static_cast<std::uint8_t>(add + static_cast<int>(len));
    upsilon_into(in, l, sub, out, add + static_cast<int>(r));
    upsilon_into(in + pos + 1, r, sub + static_cast<int>(l), out + pos + 1, add);
}

std::size_t index_in(const std::vector<int>& v, int c) {
    const auto it = std::find(v.begin(), v.end(), c);
    if (it == v.end()) throw InvalidInput("value " + std::to_string(c) + " is not a child index");
    return static_cast<std::size_t>(it - v.begin()) + 1;
}

std::size_t partner_index(std::size_t i, std::size_t m) { return i == m ? m : m - i; }

std::pair<std::vector<int>, std::vector<int>> both_children(const Permutation& p321, const Permutation& p312) {
    auto c = child_indices(p321, av321());
    auto ct = child_indices(p312, av312());
    if (c.size() != ct.size())
        throw InconsistencyError("child counts differ at " + p321.to_string() + " / " + p312.to_string());
    return {std::move(c), std::move(ct)};
}

std::vector<std::size_t> ltr_positions(const Permutation& p) { return ltr_maxima(p); }

}  // namespace

Permutation phi(const Permutation& pi) {
    if (contains_pattern(pi, k231)) throw InvalidInput("phi is defined on 231-avoiding permutations");
    const std::size_t n = pi.size();
    std::size_t pos = pi.position_of(static_cast<int>(n));
    if (pos == n) throw DomainError("phi is undefined when N is in the last position");
    std::vector<std::uint8_t> e(pi.entries().begin(), pi.entries().end());
    for (;;) {
        std::swap(e[pos - 1], e[pos]);
        ++pos;
        Permutation out = Permutation::from_trusted(e);
        if (!contains_pattern(out, k231)) return out;
    }
}

Permutation pcheck(const Permutation& p) {
    if (!has_inversion(p)) throw DomainError("p-check needs a prefix with an inversion");
    return remove_min(p);
}

Permutation insert_min(const Permutation& p, std::size_t position) {
    if (position == 0 || position > p.size() + 1) throw InvalidInput("insert position out of range");
    std::vector<std::uint8_t> e;
    e.reserve(p.size() + 1);
    for (auto v : p.entries()) e.push_back(static_cast<std::uint8_t>(v + 1));
    e.insert(e.begin() + static_cast<std::ptrdiff_t>(position - 1), 1);
    return Permutation::from_trusted(e);
}

Permutation upsilon(const Permutation& pi) {
    if (contains_pattern(pi, k231)) throw InvalidInput("upsilon is defined on 231-avoiding permutations");
    std::vector<std::uint8_t> out(pi.size());
    upsilon_into(pi.entries().data(), pi.size(), 0, out.data(), 0);
    return Permutation::from_trusted(out);
}

int west_child_312(const Permutation& p321, const Permutation& p312, int c321) {
    const auto [c, ct] = both_children(p321, p312);
    return ct[partner_index(index_in(c, c321), c.size()) - 1];
}

int west_child_321(const Permutation& p321, const Permutation& p312, int c312) {
    const auto [c, ct] = both_children(p321, p312);
    return c[partner_index(index_in(ct, c312), c.size()) - 1];
}

const Permutation& WestTracker::advance(const Permutation& prefix312) {
    if (prefix312.size() == 1) {
        last_ = image_ = prefix312;
        return image_;
    }
    if (prefix312.size() != last_.size() + 1 || prefix_flattening(prefix312, last_.size()) != last_)
        throw InvalidInput("prefix " + prefix312.to_string() + " does not extend " + last_.to_string());
    const int c = west_child_321(image_, last_, prefix312.last());
    image_ = append_child(image_, c);
    last_ = prefix312;
    return image_;
}

std::vector<NodeId> west_map(const PrefixTree& t321, const PrefixTree& t312) {
    if (t321.rank() != t312.rank()) throw InvalidInput("trees have different ranks");
    std::vector<NodeId> map(t321.size(), 0);
    map[0] = 0;
    for (NodeId a = 0; a < t321.size(); ++a) {
        const NodeId b = map[a];
        const auto& ca = t321.node(a).children;
        const auto& cb = t312.node(b).children;
        if (ca.size() != cb.size())
            throw InconsistencyError("child counts differ at " + t321.node(a).prefix.to_string() + " / " +
                                     t312.node(b).prefix.to_string());
        const std::size_t m = ca.size();
        for (std::size_t i = 1; i <= m; ++i) map[ca[i - 1]] = cb[partner_index(i, m) - 1];
    }
    return map;
}

std::string west_table_csv(const PrefixTree& t321, const PrefixTree& t312, const std::vector<NodeId>& map) {
    if (t321.rank() < 2) throw InvalidInput("table needs rank at least 2");
    std::string out = "321-avoiding,,312-avoiding,\n";
    for (NodeId a : t321.nodes_at_depth(t321.rank() - 1)) {
        out += t321.node(a).prefix.to_string() + ",," + t312.node(map[a]).prefix.to_string() + ",\n";
        for (NodeId c : t321.node(a).children)
            out += "," + t321.node(c).prefix.to_string() + ",," + t312.node(map[c]).prefix.to_string() + "\n";
    }
    return out;
}

nlohmann::json TreeIsomorphismReport::to_json() const {
    nlohmann::json mismatch = nullptr;
    if (first_mismatch) mismatch = {first_mismatch->first.to_string(), first_mismatch->second.to_string()};
    return {{"classes", {a.name(), b.name()}},
            {"n", n},
            {"method", method},
            {"structure_ok", structure_ok},
            {"strike_values_ok", strike_values_ok},
            {"first_mismatch", mismatch}};
}

namespace {

// Walks a node map checking structure then strike values; `map` takes ids of x to ids of y.
void check_map(const PrefixTree& x, const PrefixTree& y, const std::vector<NodeId>& map, TreeIsomorphismReport& r,
               bool swap_pairs) {
    auto record = [&](NodeId i, NodeId j) {
        if (r.first_mismatch) return;
        auto p = x.node(i).prefix, q = y.node(j).prefix;
        if (swap_pairs) std::swap(p, q);
        r.first_mismatch = std::pair{p, q};
    };
    r.structure_ok = x.size() == y.size();
    std::vector<bool> hit(y.size(), false);
    for (NodeId i = 0; i < x.size(); ++i) {
        const NodeId j = map[i];
        const TreeNode& u = x.node(i);
        const TreeNode& v = y.node(j);
        bool ok = !hit[j] && u.children.size() == v.children.size() && u.eligible == v.eligible &&
                  ltr_positions(u.prefix) == ltr_positions(v.prefix);
        if (u.parent) ok = ok && v.parent && map[*u.parent] == *v.parent;
        hit[j] = true;
        if (!ok) {
            r.structure_ok = false;
            record(i, j);
        }
    }
    r.strike_values_ok = r.structure_ok;
    if (!r.structure_ok) return;
    for (NodeId i = 0; i < x.size(); ++i)
        if (!(x.node(i).strike == y.node(map[i]).strike)) {
            r.strike_values_ok = false;
            record(i, map[i]);
        }
}

using Codes = std::vector<int>;

// Bottom-up canonical codes; labelled codes include the strike tally.
Codes canonical(const PrefixTree& t, bool labelled, std::map<std::pair<std::string, std::vector<int>>, int>& intern) {
    Codes code(t.size());
    for (std::size_t i = t.size(); i-- > 0;) {
        const TreeNode& node = t.node(static_cast<NodeId>(i));
        std::vector<int> kids;
        for (NodeId c : node.children) kids.push_back(code[c]);
        std::sort(kids.begin(), kids.end());
        std::string label = labelled ? node.strike.to_string() : std::string();
        auto [it, fresh] = intern.try_emplace({std::move(label), std::move(kids)}, static_cast<int>(intern.size()));
        code[i] = it->second;
    }
    return code;
}

void canonical_search(const PrefixTree& x, const PrefixTree& y, TreeIsomorphismReport& r) {
    std::map<std::pair<std::string, std::vector<int>>, int> shape, labelled;
    const Codes sx = canonical(x, false, shape), sy = canonical(y, false, shape);
    const Codes lx = canonical(x, true, labelled), ly = canonical(y, true, labelled);
    r.structure_ok = sx[0] == sy[0];
    r.strike_values_ok = lx[0] == ly[0];
    if (r.strike_values_ok) return;
    // Descend along the first differing pair under a code-sorted matching.
    NodeId i = 0, j = 0;
    for (;;) {
        const TreeNode& u = x.node(i);
        const TreeNode& v = y.node(j);
        if (!(u.strike == v.strike) || u.children.size() != v.children.size()) break;
        auto cu = u.children, cv = v.children;
        std::sort(cu.begin(), cu.end(), [&](NodeId a, NodeId b) { return lx[a] < lx[b]; });
        std::sort(cv.begin(), cv.end(), [&](NodeId a, NodeId b) { return ly[a] < ly[b]; });
        std::size_t k = 0;
        while (k < cu.size() && lx[cu[k]] == ly[cv[k]]) ++k;
        if (k == cu.size()) break;
        i = cu[k];
        j = cv[k];
    }
    r.first_mismatch = std::pair{x.node(i).prefix, y.node(j).prefix};
}

}  // namespace

TreeIsomorphismReport verify_tree_isomorphism(const PatternClass& a, const PatternClass& b, std::size_t n) {
    TreeIsomorphismReport r;
    r.a = a;
    r.b = b;
    r.n = n;
    const Permutation p231{2, 3, 1}, p132{1, 3, 2}, p321{3, 2, 1}, p312{3, 1, 2};
    const bool upsilon_pair = (is_class(a, p231) && is_class(b, p132)) || (is_class(a, p132) && is_class(b, p231));
    const bool west_pair = (is_class(a, p321) && is_class(b, p312)) || (is_class(a, p312) && is_class(b, p321));

    if (upsilon_pair || west_pair) {
        const bool swapped = is_class(a, p132) || is_class(a, p312);
        const PrefixTree x = PrefixTree::build(swapped ? b : a, n);
        const PrefixTree y = PrefixTree::build(swapped ? a : b, n);
        std::vector<NodeId> map(x.size(), 0);
        if (upsilon_pair) {
            r.method = "upsilon";
            bool complete = true;
            for (NodeId i = 0; i < x.size(); ++i) {
                const auto j = y.find(upsilon(x.node(i).prefix));
                if (!j) {
                    complete = false;
                    auto p = x.node(i).prefix, q = upsilon(p);
                    if (swapped) std::swap(p, q);
                    if (!r.first_mismatch) r.first_mismatch = std::pair{p, q};
                    continue;
                }
                map[i] = *j;
            }
            if (!complete) return r;
        } else {
            r.method = "west";
            try {
                map = west_map(x, y);
            } catch (const InconsistencyError&) {
                r.first_mismatch = std::pair{x.node(0).prefix, y.node(0).prefix};
                return r;
            }
        }
        check_map(x, y, map, r, swapped);
        return r;
    }

    if (n > kCanonicalSearchMaxRank)
        throw LimitError("canonical search is limited to N <= " + std::to_string(kCanonicalSearchMaxRank));
    r.method = "canonical-search";
    canonical_search(PrefixTree::build(a, n), PrefixTree::build(b, n), r);
    return r;
}

PhiTransferReport check_phi_transfer(const PrefixTree& t) {
    if (!is_class(t.pattern_class(), k231)) throw InvalidInput("phi transfer is a statement about Av(231)");
    PhiTransferReport report;
    const std::size_t n = t.rank();
    const int top = static_cast<int>(n);
    auto winnable = [&](NodeId id) {
        std::vector<Permutation> out;
        const std::size_t depth = t.node(id).prefix.size();
        for (NodeId leaf = id; leaf < t.node(id).subtree_end; ++leaf)
            if (t.is_leaf(leaf) && t.node(leaf).prefix.at(depth) == top) out.push_back(t.node(leaf).prefix);
        return out;
    };
    for (NodeId id = 0; id < t.size(); ++id) {
        if (!t.node(id).eligible || t.is_leaf(id)) continue;
        ++report.prefixes_checked;
        std::set<Permutation> image;
        for (const auto& pi : winnable(id)) image.insert(phi(pi));
        std::set<Permutation> target;
        for (NodeId q : t.successors(id))
            for (auto& pi : winnable(q)) target.insert(std::move(pi));
        if (image.size() != winnable(id).size() || image != target) {
            report.ok = false;
            if (!report.first_failure) report.first_failure = t.node(id).prefix;
        }
    }
    return report;
}

}  // namespace beststop
