#pragma once

// Brute-force reference implementations. Nothing here uses the library's
// enumeration, containment or tree code: permutations are plain int vectors,
// classes are filtered from all n! orderings, and probabilities are counted.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Perm = std::vector<int>;

inline Perm flatten(const std::vector<int>& seq) {
    std::vector<int> sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    Perm out;
    for (int v : seq) out.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) + 1);
    return out;
}

inline Perm prefix(const Perm& p, std::size_t i) { return flatten(std::vector<int>(p.begin(), p.begin() + i)); }

// Tries every subsequence of the right length.
inline bool contains(const Perm& p, const Perm& pattern) {
    const std::size_t n = p.size(), k = pattern.size();
    if (k > n) return false;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<int> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) sub.push_back(p[i]);
        if (flatten(sub) == pattern) return true;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return false;
}

inline std::vector<Perm> all(std::size_t n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 1);
    std::vector<Perm> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Empty pattern list means every permutation.
inline std::vector<Perm> avoiders(std::size_t n, const std::vector<Perm>& patterns) {
    std::vector<Perm> out;
    for (auto& p : all(n)) {
        bool ok = true;
        for (const auto& q : patterns) ok = ok && !contains(p, q);
        if (ok) out.push_back(p);
    }
    return out;
}

inline std::vector<std::size_t> ltr_positions(const Perm& p) {
    std::vector<std::size_t> out;
    int best = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > best) {
            best = p[i];
            out.push_back(i + 1);
        }
    return out;
}

struct Count {
    std::uint64_t wins = 0, total = 0;
};

// Members with prefix flattening q; wins have N at position |q|.
inline Count strike(const std::vector<Perm>& members, const Perm& q) {
    Count c;
    for (const auto& p : members) {
        if (prefix(p, q.size()) != q) continue;
        ++c.total;
        if (p[q.size() - 1] == static_cast<int>(p.size())) ++c.wins;
    }
    return c;
}

// Wins: reject through position |q| and the next left-to-right maximum is N.
inline Count trigger(const std::vector<Perm>& members, const Perm& q) {
    Count c;
    for (const auto& p : members) {
        if (!q.empty() && prefix(p, q.size()) != q) continue;
        ++c.total;
        int best = 0;
        for (std::size_t i = 0; i < q.size(); ++i) best = std::max(best, p[i]);
        for (std::size_t i = q.size(); i < p.size(); ++i)
            if (p[i] > best) {
                if (p[i] == static_cast<int>(p.size())) ++c.wins;
                break;
            }
    }
    return c;
}

// Distinct prefix flattenings of the members at every size.
inline std::vector<Perm> nodes(const std::vector<Perm>& members) {
    std::vector<Perm> out;
    for (const auto& p : members)
        for (std::size_t i = 1; i <= p.size(); ++i) out.push_back(prefix(p, i));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool is_prefix_of(const Perm& a, const Perm& b) { return a.size() <= b.size() && prefix(b, a.size()) == a; }

using CountFn = Count (*)(const std::vector<Perm>&, const Perm&);

// Win counts of every complete antichain (cut) of the prefix tree below q,
// one entry per cut: either select q, or pick a cut below each child.
inline std::vector<std::uint64_t> cut_values(const std::vector<Perm>& members, const std::vector<Perm>& all_nodes,
                                             const Perm& q, CountFn count = strike) {
    std::vector<std::uint64_t> out{count(members, q).wins};
    if (q.size() == members.front().size()) return out;
    std::vector<std::uint64_t> combos{0};
    for (const auto& c : all_nodes) {
        if (c.size() != q.size() + 1 || !is_prefix_of(q, c)) continue;
        const auto below = cut_values(members, all_nodes, c, count);
        std::vector<std::uint64_t> next;
        next.reserve(combos.size() * below.size());
        for (auto a : combos)
            for (auto b : below) next.push_back(a + b);
        combos = std::move(next);
    }
    out.insert(out.end(), combos.begin(), combos.end());
    return out;
}

}  // namespace oracle
