#include "beststop/pattern_class.hpp"

#include <algorithm>

#include "beststop/error.hpp"

namespace beststop {
namespace {

int size3_code(const PatternClass& cls) {
    const auto single = cls.single_size3();
    if (!single) return 0;
    return single->at(1) * 100 + single->at(2) * 10 + single->at(3);
}

// Largest a over inversions (b > a) of p; 0 if p is increasing.
int max_inversion_bottom(const Permutation& p) {
    int best = 0, running_max = 0;
    for (auto v : p.entries()) {
        if (v < running_max) best = std::max<int>(best, v);
        running_max = std::max<int>(running_max, v);
    }
    return best;
}

std::vector<int> children_321(const Permutation& p) {
    const int k = static_cast<int>(p.size());
    std::vector<int> out;
    for (int c = max_inversion_bottom(p) + 1; c <= k + 1; ++c) out.push_back(c);
    return out;
}

// Excludes a < j <= b for every inversion (b > a).
std::vector<int> children_312(const Permutation& p) {
    const int k = static_cast<int>(p.size());
    std::vector<bool> excluded(k + 2, false);
    const auto e = p.entries();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
            if (e[i] > e[j])
                for (int v = e[j] + 1; v <= e[i]; ++v) excluded[v] = true;
    std::vector<int> out;
    for (int c = 1; c <= k + 1; ++c)
        if (!excluded[c]) out.push_back(c);
    return out;
}

void walk(const PatternClass& cls, const Permutation& node, std::size_t n,
          const std::function<void(const Permutation&)>& visit, std::uint64_t& produced, std::uint64_t cap) {
    if (node.size() == n) {
        if (++produced > cap) throw LimitError("enumeration exceeded the configured member cap");
        visit(node);
        return;
    }
    for (int c : child_indices(node, cls)) walk(cls, append_child(node, c), n, visit, produced, cap);
}

}  // namespace

PatternClass::PatternClass(std::vector<Permutation> forbidden) : forbidden_(std::move(forbidden)) {
    for (const auto& f : forbidden_)
        if (f.empty()) throw InvalidInput("empty forbidden pattern");
    std::sort(forbidden_.begin(), forbidden_.end());
    forbidden_.erase(std::unique(forbidden_.begin(), forbidden_.end()), forbidden_.end());
}

PatternClass PatternClass::avoiding(const Permutation& pattern) { return PatternClass({pattern}); }

PatternClass PatternClass::parse(std::string_view name) {
    if (name == "none" || name == "unrestricted") return unrestricted();
    std::vector<Permutation> patterns;
    std::size_t pos = 0;
    while (pos <= name.size()) {
        const std::size_t comma = std::min(name.find(',', pos), name.size());
        patterns.push_back(Permutation::parse(name.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return PatternClass(std::move(patterns));
}

std::optional<Permutation> PatternClass::single_size3() const {
    if (forbidden_.size() == 1 && forbidden_[0].size() == 3) return forbidden_[0];
    return std::nullopt;
}

bool PatternClass::contains(const Permutation& pi) const {
    return std::none_of(forbidden_.begin(), forbidden_.end(),
                        [&](const Permutation& f) { return contains_pattern(pi, f); });
}

std::string PatternClass::name() const {
    if (forbidden_.empty()) return "none";
    std::string out;
    for (const auto& f : forbidden_) {
        if (!out.empty()) out += ',';
        out += f.to_string();
    }
    return out;
}

std::vector<int> child_indices_generic(const Permutation& p, const PatternClass& cls) {
    if (!cls.contains(p)) throw InvalidInput("prefix " + p.to_string() + " is not in class " + cls.name());
    std::vector<int> out;
    const int k = static_cast<int>(p.size());
    for (int c = 1; c <= k + 1; ++c)
        if (cls.contains(append_child(p, c))) out.push_back(c);
    return out;
}

std::vector<int> child_indices(const Permutation& p, const PatternClass& cls) {
    switch (size3_code(cls)) {
        case 321:
            if (contains_pattern(p, Permutation{3, 2, 1})) throw InvalidInput("prefix contains 321");
            return children_321(p);
        case 312:
            if (contains_pattern(p, Permutation{3, 1, 2})) throw InvalidInput("prefix contains 312");
            return children_312(p);
        default: break;
    }
    if (!cls.contains(p)) throw InvalidInput("prefix " + p.to_string() + " is not in class " + cls.name());
    // p is already a member, so only occurrences ending at the new entry matter.
    std::vector<int> out;
    const int k = static_cast<int>(p.size());
    for (int c = 1; c <= k + 1; ++c) {
        const Permutation child = append_child(p, c);
        const bool blocked = std::any_of(cls.forbidden().begin(), cls.forbidden().end(),
                                         [&](const Permutation& f) { return contains_pattern_at_end(child, f); });
        if (!blocked) out.push_back(c);
    }
    return out;
}

void enumerate(const PatternClass& cls, std::size_t n, const std::function<void(const Permutation&)>& visit,
               EnumerationLimits limits) {
    if (n < 1) throw InvalidInput("enumeration size must be at least 1");
    std::uint64_t produced = 0;
    if (!cls.contains(Permutation{1})) return;
    walk(cls, Permutation{1}, n, visit, produced, limits.max_members);
}

std::vector<Permutation> enumerate_all(const PatternClass& cls, std::size_t n, EnumerationLimits limits) {
    std::vector<Permutation> out;
    enumerate(cls, n, [&](const Permutation& p) { out.push_back(p); }, limits);
    return out;
}

}  // namespace beststop
