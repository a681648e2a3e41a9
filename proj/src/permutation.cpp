#include "beststop/permutation.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "beststop/error.hpp"
#include "beststop/kernels.hpp"

namespace beststop {
namespace {

void check_bijection(const std::vector<std::uint8_t>& e) {
    if (e.size() > Permutation::kMaxSize) throw InvalidInput("permutation longer than 255 entries");
    std::vector<bool> seen(e.size() + 1, false);
    for (auto v : e) {
        if (v < 1 || v > e.size() || seen[v])
            throw InvalidInput("entries are not a permutation of 1..n");
        seen[v] = true;
    }
}

// Size-3 containment scans. Each is O(n) or O(n^2) on the entry bytes.
bool has_123(std::span<const std::uint8_t> a) {
    int low = 256, mid = 256;
    for (int v : a) {
        if (v > mid) return true;
        if (v > low) mid = std::min(mid, v);
        low = std::min(low, v);
    }
    return false;
}

bool has_321(std::span<const std::uint8_t> a) {
    int high = -1, mid = -1;
    for (int v : a) {
        if (v < mid) return true;
        if (v < high) mid = std::max(mid, v);
        high = std::max(high, v);
    }
    return false;
}

// 132: i<j<k with a_i < a_k < a_j.
bool has_132(std::span<const std::uint8_t> a) {
    int low = 256;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (low < a[j]) {
            for (std::size_t k = j + 1; k < a.size(); ++k)
                if (low < a[k] && a[k] < a[j]) return true;
        }
        low = std::min<int>(low, a[j]);
    }
    return false;
}

// 312: i<j<k with a_j < a_k < a_i.
bool has_312(std::span<const std::uint8_t> a) {
    int high = -1;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (high > a[j]) {
            for (std::size_t k = j + 1; k < a.size(); ++k)
                if (a[j] < a[k] && a[k] < high) return true;
        }
        high = std::max<int>(high, a[j]);
    }
    return false;
}

// 213: i<j<k with a_j < a_i < a_k. For each j, the best "2" is the smallest
// earlier value above a_j; a later value above it completes the pattern.
bool has_213(std::span<const std::uint8_t> a) {
    std::vector<int> suffix_max(a.size() + 1, -1);
    for (std::size_t k = a.size(); k-- > 0;) suffix_max[k] = std::max<int>(suffix_max[k + 1], a[k]);
    for (std::size_t j = 1; j + 1 < a.size(); ++j) {
        int two = 256;
        for (std::size_t i = 0; i < j; ++i)
            if (a[i] > a[j]) two = std::min<int>(two, a[i]);
        if (two < suffix_max[j + 1]) return true;
    }
    return false;
}

// 231: i<j<k with a_k < a_i < a_j. For each j, the best "2" is the largest
// earlier value below a_j; a later value below it completes the pattern.
bool has_231(std::span<const std::uint8_t> a) {
    std::vector<int> suffix_min(a.size() + 1, 256);
    for (std::size_t k = a.size(); k-- > 0;) suffix_min[k] = std::min<int>(suffix_min[k + 1], a[k]);
    for (std::size_t j = 1; j + 1 < a.size(); ++j) {
        int two = -1;
        for (std::size_t i = 0; i < j; ++i)
            if (a[i] < a[j]) two = std::max<int>(two, a[i]);
        if (two > suffix_min[j + 1]) return true;
    }
    return false;
}

// Backtracking subsequence search: place pattern entries left to right,
// pruning as soon as a chosen entry breaks the relative order so far.
bool embed(std::span<const std::uint8_t> a, std::span<const std::uint8_t> rho, std::size_t depth,
           std::size_t start, std::vector<std::uint8_t>& chosen, bool must_end_last) {
    const std::size_t m = rho.size();
    if (depth == m) return true;
    const std::size_t remaining = m - depth;
    for (std::size_t pos = start; pos + remaining <= a.size(); ++pos) {
        if (must_end_last && depth + 1 == m && pos + 1 != a.size()) continue;
        bool ok = true;
        for (std::size_t d = 0; d < depth && ok; ++d)
            ok = (rho[d] < rho[depth]) == (chosen[d] < a[pos]);
        if (!ok) continue;
        chosen[depth] = a[pos];
        if (embed(a, rho, depth + 1, pos + 1, chosen, must_end_last)) return true;
    }
    return false;
}

std::uint32_t ltr_mask_any(std::span<const std::uint8_t> e) {
    return kernels::ltr_max_mask(e.data(), e.size());
}

}  // namespace

Permutation::Permutation(std::vector<std::uint8_t> entries) : entries_(std::move(entries)) { check_bijection(entries_); }

Permutation::Permutation(std::initializer_list<int> entries) {
    entries_.reserve(entries.size());
    for (int v : entries) {
        if (v < 1 || v > 255) throw InvalidInput("permutation value out of range");
        entries_.push_back(static_cast<std::uint8_t>(v));
    }
    check_bijection(entries_);
}

Permutation Permutation::identity(std::size_t n) {
    if (n > kMaxSize) throw InvalidInput("permutation longer than 255 entries");
    Permutation p;
    p.entries_.resize(n);
    std::iota(p.entries_.begin(), p.entries_.end(), std::uint8_t{1});
    return p;
}

Permutation Permutation::from_trusted(std::span<const std::uint8_t> entries) {
    Permutation p;
    p.entries_.assign(entries.begin(), entries.end());
    return p;
}

std::size_t Permutation::position_of(int value) const {
    auto it = std::find(entries_.begin(), entries_.end(), value);
    if (it == entries_.end()) throw NotFound("value not present in permutation");
    return static_cast<std::size_t>(it - entries_.begin()) + 1;
}

std::string Permutation::to_string() const {
    std::string out;
    const bool compact = entries_.size() <= 9;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!compact && i > 0) out += ',';
        out += std::to_string(entries_[i]);
    }
    return out;
}

Permutation Permutation::parse(std::string_view text) {
    std::vector<std::uint8_t> values;
    if (text.empty()) throw InvalidInput("empty permutation literal");
    if (text.find(',') == std::string_view::npos) {
        for (char ch : text) {
            if (ch < '1' || ch > '9') throw InvalidInput("bad digit in permutation literal: " + std::string(text));
            values.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t comma = std::min(text.find(',', pos), text.size());
            int v = 0;
            auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + comma, v);
            if (ec != std::errc{} || ptr != text.data() + comma || v < 1 || v > 255)
                throw InvalidInput("bad entry in permutation literal: " + std::string(text));
            values.push_back(static_cast<std::uint8_t>(v));
            pos = comma + 1;
        }
    }
    return Permutation(std::move(values));
}

Permutation flatten(std::span<const int> sequence) {
    if (sequence.empty()) throw InvalidInput("cannot flatten an empty sequence");
    if (sequence.size() > Permutation::kMaxSize) throw InvalidInput("sequence longer than 255 entries");
    std::vector<int> sorted(sequence.begin(), sequence.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidInput("flatten requires distinct entries");
    std::vector<std::uint8_t> out(sequence.size());
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), sequence[i]);
        out[i] = static_cast<std::uint8_t>(it - sorted.begin() + 1);
    }
    return Permutation::from_trusted(out);
}

Permutation flatten(std::initializer_list<int> sequence) {
    return flatten(std::span<const int>(sequence.begin(), sequence.size()));
}

Permutation prefix_flattening(const Permutation& pi, std::size_t i) {
    if (i < 1 || i > pi.size()) throw InvalidInput("prefix length out of range");
    std::uint8_t out[Permutation::kMaxSize];
    kernels::rank(pi.entries().data(), i, out);
    return Permutation::from_trusted({out, i});
}

bool contains_pattern(const Permutation& pi, const Permutation& pattern) {
    const auto a = pi.entries();
    const auto rho = pattern.entries();
    if (rho.size() > a.size()) return false;
    if (rho.empty()) return true;
    if (rho.size() == 3) {
        const int code = rho[0] * 100 + rho[1] * 10 + rho[2];
        switch (code) {
            case 123: return has_123(a);
            case 132: return has_132(a);
            case 213: return has_213(a);
            case 231: return has_231(a);
            case 312: return has_312(a);
            case 321: return has_321(a);
            default: break;
        }
    }
    std::vector<std::uint8_t> chosen(rho.size());
    return embed(a, rho, 0, 0, chosen, false);
}

bool contains_pattern_at_end(const Permutation& pi, const Permutation& pattern) {
    const auto a = pi.entries();
    const auto rho = pattern.entries();
    if (rho.empty() || rho.size() > a.size()) return false;
    std::vector<std::uint8_t> chosen(rho.size());
    return embed(a, rho, 0, 0, chosen, true);
}

std::vector<std::size_t> ltr_maxima(const Permutation& pi) {
    std::vector<std::size_t> out;
    const auto e = pi.entries();
    if (e.size() <= kernels::kMaxLanes) {
        std::uint32_t mask = ltr_mask_any(e);
        while (mask) {
            out.push_back(static_cast<std::size_t>(__builtin_ctz(mask)) + 1);
            mask &= mask - 1;
        }
        return out;
    }
    int best = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] > best) {
            best = e[i];
            out.push_back(i + 1);
        }
    }
    return out;
}

bool is_eligible(const Permutation& p) {
    if (p.empty()) return false;
    const auto e = p.entries();
    return std::all_of(e.begin(), e.end() - 1, [&](std::uint8_t v) { return v < e.back(); });
}

std::size_t value_saturated_count(const Permutation& p) {
    const std::size_t k = p.size();
    if (k == 0) return 0;
    std::vector<bool> is_max_value(k + 1, false);
    int best = 0;
    for (auto v : p.entries()) {
        if (v > best) {
            best = v;
            is_max_value[v] = true;
        }
    }
    std::size_t count = 0;
    while (count < k && is_max_value[k - count]) ++count;
    return count;
}

bool has_inversion(const Permutation& p) {
    const auto e = p.entries();
    return std::adjacent_find(e.begin(), e.end(), std::greater<>{}) != e.end();
}

Permutation append_child(const Permutation& p, int c) {
    const std::size_t k = p.size();
    if (c < 1 || static_cast<std::size_t>(c) > k + 1) throw InvalidInput("child index out of range");
    if (k + 1 > Permutation::kMaxSize) throw InvalidInput("permutation longer than 255 entries");
    std::uint8_t out[Permutation::kMaxSize];
    kernels::insert_last(p.entries().data(), k, static_cast<std::uint8_t>(c), out);
    return Permutation::from_trusted({out, k + 1});
}

Permutation remove_min(const Permutation& p) {
    std::vector<std::uint8_t> out;
    out.reserve(p.size());
    for (auto v : p.entries())
        if (v != 1) out.push_back(static_cast<std::uint8_t>(v - 1));
    return Permutation::from_trusted(out);
}

}  // namespace beststop
