#pragma once

#include <atomic>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beststop/tally.hpp"

namespace beststop {

enum class Mode { strike, trigger };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

// Threshold per deficit i = N - k. rules[i] = sigma(i); nullopt (or i past the
// end) means the rule never selects on that diagonal.
using FrozenRules = std::vector<std::optional<std::size_t>>;

// Row N of a B-triangle. Entries are indexed by k = 0..N. In strike mode
// b[0] repeats b[1] (the empty prefix behaves like [1]) and fires[0] is false.
struct TriangleRow {
    std::size_t n = 0;
    std::vector<BigInt> b;           // numerator of the best value strictly below [12..k]
    std::vector<BigInt> select;      // numerator of stopping (S) or triggering (T) at [12..k]
    std::vector<bool> fires;         // whether the strategy selects at [12..k]

    // Numerator of the best value at [12..k] including the option to select there.
    const BigInt& closed(std::size_t k) const { return fires[k] ? select[k] : b[k]; }
};

// Whether the strategy selects at [12..k] in row n: frozen rules when given,
// otherwise select >= below (strike) or select > below (trigger).
bool selects(Mode mode, const std::optional<FrozenRules>& frozen, std::size_t n, std::size_t k, const BigInt& select,
             const BigInt& below);
// Numerator of stopping (strike) or triggering at [12..k] in row n.
BigInt select_numerator(Mode mode, std::size_t n, std::size_t k);

// Produces rows 1, 2, 3, ... keeping only what the next row needs.
class RowStepper {
public:
    explicit RowStepper(Mode mode, std::optional<FrozenRules> frozen = std::nullopt);
    const TriangleRow& next();
    std::size_t rows_done() const { return n_; }

private:
    Mode mode_;
    std::optional<FrozenRules> frozen_;
    std::size_t n_ = 0;
    TriangleRow row_;
    std::vector<BigInt> d_;        // strike mode running sums
    std::vector<BigInt> pascal_;   // binom(n-1, j)
};

// Numerators B-degree_N(12..k) with implicit ballot denominators, cached by row.
// Rows are append-only; readers may run concurrently with extend_to.
class BTriangle {
public:
    explicit BTriangle(Mode mode, std::optional<FrozenRules> frozen = std::nullopt);
    // Rebuilds cached rows (b values for k = 0..N per row); selection
    // numerators and flags are recomputed.
    static std::unique_ptr<BTriangle> from_rows(Mode mode, std::optional<FrozenRules> frozen,
                                                const std::vector<std::vector<BigInt>>& b_rows);

    Mode mode() const { return mode_; }
    const std::optional<FrozenRules>& frozen() const { return frozen_; }
    std::size_t first_column() const { return mode_ == Mode::strike ? 1 : 0; }

    void extend_to(std::size_t rows);
    std::size_t rows() const { return published_.load(std::memory_order_acquire); }
    // Throws DepthError when row n has not been computed.
    const TriangleRow& row(std::size_t n) const;

    const BigInt& numerator(std::size_t n, std::size_t k) const;
    bool optimal(std::size_t n, std::size_t k) const;
    BigInt denominator(std::size_t n, std::size_t k) const;
    // Optimal success probability at rank n for the restricted class.
    Tally optimal_value(std::size_t n) const;

private:
    Mode mode_;
    std::optional<FrozenRules> frozen_;
    mutable std::mutex write_;
    RowStepper stepper_;
    std::deque<TriangleRow> rows_;
    std::atomic<std::size_t> published_{0};
};

// Streams rows 1..max_n without caching them.
void for_each_row(Mode mode, std::size_t max_n, const std::function<void(const TriangleRow&)>& visit,
                  std::optional<FrozenRules> frozen = std::nullopt);

// sigma(i): leftmost selecting column on the diagonal N - k = i.
class SigmaTable {
public:
    SigmaTable() = default;
    SigmaTable(Mode mode, std::size_t depth, std::vector<std::optional<std::size_t>> values);

    Mode mode() const { return mode_; }
    // Largest rank the table is valid for.
    std::size_t depth() const { return depth_; }
    // nullopt: no column selects on this diagonal for ranks up to depth().
    // Throws DepthError for i >= depth().
    std::optional<std::size_t> at(std::size_t i) const;
    // Whether the rule selects at an increasing-like prefix with statistic s.
    bool fires(std::size_t deficit, std::size_t statistic) const;
    std::string to_csv() const;

private:
    Mode mode_ = Mode::strike;
    std::size_t depth_ = 0;
    std::vector<std::optional<std::size_t>> values_;
};

SigmaTable boundary_sigma(const BTriangle& t);
// Table of the given depth induced by frozen rules.
SigmaTable sigma_from_rules(Mode mode, const FrozenRules& rules, std::size_t depth);

// First (N, k) breaking "selecting entries form a suffix of each row and
// persist down diagonals", if any.
std::optional<std::pair<std::size_t, std::size_t>> boundary_violation(const BTriangle& t);

std::string triangle_csv(const BTriangle& t, std::size_t from = 1);

using Coefficients = std::vector<std::pair<int, ExactRational>>;

struct FitSpec {
    std::size_t diagonal = 5;    // fit and verify entries with k <= N - diagonal
    std::size_t first_row = 11;
    std::vector<int> shifts;
    std::size_t anchor_rows = 8; // diagonal cells used as equations
    std::size_t verify_to = 30;
};

struct FitResult {
    Coefficients coefficients;
    std::size_t verified_from = 0;
    std::size_t verified_to = 0;
    std::size_t diagonal = 0;
};

using EntryFn = std::function<BigInt(std::size_t n, std::size_t k)>;

// Solves for c with entry(N, k) = sum c_i C_i(N, k) by exact elimination, then
// checks every entry of the region. Throws FitError on a singular system and
// InconsistencyError naming the first mismatching entry.
FitResult fit_shifted_ballot(const EntryFn& entry, const FitSpec& spec);
FitResult fit_shifted_ballot(const BTriangle& t, const FitSpec& spec);

ExactRational combination_value(const Coefficients& c, std::size_t n, std::size_t k);
// sum c_i / 4^i
ExactRational limit_of_combination(const Coefficients& c);

}  // namespace beststop
