#include "beststop/triangle.hpp"

#include <sstream>

#include "beststop/error.hpp"
#include "beststop/numbers.hpp"

namespace beststop {

std::string_view to_string(Mode mode) { return mode == Mode::strike ? "strike" : "trigger"; }

Mode parse_mode(std::string_view text) {
    if (text == "strike") return Mode::strike;
    if (text == "trigger") return Mode::trigger;
    throw InvalidInput("unknown mode '" + std::string(text) + "' (expected strike or trigger)");
}

RowStepper::RowStepper(Mode mode, std::optional<FrozenRules> frozen) : mode_(mode), frozen_(std::move(frozen)) {}

bool selects(Mode mode, const std::optional<FrozenRules>& frozen, std::size_t n, std::size_t k, const BigInt& select,
             const BigInt& below) {
    if (frozen) {
        const std::size_t i = n - k;
        if (i >= frozen->size() || !(*frozen)[i]) return false;
        return k >= *(*frozen)[i];
    }
    // Strike ties select (gives sigma(1) = 1); trigger ties do not.
    return mode == Mode::strike ? select >= below : select > below;
}

BigInt select_numerator(Mode mode, std::size_t n, std::size_t k) {
    const auto m = static_cast<std::int64_t>(n), kk = static_cast<std::int64_t>(k);
    if (mode == Mode::strike) return binomial(m - 1, (k == 0 ? 1 : kk) - 1);
    return BigInt(static_cast<unsigned long>(k)) * binomial(m - 1, kk + 1) + binomial(m - 1, kk);
}

const TriangleRow& RowStepper::next() {
    const std::size_t n = ++n_;
    // pascal_ becomes binom(n-1, .)
    if (n == 1) {
        pascal_.assign(1, 1);
    } else {
        pascal_.emplace_back(0);
        for (std::size_t j = pascal_.size() - 1; j > 0; --j) pascal_[j] += pascal_[j - 1];
    }
    auto binom = [&](std::size_t j) -> BigInt { return j < pascal_.size() ? pascal_[j] : BigInt(0); };

    TriangleRow row;
    row.n = n;
    row.b.assign(n + 1, 0);
    row.select.assign(n + 1, 0);
    row.fires.assign(n + 1, false);

    if (mode_ == Mode::strike) {
        std::vector<BigInt> d(n + 1, 0);
        for (std::size_t k = n; k >= 1; --k) {
            if (k < n) {
                // d_N(k) = B_{N-1}(k) + d_{N-1}(k-1)
                if (k < row_.b.size()) d[k] = row_.b[k];
                if (k >= 2 && k - 1 < d_.size()) d[k] += d_[k - 1];
                row.b[k] = row.closed(k + 1) + d[k];
            }
            row.select[k] = binom(k - 1);
            row.fires[k] = selects(mode_, frozen_, n, k, row.select[k], row.b[k]);
        }
        row.b[0] = row.b[1];
        row.select[0] = row.select[1];
        d_ = std::move(d);
    } else {
        for (std::size_t k = n + 1; k-- > 0;) {
            if (k < n) {
                if (k == 0) {
                    row.b[0] = row.closed(1);
                } else {
                    if (k - 1 < row_.b.size()) row.b[k] = row_.b[k - 1];
                    row.b[k] += row.closed(k + 1);
                }
            }
            row.select[k] = BigInt(static_cast<unsigned long>(k)) * binom(k + 1) + binom(k);
            row.fires[k] = selects(mode_, frozen_, n, k, row.select[k], row.b[k]);
        }
    }
    row_ = std::move(row);
    return row_;
}

BTriangle::BTriangle(Mode mode, std::optional<FrozenRules> frozen)
    : mode_(mode), frozen_(frozen), stepper_(mode, std::move(frozen)) {}

std::unique_ptr<BTriangle> BTriangle::from_rows(Mode mode, std::optional<FrozenRules> frozen,
                                                const std::vector<std::vector<BigInt>>& b_rows) {
    auto t = std::make_unique<BTriangle>(mode, frozen);
    for (std::size_t i = 0; i < b_rows.size(); ++i) {
        const std::size_t n = i + 1;
        if (b_rows[i].size() != n + 1) throw InvalidInput("cached row " + std::to_string(n) + " has the wrong length");
        TriangleRow row;
        row.n = n;
        row.b = b_rows[i];
        row.select.resize(n + 1);
        row.fires.assign(n + 1, false);
        for (std::size_t k = t->first_column(); k <= n; ++k) {
            row.select[k] = select_numerator(mode, n, k);
            row.fires[k] = selects(mode, frozen, n, k, row.select[k], row.b[k]);
        }
        if (mode == Mode::strike) row.select[0] = row.select[1];
        t->rows_.push_back(std::move(row));
    }
    t->published_.store(t->rows_.size(), std::memory_order_release);
    return t;
}

void BTriangle::extend_to(std::size_t rows) {
    std::lock_guard lock(write_);
    // Rows adopted from a cache: replay the stepper up to them first.
    while (rows_.size() < rows && stepper_.rows_done() < rows_.size()) stepper_.next();
    while (rows_.size() < rows) {
        rows_.push_back(stepper_.next());
        published_.store(rows_.size(), std::memory_order_release);
    }
}

const TriangleRow& BTriangle::row(std::size_t n) const {
    if (n == 0 || n > rows())
        throw DepthError("triangle row " + std::to_string(n) + " not computed (have " + std::to_string(rows()) + ")");
    return rows_[n - 1];
}

const BigInt& BTriangle::numerator(std::size_t n, std::size_t k) const {
    const TriangleRow& r = row(n);
    if (k > n) throw InvalidInput("column out of range");
    return r.b[k];
}

bool BTriangle::optimal(std::size_t n, std::size_t k) const {
    const TriangleRow& r = row(n);
    if (k > n) throw InvalidInput("column out of range");
    return r.fires[k];
}

BigInt BTriangle::denominator(std::size_t n, std::size_t k) const {
    return ballot(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k));
}

Tally BTriangle::optimal_value(std::size_t n) const {
    const std::size_t k = first_column();
    return Tally(row(n).closed(k), denominator(n, k));
}

void for_each_row(Mode mode, std::size_t max_n, const std::function<void(const TriangleRow&)>& visit,
                  std::optional<FrozenRules> frozen) {
    RowStepper stepper(mode, std::move(frozen));
    for (std::size_t n = 1; n <= max_n; ++n) visit(stepper.next());
}

SigmaTable::SigmaTable(Mode mode, std::size_t depth, std::vector<std::optional<std::size_t>> values)
    : mode_(mode), depth_(depth), values_(std::move(values)) {
    values_.resize(depth_);
}

std::optional<std::size_t> SigmaTable::at(std::size_t i) const {
    if (i >= depth_)
        throw DepthError("sigma(" + std::to_string(i) + ") requested but the table covers i < " +
                         std::to_string(depth_));
    return values_[i];
}

bool SigmaTable::fires(std::size_t deficit, std::size_t statistic) const {
    const auto s = at(deficit);
    return s && statistic >= *s;
}

std::string SigmaTable::to_csv() const {
    std::ostringstream out;
    out << "i,sigma\n";
    for (std::size_t i = 0; i < depth_; ++i)
        if (values_[i]) out << i << ',' << *values_[i] << '\n';
    return out.str();
}

SigmaTable boundary_sigma(const BTriangle& t) {
    const std::size_t depth = t.rows();
    std::vector<std::optional<std::size_t>> values(depth);
    for (std::size_t n = 1; n <= depth; ++n) {
        const TriangleRow& r = t.row(n);
        for (std::size_t k = t.first_column(); k <= n; ++k) {
            const std::size_t i = n - k;
            if (r.fires[k] && i < depth && (!values[i] || k < *values[i])) values[i] = k;
        }
    }
    return SigmaTable(t.mode(), depth, std::move(values));
}

SigmaTable sigma_from_rules(Mode mode, const FrozenRules& rules, std::size_t depth) {
    std::vector<std::optional<std::size_t>> values(depth);
    for (std::size_t i = 0; i < depth && i < rules.size(); ++i) values[i] = rules[i];
    return SigmaTable(mode, depth, std::move(values));
}

std::optional<std::pair<std::size_t, std::size_t>> boundary_violation(const BTriangle& t) {
    const std::size_t rows = t.rows();
    for (std::size_t n = 2; n <= rows; ++n) {
        const TriangleRow& r = t.row(n);
        bool seen = false;
        for (std::size_t k = t.first_column(); k + 1 <= n; ++k) {
            if (seen && !r.fires[k]) return std::pair{n, k};
            seen = seen || r.fires[k];
            if (r.fires[k] && n + 1 <= rows && !t.row(n + 1).fires[k + 1]) return std::pair{n + 1, k + 1};
        }
    }
    return std::nullopt;
}

std::string triangle_csv(const BTriangle& t, std::size_t from) {
    std::ostringstream out;
    out << "N,k,numerator,denominator,optimal\n";
    for (std::size_t n = std::max<std::size_t>(from, 2); n <= t.rows(); ++n) {
        const TriangleRow& r = t.row(n);
        for (std::size_t k = t.first_column(); k < n; ++k)
            out << n << ',' << k << ',' << r.b[k].get_str() << ',' << t.denominator(n, k).get_str() << ','
                << (r.fires[k] ? 1 : 0) << '\n';
    }
    return out.str();
}

namespace {

BigInt shifted(int shift, std::size_t n, std::size_t k) {
    return shifted_ballot(shift, static_cast<std::int64_t>(n), static_cast<std::int64_t>(k));
}

// Exact elimination on an m x u system (m >= u); nullopt if singular.
std::optional<std::vector<mpq_class>> solve_exact(std::vector<std::vector<mpq_class>> a, std::size_t unknowns,
                                                  bool& consistent) {
    consistent = true;
    std::size_t r = 0;
    for (std::size_t c = 0; c < unknowns; ++c) {
        std::size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) return std::nullopt;
        std::swap(a[r], a[p]);
        const mpq_class pivot = a[r][c];
        for (auto& x : a[r]) x /= pivot;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            const mpq_class f = a[i][c];
            for (std::size_t j = c; j <= unknowns; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    for (std::size_t i = r; i < a.size(); ++i)
        if (a[i][unknowns] != 0) consistent = false;
    std::vector<mpq_class> x(unknowns);
    for (std::size_t i = 0; i < unknowns; ++i) x[i] = a[i][unknowns];
    return x;
}

}  // namespace

FitResult fit_shifted_ballot(const EntryFn& entry, const FitSpec& spec) {
    if (spec.shifts.empty()) throw FitError("no shifts to fit");
    const std::size_t d = spec.diagonal, n0 = spec.first_row;
    if (n0 <= d) throw FitError("first row must exceed the diagonal offset");

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t n = n0; n < n0 + spec.anchor_rows; ++n) cells.emplace_back(n, n - d);
    for (std::size_t k = 1; k + d < n0; ++k) cells.emplace_back(n0, k);

    const std::size_t u = spec.shifts.size();
    std::vector<std::vector<mpq_class>> a;
    for (auto [n, k] : cells) {
        std::vector<mpq_class> eq;
        for (int s : spec.shifts) eq.emplace_back(shifted(s, n, k));
        eq.emplace_back(entry(n, k));
        a.push_back(std::move(eq));
    }
    bool consistent = true;
    auto x = solve_exact(std::move(a), u, consistent);
    if (!x) throw FitError("shifted-ballot fit system is singular");
    if (!consistent) throw InconsistencyError("shifted-ballot fit system is inconsistent on its anchor cells");

    FitResult result;
    result.diagonal = d;
    for (std::size_t i = 0; i < u; ++i) result.coefficients.emplace_back(spec.shifts[i], ExactRational((*x)[i]));

    for (std::size_t n = n0; n <= spec.verify_to; ++n)
        for (std::size_t k = 1; k + d <= n; ++k) {
            const ExactRational fitted = combination_value(result.coefficients, n, k);
            if (fitted != ExactRational(mpq_class(entry(n, k))))
                throw InconsistencyError("fit disagrees with the triangle at (" + std::to_string(n) + "," +
                                         std::to_string(k) + "): " + fitted.to_string() + " vs " +
                                         entry(n, k).get_str());
        }
    result.verified_from = n0;
    result.verified_to = spec.verify_to;
    return result;
}

FitResult fit_shifted_ballot(const BTriangle& t, const FitSpec& spec) {
    const std::size_t need = std::max(spec.verify_to, spec.first_row + spec.anchor_rows - 1);
    if (t.rows() < need) throw DepthError("triangle needs " + std::to_string(need) + " rows for this fit");
    return fit_shifted_ballot([&t](std::size_t n, std::size_t k) { return t.numerator(n, k); }, spec);
}

ExactRational combination_value(const Coefficients& c, std::size_t n, std::size_t k) {
    mpq_class sum = 0;
    for (const auto& [s, coeff] : c) sum += coeff.value() * mpq_class(shifted(s, n, k));
    return ExactRational(sum);
}

ExactRational limit_of_combination(const Coefficients& c) {
    mpq_class sum = 0;
    for (const auto& [s, coeff] : c) {
        if (s < 0) throw InvalidInput("negative shift");
        BigInt pow4;
        mpz_ui_pow_ui(pow4.get_mpz_t(), 4, static_cast<unsigned long>(s));
        sum += coeff.value() / mpq_class(pow4);
    }
    return ExactRational(sum);
}

}  // namespace beststop
