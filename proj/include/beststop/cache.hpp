#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "beststop/triangle.hpp"

namespace beststop {

// Versioned JSON files holding triangle rows, one file per (mode, frozen rules).
// Readers take a shared advisory lock, writers an exclusive one and replace
// the file atomically.
class TriangleCache {
public:
    static constexpr int kSchema = 1;

    explicit TriangleCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path path_for(Mode mode, const std::optional<FrozenRules>& frozen) const;

    // nullptr when absent or shorter than `rows`. A damaged file yields
    // nullptr and a message in `warning`.
    std::unique_ptr<BTriangle> load(Mode mode, const std::optional<FrozenRules>& frozen, std::size_t rows,
                                    std::string* warning = nullptr) const;
    void store(const BTriangle& t) const;

    // Cached rows when available, otherwise computed and written back.
    std::unique_ptr<BTriangle> get(Mode mode, const std::optional<FrozenRules>& frozen, std::size_t rows,
                                   std::string* warning = nullptr) const;

private:
    std::filesystem::path dir_;
};

std::string frozen_to_string(const std::optional<FrozenRules>& frozen);
// "1,1,4,9" or "-,0,1,3,8" ('-' marks a diagonal that never selects).
FrozenRules parse_frozen(std::string_view text);

}  // namespace beststop
