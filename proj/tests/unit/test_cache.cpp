#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "beststop/cache.hpp"
#include "beststop/error.hpp"

using namespace beststop;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("beststop-cache-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void same_rows(const BTriangle& a, const BTriangle& b, std::size_t rows) {
    for (std::size_t n = 1; n <= rows; ++n) {
        CHECK(a.row(n).b == b.row(n).b);
        CHECK(a.row(n).fires == b.row(n).fires);
    }
}

}  // namespace

TEST_CASE("frozen rule strings") {
    CHECK(frozen_to_string(std::nullopt) == "optimal");
    CHECK(frozen_to_string(FrozenRules{1, 1, 4, 9}) == "1,1,4,9");
    CHECK(frozen_to_string(FrozenRules{std::nullopt, 0, 1, 3, 8}) == "-,0,1,3,8");
    CHECK(parse_frozen("-,0,1,3,8") == FrozenRules{std::nullopt, 0, 1, 3, 8});
    CHECK(parse_frozen("1,1,4,9") == FrozenRules{1, 1, 4, 9});
    CHECK_THROWS_AS(parse_frozen("1,x"), InvalidInput);
}

TEST_CASE("round trip") {
    TempDir dir;
    TriangleCache cache(dir.path);
    CHECK(cache.load(Mode::strike, std::nullopt, 10) == nullptr);

    const auto built = cache.get(Mode::strike, std::nullopt, 40);
    CHECK(fs::exists(cache.path_for(Mode::strike, std::nullopt)));
    const auto doc = nlohmann::json::parse(std::ifstream(cache.path_for(Mode::strike, std::nullopt)));
    CHECK(doc.at("schema") == TriangleCache::kSchema);
    CHECK(doc.at("mode") == "strike");
    CHECK(doc.at("frozen") == "optimal");

    const auto loaded = cache.load(Mode::strike, std::nullopt, 40);
    REQUIRE(loaded != nullptr);
    same_rows(*built, *loaded, 40);
    CHECK(cache.load(Mode::strike, std::nullopt, 41) == nullptr);
    // a shorter cached triangle extends past its stored rows
    auto more = cache.get(Mode::strike, std::nullopt, 60);
    BTriangle fresh(Mode::strike);
    fresh.extend_to(60);
    same_rows(*more, fresh, 60);

    const FrozenRules rules{std::nullopt, 0, 1, 3, 8};
    cache.get(Mode::trigger, rules, 20);
    CHECK(cache.path_for(Mode::trigger, rules) != cache.path_for(Mode::trigger, std::nullopt));
    const auto t = cache.load(Mode::trigger, rules, 20);
    REQUIRE(t != nullptr);
    CHECK(t->frozen() == rules);
    BTriangle direct(Mode::trigger, rules);
    direct.extend_to(20);
    same_rows(*t, direct, 20);
}

TEST_CASE("damaged files are rebuilt with a warning") {
    TempDir dir;
    TriangleCache cache(dir.path);
    cache.get(Mode::strike, std::nullopt, 30);
    const auto path = cache.path_for(Mode::strike, std::nullopt);

    auto corrupt = [&](const std::function<void(nlohmann::json&)>& edit) {
        auto doc = nlohmann::json::parse(std::ifstream(path));
        edit(doc);
        std::ofstream(path) << doc.dump();
    };

    SUBCASE("tampered row") {
        corrupt([](nlohmann::json& d) { d["rows"][10][1] = "999"; });
    }
    SUBCASE("schema bump") {
        corrupt([](nlohmann::json& d) { d["schema"] = TriangleCache::kSchema + 1; });
    }
    SUBCASE("truncated file") {
        std::ofstream(path) << "{\"schema\": 1, \"rows\": [";
    }

    std::string warning;
    CHECK(cache.load(Mode::strike, std::nullopt, 30, &warning) == nullptr);
    CHECK(warning.find("damaged") != std::string::npos);

    warning.clear();
    const auto rebuilt = cache.get(Mode::strike, std::nullopt, 30, &warning);
    CHECK_FALSE(warning.empty());
    BTriangle fresh(Mode::strike);
    fresh.extend_to(30);
    same_rows(*rebuilt, fresh, 30);
    std::string none;
    CHECK(cache.load(Mode::strike, std::nullopt, 30, &none) != nullptr);
    CHECK(none.empty());
}
