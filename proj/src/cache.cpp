#include "beststop/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "beststop/error.hpp"

namespace beststop {
namespace {

class FileLock {
public:
    FileLock(const std::filesystem::path& path, bool exclusive) {
        fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
        if (fd_ >= 0) ::flock(fd_, exclusive ? LOCK_EX : LOCK_SH);
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string checksum(const nlohmann::json& rows) {
    std::ostringstream out;
    out << std::hex << fnv1a(rows.dump());
    return out.str();
}

std::filesystem::path lock_path(const std::filesystem::path& p) { return p.string() + ".lock"; }

}  // namespace

std::string frozen_to_string(const std::optional<FrozenRules>& frozen) {
    if (!frozen) return "optimal";
    std::string out;
    for (std::size_t i = 0; i < frozen->size(); ++i) {
        if (i) out += ',';
        out += (*frozen)[i] ? std::to_string(*(*frozen)[i]) : "-";
    }
    return out;
}

FrozenRules parse_frozen(std::string_view text) {
    FrozenRules rules;
    while (!text.empty()) {
        const auto cut = text.find(',');
        const std::string_view item = text.substr(0, cut);
        if (item == "-") {
            rules.emplace_back(std::nullopt);
        } else {
            std::size_t v = 0;
            if (item.empty()) throw InvalidInput("empty entry in frozen rules");
            for (char c : item) {
                if (c < '0' || c > '9') throw InvalidInput("bad frozen rule entry '" + std::string(item) + "'");
                v = v * 10 + static_cast<std::size_t>(c - '0');
            }
            rules.emplace_back(v);
        }
        if (cut == std::string_view::npos) break;
        text.remove_prefix(cut + 1);
    }
    if (rules.empty()) throw InvalidInput("frozen rules are empty");
    return rules;
}

std::filesystem::path TriangleCache::path_for(Mode mode, const std::optional<FrozenRules>& frozen) const {
    std::string tag = frozen_to_string(frozen);
    for (char& c : tag)
        if (c == ',') c = '_';
        else if (c == '-') c = 'x';
    return dir_ / ("triangle-v" + std::to_string(kSchema) + "-" + std::string(to_string(mode)) + "-" + tag + ".json");
}

std::unique_ptr<BTriangle> TriangleCache::load(Mode mode, const std::optional<FrozenRules>& frozen,
                                               std::size_t rows, std::string* warning) const {
    const auto path = path_for(mode, frozen);
    if (!std::filesystem::exists(path)) return nullptr;
    FileLock lock(lock_path(path), false);
    try {
        std::ifstream in(path);
        const nlohmann::json doc = nlohmann::json::parse(in);
        if (doc.at("schema").get<int>() != kSchema) throw InvalidInput("schema version mismatch");
        if (doc.at("mode").get<std::string>() != to_string(mode) ||
            doc.at("frozen").get<std::string>() != frozen_to_string(frozen))
            throw InvalidInput("parameters do not match the file name");
        const nlohmann::json& jrows = doc.at("rows");
        if (doc.at("checksum").get<std::string>() != checksum(jrows)) throw InvalidInput("checksum mismatch");
        if (jrows.size() < rows) return nullptr;
        std::vector<std::vector<BigInt>> b;
        for (const auto& jr : jrows) {
            std::vector<BigInt> row;
            for (const auto& v : jr) row.emplace_back(v.get<std::string>());
            b.push_back(std::move(row));
        }
        return BTriangle::from_rows(mode, frozen, b);
    } catch (const std::exception& e) {
        if (warning) *warning = "ignoring damaged cache file " + path.string() + ": " + e.what();
        return nullptr;
    }
}

void TriangleCache::store(const BTriangle& t) const {
    std::filesystem::create_directories(dir_);
    const auto path = path_for(t.mode(), t.frozen());
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t n = 1; n <= t.rows(); ++n) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : t.row(n).b) r.push_back(v.get_str());
        rows.push_back(std::move(r));
    }
    const nlohmann::json doc = {{"schema", kSchema},
                                {"mode", to_string(t.mode())},
                                {"frozen", frozen_to_string(t.frozen())},
                                {"checksum", checksum(rows)},
                                {"rows", rows}};
    FileLock lock(lock_path(path), true);
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp);
        out << doc.dump() << '\n';
        if (!out) throw Error("cannot write cache file " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::unique_ptr<BTriangle> TriangleCache::get(Mode mode, const std::optional<FrozenRules>& frozen, std::size_t rows,
                                              std::string* warning) const {
    if (auto t = load(mode, frozen, rows, warning)) return t;
    auto t = std::make_unique<BTriangle>(mode, frozen);
    t->extend_to(rows);
    store(*t);
    return t;
}

}  // namespace beststop
