#include "pluripot/report.hpp"

#include <ctime>
#include <fstream>

#include "pluripot/errors.hpp"

namespace pluripot {

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json make_report(const std::string& command, const nlohmann::json& config,
                           std::uint64_t seed, const nlohmann::json& results,
                           const std::vector<InvariantRecord>& invariants,
                           const std::string& stamp) {
    nlohmann::json inv = nlohmann::json::array();
    for (const auto& r : invariants)
        inv.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    return {
        {"command", command},
        {"config", config},
        {"config_hash", hash_hex(fnv1a(config.dump()))},
        {"invariants", inv},
        {"results", results},
        {"seed", seed},
        {"stamp", stamp},
    };
}

std::string report_to_string(const nlohmann::json& report) {
    return report.dump(2) + "\n";
}

void write_report(const nlohmann::json& report, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_report: cannot open " + path);
    const std::string bytes = report_to_string(report);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("write_report: write failed for " + path);
}

} // namespace pluripot
