#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace pluripot {

// FNV-1a 64-bit over raw bytes; the parameter fingerprint carried by every
// artifact row so tables can be traced back to the config that made them.
std::uint64_t fnv1a(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

struct InvariantRecord {
    std::string name;
    bool pass = false;
    std::string detail;
};

// "YYYY-MM-DDTHH:MM:SSZ" (UTC, second resolution).
std::string utc_timestamp();

// Canonical report document:
//   {command, config, config_hash, invariants, results, seed, stamp}
// The stamp ("<timestamp>;timing_ms=<n>") is the single volatile field;
// every other byte is a pure function of build + config + seed.
nlohmann::json make_report(const std::string& command, const nlohmann::json& config,
                           std::uint64_t seed, const nlohmann::json& results,
                           const std::vector<InvariantRecord>& invariants,
                           const std::string& stamp);

// Sorted keys (the default object ordering), two-space indent, trailing
// newline: byte-stable serialization for the determinism guarantee.
std::string report_to_string(const nlohmann::json& report);
void write_report(const nlohmann::json& report, const std::string& path);

} // namespace pluripot
