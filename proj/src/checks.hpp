#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "manifest.hpp"

namespace slantgeo {

inline constexpr const char* kEngineName = "slantgeo";
inline constexpr const char* kEngineVersion = "0.1.0";

struct CheckRecord {
    std::string id;
    std::string status;  // PASS | FAIL | PRECONDITION_UNMET
    double worst = 0.0;
    double tolerance = 0.0;
    std::string note;
    nlohmann::json details = nlohmann::json::object();
    double wall_ms = 0.0;  // human output only; omitted from the machine report
};

struct RunReport {
    nlohmann::json manifest_echo;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> checks;
    nlohmann::json discrepancies = nlohmann::json::array();
    int fail_count = 0;
    int pass_count = 0;
    int precondition_count = 0;
    double total_ms = 0.0;
};

// Runs every check in the fixed order, then reports the selected subset.
// Never throws past manifest validation: failures are recorded in the
// report, and the exit-code policy keys off fail_count.
RunReport run(const Manifest& mf);

}  // namespace slantgeo
