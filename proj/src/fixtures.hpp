#pragma once

#include <string>
#include <vector>

#include "manifest.hpp"

namespace slantgeo {

struct FixtureInfo {
    std::string name;       // registry key
    std::string signature;  // e.g. "slant_plane(theta)"
    std::string summary;
};

const std::vector<FixtureInfo>& fixture_list();

// Accepts a bare name ("example_7_2") or a parameterized one
// ("slant_plane(0.7)"); parameterized fixtures have defaults.
// Throws ManifestError for unknown names or bad arguments.
nlohmann::json fixture_manifest_json(const std::string& name);
Manifest fixture_manifest(const std::string& name);

}  // namespace slantgeo
