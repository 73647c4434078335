#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chart.hpp"
#include "slant.hpp"
#include "warp.hpp"

namespace slantgeo {

// Every tolerance the engine uses, pinned here and overridable from the
// manifest; resolved values are echoed in the report.
struct Tolerances {
    double angle = 1e-7;            // angle classification / constancy
    double ortho = 1e-8;            // orthogonality residual (relative)
    double rank = 1e-9;             // Gram-Schmidt rank tolerance (relative)
    double invariant_sv = 1e-9;     // singular-value cut for T ∩ J(T)
    double grad = 1e-7;             // "constant warping" gradient tolerance
    double fd_step = 1e-4;          // finite-difference step
    double ambient = 1e-12;         // ambient structure residuals
    double structure = 1e-10;       // skewness / Pythagoras / frame residuals
    double gauss_weingarten = 1e-9; // shape-operator duality (jet route)
    double weingarten_fd = 1e-6;    // Weingarten consistency (FD route)
    double block_identity = 1e-8;   // constant-angle block identities
    double mu_invariance = 1e-9;    // J-closure of mu
    double fd_identity = 1e-5;      // connection/bracket identities (FD regime)
    double sff_identity = 1e-6;     // warped-product sigma identities
    double warp_struct = 1e-8;      // metric block structure (relative)
    double warp_connection = 1e-8;  // nabla vs (d ln f) residual
    double dichotomy_core = 1e-9;   // (X ln f) g(Z, phi W)
};

struct SampleSpec {
    std::vector<std::vector<double>> explicit_points;
    std::vector<std::pair<double, double>> ranges;  // per parameter
    int count = 10;
    int warp_base_count = 4;
    int warp_fiber_count = 4;
    int probes_per_block = 8;
};

struct ManifestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Manifest {
    std::string name;
    ImmersionSpec spec;
    std::vector<std::string> component_sources;  // original expression strings
    DistributionAssignment assignment;
    std::optional<WarpSplit> warp_split;
    SampleSpec samples;
    Tolerances tols;
    std::uint64_t seed = 0xC0FFEE;
    int threads = 1;
    std::vector<std::string> selected_checks;  // empty = all, in fixed order
    nlohmann::json claims;                     // may be null

    // normalized manifest with defaults resolved; stable across runs
    nlohmann::json echo() const;
};

Manifest manifest_from_json(const nlohmann::json& j);
Manifest load_manifest(const std::string& path);

// Known check identifiers in fixed execution order.
const std::vector<std::string>& all_check_ids();

}  // namespace slantgeo
