#include "manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace slantgeo {

const std::vector<std::string>& all_check_ids() {
    static const std::vector<std::string> ids = {
        "ambient_structure",    "chart_validity",        "tangential_structure",
        "distributions",        "slant_block_identities", "normal_bundle_split",
        "connection_identity",  "bracket_identity",       "warp_structure",
        "warp_connection",      "warp_sff_identities",    "dichotomy",
    };
    return ids;
}

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ManifestError(path + ": " + what);
}

const json& require(const json& j, const char* key) {
    if (!j.contains(key)) fail(key, "missing required field");
    return j.at(key);
}

int require_int(const json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
}

std::vector<std::string> require_string_array(const json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_array()) fail(key, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) fail(key, "expected an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

int param_index(const std::vector<std::string>& params, const std::string& name,
                const std::string& where) {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i] == name) return static_cast<int>(i);
    fail(where, "unknown parameter '" + name + "'");
}

std::vector<int> name_group(const json& j, const char* key, const std::vector<std::string>& params,
                            const std::string& where) {
    std::vector<int> out;
    if (!j.contains(key)) return out;
    const auto& v = j.at(key);
    if (!v.is_array()) fail(where + "." + key, "expected an array of parameter names");
    for (const auto& e : v) {
        if (!e.is_string()) fail(where + "." + key, "expected parameter names");
        out.push_back(param_index(params, e.get<std::string>(), where + "." + key));
    }
    return out;
}

void read_tolerance(const json& j, const char* key, double& slot) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) fail(std::string("tolerances.") + key, "expected a number");
    slot = v.get<double>();
    if (slot <= 0) fail(std::string("tolerances.") + key, "must be positive");
}

}  // namespace

Manifest manifest_from_json(const json& j) {
    if (!j.is_object()) throw ManifestError("manifest: expected a JSON object");

    Manifest mf;
    mf.name = j.contains("name") ? j.at("name").get<std::string>() : "unnamed";

    const int n = require_int(j, "ambient_complex_dim");
    if (n < 1 || n > 16) fail("ambient_complex_dim", "must be in [1, 16]");
    mf.spec.ambient.complex_dim = n;

    mf.spec.params = require_string_array(j, "parameters");
    const int m = static_cast<int>(mf.spec.params.size());
    if (m < 1) fail("parameters", "at least one parameter is required");
    if (m > 2 * n) fail("parameters", "more parameters than the ambient real dimension");
    {
        std::set<std::string> seen;
        for (const auto& p : mf.spec.params) {
            if (p.empty()) fail("parameters", "empty parameter name");
            if (p == "pi") fail("parameters", "'pi' is reserved");
            if (!seen.insert(p).second) fail("parameters", "duplicate parameter '" + p + "'");
        }
    }

    mf.component_sources = require_string_array(j, "components");
    if (static_cast<int>(mf.component_sources.size()) != 2 * n)
        fail("components", "expected " + std::to_string(2 * n) + " components, got " +
                               std::to_string(mf.component_sources.size()));
    for (std::size_t c = 0; c < mf.component_sources.size(); ++c) {
        auto res = parse(mf.component_sources[c]);
        if (!res)
            fail("components[" + std::to_string(c) + "]",
                 "parse error at offset " + std::to_string(res.error().offset) + ": " +
                     res.error().expected);
        for (const auto& var : free_variables(*res.ast())) {
            bool known = false;
            for (const auto& p : mf.spec.params) known = known || p == var;
            if (!known)
                fail("components[" + std::to_string(c) + "]",
                     "free variable '" + var + "' is not a declared parameter");
        }
        mf.spec.components.push_back(res.ast());
    }

    const auto& dist = require(j, "distributions");
    if (!dist.is_object()) fail("distributions", "expected an object");
    mf.assignment.invariant = name_group(dist, "invariant", mf.spec.params, "distributions");
    mf.assignment.slant1 = name_group(dist, "slant_1", mf.spec.params, "distributions");
    mf.assignment.slant2 = name_group(dist, "slant_2", mf.spec.params, "distributions");
    {
        std::set<int> seen;
        for (const auto* grp :
             {&mf.assignment.invariant, &mf.assignment.slant1, &mf.assignment.slant2})
            for (int idx : *grp)
                if (!seen.insert(idx).second)
                    fail("distributions", "parameter '" + mf.spec.params[static_cast<std::size_t>(idx)] +
                                              "' assigned to more than one group");
    }

    if (j.contains("warp_split") && !j.at("warp_split").is_null()) {
        const auto& ws = j.at("warp_split");
        WarpSplit split;
        split.base = name_group(ws, "base", mf.spec.params, "warp_split");
        split.fiber = name_group(ws, "fiber", mf.spec.params, "warp_split");
        std::set<int> seen;
        for (const auto* grp : {&split.base, &split.fiber})
            for (int idx : *grp)
                if (!seen.insert(idx).second) fail("warp_split", "base and fiber overlap");
        if (static_cast<int>(seen.size()) != m)
            fail("warp_split", "base and fiber must cover every parameter");
        if (split.fiber.empty()) fail("warp_split", "fiber must not be empty");
        mf.warp_split = std::move(split);
    }

    mf.samples.ranges.assign(static_cast<std::size_t>(m), {-1.0, 1.0});
    if (j.contains("samples")) {
        const auto& s = j.at("samples");
        if (!s.is_object()) fail("samples", "expected an object");
        if (s.contains("count")) {
            mf.samples.count = s.at("count").get<int>();
            if (mf.samples.count < 1) fail("samples.count", "must be positive");
        }
        if (s.contains("warp_base_count")) mf.samples.warp_base_count = s.at("warp_base_count").get<int>();
        if (s.contains("warp_fiber_count")) mf.samples.warp_fiber_count = s.at("warp_fiber_count").get<int>();
        if (s.contains("probes_per_block")) mf.samples.probes_per_block = s.at("probes_per_block").get<int>();
        if (mf.samples.warp_base_count < 3) fail("samples.warp_base_count", "must be at least 3");
        if (mf.samples.warp_fiber_count < 1) fail("samples.warp_fiber_count", "must be at least 1");
        if (mf.samples.probes_per_block < 1) fail("samples.probes_per_block", "must be positive");
        if (s.contains("ranges")) {
            const auto& r = s.at("ranges");
            if (!r.is_object()) fail("samples.ranges", "expected an object of [lo, hi] pairs");
            for (auto it = r.begin(); it != r.end(); ++it) {
                const int idx = param_index(mf.spec.params, it.key(), "samples.ranges");
                const auto& pair = it.value();
                if (!pair.is_array() || pair.size() != 2)
                    fail("samples.ranges." + it.key(), "expected [lo, hi]");
                const double lo = pair.at(0).get<double>(), hi = pair.at(1).get<double>();
                if (!(lo < hi)) fail("samples.ranges." + it.key(), "needs lo < hi");
                mf.samples.ranges[static_cast<std::size_t>(idx)] = {lo, hi};
            }
        }
        if (s.contains("points")) {
            const auto& pts = s.at("points");
            if (!pts.is_array()) fail("samples.points", "expected an array of points");
            for (const auto& p : pts) {
                if (!p.is_array() || static_cast<int>(p.size()) != m)
                    fail("samples.points", "each point needs " + std::to_string(m) + " coordinates");
                std::vector<double> pt;
                for (const auto& x : p) pt.push_back(x.get<double>());
                mf.samples.explicit_points.push_back(std::move(pt));
            }
        }
    }

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object()) fail("tolerances", "expected an object");
        read_tolerance(t, "angle", mf.tols.angle);
        read_tolerance(t, "ortho", mf.tols.ortho);
        read_tolerance(t, "rank", mf.tols.rank);
        read_tolerance(t, "invariant_sv", mf.tols.invariant_sv);
        read_tolerance(t, "grad", mf.tols.grad);
        read_tolerance(t, "fd_step", mf.tols.fd_step);
        read_tolerance(t, "ambient", mf.tols.ambient);
        read_tolerance(t, "structure", mf.tols.structure);
        read_tolerance(t, "gauss_weingarten", mf.tols.gauss_weingarten);
        read_tolerance(t, "weingarten_fd", mf.tols.weingarten_fd);
        read_tolerance(t, "block_identity", mf.tols.block_identity);
        read_tolerance(t, "mu_invariance", mf.tols.mu_invariance);
        read_tolerance(t, "fd_identity", mf.tols.fd_identity);
        read_tolerance(t, "sff_identity", mf.tols.sff_identity);
        read_tolerance(t, "warp_struct", mf.tols.warp_struct);
        read_tolerance(t, "warp_connection", mf.tols.warp_connection);
        read_tolerance(t, "dichotomy_core", mf.tols.dichotomy_core);
    }

    if (j.contains("seed")) mf.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) {
        mf.threads = j.at("threads").get<int>();
        if (mf.threads < 1 || mf.threads > 256) fail("threads", "must be in [1, 256]");
    }

    if (j.contains("checks")) {
        mf.selected_checks = require_string_array(j, "checks");
        for (const auto& c : mf.selected_checks) {
            const auto& ids = all_check_ids();
            if (std::find(ids.begin(), ids.end(), c) == ids.end())
                fail("checks", "unknown check id '" + c + "'");
        }
    }

    if (j.contains("claims")) mf.claims = j.at("claims");
    return mf;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot open manifest file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ManifestError("manifest JSON parse error: " + std::string(e.what()));
    }
    return manifest_from_json(j);
}

nlohmann::json Manifest::echo() const {
    json j;
    j["name"] = name;
    j["ambient_complex_dim"] = spec.ambient.complex_dim;
    j["parameters"] = spec.params;
    j["components"] = component_sources;

    auto names_of = [&](const std::vector<int>& idx) {
        std::vector<std::string> out;
        for (int i : idx) out.push_back(spec.params[static_cast<std::size_t>(i)]);
        return out;
    };
    j["distributions"] = {{"invariant", names_of(assignment.invariant)},
                          {"slant_1", names_of(assignment.slant1)},
                          {"slant_2", names_of(assignment.slant2)}};
    if (warp_split)
        j["warp_split"] = {{"base", names_of(warp_split->base)},
                           {"fiber", names_of(warp_split->fiber)}};
    else
        j["warp_split"] = nullptr;

    json ranges = json::object();
    for (std::size_t i = 0; i < samples.ranges.size(); ++i)
        ranges[spec.params[i]] = {samples.ranges[i].first, samples.ranges[i].second};
    j["samples"] = {{"count", samples.count},
                    {"points", samples.explicit_points},
                    {"probes_per_block", samples.probes_per_block},
                    {"ranges", ranges},
                    {"warp_base_count", samples.warp_base_count},
                    {"warp_fiber_count", samples.warp_fiber_count}};

    j["tolerances"] = {{"angle", tols.angle},
                       {"ortho", tols.ortho},
                       {"rank", tols.rank},
                       {"invariant_sv", tols.invariant_sv},
                       {"grad", tols.grad},
                       {"fd_step", tols.fd_step},
                       {"ambient", tols.ambient},
                       {"structure", tols.structure},
                       {"gauss_weingarten", tols.gauss_weingarten},
                       {"weingarten_fd", tols.weingarten_fd},
                       {"block_identity", tols.block_identity},
                       {"mu_invariance", tols.mu_invariance},
                       {"fd_identity", tols.fd_identity},
                       {"sff_identity", tols.sff_identity},
                       {"warp_struct", tols.warp_struct},
                       {"warp_connection", tols.warp_connection},
                       {"dichotomy_core", tols.dichotomy_core}};

    j["seed"] = seed;
    j["threads"] = threads;
    j["checks"] = selected_checks.empty() ? all_check_ids() : selected_checks;
    j["claims"] = claims.is_null() ? json() : claims;
    return j;
}

}  // namespace slantgeo
