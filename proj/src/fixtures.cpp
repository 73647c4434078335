#include "fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace slantgeo {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json ranges_all(const std::vector<std::string>& params, double lo, double hi) {
    json r = json::object();
    for (const auto& p : params) r[p] = {lo, hi};
    return r;
}

// Two slant planes joined to an invariant plane through a shared complex
// line; the shared legs break orthogonality of the two slant blocks, which
// is exactly what the bundled claims record.
json build_example_7_1() {
    const double th_a = 0.7, th_b = 1.1;
    json j;
    j["name"] = "example_7_1";
    j["ambient_complex_dim"] = 6;
    j["parameters"] = {"u", "v", "w", "r", "s", "t"};
    j["components"] = {"u*cos(" + num(th_a) + ")", "v*cos(" + num(th_a) + ")",
                       "u*sin(" + num(th_a) + ")", "v*sin(" + num(th_a) + ")",
                       "w*cos(" + num(th_b) + ")", "r*cos(" + num(th_b) + ")",
                       "w*sin(" + num(th_b) + ")", "r*sin(" + num(th_b) + ")",
                       "-u-w+v+r", "u+w+v+r", "s", "t"};
    j["distributions"] = {{"invariant", {"s", "t"}},
                          {"slant_1", {"u", "v"}},
                          {"slant_2", {"w", "r"}}};
    j["warp_split"] = {{"base", {"s", "t"}}, {"fiber", {"u", "v", "w", "r"}}};
    j["samples"] = {{"count", 10}, {"ranges", ranges_all({"u", "v", "w", "r", "s", "t"}, -1.5, 1.5)}};
    j["claims"] = {{"slant_1_angle", "acos(1/3)"},
                   {"slant_2_angle", "acos(1/3)"},
                   {"invariant_dim", 2},
                   {"orthogonal_blocks", true},
                   {"dichotomy", "RIEMANNIAN_PRODUCT"}};
    return j;
}

json build_example_7_2() {
    json j;
    j["name"] = "example_7_2";
    j["ambient_complex_dim"] = 5;
    j["parameters"] = {"u", "v", "w", "s", "t"};
    j["components"] = {"v*cos(u)", "w*cos(u)", "v*sin(u)", "w*sin(u)",
                       "-v+w",     "v+w",      "0",        "0",
                       "s",        "t"};
    j["distributions"] = {{"invariant", {"s", "t"}},
                          {"slant_1", {"v", "w"}},
                          {"slant_2", {"u"}}};
    j["warp_split"] = {{"base", {"s", "t", "v", "w"}}, {"fiber", {"u"}}};
    json ranges = json::object();
    ranges["u"] = {0.05, 1.45};
    ranges["v"] = {0.6, 1.9};
    ranges["w"] = {0.6, 1.9};
    ranges["s"] = {-1.0, 1.0};
    ranges["t"] = {-1.0, 1.0};
    j["samples"] = {{"count", 10}, {"ranges", ranges}};
    j["claims"] = {{"slant_1_angle", "acos(1/3)"},
                   {"slant_2_angle", "pi/2"},
                   {"invariant_dim", 2},
                   {"orthogonal_blocks", true},
                   {"dichotomy", "QUASI_HEMI_SLANT"},
                   {"warp_ratio",
                    {{"a", {{"v", 3.0}, {"w", 4.0}}}, {"b", {{"v", 1.0}, {"w", 0.0}}}, {"value", 5.0}}}};
    return j;
}

// Orthogonal repair of the shared-line construction: the second slant block
// gets its own mixing line, so every structure condition holds and both
// measured angles stay at acos(1/3). An exhaustive search shows no ±1 sign
// flip on the shared line can achieve this (see the fixture tests).
json build_corrected() {
    const double th_a = 0.7, th_b = 1.1;
    json j;
    j["name"] = "fixture_7_1_corrected";
    j["ambient_complex_dim"] = 7;
    j["parameters"] = {"u", "v", "w", "r", "s", "t"};
    j["components"] = {"u*cos(" + num(th_a) + ")", "v*cos(" + num(th_a) + ")",
                       "u*sin(" + num(th_a) + ")", "v*sin(" + num(th_a) + ")",
                       "w*cos(" + num(th_b) + ")", "r*cos(" + num(th_b) + ")",
                       "w*sin(" + num(th_b) + ")", "r*sin(" + num(th_b) + ")",
                       "-u+v", "u+v", "-w+r", "w+r", "s", "t"};
    j["distributions"] = {{"invariant", {"s", "t"}},
                          {"slant_1", {"u", "v"}},
                          {"slant_2", {"w", "r"}}};
    j["warp_split"] = {{"base", {"s", "t"}}, {"fiber", {"u", "v", "w", "r"}}};
    j["samples"] = {{"count", 10}, {"ranges", ranges_all({"u", "v", "w", "r", "s", "t"}, -1.5, 1.5)}};
    j["claims"] = {{"slant_1_angle", "acos(1/3)"},
                   {"slant_2_angle", "acos(1/3)"},
                   {"invariant_dim", 2},
                   {"orthogonal_blocks", true},
                   {"dichotomy", "RIEMANNIAN_PRODUCT"}};
    return j;
}

json build_slant_plane(double theta) {
    json j;
    j["name"] = "slant_plane";
    j["ambient_complex_dim"] = 2;
    j["parameters"] = {"u", "v"};
    j["components"] = {"u", "v*cos(" + num(theta) + ")", "v*sin(" + num(theta) + ")", "0"};
    j["distributions"] = {{"invariant", json::array()},
                          {"slant_1", {"u", "v"}},
                          {"slant_2", json::array()}};
    j["samples"] = {{"count", 6}, {"ranges", ranges_all({"u", "v"}, -1.5, 1.5)}};
    j["claims"] = {{"slant_1_angle", num(theta)}};
    return j;
}

json build_holomorphic_plane() {
    json j;
    j["name"] = "holomorphic_plane";
    j["ambient_complex_dim"] = 2;
    j["parameters"] = {"u", "v"};
    j["components"] = {"u", "v", "0", "0"};
    j["distributions"] = {{"invariant", {"u", "v"}},
                          {"slant_1", json::array()},
                          {"slant_2", json::array()}};
    j["samples"] = {{"count", 6}, {"ranges", ranges_all({"u", "v"}, -1.5, 1.5)}};
    j["claims"] = {{"invariant_dim", 2}};
    return j;
}

json build_totally_real_plane() {
    json j;
    j["name"] = "totally_real_plane";
    j["ambient_complex_dim"] = 2;
    j["parameters"] = {"u", "v"};
    j["components"] = {"u", "0", "v", "0"};
    j["distributions"] = {{"invariant", json::array()},
                          {"slant_1", json::array()},
                          {"slant_2", {"u", "v"}}};
    j["samples"] = {{"count", 6}, {"ranges", ranges_all({"u", "v"}, -1.5, 1.5)}};
    j["claims"] = {{"slant_2_angle", "pi/2"}, {"invariant_dim", 0}};
    return j;
}

json build_direct_product(double th1, double th2) {
    json j;
    j["name"] = "direct_product";
    j["ambient_complex_dim"] = 5;
    j["parameters"] = {"s", "t", "u1", "v1", "u2", "v2"};
    j["components"] = {"s",
                       "t",
                       "u1",
                       "v1*cos(" + num(th1) + ")",
                       "v1*sin(" + num(th1) + ")",
                       "0",
                       "u2",
                       "v2*cos(" + num(th2) + ")",
                       "v2*sin(" + num(th2) + ")",
                       "0"};
    j["distributions"] = {{"invariant", {"s", "t"}},
                          {"slant_1", {"u1", "v1"}},
                          {"slant_2", {"u2", "v2"}}};
    j["warp_split"] = {{"base", {"s", "t"}}, {"fiber", {"u1", "v1", "u2", "v2"}}};
    j["samples"] = {{"count", 8},
                    {"ranges", ranges_all({"s", "t", "u1", "v1", "u2", "v2"}, -1.5, 1.5)}};
    j["claims"] = {{"slant_1_angle", num(th1)},
                   {"slant_2_angle", num(th2)},
                   {"invariant_dim", 2},
                   {"orthogonal_blocks", true},
                   {"dichotomy", "RIEMANNIAN_PRODUCT"}};
    return j;
}

// Polar warp template: first slant angle tunable through the mixing-leg
// scale a, cos(theta1) = |1 - 2a^2| / (1 + 2a^2); the circular block stays
// anti-invariant and the warping stays sqrt(v^2 + w^2).
json build_polar_warp(double th1) {
    const double c = std::cos(th1);
    if (!(c > 0.0 && c < 1.0))
        throw ManifestError("polar_warp: the angle must lie strictly between 0 and pi/2");
    const double a = std::sqrt((1.0 - c) / (2.0 * (1.0 + c)));
    json j;
    j["name"] = "polar_warp";
    j["ambient_complex_dim"] = 5;
    j["parameters"] = {"u", "v", "w", "s", "t"};
    j["components"] = {"v*cos(u)",
                       "w*cos(u)",
                       "v*sin(u)",
                       "w*sin(u)",
                       num(a) + "*(w-v)",
                       num(a) + "*(v+w)",
                       "0",
                       "0",
                       "s",
                       "t"};
    j["distributions"] = {{"invariant", {"s", "t"}},
                          {"slant_1", {"v", "w"}},
                          {"slant_2", {"u"}}};
    j["warp_split"] = {{"base", {"s", "t", "v", "w"}}, {"fiber", {"u"}}};
    json ranges = json::object();
    ranges["u"] = {0.05, 1.45};
    ranges["v"] = {0.6, 1.9};
    ranges["w"] = {0.6, 1.9};
    ranges["s"] = {-1.0, 1.0};
    ranges["t"] = {-1.0, 1.0};
    j["samples"] = {{"count", 8}, {"ranges", ranges}};
    j["claims"] = {{"slant_1_angle", num(th1)},
                   {"slant_2_angle", "pi/2"},
                   {"invariant_dim", 2},
                   {"orthogonal_blocks", true},
                   {"dichotomy", "QUASI_HEMI_SLANT"}};
    return j;
}

// Deliberately non-product metric, used to exercise the warp analyzer's
// rejection path.
json build_twisted_plane() {
    json j;
    j["name"] = "twisted_plane";
    j["ambient_complex_dim"] = 2;
    j["parameters"] = {"u", "v"};
    j["components"] = {"u", "v", "u*v", "0"};
    j["distributions"] = {{"invariant", json::array()},
                          {"slant_1", json::array()},
                          {"slant_2", {"u", "v"}}};
    j["warp_split"] = {{"base", {"u"}}, {"fiber", {"v"}}};
    json ranges = json::object();
    ranges["u"] = {0.5, 1.5};
    ranges["v"] = {0.5, 1.5};
    j["samples"] = {{"count", 6}, {"ranges", ranges}};
    return j;
}

struct Entry {
    FixtureInfo info;
    int arity;                       // number of numeric arguments
    std::vector<double> defaults;
    std::function<json(const std::vector<double>&)> build;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = {
        {{"example_7_1", "example_7_1",
          "two slant blocks sharing a mixing line plus an invariant plane in C^6"},
         0, {}, [](const auto&) { return build_example_7_1(); }},
        {{"example_7_2", "example_7_2",
          "polar slant block with anti-invariant circle direction, warped in C^5"},
         0, {}, [](const auto&) { return build_example_7_2(); }},
        {{"fixture_7_1_corrected", "fixture_7_1_corrected",
          "orthogonal repair of example_7_1 with separate mixing lines in C^7"},
         0, {}, [](const auto&) { return build_corrected(); }},
        {{"slant_plane", "slant_plane(theta)", "single slant plane in C^2"},
         1, {0.7}, [](const auto& a) { return build_slant_plane(a[0]); }},
        {{"holomorphic_plane", "holomorphic_plane", "invariant complex line in C^2"},
         0, {}, [](const auto&) { return build_holomorphic_plane(); }},
        {{"totally_real_plane", "totally_real_plane", "anti-invariant plane in C^2"},
         0, {}, [](const auto&) { return build_totally_real_plane(); }},
        {{"direct_product", "direct_product(theta1,theta2)",
          "totally geodesic product of two slant planes and a complex line in C^5"},
         2, {0.7, 1.1}, [](const auto& a) { return build_direct_product(a[0], a[1]); }},
        {{"polar_warp", "polar_warp(theta1)",
          "warped polar template with tunable first slant angle in C^5"},
         1, {1.2}, [](const auto& a) { return build_polar_warp(a[0]); }},
        {{"twisted_plane", "twisted_plane", "non-product metric used as a negative control"},
         0, {}, [](const auto&) { return build_twisted_plane(); }},
    };
    return entries;
}

struct ParsedName {
    std::string base;
    std::vector<double> args;
};

ParsedName parse_fixture_name(const std::string& name) {
    ParsedName out;
    const auto open = name.find('(');
    if (open == std::string::npos) {
        out.base = name;
        return out;
    }
    if (name.back() != ')') throw ManifestError("fixture '" + name + "': expected closing ')'");
    out.base = name.substr(0, open);
    std::string inner = name.substr(open + 1, name.size() - open - 2);
    std::size_t pos = 0;
    while (pos < inner.size()) {
        auto comma = inner.find(',', pos);
        if (comma == std::string::npos) comma = inner.size();
        const std::string tok = inner.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            out.args.push_back(std::stod(tok, &used));
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ManifestError("fixture '" + name + "': bad numeric argument '" + tok + "'");
        }
        pos = comma + 1;
    }
    return out;
}

}  // namespace

const std::vector<FixtureInfo>& fixture_list() {
    static const std::vector<FixtureInfo> infos = [] {
        std::vector<FixtureInfo> out;
        for (const auto& e : registry()) out.push_back(e.info);
        return out;
    }();
    return infos;
}

nlohmann::json fixture_manifest_json(const std::string& name) {
    const ParsedName parsed = parse_fixture_name(name);
    for (const auto& e : registry()) {
        if (e.info.name != parsed.base) continue;
        std::vector<double> args = parsed.args.empty() ? e.defaults : parsed.args;
        if (static_cast<int>(args.size()) != e.arity)
            throw ManifestError("fixture '" + parsed.base + "' takes " + std::to_string(e.arity) +
                                " argument(s)");
        return e.build(args);
    }
    throw ManifestError("unknown fixture '" + parsed.base + "'");
}

Manifest fixture_manifest(const std::string& name) {
    return manifest_from_json(fixture_manifest_json(name));
}

}  // namespace slantgeo
