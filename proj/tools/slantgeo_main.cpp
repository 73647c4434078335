// Command-line front end over the shared-library C interface.

#include <slantgeo.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

int write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) return fail_usage("cannot write to '" + out_path + "'");
    out << text;
    return 0;
}

struct ManifestHandle {
    sg_manifest* m = nullptr;
    ~ManifestHandle() { sg_manifest_free(m); }
};

struct ReportHandle {
    sg_report* r = nullptr;
    ~ReportHandle() { sg_report_free(r); }
};

int run_verify(const std::string& manifest_path, const std::string& fixture,
               const std::string& format, bool seed_set, std::uint64_t seed,
               const std::string& checks, int threads, const std::string& out_path) {
    if (manifest_path.empty() == fixture.empty())
        return fail_usage("pass exactly one of <manifest-path> or --fixture NAME");

    ManifestHandle mh;
    sg_status st = fixture.empty() ? sg_manifest_load(manifest_path.c_str(), &mh.m)
                                   : sg_fixture_manifest(fixture.c_str(), &mh.m);
    if (st != SG_OK) return fail_usage(sg_last_error());

    if (seed_set && sg_manifest_set_seed(mh.m, seed) != SG_OK) return fail_usage(sg_last_error());
    if (threads > 0 && sg_manifest_set_threads(mh.m, threads) != SG_OK)
        return fail_usage(sg_last_error());
    if (!checks.empty() && sg_manifest_select_checks(mh.m, checks.c_str()) != SG_OK)
        return fail_usage(sg_last_error());

    ReportHandle rh;
    if (sg_run(mh.m, &rh.r) != SG_OK) return fail_usage(sg_last_error());

    char* text = nullptr;
    if (sg_report_emit(rh.r, format.c_str(), &text) != SG_OK) return fail_usage(sg_last_error());
    const std::string report(text);
    sg_string_free(text);

    const int wr = write_output(report, out_path);
    if (wr != 0) return wr;
    return sg_report_fail_count(rh.r) > 0 ? 1 : 0;
}

int run_list_fixtures() {
    const int n = sg_fixture_count();
    for (int i = 0; i < n; ++i)
        std::printf("%-32s %s\n", sg_fixture_signature(i), sg_fixture_summary(i));
    return 0;
}

int run_dump_fixture(const std::string& name, const std::string& out_path) {
    ManifestHandle mh;
    if (sg_fixture_manifest(name.c_str(), &mh.m) != SG_OK) return fail_usage(sg_last_error());
    char* text = nullptr;
    if (sg_manifest_to_json(mh.m, &text) != SG_OK) return fail_usage(sg_last_error());
    const std::string json(text);
    sg_string_free(text);
    return write_output(json, out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slantgeo — manifest-driven verification of slant-distribution "
                 "structure for immersions in complex Euclidean space"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("slantgeo ") + sg_version());

    auto* verify = app.add_subcommand("verify", "run the checks for a manifest or fixture");
    std::string manifest_path, fixture, format = "human", checks, out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    verify->add_option("manifest", manifest_path, "path to a manifest JSON file");
    verify->add_option("--fixture", fixture, "bundled fixture name, e.g. example_7_2");
    verify->add_option("--format", format, "report format: human or machine")
        ->check(CLI::IsMember({"human", "machine"}));
    verify->add_option("--seed", seed, "random seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    verify->add_option("--checks", checks, "comma-separated list of check ids");
    verify->add_option("--threads", threads, "parallel sample evaluation threads");
    verify->add_option("--out", out_path, "write the report to this file");

    auto* list = app.add_subcommand("list-fixtures", "list bundled fixtures");

    auto* dump = app.add_subcommand("dump-fixture", "write a fixture's manifest JSON");
    std::string dump_name, dump_out;
    dump->add_option("name", dump_name, "fixture name")->required();
    dump->add_option("--out", dump_out, "write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (verify->parsed())
        return run_verify(manifest_path, fixture, format, seed_set, seed, checks, threads,
                          out_path);
    if (list->parsed()) return run_list_fixtures();
    if (dump->parsed()) return run_dump_fixture(dump_name, dump_out);
    return 2;
}
