#include "slantgeo.h"

#include <cstring>
#include <string>

#include "checks.hpp"
#include "fixtures.hpp"
#include "report.hpp"

using namespace slantgeo;

struct sg_manifest {
    Manifest mf;
};

struct sg_report {
    RunReport rep;
};

namespace {

thread_local std::string t_last_error;

sg_status set_error(sg_status code, const std::string& msg) {
    t_last_error = msg;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class Fn>
sg_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ManifestError& e) {
        return set_error(SG_ERR_INVALID, e.what());
    } catch (const EvalError& e) {
        return set_error(SG_ERR_PARSE, e.what());
    } catch (const std::exception& e) {
        return set_error(SG_ERR_RUNTIME, e.what());
    } catch (...) {
        return set_error(SG_ERR_RUNTIME, "unknown error");
    }
}

}  // namespace

extern "C" {

const char* sg_version(void) { return kEngineVersion; }

const char* sg_last_error(void) { return t_last_error.c_str(); }

sg_status sg_manifest_load(const char* path, sg_manifest** out) {
    if (!path || !out) return set_error(SG_ERR_BAD_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&]() -> sg_status {
        try {
            auto* h = new sg_manifest{load_manifest(path)};
            *out = h;
            return SG_OK;
        } catch (const ManifestError& e) {
            const std::string what = e.what();
            if (what.find("cannot open") != std::string::npos)
                return set_error(SG_ERR_IO, what);
            if (what.find("JSON parse error") != std::string::npos)
                return set_error(SG_ERR_PARSE, what);
            return set_error(SG_ERR_INVALID, what);
        }
    });
}

sg_status sg_manifest_from_json(const char* json_text, sg_manifest** out) {
    if (!json_text || !out) return set_error(SG_ERR_BAD_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&]() -> sg_status {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::parse_error& e) {
            return set_error(SG_ERR_PARSE, e.what());
        }
        *out = new sg_manifest{manifest_from_json(j)};
        return SG_OK;
    });
}

sg_status sg_fixture_manifest(const char* name, sg_manifest** out) {
    if (!name || !out) return set_error(SG_ERR_BAD_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&]() -> sg_status {
        try {
            *out = new sg_manifest{fixture_manifest(name)};
            return SG_OK;
        } catch (const ManifestError& e) {
            const std::string what = e.what();
            if (what.find("unknown fixture") != std::string::npos)
                return set_error(SG_ERR_UNKNOWN_FIXTURE, what);
            return set_error(SG_ERR_INVALID, what);
        }
    });
}

int sg_fixture_count(void) { return static_cast<int>(fixture_list().size()); }

const char* sg_fixture_name(int index) {
    const auto& l = fixture_list();
    if (index < 0 || index >= static_cast<int>(l.size())) return nullptr;
    return l[static_cast<std::size_t>(index)].name.c_str();
}

const char* sg_fixture_signature(int index) {
    const auto& l = fixture_list();
    if (index < 0 || index >= static_cast<int>(l.size())) return nullptr;
    return l[static_cast<std::size_t>(index)].signature.c_str();
}

const char* sg_fixture_summary(int index) {
    const auto& l = fixture_list();
    if (index < 0 || index >= static_cast<int>(l.size())) return nullptr;
    return l[static_cast<std::size_t>(index)].summary.c_str();
}

sg_status sg_manifest_set_seed(sg_manifest* m, uint64_t seed) {
    if (!m) return set_error(SG_ERR_BAD_ARGUMENT, "null manifest");
    m->mf.seed = seed;
    return SG_OK;
}

sg_status sg_manifest_set_threads(sg_manifest* m, int threads) {
    if (!m) return set_error(SG_ERR_BAD_ARGUMENT, "null manifest");
    if (threads < 1 || threads > 256)
        return set_error(SG_ERR_BAD_ARGUMENT, "threads must be in [1, 256]");
    m->mf.threads = threads;
    return SG_OK;
}

sg_status sg_manifest_select_checks(sg_manifest* m, const char* comma_separated) {
    if (!m || !comma_separated) return set_error(SG_ERR_BAD_ARGUMENT, "null argument");
    std::vector<std::string> ids;
    std::string cur;
    for (const char* p = comma_separated;; ++p) {
        if (*p == ',' || *p == '\0') {
            if (!cur.empty()) ids.push_back(cur);
            cur.clear();
            if (*p == '\0') break;
        } else if (!std::isspace(static_cast<unsigned char>(*p))) {
            cur += *p;
        }
    }
    for (const auto& id : ids) {
        const auto& known = all_check_ids();
        if (std::find(known.begin(), known.end(), id) == known.end())
            return set_error(SG_ERR_INVALID, "unknown check id '" + id + "'");
    }
    m->mf.selected_checks = std::move(ids);
    return SG_OK;
}

sg_status sg_manifest_to_json(const sg_manifest* m, char** out_text) {
    if (!m || !out_text) return set_error(SG_ERR_BAD_ARGUMENT, "null argument");
    return guarded([&]() -> sg_status {
        *out_text = dup_string(m->mf.echo().dump(2) + "\n");
        return SG_OK;
    });
}

void sg_manifest_free(sg_manifest* m) { delete m; }

sg_status sg_run(const sg_manifest* m, sg_report** out) {
    if (!m || !out) return set_error(SG_ERR_BAD_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&]() -> sg_status {
        *out = new sg_report{run(m->mf)};
        return SG_OK;
    });
}

sg_status sg_report_emit(const sg_report* r, const char* format, char** out_text) {
    if (!r || !format || !out_text) return set_error(SG_ERR_BAD_ARGUMENT, "null argument");
    const std::string fmt = format;
    if (fmt != "human" && fmt != "machine")
        return set_error(SG_ERR_BAD_ARGUMENT, "format must be 'human' or 'machine'");
    return guarded([&]() -> sg_status {
        *out_text = dup_string(fmt == "human" ? emit_human(r->rep) : emit_machine(r->rep));
        return SG_OK;
    });
}

int sg_report_check_count(const sg_report* r) {
    return r ? static_cast<int>(r->rep.checks.size()) : 0;
}

int sg_report_fail_count(const sg_report* r) { return r ? r->rep.fail_count : 0; }

int sg_report_precondition_unmet_count(const sg_report* r) {
    return r ? r->rep.precondition_count : 0;
}

void sg_report_free(sg_report* r) { delete r; }

void sg_string_free(char* s) { delete[] s; }

}  // extern "C"
