#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace slantgeo {

namespace {

using nlohmann::json;

void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void write_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

// nlohmann objects iterate in sorted key order, which this writer relies on
void write_json(std::string& out, const json& j) {
    switch (j.type()) {
        case json::value_t::null: out += "null"; break;
        case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
        case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
        case json::value_t::number_float: write_number(out, j.get<double>()); break;
        case json::value_t::string: write_escaped(out, j.get<std::string>()); break;
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ',';
                first = false;
                write_json(out, e);
            }
            out += ']';
            break;
        }
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                write_escaped(out, it.key());
                out += ':';
                write_json(out, it.value());
            }
            out += '}';
            break;
        }
        default: out += "null";
    }
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

std::string emit_machine(const RunReport& rep) {
    json doc;
    doc["engine"] = {{"name", kEngineName}, {"version", kEngineVersion}};
    doc["manifest"] = rep.manifest_echo;
    doc["seed"] = rep.seed;
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json jc;
        jc["id"] = c.id;
        jc["status"] = c.status;
        jc["worst"] = c.worst;
        jc["tolerance"] = c.tolerance;
        jc["note"] = c.note;
        jc["details"] = c.details;
        checks.push_back(std::move(jc));
    }
    doc["checks"] = std::move(checks);
    doc["discrepancies"] = rep.discrepancies;
    doc["summary"] = {{"pass", rep.pass_count},
                      {"fail", rep.fail_count},
                      {"precondition_unmet", rep.precondition_count}};

    std::string out;
    out.reserve(1 << 14);
    write_json(out, doc);
    out += '\n';
    return out;
}

std::string emit_human(const RunReport& rep) {
    std::ostringstream os;
    const std::string name =
        rep.manifest_echo.contains("name") ? rep.manifest_echo["name"].get<std::string>() : "?";
    os << kEngineName << ' ' << kEngineVersion << " — manifest '" << name << "', seed "
       << rep.seed << "\n\n";

    char line[256];
    std::snprintf(line, sizeof(line), "  %-24s %-20s %12s %10s %9s\n", "check", "status", "worst",
                  "tol", "time");
    os << line;
    for (const auto& c : rep.checks) {
        std::snprintf(line, sizeof(line), "  %-24s %-20s %12s %10s %7.1fms\n", c.id.c_str(),
                      c.status.c_str(), short_num(c.worst).c_str(),
                      short_num(c.tolerance).c_str(), c.wall_ms);
        os << line;
        if (!c.note.empty()) os << "      note: " << c.note << "\n";
    }

    if (!rep.discrepancies.empty()) {
        os << "\n  claims (recorded vs measured)\n";
        for (const auto& d : rep.discrepancies) {
            std::string claimed = d["claimed"].is_string() ? d["claimed"].get<std::string>()
                                                           : d["claimed"].dump();
            std::string measured = d["measured"].is_string() ? d["measured"].get<std::string>()
                                                             : d["measured"].dump();
            std::snprintf(line, sizeof(line), "  %-20s claimed %-22s measured %-22s %s\n",
                          d["claim"].get<std::string>().c_str(), claimed.c_str(), measured.c_str(),
                          d["match"].get<bool>() ? "match" : "MISMATCH");
            os << line;
            if (d.contains("details"))
                for (auto it = d["details"].begin(); it != d["details"].end(); ++it)
                    os << "      " << it.key() << " = " << it.value().dump() << "\n";
        }
    }

    os << "\n  summary: " << rep.checks.size() << " checks, " << rep.pass_count << " pass, "
       << rep.fail_count << " fail, " << rep.precondition_count << " precondition-unmet ("
       << short_num(rep.total_ms) << " ms)\n";
    return os.str();
}

}  // namespace slantgeo
