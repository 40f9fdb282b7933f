#include "eh/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "eh/errors.hpp"

namespace eh {

namespace {

constexpr const char* kCsvHeader =
    "n,k,ell,delta,h_bits,bound_t16,bound_t17,bound_t18,exact_log2,gap,runtime_s";
constexpr int kSchemaVersion = 1;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::ordered_json report_to_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["instance"] = r.instance;
    j["n"] = r.n;
    j["k"] = r.k;
    j["ell"] = r.ell;
    j["delta"] = r.delta;
    j["h_bits"] = r.h_bits;
    j["hbar"] = r.hbar;
    j["hbar_ell"] = r.hbar_ell;
    j["bound_t16"] = r.bound_t16;
    j["bound_t17"] = r.bound_t17;
    j["bound_t18"] = r.bound_t18;
    j["slack_c"] = r.slack_c;
    if (r.exact_log2)
        j["exact_log2"] = *r.exact_log2;
    else
        j["exact_log2"] = nullptr;
    if (r.gap)
        j["gap"] = *r.gap;
    else
        j["gap"] = nullptr;
    j["runtime_s"] = r.runtime_s;
    return j;
}

// Data rows carry exactly the pinned columns; failed rows become trailing
// comment lines so the table stays parseable.
std::string csv_line(const BoundReport& r) {
    return std::to_string(r.n) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.ell) + ',' + fmt17(r.delta) + ',' + fmt17(r.h_bits) + ',' +
           fmt17(r.bound_t16) + ',' + fmt17(r.bound_t17) + ',' + fmt17(r.bound_t18) + ',' +
           (r.exact_log2 ? fmt17(*r.exact_log2) : "") + ',' +
           (r.gap ? fmt17(*r.gap) : "") + ',' + fmt17(r.runtime_s);
}

} // namespace

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command_line"] = command_line;
    j["seed"] = seed;
    j["threads"] = threads;
    j["config_digest"] = config_digest;
    j["created_utc"] = created_utc;
    j["tool_version"] = tool_version;
    j["outputs"] = outputs;
    return j.dump(2);
}

std::string bound_rows_csv(std::span<const SweepRow> rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& row : rows)
        if (row.report) {
            out += csv_line(*row.report);
            out += '\n';
        }
    for (const auto& row : rows)
        if (!row.report) out += "# " + row.instance + ": " + row.error + '\n';
    return out;
}

std::string bound_rows_json(std::span<const SweepRow> rows) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        if (row.report) {
            j["rows"].push_back(report_to_json(*row.report));
        } else {
            nlohmann::ordered_json e;
            e["instance"] = row.instance;
            e["error"] = row.error;
            j["rows"].push_back(e);
        }
    }
    return j.dump(2);
}

std::string bound_report_csv(const BoundReport& rep) {
    std::string out = kCsvHeader;
    out += '\n';
    out += csv_line(rep);
    out += '\n';
    return out;
}

std::string bound_report_json(const BoundReport& rep) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["rows"] = nlohmann::ordered_json::array({report_to_json(rep)});
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error("write failed for " + path);
}

} // namespace eh
