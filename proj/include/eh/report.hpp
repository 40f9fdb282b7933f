#pragma once

#include <span>
#include <string>
#include <vector>

#include "eh/bounds.hpp"

namespace eh {

// Reproducibility record written next to every artifact a CLI run emits.
struct RunManifest {
    std::string command_line;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string config_digest;  // FNV-1a of the canonical flag string
    std::string created_utc;
    std::string tool_version;
    std::vector<std::string> outputs;

    std::string to_json() const;
};

std::string fnv1a_hex(const std::string& data);
std::string utc_timestamp();

// Fixed column order: n,k,ell,delta,h_bits,bound_t16,bound_t17,bound_t18,
// exact_log2,gap,runtime_s. 17 significant digits; empty cells for missing
// exact counts. Failed rows keep their instance name with an error column.
std::string bound_rows_csv(std::span<const SweepRow> rows);
std::string bound_rows_json(std::span<const SweepRow> rows);

std::string bound_report_csv(const BoundReport& rep);
std::string bound_report_json(const BoundReport& rep);

void write_text_file(const std::string& path, const std::string& content);

} // namespace eh
