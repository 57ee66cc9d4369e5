#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "osmon/apc.hpp"
#include "osmon/dedup.hpp"
#include "osmon/mentions.hpp"
#include "osmon/oa.hpp"

namespace osmon {

// Everything the report joins; each piece is one upstream stage's artifact.
struct ReportInputs {
    std::vector<MergedPublication> corpus;  // enriched
    std::vector<OAObservation> observations;
    std::vector<std::pair<std::string, APCEstimate>> estimates;  // snapshot key -> estimate
    std::vector<DocumentMentionIndicators> indicators;
    std::map<std::string, std::int64_t> stage_counts;
    double tau = 0.5;
    FunnelDenominator funnel_mode = FunnelDenominator::use_or_create;
};

// Deterministic report body: arrays of row objects per table, every cell
// carrying its numerator and denominator. Timestamps and checksums live in a
// separate metadata block so the body is byte-stable.
struct KpiReport {
    nlohmann::json body;
    std::map<std::string, std::string> metadata;  // checksums etc., no timestamps
};

KpiReport build_report(const ReportInputs& inputs);

// Canonical serialization: sorted keys, two-space indent, LF, trailing
// newline; ratios as fixed 4-decimal strings, amounts as 2-decimal strings.
std::string canonical_json(const nlohmann::json& j);

// report.json (+ tables/<name>.csv with format csv or both) + metadata.json.
void emit_report(const KpiReport& report, const std::filesystem::path& out_dir, bool emit_json,
                 bool emit_csv);

// One CSV per table: header = sorted column names, rows in body order,
// null cells empty. Returns table name -> file content.
std::map<std::string, std::string> report_tables_csv(const KpiReport& report);

}  // namespace osmon
