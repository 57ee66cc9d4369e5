#pragma once

#include <optional>
#include <string>

#include "osmon/config.hpp"

namespace osmon {

enum class Stage { ingest, dedup, enrich, oa, apc, mentions, report, all };

std::optional<Stage> stage_from_string(std::string_view s);
std::string_view to_string(Stage stage);

// Runs one stage (or the whole chain) against the configured output
// directory. Outputs are written atomically; prior-stage artifacts must exist.
// Throws ConfigError (usage/dependency), DataError (unreadable inputs).
void run_stage(Stage stage, const PipelineConfig& config);

// Well-known artifact paths under the output directory.
namespace artifact {
std::filesystem::path ingested(const PipelineConfig& c);
std::filesystem::path perimeter_excluded(const PipelineConfig& c);
std::filesystem::path corpus(const PipelineConfig& c);
std::filesystem::path dedup_rejects(const PipelineConfig& c);
std::filesystem::path corpus_enriched(const PipelineConfig& c);
std::filesystem::path country_excluded(const PipelineConfig& c);
std::filesystem::path oa_observations(const PipelineConfig& c);
std::filesystem::path apc_estimates(const PipelineConfig& c);
std::filesystem::path mention_indicators(const PipelineConfig& c);
std::filesystem::path stage_counts(const PipelineConfig& c);
std::filesystem::path report_json(const PipelineConfig& c);
std::filesystem::path metadata_json(const PipelineConfig& c);
}  // namespace artifact

}  // namespace osmon
