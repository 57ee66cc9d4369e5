#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "osmon/dedup.hpp"
#include "osmon/ingest.hpp"
#include "osmon/mentions.hpp"

namespace osmon {

struct SourceSpec {
    std::filesystem::path path;
    SourceAdapter adapter;
};

// The single declarative pipeline configuration. Relative paths are resolved
// against the config file's directory; output_dir may be overridden from the
// command line.
struct PipelineConfig {
    std::filesystem::path config_path;
    std::string config_checksum;

    std::vector<SourceSpec> sources;
    SourcePriority priority = SourcePriority::default_priority();
    PerimeterRule perimeter;

    std::filesystem::path gazetteer;
    std::filesystem::path taxonomy;
    std::optional<std::filesystem::path> apc_table;
    std::optional<std::filesystem::path> journal_registry;
    std::optional<std::filesystem::path> mentions;
    std::vector<std::filesystem::path> snapshots;

    double tau = 0.5;
    int apc_min_group = 5;
    FunnelDenominator funnel_mode = FunnelDenominator::use_or_create;

    std::filesystem::path output_dir;
};

// Command-line overrides applied on top of the file.
struct ConfigOverrides {
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::filesystem::path> gazetteer;
    std::optional<std::filesystem::path> taxonomy;
    std::optional<double> tau;
    std::optional<int> apc_min_group;
    std::optional<std::string> funnel_denominator;
};

// Parses and statically validates; throws ConfigError listing every problem.
PipelineConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides);

// Full static validation without running any stage; empty list when ok.
std::vector<std::string> validate_config_file(const std::filesystem::path& path,
                                              const ConfigOverrides& overrides);

}  // namespace osmon
