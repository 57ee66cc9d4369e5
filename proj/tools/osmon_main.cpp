#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "osmon/pipeline.hpp"
#include "osmon/util.hpp"

namespace {

// exit codes: 0 ok, 1 usage/config, 2 data, 3 internal
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct StageArgs {
    std::string config_path;
    osmon::ConfigOverrides overrides;
};

void add_common_options(CLI::App* cmd, StageArgs& args) {
    cmd->add_option("--config", args.config_path, "pipeline config file (JSON)")->required();
    cmd->add_option_function<std::string>(
        "--out,-o", [&](const std::string& v) { args.overrides.output_dir = v; },
        "override the output directory");
    cmd->add_option_function<std::string>(
        "--gazetteer", [&](const std::string& v) { args.overrides.gazetteer = v; },
        "override the gazetteer CSV");
    cmd->add_option_function<std::string>(
        "--taxonomy", [&](const std::string& v) { args.overrides.taxonomy = v; },
        "override the taxonomy CSV");
    cmd->add_option_function<double>(
        "--tau", [&](double v) { args.overrides.tau = v; },
        "mention indicator threshold in (0,1)");
    cmd->add_option_function<int>(
        "--apc-min-group", [&](int v) { args.overrides.apc_min_group = v; },
        "minimum journal-year group size for APC averages");
    cmd->add_option_function<std::string>(
        "--funnel-denominator",
        [&](const std::string& v) { args.overrides.funnel_denominator = v; },
        "funnel denominator mode: or | and");
}

int run(osmon::Stage stage, const StageArgs& args) {
    const osmon::PipelineConfig config = osmon::load_config(args.config_path, args.overrides);
    osmon::run_stage(stage, config);
    std::printf("%s: ok (output: %s)\n", std::string(osmon::to_string(stage)).c_str(),
                config.output_dir.string().c_str());
    return kExitOk;
}

int run_validate(const StageArgs& args) {
    const auto errors = osmon::validate_config_file(args.config_path, args.overrides);
    if (errors.empty()) {
        std::printf("config ok: %s\n", args.config_path.c_str());
        return kExitOk;
    }
    for (const auto& error : errors)
        std::fprintf(stderr, "config error: %s\n", error.c_str());
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"osmon - open science publication corpus and KPI pipeline"};
    app.require_subcommand(1);

    StageArgs args;
    std::vector<std::pair<osmon::Stage, CLI::App*>> stage_cmds;
    for (const osmon::Stage stage :
         {osmon::Stage::ingest, osmon::Stage::dedup, osmon::Stage::enrich, osmon::Stage::oa,
          osmon::Stage::apc, osmon::Stage::mentions, osmon::Stage::report, osmon::Stage::all}) {
        CLI::App* cmd = app.add_subcommand(std::string(osmon::to_string(stage)),
                                           "run the " + std::string(osmon::to_string(stage)) +
                                               " stage");
        add_common_options(cmd, args);
        stage_cmds.emplace_back(stage, cmd);
    }
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "statically validate a config file and exit");
    add_common_options(validate_cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (validate_cmd->parsed())
            return run_validate(args);
        for (const auto& [stage, cmd] : stage_cmds) {
            if (cmd->parsed())
                return run(stage, args);
        }
        std::fprintf(stderr, "no subcommand given\n");
        return kExitConfig;
    } catch (const osmon::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    } catch (const osmon::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
}
