#include "osmon/config.hpp"

#include <set>

#include <json.hpp>

#include "osmon/oa.hpp"
#include "osmon/util.hpp"

namespace osmon {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

PipelineConfig parse_config(const std::filesystem::path& path, const ConfigOverrides& overrides,
                            std::vector<std::string>& errors) {
    PipelineConfig config;
    config.config_path = path;

    std::string text;
    try {
        text = read_text_file(path);
    } catch (const DataError& e) {
        errors.emplace_back(e.what());
        return config;
    }
    config.config_checksum = text_checksum(text);

    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        errors.emplace_back(std::string("config is not valid JSON: ") + e.what());
        return config;
    }
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");

    try {
        if (!j.contains("sources") || !j.at("sources").is_array() || j.at("sources").empty()) {
            errors.emplace_back("sources: at least one source file is required");
        } else {
            for (const auto& sj : j.at("sources")) {
                SourceSpec spec;
                spec.path = resolve(base, sj.at("path").get<std::string>());
                const std::string adapter_name =
                    sj.contains("adapter") ? sj.at("adapter").get<std::string>()
                                           : sj.at("source").get<std::string>();
                try {
                    SourceAdapter adapter = builtin_adapter(adapter_name);
                    if (sj.contains("source")) {
                        const auto source =
                            source_from_string(sj.at("source").get<std::string>());
                        if (!source)
                            errors.emplace_back("sources: unknown source tag '" +
                                                sj.at("source").get<std::string>() + "'");
                        else
                            adapter.source = *source;
                    }
                    spec.adapter = adapter_from_json(std::move(adapter), sj);
                    if (const auto err = spec.adapter.validate())
                        errors.emplace_back("sources[" + spec.path.string() + "]: " + *err);
                } catch (const ConfigError& e) {
                    errors.emplace_back(e.what());
                }
                config.sources.push_back(std::move(spec));
            }
        }

        if (j.contains("priority")) {
            config.priority.order.clear();
            for (const auto& pj : j.at("priority")) {
                const auto source = source_from_string(pj.get<std::string>());
                if (!source)
                    errors.emplace_back("priority: unknown source '" + pj.get<std::string>() + "'");
                else
                    config.priority.order.push_back(*source);
            }
        }
        if (const auto err = config.priority.validate())
            errors.emplace_back("priority: " + *err);

        if (j.contains("perimeter")) {
            const auto& pj = j.at("perimeter");
            if (pj.contains("allowed_genres")) {
                for (const auto& gj : pj.at("allowed_genres")) {
                    const auto genre = genre_from_string(gj.get<std::string>());
                    if (!genre)
                        errors.emplace_back("perimeter: unknown genre '" + gj.get<std::string>() +
                                            "'");
                    else
                        config.perimeter.allowed_genres.insert(*genre);
                }
            }
            if (pj.contains("year_min"))
                config.perimeter.year_min = pj.at("year_min").get<int>();
            if (pj.contains("year_max"))
                config.perimeter.year_max = pj.at("year_max").get<int>();
            if (pj.contains("required_countries") && !pj.at("required_countries").is_null()) {
                std::set<std::string> required;
                for (const auto& cj : pj.at("required_countries"))
                    required.insert(cj.get<std::string>());
                config.perimeter.required_countries = std::move(required);
            }
        } else {
            errors.emplace_back("perimeter: section is required");
        }
        if (config.perimeter.allowed_genres.empty())
            config.perimeter.allowed_genres = {Genre::journal_article, Genre::proceedings,
                                               Genre::preprint};
        if (const auto err = config.perimeter.validate())
            errors.emplace_back(*err);

        if (j.contains("gazetteer"))
            config.gazetteer = resolve(base, j.at("gazetteer").get<std::string>());
        else
            errors.emplace_back("gazetteer: path is required");
        if (j.contains("taxonomy"))
            config.taxonomy = resolve(base, j.at("taxonomy").get<std::string>());
        else
            errors.emplace_back("taxonomy: path is required");
        if (j.contains("apc_table"))
            config.apc_table = resolve(base, j.at("apc_table").get<std::string>());
        if (j.contains("journal_registry"))
            config.journal_registry = resolve(base, j.at("journal_registry").get<std::string>());
        if (j.contains("mentions"))
            config.mentions = resolve(base, j.at("mentions").get<std::string>());
        if (j.contains("snapshots")) {
            for (const auto& sj : j.at("snapshots"))
                config.snapshots.push_back(resolve(base, sj.get<std::string>()));
        }

        if (j.contains("mention_threshold"))
            config.tau = j.at("mention_threshold").get<double>();
        if (j.contains("apc_min_group"))
            config.apc_min_group = j.at("apc_min_group").get<int>();
        if (j.contains("funnel_denominator")) {
            const auto mode =
                funnel_denominator_from_string(j.at("funnel_denominator").get<std::string>());
            if (!mode)
                errors.emplace_back("funnel_denominator: must be \"or\" or \"and\"");
            else
                config.funnel_mode = *mode;
        }

        if (j.contains("output_dir"))
            config.output_dir = resolve(base, j.at("output_dir").get<std::string>());
        else
            errors.emplace_back("output_dir: path is required");
    } catch (const json::exception& e) {
        errors.emplace_back(std::string("config: ") + e.what());
    }

    // command-line overrides beat the file
    if (overrides.output_dir)
        config.output_dir = *overrides.output_dir;
    if (overrides.gazetteer)
        config.gazetteer = *overrides.gazetteer;
    if (overrides.taxonomy)
        config.taxonomy = *overrides.taxonomy;
    if (overrides.tau)
        config.tau = *overrides.tau;
    if (overrides.apc_min_group)
        config.apc_min_group = *overrides.apc_min_group;
    if (overrides.funnel_denominator) {
        const auto mode = funnel_denominator_from_string(*overrides.funnel_denominator);
        if (!mode)
            errors.emplace_back("funnel-denominator: must be \"or\" or \"and\"");
        else
            config.funnel_mode = *mode;
    }

    // value ranges
    if (!(config.tau > 0.0 && config.tau < 1.0))
        errors.emplace_back("mention_threshold: must lie in (0, 1)");
    if (config.apc_min_group < 1)
        errors.emplace_back("apc_min_group: must be >= 1");

    // referenced files must exist at validation time
    const auto check_exists = [&](const std::filesystem::path& p, const std::string& field) {
        if (p.empty() || !std::filesystem::exists(p))
            errors.emplace_back(field + ": file not found: " + p.string());
    };
    for (const auto& spec : config.sources)
        check_exists(spec.path, "sources.path");
    if (j.contains("gazetteer"))
        check_exists(config.gazetteer, "gazetteer");
    if (j.contains("taxonomy"))
        check_exists(config.taxonomy, "taxonomy");
    if (config.apc_table)
        check_exists(*config.apc_table, "apc_table");
    if (config.journal_registry)
        check_exists(*config.journal_registry, "journal_registry");
    if (config.mentions)
        check_exists(*config.mentions, "mentions");
    for (const auto& snapshot : config.snapshots)
        check_exists(snapshot, "snapshots");

    // snapshot names carry their dates, and the series must advance
    std::string previous_date;
    for (const auto& snapshot : config.snapshots) {
        const auto date = snapshot_date_from_filename(snapshot);
        if (!date) {
            errors.emplace_back("snapshots: file name must be oa-snapshot-YYYY-MM-DD.jsonl: " +
                                snapshot.string());
            continue;
        }
        if (!previous_date.empty() && *date <= previous_date)
            errors.emplace_back("snapshots: dates must be strictly increasing (" + previous_date +
                                " then " + *date + ")");
        previous_date = *date;
    }

    return config;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    std::vector<std::string> errors;
    PipelineConfig config = parse_config(path, overrides, errors);
    if (!errors.empty()) {
        std::string message = "invalid config " + path.string() + ":";
        for (const auto& error : errors)
            message += "\n  - " + error;
        throw ConfigError(message);
    }
    return config;
}

std::vector<std::string> validate_config_file(const std::filesystem::path& path,
                                              const ConfigOverrides& overrides) {
    std::vector<std::string> errors;
    parse_config(path, overrides, errors);
    return errors;
}

}  // namespace osmon
