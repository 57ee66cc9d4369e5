#include "osmon/pipeline.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "osmon/affiliation.hpp"
#include "osmon/apc.hpp"
#include "osmon/classifier.hpp"
#include "osmon/mentions.hpp"
#include "osmon/oa.hpp"
#include "osmon/report.hpp"
#include "osmon/text.hpp"
#include "osmon/util.hpp"

namespace osmon {

namespace {

using nlohmann::json;

std::filesystem::path work_dir(const PipelineConfig& c) { return c.output_dir / "work"; }

void require_artifact(const std::filesystem::path& path, std::string_view producing_stage) {
    if (!std::filesystem::exists(path))
        throw ConfigError("missing artifact " + path.string() + ": run the '" +
                          std::string(producing_stage) + "' stage first");
}

void merge_stage_counts(const PipelineConfig& config,
                        const std::map<std::string, std::int64_t>& updates) {
    json counts = json::object();
    const auto path = artifact::stage_counts(config);
    if (std::filesystem::exists(path))
        counts = json::parse(read_text_file(path));
    for (const auto& [key, value] : updates)
        counts[key] = value;
    write_text_atomic(path, counts.dump(2) + "\n");
}

std::map<std::string, std::int64_t> read_stage_counts(const PipelineConfig& config) {
    std::map<std::string, std::int64_t> counts;
    const auto path = artifact::stage_counts(config);
    if (!std::filesystem::exists(path))
        return counts;
    for (const auto& [key, value] : json::parse(read_text_file(path)).items())
        counts[key] = value.get<std::int64_t>();
    return counts;
}

std::vector<PublicationRecord> read_records_artifact(const std::filesystem::path& path) {
    std::vector<PublicationRecord> records;
    for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        try {
            records.push_back(record_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw DataError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    });
    return records;
}

std::vector<MergedPublication> read_corpus_artifact(const std::filesystem::path& path) {
    std::vector<MergedPublication> corpus;
    for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        try {
            corpus.push_back(merged_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw DataError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    });
    return corpus;
}

std::string records_to_jsonl(const std::vector<PublicationRecord>& records) {
    std::string out;
    for (const auto& rec : records) {
        out += record_to_json(rec).dump();
        out += '\n';
    }
    return out;
}

void run_ingest(const PipelineConfig& config) {
    std::vector<PublicationRecord> records;
    std::int64_t reject_count = 0;
    for (const auto& spec : config.sources) {
        IngestResult result = read_source_file(spec.path, spec.adapter);
        write_reject_sidecar(spec.path, result.rejects);
        reject_count += static_cast<std::int64_t>(result.rejects.size());
        for (auto& rec : result.records)
            records.push_back(std::move(rec));
    }
    const std::int64_t total = static_cast<std::int64_t>(records.size());
    PerimeterResult perimeter = apply_perimeter(std::move(records), config.perimeter);
    write_text_atomic(artifact::ingested(config), records_to_jsonl(perimeter.kept));
    write_text_atomic(artifact::perimeter_excluded(config), records_to_jsonl(perimeter.excluded));
    merge_stage_counts(config, {
        {"ingest_records", total},
        {"ingest_rejects", reject_count},
        {"perimeter_kept", static_cast<std::int64_t>(perimeter.kept.size())},
        {"perimeter_excluded", static_cast<std::int64_t>(perimeter.excluded.size())},
    });
}

void run_dedup(const PipelineConfig& config) {
    require_artifact(artifact::ingested(config), "ingest");
    const auto records = read_records_artifact(artifact::ingested(config));
    DedupResult result = dedup_corpus(records, config.priority);
    write_text_atomic(artifact::corpus(config), corpus_to_jsonl(result.corpus));
    std::string rejects;
    for (const auto& reject : result.rejects) {
        json j;
        j["members"] = json::array();
        for (const auto& [source, id] : reject.members)
            j["members"].push_back(json{{"source", to_string(source)}, {"source_id", id}});
        j["reason"] = reject.reason;
        rejects += j.dump();
        rejects += '\n';
    }
    write_text_atomic(artifact::dedup_rejects(config), rejects);
    merge_stage_counts(config, {
        {"dedup_merged", static_cast<std::int64_t>(result.corpus.size())},
        {"dedup_rejects", static_cast<std::int64_t>(result.rejects.size())},
    });
}

void run_enrich(const PipelineConfig& config) {
    require_artifact(artifact::corpus(config), "dedup");
    auto corpus = read_corpus_artifact(artifact::corpus(config));
    const Gazetteer gazetteer = Gazetteer::from_csv_file(config.gazetteer);
    parallel_for(corpus.size(), [&](std::size_t i) { assign_countries(corpus[i], gazetteer); });
    const Taxonomy taxonomy = Taxonomy::from_csv_file(config.taxonomy);
    classify_corpus(corpus, taxonomy);

    CountryFilterResult filtered;
    if (config.perimeter.required_countries)
        filtered = filter_by_country(std::move(corpus), *config.perimeter.required_countries);
    else
        filtered.kept = std::move(corpus);
    write_text_atomic(artifact::corpus_enriched(config), corpus_to_jsonl(filtered.kept));
    write_text_atomic(artifact::country_excluded(config), corpus_to_jsonl(filtered.excluded));
    merge_stage_counts(config, {
        {"country_kept", static_cast<std::int64_t>(filtered.kept.size())},
        {"country_excluded", static_cast<std::int64_t>(filtered.excluded.size())},
    });
}

JournalRegistry load_registry(const PipelineConfig& config) {
    if (config.journal_registry)
        return JournalRegistry::from_jsonl_file(*config.journal_registry);
    return JournalRegistry{};
}

void run_oa(const PipelineConfig& config) {
    require_artifact(artifact::corpus_enriched(config), "enrich");
    const auto corpus = read_corpus_artifact(artifact::corpus_enriched(config));
    const JournalRegistry registry = load_registry(config);

    std::vector<Snapshot> snapshots;
    for (const auto& path : config.snapshots)
        snapshots.push_back(load_snapshot(path));

    std::string out;
    for (const auto& snapshot : snapshots) {
        // corpus order is already canonical-pid sorted; keep rows grouped by
        // snapshot then pid
        std::vector<OAObservation> rows(corpus.size());
        parallel_for(corpus.size(), [&](std::size_t i) {
            OAObservation obs = observe_oa(corpus[i], snapshot);
            obs.business_model = classify_business_model(obs, corpus[i], registry);
            rows[i] = std::move(obs);
        });
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.pid < b.pid; });
        for (const auto& obs : rows) {
            json j;
            j["pid"] = obs.pid;
            j["snapshot"] = obs.snapshot_date;
            j["route"] = to_string(obs.route);
            if (obs.license)
                j["license"] = to_string(*obs.license);
            if (obs.business_model)
                j["business_model"] = to_string(*obs.business_model);
            j["unknown_in_snapshot"] = obs.unknown_in_snapshot;
            out += j.dump();
            out += '\n';
        }
    }
    write_text_atomic(artifact::oa_observations(config), out);
    merge_stage_counts(config, {
        {"oa_observations", static_cast<std::int64_t>(corpus.size() * snapshots.size())},
    });
}

void run_apc(const PipelineConfig& config) {
    require_artifact(artifact::corpus_enriched(config), "enrich");
    const auto corpus = read_corpus_artifact(artifact::corpus_enriched(config));
    const JournalRegistry registry = load_registry(config);
    const ApcTable table = config.apc_table ? ApcTable::from_csv_file(*config.apc_table)
                                            : ApcTable::from_rows({});

    std::vector<APCEstimate> estimates(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
        estimates[i] = estimate_apc(corpus[i], table, registry, config.apc_min_group);
    });
    std::string out;
    std::int64_t mixed = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& estimate = estimates[i];
        json j;
        j["pid"] = snapshot_key(corpus[i]);
        j["method"] = to_string(estimate.method);
        if (estimate.amount)
            j["amount"] = *estimate.amount;
        if (estimate.currency)
            j["currency"] = *estimate.currency;
        if (estimate.group_size)
            j["group_size"] = *estimate.group_size;
        if (estimate.mixed_currency_group) {
            j["mixed_currency_group"] = true;
            ++mixed;
        }
        out += j.dump();
        out += '\n';
    }
    write_text_atomic(artifact::apc_estimates(config), out);
    merge_stage_counts(config, {{"apc_mixed_currency_groups", mixed}});
}

void run_mentions(const PipelineConfig& config) {
    require_artifact(artifact::corpus_enriched(config), "enrich");
    const auto corpus = read_corpus_artifact(artifact::corpus_enriched(config));
    std::set<std::string> pids;
    for (const auto& pub : corpus)
        pids.insert(snapshot_key(pub));

    std::vector<MentionRecord> in_corpus;
    std::int64_t dropped = 0;
    std::int64_t rejects = 0;
    if (config.mentions) {
        MentionsParseResult parsed = parse_mentions_file(*config.mentions);
        write_reject_sidecar(*config.mentions, parsed.rejects);
        rejects = static_cast<std::int64_t>(parsed.rejects.size());
        for (auto& mention : parsed.records) {
            if (const auto doi = normalize_doi(mention.document_pid))
                mention.document_pid = *doi;
            if (pids.contains(mention.document_pid))
                in_corpus.push_back(std::move(mention));
            else
                ++dropped;  // outside the corpus perimeter: warn, never fail
        }
    }
    const auto indicators = indicators_for_corpus(in_corpus, config.tau);
    std::string out;
    for (const auto& doc : indicators) {
        json j;
        j["document_pid"] = doc.document_pid;
        for (const ObjectKind kind : {ObjectKind::dataset, ObjectKind::software}) {
            const KindIndicators& k = doc.of(kind);
            j[std::string(to_string(kind))] = json{{"uses", k.uses},
                                                   {"creates", k.creates},
                                                   {"shares", k.shares},
                                                   {"mention_count", k.mention_count}};
        }
        out += j.dump();
        out += '\n';
    }
    write_text_atomic(artifact::mention_indicators(config), out);
    merge_stage_counts(config, {
        {"mentions_in_corpus", static_cast<std::int64_t>(in_corpus.size())},
        {"mentions_dropped_outside_corpus", dropped},
        {"mentions_rejects", rejects},
    });
}

void run_report(const PipelineConfig& config) {
    require_artifact(artifact::corpus_enriched(config), "enrich");
    require_artifact(artifact::oa_observations(config), "oa");
    require_artifact(artifact::apc_estimates(config), "apc");
    require_artifact(artifact::mention_indicators(config), "mentions");

    ReportInputs inputs;
    inputs.corpus = read_corpus_artifact(artifact::corpus_enriched(config));
    inputs.tau = config.tau;
    inputs.funnel_mode = config.funnel_mode;
    inputs.stage_counts = read_stage_counts(config);

    for_each_line(artifact::oa_observations(config), [&](std::size_t, std::string_view line) {
        const json j = json::parse(line);
        OAObservation obs;
        obs.pid = j.at("pid").get<std::string>();
        obs.snapshot_date = j.at("snapshot").get<std::string>();
        obs.route = route_from_string(j.at("route").get<std::string>()).value_or(OaRoute::closed);
        if (j.contains("license"))
            obs.license = license_from_string(j.at("license").get<std::string>());
        if (j.contains("business_model"))
            obs.business_model =
                business_model_from_string(j.at("business_model").get<std::string>());
        obs.unknown_in_snapshot = j.value("unknown_in_snapshot", false);
        inputs.observations.push_back(std::move(obs));
    });

    for_each_line(artifact::apc_estimates(config), [&](std::size_t, std::string_view line) {
        const json j = json::parse(line);
        APCEstimate estimate;
        estimate.method =
            apc_method_from_string(j.at("method").get<std::string>()).value_or(ApcMethod::unknown);
        if (j.contains("amount"))
            estimate.amount = j.at("amount").get<double>();
        if (j.contains("currency"))
            estimate.currency = j.at("currency").get<std::string>();
        if (j.contains("group_size"))
            estimate.group_size = j.at("group_size").get<int>();
        inputs.estimates.emplace_back(j.at("pid").get<std::string>(), std::move(estimate));
    });

    for_each_line(artifact::mention_indicators(config), [&](std::size_t, std::string_view line) {
        const json j = json::parse(line);
        DocumentMentionIndicators doc;
        doc.document_pid = j.at("document_pid").get<std::string>();
        const auto read_kind = [&](const char* name, KindIndicators& k) {
            const auto& kj = j.at(name);
            k.uses = kj.at("uses").get<bool>();
            k.creates = kj.at("creates").get<bool>();
            k.shares = kj.at("shares").get<bool>();
            k.mention_count = kj.at("mention_count").get<std::size_t>();
        };
        read_kind("dataset", doc.dataset);
        read_kind("software", doc.software);
        inputs.indicators.push_back(std::move(doc));
    });

    KpiReport report = build_report(inputs);
    report.metadata["config_checksum"] = config.config_checksum;
    report.metadata["gazetteer_checksum"] = file_checksum(config.gazetteer);
    report.metadata["taxonomy_checksum"] = file_checksum(config.taxonomy);
    if (config.apc_table)
        report.metadata["apc_table_checksum"] = file_checksum(*config.apc_table);
    if (config.journal_registry)
        report.metadata["journal_registry_checksum"] = file_checksum(*config.journal_registry);
    emit_report(report, config.output_dir, true, true);
}

}  // namespace

namespace artifact {
std::filesystem::path ingested(const PipelineConfig& c) { return work_dir(c) / "ingested.jsonl"; }
std::filesystem::path perimeter_excluded(const PipelineConfig& c) {
    return work_dir(c) / "perimeter_excluded.jsonl";
}
std::filesystem::path corpus(const PipelineConfig& c) { return work_dir(c) / "corpus.jsonl"; }
std::filesystem::path dedup_rejects(const PipelineConfig& c) {
    return work_dir(c) / "dedup_rejects.jsonl";
}
std::filesystem::path corpus_enriched(const PipelineConfig& c) {
    return work_dir(c) / "corpus_enriched.jsonl";
}
std::filesystem::path country_excluded(const PipelineConfig& c) {
    return work_dir(c) / "country_excluded.jsonl";
}
std::filesystem::path oa_observations(const PipelineConfig& c) {
    return work_dir(c) / "oa_observations.jsonl";
}
std::filesystem::path apc_estimates(const PipelineConfig& c) {
    return work_dir(c) / "apc_estimates.jsonl";
}
std::filesystem::path mention_indicators(const PipelineConfig& c) {
    return work_dir(c) / "mention_indicators.jsonl";
}
std::filesystem::path stage_counts(const PipelineConfig& c) {
    return work_dir(c) / "stage_counts.json";
}
std::filesystem::path report_json(const PipelineConfig& c) { return c.output_dir / "report.json"; }
std::filesystem::path metadata_json(const PipelineConfig& c) {
    return c.output_dir / "metadata.json";
}
}  // namespace artifact

std::optional<Stage> stage_from_string(std::string_view s) {
    for (Stage stage : {Stage::ingest, Stage::dedup, Stage::enrich, Stage::oa, Stage::apc,
                        Stage::mentions, Stage::report, Stage::all}) {
        if (to_string(stage) == s)
            return stage;
    }
    return std::nullopt;
}

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::dedup: return "dedup";
    case Stage::enrich: return "enrich";
    case Stage::oa: return "oa";
    case Stage::apc: return "apc";
    case Stage::mentions: return "mentions";
    case Stage::report: return "report";
    case Stage::all: return "all";
    }
    return "all";
}

void run_stage(Stage stage, const PipelineConfig& config) {
    std::filesystem::create_directories(work_dir(config));
    switch (stage) {
    case Stage::ingest: run_ingest(config); break;
    case Stage::dedup: run_dedup(config); break;
    case Stage::enrich: run_enrich(config); break;
    case Stage::oa: run_oa(config); break;
    case Stage::apc: run_apc(config); break;
    case Stage::mentions: run_mentions(config); break;
    case Stage::report: run_report(config); break;
    case Stage::all:
        run_ingest(config);
        run_dedup(config);
        run_enrich(config);
        run_oa(config);
        run_apc(config);
        run_mentions(config);
        run_report(config);
        break;
    }
}

}  // namespace osmon
