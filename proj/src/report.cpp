#include "osmon/report.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "osmon/classifier.hpp"
#include "osmon/util.hpp"

namespace osmon {

namespace {

using nlohmann::json;

json ratio_cell(const Ratio& ratio) {
    const auto formatted = format_ratio(ratio);
    return formatted ? json(*formatted) : json(nullptr);
}

// oa_rate: (snapshot x year x discipline x route) counts, plus an "open"
// aggregate row per slice carrying the headline rate.
json build_oa_table(const ReportInputs& inputs) {
    std::map<std::string, const MergedPublication*> by_key;
    for (const auto& pub : inputs.corpus)
        by_key[snapshot_key(pub)] = &pub;

    // snapshot -> slice(year, discipline) -> route counts
    struct Slice {
        std::map<OaRoute, std::int64_t> routes;
        std::int64_t total = 0;
    };
    std::map<std::string, std::map<std::pair<int, std::string>, Slice>> per_snapshot;
    for (const auto& obs : inputs.observations) {
        const auto it = by_key.find(obs.pid);
        if (it == by_key.end())
            continue;
        const MergedPublication& pub = *it->second;
        const int year = pub.fields.year.value_or(0);
        const std::string discipline = pub.discipline.value_or(kUnclassified);
        Slice& slice = per_snapshot[obs.snapshot_date][{year, discipline}];
        slice.routes[obs.route] += 1;
        slice.total += 1;
    }

    json table = json::array();
    for (const auto& [snapshot, slices] : per_snapshot) {
        for (const auto& [key, slice] : slices) {
            std::int64_t open = 0;
            for (const OaRoute route : {OaRoute::closed, OaRoute::publisher, OaRoute::repository,
                                        OaRoute::publisher_repository}) {
                const auto it = slice.routes.find(route);
                const std::int64_t count = it == slice.routes.end() ? 0 : it->second;
                if (route != OaRoute::closed)
                    open += count;
                json row;
                row["snapshot"] = snapshot;
                row["year"] = key.first;
                row["discipline"] = key.second;
                row["route"] = to_string(route);
                row["numerator"] = count;
                row["denominator"] = slice.total;
                row["rate"] = ratio_cell({count, slice.total});
                table.push_back(std::move(row));
            }
            json row;
            row["snapshot"] = snapshot;
            row["year"] = key.first;
            row["discipline"] = key.second;
            row["route"] = "open";
            row["numerator"] = open;
            row["denominator"] = slice.total;
            row["rate"] = ratio_cell({open, slice.total});
            table.push_back(std::move(row));
        }
    }
    return table;
}

json build_apc_table(const ReportInputs& inputs) {
    std::map<std::string, const MergedPublication*> by_key;
    for (const auto& pub : inputs.corpus)
        by_key[snapshot_key(pub)] = &pub;

    std::vector<std::pair<std::string, APCEstimate>> keyed;
    for (const auto& [pid, estimate] : inputs.estimates) {
        const auto it = by_key.find(pid);
        if (it == by_key.end())
            continue;
        const MergedPublication& pub = *it->second;
        const int year = pub.fields.year.value_or(0);
        const std::string discipline = pub.discipline.value_or(kUnclassified);
        keyed.emplace_back(std::to_string(year) + "\x1f" + discipline, estimate);
    }
    const auto groups = apc_aggregate(keyed);

    json table = json::array();
    for (const auto& [key, stats] : groups) {
        const auto sep = key.find('\x1f');
        json row;
        row["year"] = std::stoi(key.substr(0, sep));
        row["discipline"] = key.substr(sep + 1);
        row["count_known"] = stats.count_known;
        row["count_unknown"] = stats.count_unknown;
        row["total_amount"] = format_amount(stats.total_known);
        row["mean_amount"] = stats.mean ? json(format_amount(*stats.mean)) : json(nullptr);
        row["currency"] = stats.currency ? json(*stats.currency) : json(nullptr);
        table.push_back(std::move(row));
    }
    return table;
}

json build_funnel_table(const ReportInputs& inputs) {
    json table = json::array();
    for (const ObjectKind kind : {ObjectKind::dataset, ObjectKind::software}) {
        const FunnelKPI kpi = funnel_kpi(inputs.indicators, kind, inputs.funnel_mode);
        json row;
        row["object_kind"] = to_string(kind);
        row["mode"] = to_string(inputs.funnel_mode);
        row["tau"] = format_amount(inputs.tau);
        row["numerator"] = kpi.rate.numerator;
        row["denominator"] = kpi.rate.denominator;
        row["rate"] = ratio_cell(kpi.rate);
        table.push_back(std::move(row));
    }
    return table;
}

json build_stage_table(const ReportInputs& inputs) {
    json table = json::array();
    for (const auto& [stage, count] : inputs.stage_counts) {
        json row;
        row["stage"] = stage;
        row["count"] = count;
        table.push_back(std::move(row));
    }
    return table;
}

std::string csv_escape(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos)
        return value;
    std::string out = "\"";
    for (const char c : value) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out += '"';
    return out;
}

std::string cell_to_csv(const json& cell) {
    if (cell.is_null())
        return "";
    if (cell.is_string())
        return csv_escape(cell.get<std::string>());
    return cell.dump();
}

}  // namespace

KpiReport build_report(const ReportInputs& inputs) {
    KpiReport report;
    json tables;
    tables["oa_rate"] = build_oa_table(inputs);
    tables["apc_by_year_discipline"] = build_apc_table(inputs);
    tables["funnel"] = build_funnel_table(inputs);
    tables["corpus_stage"] = build_stage_table(inputs);
    report.body["tables"] = std::move(tables);
    report.body["corpus_size"] = inputs.corpus.size();
    return report;
}

std::string canonical_json(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

std::map<std::string, std::string> report_tables_csv(const KpiReport& report) {
    std::map<std::string, std::string> files;
    for (const auto& [name, table] : report.body.at("tables").items()) {
        std::set<std::string> columns;
        for (const auto& row : table) {
            for (const auto& [key, value] : row.items())
                columns.insert(key);
        }
        std::string out;
        bool first = true;
        for (const auto& col : columns) {
            if (!first)
                out += ',';
            out += csv_escape(col);
            first = false;
        }
        out += '\n';
        for (const auto& row : table) {
            first = true;
            for (const auto& col : columns) {
                if (!first)
                    out += ',';
                first = false;
                if (row.contains(col))
                    out += cell_to_csv(row.at(col));
            }
            out += '\n';
        }
        files[name] = std::move(out);
    }
    return files;
}

void emit_report(const KpiReport& report, const std::filesystem::path& out_dir, bool emit_json,
                 bool emit_csv) {
    std::filesystem::create_directories(out_dir);
    if (emit_json)
        write_text_atomic(out_dir / "report.json", canonical_json(report.body));
    if (emit_csv) {
        for (const auto& [name, content] : report_tables_csv(report))
            write_text_atomic(out_dir / "tables" / (name + ".csv"), content);
    }
    // metadata kept out of the body so golden comparisons stay stable
    json meta;
    for (const auto& [key, value] : report.metadata)
        meta[key] = value;
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    meta["generated_at"] = buf;
    write_text_atomic(out_dir / "metadata.json", canonical_json(meta));
}

}  // namespace osmon
