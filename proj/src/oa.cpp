#include "osmon/oa.hpp"

#include <algorithm>
#include <regex>

#include <json.hpp>

#include "osmon/text.hpp"

namespace osmon {

namespace {

using nlohmann::json;

}  // namespace

std::string_view to_string(HostType v) {
    return v == HostType::publisher ? "publisher" : "repository";
}

std::string_view to_string(OaRoute v) {
    switch (v) {
    case OaRoute::closed: return "closed";
    case OaRoute::publisher: return "publisher";
    case OaRoute::repository: return "repository";
    case OaRoute::publisher_repository: return "publisher_repository";
    }
    return "closed";
}

std::string_view to_string(BusinessModel v) {
    switch (v) {
    case BusinessModel::diamond: return "diamond";
    case BusinessModel::gold: return "gold";
    case BusinessModel::hybrid: return "hybrid";
    case BusinessModel::publisher_free_to_read: return "publisher_free_to_read";
    }
    return "diamond";
}

std::string_view to_string(License v) {
    switch (v) {
    case License::cc0: return "cc0";
    case License::cc_by: return "cc-by";
    case License::cc_by_sa: return "cc-by-sa";
    case License::cc_by_nc: return "cc-by-nc";
    case License::cc_by_nc_nd: return "cc-by-nc-nd";
    case License::publisher_specific: return "publisher-specific";
    }
    return "publisher-specific";
}

std::optional<HostType> host_type_from_string(std::string_view s) {
    if (s == "publisher")
        return HostType::publisher;
    if (s == "repository")
        return HostType::repository;
    return std::nullopt;
}

std::optional<OaRoute> route_from_string(std::string_view s) {
    for (OaRoute v : {OaRoute::closed, OaRoute::publisher, OaRoute::repository,
                      OaRoute::publisher_repository}) {
        if (to_string(v) == s)
            return v;
    }
    return std::nullopt;
}

std::optional<BusinessModel> business_model_from_string(std::string_view s) {
    for (BusinessModel v : {BusinessModel::diamond, BusinessModel::gold, BusinessModel::hybrid,
                            BusinessModel::publisher_free_to_read}) {
        if (to_string(v) == s)
            return v;
    }
    return std::nullopt;
}

std::optional<License> license_from_string(std::string_view s) {
    for (License v : {License::cc0, License::cc_by, License::cc_by_sa, License::cc_by_nc,
                      License::cc_by_nc_nd, License::publisher_specific}) {
        if (to_string(v) == s)
            return v;
    }
    return std::nullopt;
}

License normalize_license(std::string_view raw) {
    const std::string text = " " + normalize_text(raw).value + " ";
    const auto has = [&](std::string_view needle) {
        return text.find(" " + std::string(needle) + " ") != std::string::npos;
    };
    // vendor strings and CC URLs both reduce to the same token runs after
    // normalization ("CC BY-NC 4.0", "…/licenses/by-nc/4.0/" -> "by nc")
    if (has("cc0") || has("cc 0") || has("cc zero") || has("public domain") ||
        has("publicdomain"))
        return License::cc0;
    const bool creative_commons = has("cc") || has("creativecommons") || has("creative commons");
    if (!creative_commons)
        return License::publisher_specific;
    if (has("by nc nd"))
        return License::cc_by_nc_nd;
    if (has("by nc sa") || has("by nd"))
        return License::publisher_specific;  // outside the fixed vocabulary
    if (has("by nc"))
        return License::cc_by_nc;
    if (has("by sa"))
        return License::cc_by_sa;
    if (has("by"))
        return License::cc_by;
    return License::publisher_specific;
}

bool is_open_license(License license) {
    return license != License::publisher_specific;
}

std::optional<std::string> snapshot_date_from_filename(const std::filesystem::path& path) {
    static const std::regex re(R"(oa-snapshot-(\d{4}-\d{2}-\d{2})\.jsonl$)");
    std::smatch m;
    const std::string name = path.filename().string();
    if (std::regex_search(name, m, re))
        return m[1].str();
    return std::nullopt;
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    Snapshot snapshot;
    const auto date = snapshot_date_from_filename(path);
    if (!date)
        throw DataError("snapshot file name must be oa-snapshot-YYYY-MM-DD.jsonl: " +
                        path.string());
    snapshot.date = *date;
    for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        try {
            const json j = json::parse(line);
            std::string key = j.at("doi").get<std::string>();
            if (const auto doi = normalize_doi(key))
                key = *doi;
            if (snapshot.entries.contains(key)) {
                snapshot.rejects.push_back({line_no, "duplicate PID in snapshot: " + key});
                return;
            }
            std::vector<OALocation> locations;
            for (const auto& lj : j.at("locations")) {
                OALocation loc;
                const auto host = host_type_from_string(lj.at("host_type").get<std::string>());
                if (!host)
                    throw DataError("unknown host_type");
                loc.host_type = *host;
                if (lj.contains("license") && !lj.at("license").is_null())
                    loc.license = normalize_license(lj.at("license").get<std::string>());
                if (lj.contains("url") && lj.at("url").is_string())
                    loc.url = lj.at("url").get<std::string>();
                if (lj.contains("repository_name") && lj.at("repository_name").is_string())
                    loc.repository_name = lj.at("repository_name").get<std::string>();
                locations.push_back(std::move(loc));
            }
            snapshot.entries.emplace(std::move(key), std::move(locations));
        } catch (const std::exception& e) {
            snapshot.rejects.push_back({line_no, std::string("parse error: ") + e.what()});
        }
    });
    return snapshot;
}

std::string snapshot_key(const MergedPublication& pub) {
    if (pub.canonical_pid.scheme == "doi")
        return pub.canonical_pid.value;
    return pub.canonical_pid.key();
}

OAObservation observe_oa(const MergedPublication& pub, const Snapshot& snapshot) {
    OAObservation obs;
    obs.pid = snapshot_key(pub);
    obs.snapshot_date = snapshot.date;

    const auto it = snapshot.entries.find(obs.pid);
    if (it == snapshot.entries.end()) {
        obs.route = OaRoute::closed;
        obs.unknown_in_snapshot = true;
        return obs;
    }
    bool publisher = false;
    bool repository = false;
    std::optional<License> best;
    for (const auto& loc : it->second) {
        if (loc.host_type == HostType::publisher) {
            publisher = true;
            // License enumerators are ordered most permissive first
            if (loc.license && (!best || static_cast<int>(*loc.license) < static_cast<int>(*best)))
                best = loc.license;
        } else {
            repository = true;
        }
    }
    if (publisher && repository)
        obs.route = OaRoute::publisher_repository;
    else if (publisher)
        obs.route = OaRoute::publisher;
    else if (repository)
        obs.route = OaRoute::repository;
    else
        obs.route = OaRoute::closed;
    obs.license = best;
    return obs;
}

JournalRegistry JournalRegistry::from_jsonl_file(const std::filesystem::path& path) {
    JournalRegistry registry;
    for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        try {
            const json j = json::parse(line);
            JournalRegistryEntry entry;
            entry.is_open_journal = j.at("is_open_journal").get<bool>();
            if (j.contains("apc_amount") && !j.at("apc_amount").is_null())
                entry.apc_amount = j.at("apc_amount").get<double>();
            if (j.contains("apc_currency") && j.at("apc_currency").is_string())
                entry.apc_currency = j.at("apc_currency").get<std::string>();
            registry.add(j.at("issn").get<std::string>(), entry);
        } catch (const std::exception& e) {
            throw DataError("journal registry " + path.string() + " line " +
                            std::to_string(line_no) + ": " + e.what());
        }
    });
    return registry;
}

void JournalRegistry::add(std::string_view issn, JournalRegistryEntry entry) {
    if (const auto normalized = normalize_issn(issn))
        entries_[*normalized] = entry;
}

std::optional<JournalRegistryEntry> JournalRegistry::lookup(
    const std::vector<std::string>& issns) const {
    for (const auto& issn : issns) {
        const auto normalized = normalize_issn(issn);
        if (!normalized)
            continue;
        if (const auto it = entries_.find(*normalized); it != entries_.end())
            return it->second;
    }
    return std::nullopt;
}

std::optional<BusinessModel> classify_business_model(const OAObservation& obs,
                                                     const MergedPublication& pub,
                                                     const JournalRegistry& registry) {
    if (obs.route != OaRoute::publisher && obs.route != OaRoute::publisher_repository)
        return std::nullopt;
    const auto entry = registry.lookup(pub.fields.journal_issns);
    // an unknown journal is treated as not open
    const bool open_journal = entry && entry->is_open_journal;
    if (open_journal) {
        if (entry->apc_amount && *entry->apc_amount == 0.0)
            return BusinessModel::diamond;
        // positive or unknown APC
        return BusinessModel::gold;
    }
    if (obs.license && is_open_license(*obs.license))
        return BusinessModel::hybrid;
    return BusinessModel::publisher_free_to_read;
}

std::vector<OAObservation> historize(const MergedPublication& pub,
                                     const std::vector<Snapshot>& snapshots) {
    std::vector<OAObservation> series;
    series.reserve(snapshots.size());
    for (const auto& snapshot : snapshots)
        series.push_back(observe_oa(pub, snapshot));
    return series;
}

Ratio oa_rate(const std::vector<OaRateRow>& rows, const OaRateFilter& filter) {
    const auto route_matches = [&](OaRoute route) {
        if (!filter.routes)
            return route != OaRoute::closed;
        if (filter.routes->contains(route))
            return true;
        if (route == OaRoute::publisher_repository)
            return filter.routes->contains(OaRoute::publisher) ||
                   filter.routes->contains(OaRoute::repository);
        return false;
    };
    Ratio ratio;
    for (const auto& row : rows) {
        if (filter.year && row.year != filter.year)
            continue;
        if (filter.discipline && row.discipline != *filter.discipline)
            continue;
        ratio.denominator += 1;
        if (route_matches(row.route))
            ratio.numerator += 1;
    }
    return ratio;
}

}  // namespace osmon
