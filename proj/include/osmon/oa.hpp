#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "osmon/dedup.hpp"
#include "osmon/util.hpp"

namespace osmon {

enum class HostType { publisher, repository };
enum class OaRoute { closed, publisher, repository, publisher_repository };
enum class BusinessModel { diamond, gold, hybrid, publisher_free_to_read };

// Normalized license vocabulary, most permissive first; anything the
// normalization table does not recognize becomes publisher_specific.
enum class License { cc0, cc_by, cc_by_sa, cc_by_nc, cc_by_nc_nd, publisher_specific };

std::string_view to_string(HostType v);
std::string_view to_string(OaRoute v);
std::string_view to_string(BusinessModel v);
std::string_view to_string(License v);
std::optional<HostType> host_type_from_string(std::string_view s);
std::optional<OaRoute> route_from_string(std::string_view s);
std::optional<BusinessModel> business_model_from_string(std::string_view s);
std::optional<License> license_from_string(std::string_view s);

License normalize_license(std::string_view raw);
bool is_open_license(License license);  // the CC family; publisher_specific is not

struct OALocation {
    HostType host_type = HostType::repository;
    std::optional<License> license;
    std::optional<std::string> url;
    std::optional<std::string> repository_name;
};

// One quarterly OA dump: canonical PID key -> locations. Non-DOI publications
// appear under scheme-prefixed keys ("hal:hal-01234567").
struct Snapshot {
    std::string date;  // ISO date from the file name
    std::map<std::string, std::vector<OALocation>> entries;
    std::vector<LineReject> rejects;
};

// Loads `oa-snapshot-YYYY-MM-DD.jsonl` (one object per PID:
// {doi, locations: [{host_type, license?, url?, repository_name?}]}).
Snapshot load_snapshot(const std::filesystem::path& path);
std::optional<std::string> snapshot_date_from_filename(const std::filesystem::path& path);

// Snapshot lookup key for a publication.
std::string snapshot_key(const MergedPublication& pub);

struct OAObservation {
    std::string pid;  // snapshot key
    std::string snapshot_date;
    OaRoute route = OaRoute::closed;
    std::optional<License> license;  // best license among publisher locations
    std::optional<BusinessModel> business_model;
    bool unknown_in_snapshot = false;
};

// Route from the set of host types present; closed when the PID is absent or
// carries no location.
OAObservation observe_oa(const MergedPublication& pub, const Snapshot& snapshot);

struct JournalRegistryEntry {
    bool is_open_journal = false;
    std::optional<double> apc_amount;
    std::optional<std::string> apc_currency;
};

// DOAJ-style journal registry keyed by normalized ISSN.
class JournalRegistry {
public:
    static JournalRegistry from_jsonl_file(const std::filesystem::path& path);

    void add(std::string_view issn, JournalRegistryEntry entry);
    // first ISSN in record order that the registry knows
    std::optional<JournalRegistryEntry> lookup(const std::vector<std::string>& issns) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, JournalRegistryEntry> entries_;
};

// Total decision over (journal openness x license x registry APC); only
// meaningful when the route includes the publisher (nullopt otherwise).
std::optional<BusinessModel> classify_business_model(const OAObservation& obs,
                                                     const MergedPublication& pub,
                                                     const JournalRegistry& registry);

// One observation per snapshot, in series order; no interpolation.
std::vector<OAObservation> historize(const MergedPublication& pub,
                                     const std::vector<Snapshot>& snapshots);

// Flat row for KPI aggregation at one snapshot.
struct OaRateRow {
    std::optional<int> year;
    std::string discipline;  // "unclassified" when absent
    OaRoute route = OaRoute::closed;
};

struct OaRateFilter {
    std::optional<int> year;
    std::optional<std::string> discipline;
    // numerator routes; default (nullopt) counts everything not closed.
    // publisher_repository matches whenever either of its components is asked.
    std::optional<std::set<OaRoute>> routes;
};

Ratio oa_rate(const std::vector<OaRateRow>& rows, const OaRateFilter& filter);

}  // namespace osmon
