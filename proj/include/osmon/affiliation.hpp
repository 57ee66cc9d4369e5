#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "osmon/dedup.hpp"

namespace osmon {

enum class EvidenceKind { country_name, city, institution };

std::string_view to_string(EvidenceKind kind);

struct CountryEvidence {
    std::string country;  // ISO 3166-1 alpha-2
    EvidenceKind kind;
    std::string matched_span;  // normalized alias that fired
};

// Country/city/institution alias dictionary plus exclusion patterns, loaded
// from a CSV with columns (kind, alias, country, weight). Aliases are matched
// on normalized text at token boundaries, longest alias first; tokens covered
// by a match are consumed so shorter aliases inside the span never fire.
class Gazetteer {
public:
    static Gazetteer from_csv_file(const std::filesystem::path& path);
    static Gazetteer from_rows(const std::vector<std::vector<std::string>>& rows);

    void add_alias(EvidenceKind kind, std::string_view alias, std::string_view country,
                   double weight = 1.0);
    void add_exclusion(std::string_view pattern, std::string_view suppressed_country);

    struct Entry {
        EvidenceKind kind;
        std::string country;
        double weight = 1.0;
    };

    const std::map<std::string, std::vector<Entry>>& aliases() const { return aliases_; }
    const std::vector<std::pair<std::string, std::string>>& exclusions() const {
        return exclusions_;
    }
    std::size_t max_alias_tokens() const { return max_alias_tokens_; }

private:
    std::map<std::string, std::vector<Entry>> aliases_;  // normalized alias -> entries
    std::vector<std::pair<std::string, std::string>> exclusions_;  // pattern -> country
    std::size_t max_alias_tokens_ = 0;
};

struct CountryMatch {
    std::vector<std::string> countries;  // sorted, deduplicated
    std::vector<CountryEvidence> evidence;
};

// A country is assigned iff a country-name alias matched, or a city and an
// institution alias agree on it. Exclusion patterns veto their country.
CountryMatch match_country(std::string_view raw_affiliation, const Gazetteer& gazetteer);

// countries := sorted union of match_country over all raw affiliations.
void assign_countries(MergedPublication& pub, const Gazetteer& gazetteer);

struct CountryFilterResult {
    std::vector<MergedPublication> kept;
    std::vector<MergedPublication> excluded;
};

// kept iff countries intersect the required set; exact partition.
CountryFilterResult filter_by_country(std::vector<MergedPublication> corpus,
                                      const std::set<std::string>& required);

}  // namespace osmon
