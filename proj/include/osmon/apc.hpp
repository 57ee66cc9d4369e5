#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osmon/dedup.hpp"
#include "osmon/oa.hpp"

namespace osmon {

struct ApcRow {
    std::optional<std::string> doi;   // canonical
    std::optional<std::string> issn;  // normalized
    int year = 0;
    double amount = 0.0;
    std::string currency;  // ISO 4217
};

// OpenAPC-style table of actually paid APCs, indexed by DOI and (issn, year).
class ApcTable {
public:
    static ApcTable from_csv_file(const std::filesystem::path& path);
    static ApcTable from_rows(std::vector<ApcRow> rows);

    const std::vector<ApcRow>& rows() const { return rows_; }
    const ApcRow* find_by_doi(const std::string& doi) const;
    std::vector<const ApcRow*> journal_year_group(const std::vector<std::string>& issns,
                                                  int year) const;

private:
    std::vector<ApcRow> rows_;
    std::map<std::string, std::size_t> by_doi_;  // doi -> lexicographically smallest row
    std::map<std::pair<std::string, int>, std::vector<std::size_t>> by_issn_year_;
};

enum class ApcMethod { direct, journal_year_average, registry_list_price, diamond_zero, unknown };

std::string_view to_string(ApcMethod method);
std::optional<ApcMethod> apc_method_from_string(std::string_view s);

struct APCEstimate {
    std::optional<double> amount;
    std::optional<std::string> currency;
    ApcMethod method = ApcMethod::unknown;
    std::optional<int> group_size;  // journal_year_average only
    // a matching journal-year group mixed currencies and was skipped (APC_MIXED_CURRENCY)
    bool mixed_currency_group = false;
};

// Strict rule precedence: direct lookup, diamond-zero, journal-year average
// (group of at least n_min rows in one currency), registry list price, unknown.
APCEstimate estimate_apc(const MergedPublication& pub, const ApcTable& table,
                         const JournalRegistry& registry, int n_min);

struct ApcGroupStats {
    double total_known = 0.0;
    std::optional<double> mean;  // absent when nothing is known
    std::size_t count_known = 0;
    std::size_t count_unknown = 0;
    std::optional<std::string> currency;  // uniform currency, absent when mixed
};

// Per-group statistics; unknown estimates are counted, never imputed as zero.
std::map<std::string, ApcGroupStats> apc_aggregate(
    const std::vector<std::pair<std::string, APCEstimate>>& keyed_estimates);

}  // namespace osmon
