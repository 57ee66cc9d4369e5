#include "osmon/apc.hpp"

#include <algorithm>
#include <set>

#include "osmon/text.hpp"
#include "osmon/util.hpp"

namespace osmon {

std::string_view to_string(ApcMethod method) {
    switch (method) {
    case ApcMethod::direct: return "direct";
    case ApcMethod::journal_year_average: return "journal_year_average";
    case ApcMethod::registry_list_price: return "registry_list_price";
    case ApcMethod::diamond_zero: return "diamond_zero";
    case ApcMethod::unknown: return "unknown";
    }
    return "unknown";
}

std::optional<ApcMethod> apc_method_from_string(std::string_view s) {
    for (ApcMethod v : {ApcMethod::direct, ApcMethod::journal_year_average,
                        ApcMethod::registry_list_price, ApcMethod::diamond_zero,
                        ApcMethod::unknown}) {
        if (to_string(v) == s)
            return v;
    }
    return std::nullopt;
}

ApcTable ApcTable::from_csv_file(const std::filesystem::path& path) {
    const auto csv = read_csv(path);
    std::vector<ApcRow> rows;
    for (std::size_t i = 0; i < csv.size(); ++i) {
        const auto& line = csv[i];
        if (line.size() < 5)
            throw DataError("apc table row " + std::to_string(i + 1) +
                            ": expected (doi, issn, year, amount, currency)");
        if (line[0] == "doi")  // header
            continue;
        ApcRow row;
        if (!line[0].empty())
            row.doi = normalize_doi(line[0]);
        if (!line[1].empty())
            row.issn = normalize_issn(line[1]);
        try {
            row.year = std::stoi(line[2]);
            row.amount = std::stod(line[3]);
        } catch (const std::exception&) {
            throw DataError("apc table row " + std::to_string(i + 1) + ": bad year or amount");
        }
        if (row.amount < 0)
            throw DataError("apc table row " + std::to_string(i + 1) + ": negative amount");
        row.currency = line[4];
        rows.push_back(std::move(row));
    }
    return from_rows(std::move(rows));
}

ApcTable ApcTable::from_rows(std::vector<ApcRow> rows) {
    ApcTable table;
    table.rows_ = std::move(rows);
    for (std::size_t i = 0; i < table.rows_.size(); ++i) {
        const auto& row = table.rows_[i];
        if (row.doi) {
            // duplicate DOI rows resolve to the smallest (amount, currency),
            // independent of file order
            const auto it = table.by_doi_.find(*row.doi);
            if (it == table.by_doi_.end()) {
                table.by_doi_[*row.doi] = i;
            } else {
                const auto& held = table.rows_[it->second];
                if (std::tie(row.amount, row.currency) < std::tie(held.amount, held.currency))
                    it->second = i;
            }
        }
        if (row.issn)
            table.by_issn_year_[{*row.issn, row.year}].push_back(i);
    }
    return table;
}

const ApcRow* ApcTable::find_by_doi(const std::string& doi) const {
    const auto it = by_doi_.find(doi);
    return it == by_doi_.end() ? nullptr : &rows_[it->second];
}

std::vector<const ApcRow*> ApcTable::journal_year_group(const std::vector<std::string>& issns,
                                                        int year) const {
    std::vector<const ApcRow*> group;
    std::set<std::size_t> seen;
    for (const auto& raw : issns) {
        const auto issn = normalize_issn(raw);
        if (!issn)
            continue;
        const auto it = by_issn_year_.find({*issn, year});
        if (it == by_issn_year_.end())
            continue;
        for (std::size_t idx : it->second) {
            if (seen.insert(idx).second)
                group.push_back(&rows_[idx]);
        }
    }
    return group;
}

APCEstimate estimate_apc(const MergedPublication& pub, const ApcTable& table,
                         const JournalRegistry& registry, int n_min) {
    APCEstimate estimate;

    // (1) the article itself appears in the table
    if (pub.fields.doi) {
        if (const ApcRow* row = table.find_by_doi(*pub.fields.doi)) {
            estimate.method = ApcMethod::direct;
            estimate.amount = row->amount;
            estimate.currency = row->currency;
            return estimate;
        }
    }

    const auto registry_entry = registry.lookup(pub.fields.journal_issns);

    // (2) diamond journal: zero APC by registry
    if (registry_entry && registry_entry->is_open_journal && registry_entry->apc_amount &&
        *registry_entry->apc_amount == 0.0) {
        estimate.method = ApcMethod::diamond_zero;
        estimate.amount = 0.0;
        estimate.currency = registry_entry->apc_currency;
        return estimate;
    }

    // (3) journal-year average over a sufficiently represented group
    if (pub.fields.year) {
        const auto group = table.journal_year_group(pub.fields.journal_issns, *pub.fields.year);
        if (static_cast<int>(group.size()) >= n_min) {
            const std::string& currency = group.front()->currency;
            const bool uniform = std::all_of(group.begin(), group.end(), [&](const ApcRow* r) {
                return r->currency == currency;
            });
            if (uniform) {
                double total = 0.0;
                for (const ApcRow* row : group)
                    total += row->amount;
                estimate.method = ApcMethod::journal_year_average;
                estimate.amount = total / static_cast<double>(group.size());
                estimate.currency = currency;
                estimate.group_size = static_cast<int>(group.size());
                return estimate;
            }
            // APC_MIXED_CURRENCY: group unusable, fall through to the list price
            estimate.mixed_currency_group = true;
        }
    }

    // (4) registry list price
    if (registry_entry && registry_entry->apc_amount) {
        estimate.method = ApcMethod::registry_list_price;
        estimate.amount = registry_entry->apc_amount;
        estimate.currency = registry_entry->apc_currency;
        return estimate;
    }

    // (5) nothing applies
    estimate.method = ApcMethod::unknown;
    return estimate;
}

std::map<std::string, ApcGroupStats> apc_aggregate(
    const std::vector<std::pair<std::string, APCEstimate>>& keyed_estimates) {
    std::map<std::string, ApcGroupStats> groups;
    std::map<std::string, std::set<std::string>> currencies;
    for (const auto& [key, estimate] : keyed_estimates) {
        auto& stats = groups[key];
        if (estimate.amount) {
            stats.total_known += *estimate.amount;
            stats.count_known += 1;
            if (estimate.currency)
                currencies[key].insert(*estimate.currency);
        } else {
            stats.count_unknown += 1;
        }
    }
    for (auto& [key, stats] : groups) {
        if (stats.count_known > 0)
            stats.mean = stats.total_known / static_cast<double>(stats.count_known);
        const auto it = currencies.find(key);
        if (it != currencies.end() && it->second.size() == 1)
            stats.currency = *it->second.begin();
    }
    return groups;
}

}  // namespace osmon
