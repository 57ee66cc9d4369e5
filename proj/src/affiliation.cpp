#include "osmon/affiliation.hpp"

#include <algorithm>

#include "osmon/text.hpp"
#include "osmon/util.hpp"

namespace osmon {

namespace {

std::size_t token_count(const std::string& alias) {
    return static_cast<std::size_t>(std::count(alias.begin(), alias.end(), ' ')) + 1;
}

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin,
                        std::size_t count) {
    std::string out;
    for (std::size_t i = begin; i < begin + count; ++i) {
        if (!out.empty())
            out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

// Token-boundary containment of a normalized pattern in the token stream.
bool contains_token_seq(const std::vector<std::string>& tokens, const std::string& pattern) {
    const std::size_t len = token_count(pattern);
    if (len > tokens.size())
        return false;
    for (std::size_t start = 0; start + len <= tokens.size(); ++start) {
        if (join_tokens(tokens, start, len) == pattern)
            return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(EvidenceKind kind) {
    switch (kind) {
    case EvidenceKind::country_name: return "country_name";
    case EvidenceKind::city: return "city";
    case EvidenceKind::institution: return "institution";
    }
    return "country_name";
}

Gazetteer Gazetteer::from_csv_file(const std::filesystem::path& path) {
    return from_rows(read_csv(path));
}

Gazetteer Gazetteer::from_rows(const std::vector<std::vector<std::string>>& rows) {
    Gazetteer gaz;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 3)
            throw DataError("gazetteer row " + std::to_string(i + 1) +
                            ": expected (kind, alias, country[, weight])");
        const std::string& kind = row[0];
        if (kind == "kind")  // header
            continue;
        const double weight = row.size() > 3 && !row[3].empty() ? std::stod(row[3]) : 1.0;
        if (kind == "country")
            gaz.add_alias(EvidenceKind::country_name, row[1], row[2], weight);
        else if (kind == "city")
            gaz.add_alias(EvidenceKind::city, row[1], row[2], weight);
        else if (kind == "institution")
            gaz.add_alias(EvidenceKind::institution, row[1], row[2], weight);
        else if (kind == "exclusion")
            gaz.add_exclusion(row[1], row[2]);
        else
            throw DataError("gazetteer row " + std::to_string(i + 1) + ": unknown kind '" +
                            kind + "'");
    }
    return gaz;
}

void Gazetteer::add_alias(EvidenceKind kind, std::string_view alias, std::string_view country,
                          double weight) {
    const std::string key = normalize_text(alias).value;
    if (key.empty())
        return;
    auto& entries = aliases_[key];
    const Entry entry{kind, std::string(country), weight};
    const auto same = [&](const Entry& e) {
        return e.kind == entry.kind && e.country == entry.country;
    };
    if (std::none_of(entries.begin(), entries.end(), same))
        entries.push_back(entry);
    // entries kept sorted so results never depend on load order
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.kind != b.kind)
            return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        return a.country < b.country;
    });
    max_alias_tokens_ = std::max(max_alias_tokens_, token_count(key));
}

void Gazetteer::add_exclusion(std::string_view pattern, std::string_view suppressed_country) {
    const std::string key = normalize_text(pattern).value;
    if (key.empty())
        return;
    const auto entry = std::make_pair(key, std::string(suppressed_country));
    if (std::find(exclusions_.begin(), exclusions_.end(), entry) == exclusions_.end())
        exclusions_.push_back(entry);
    std::sort(exclusions_.begin(), exclusions_.end());
}

CountryMatch match_country(std::string_view raw_affiliation, const Gazetteer& gazetteer) {
    CountryMatch match;
    const auto tokens = tokenize(normalize_text(raw_affiliation));
    if (tokens.empty())
        return match;

    // greedy leftmost-longest scan; matched spans are consumed
    std::size_t pos = 0;
    while (pos < tokens.size()) {
        bool advanced = false;
        const std::size_t longest = std::min(gazetteer.max_alias_tokens(), tokens.size() - pos);
        for (std::size_t len = longest; len >= 1; --len) {
            const std::string span = join_tokens(tokens, pos, len);
            const auto it = gazetteer.aliases().find(span);
            if (it == gazetteer.aliases().end())
                continue;
            for (const auto& entry : it->second)
                match.evidence.push_back({entry.country, entry.kind, span});
            pos += len;
            advanced = true;
            break;
        }
        if (!advanced)
            ++pos;
    }

    // country iff (a) country-name evidence, or (b) city and institution agree
    std::set<std::string> by_name, by_city, by_institution;
    for (const auto& ev : match.evidence) {
        switch (ev.kind) {
        case EvidenceKind::country_name: by_name.insert(ev.country); break;
        case EvidenceKind::city: by_city.insert(ev.country); break;
        case EvidenceKind::institution: by_institution.insert(ev.country); break;
        }
    }
    std::set<std::string> assigned = by_name;
    for (const auto& country : by_city) {
        if (by_institution.contains(country))
            assigned.insert(country);
    }

    // exclusion patterns veto their suppressed country
    for (const auto& [pattern, country] : gazetteer.exclusions()) {
        if (assigned.contains(country) && contains_token_seq(tokens, pattern))
            assigned.erase(country);
    }

    match.countries.assign(assigned.begin(), assigned.end());
    return match;
}

void assign_countries(MergedPublication& pub, const Gazetteer& gazetteer) {
    std::set<std::string> countries;
    for (const auto& affiliation : pub.fields.raw_affiliations) {
        const auto match = match_country(affiliation, gazetteer);
        countries.insert(match.countries.begin(), match.countries.end());
    }
    pub.countries.assign(countries.begin(), countries.end());
}

CountryFilterResult filter_by_country(std::vector<MergedPublication> corpus,
                                      const std::set<std::string>& required) {
    CountryFilterResult result;
    for (auto& pub : corpus) {
        const bool keep = std::any_of(pub.countries.begin(), pub.countries.end(),
                                      [&](const std::string& c) { return required.contains(c); });
        if (keep)
            result.kept.push_back(std::move(pub));
        else
            result.excluded.push_back(std::move(pub));
    }
    return result;
}

}  // namespace osmon
