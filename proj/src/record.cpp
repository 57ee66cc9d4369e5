#include "osmon/record.hpp"

#include "osmon/text.hpp"
#include "osmon/util.hpp"

namespace osmon {

namespace {

using nlohmann::json;

json pid_to_json(const PidRef& pid) {
    return json{{"scheme", pid.scheme}, {"value", pid.value}};
}

PidRef pid_from_json(const json& j) {
    return PidRef{j.at("scheme").get<std::string>(), j.at("value").get<std::string>()};
}

}  // namespace

std::string_view to_string(Source source) {
    switch (source) {
    case Source::crossref: return "crossref";
    case Source::pubmed: return "pubmed";
    case Source::repository: return "repository";
    case Source::institution: return "institution";
    case Source::other: return "other";
    }
    return "other";
}

std::string_view to_string(Genre genre) {
    switch (genre) {
    case Genre::journal_article: return "journal-article";
    case Genre::proceedings: return "proceedings";
    case Genre::preprint: return "preprint";
    case Genre::book_chapter: return "book-chapter";
    case Genre::thesis: return "thesis";
    case Genre::other: return "other";
    }
    return "other";
}

std::optional<Source> source_from_string(std::string_view s) {
    for (Source v : {Source::crossref, Source::pubmed, Source::repository, Source::institution,
                     Source::other}) {
        if (to_string(v) == s)
            return v;
    }
    return std::nullopt;
}

std::optional<Genre> genre_from_string(std::string_view s) {
    for (Genre v : {Genre::journal_article, Genre::proceedings, Genre::preprint,
                    Genre::book_chapter, Genre::thesis, Genre::other}) {
        if (to_string(v) == s)
            return v;
    }
    return std::nullopt;
}

std::vector<Violation> validate_record(const PublicationRecord& rec) {
    std::vector<Violation> violations;
    if (rec.doi) {
        const auto canonical = normalize_doi(*rec.doi);
        if (!canonical || *canonical != *rec.doi)
            violations.push_back({"doi", "doi must be canonical (lowercase, no resolver prefix, 10.<registrant>/<suffix>)"});
    }
    if (normalize_text(rec.title).value.empty())
        violations.push_back({"title", "title must be non-empty after normalization"});
    if (rec.year) {
        const int max_year = current_utc_year() + 2;
        if (*rec.year < kYearMin || *rec.year > max_year)
            violations.push_back({"year", "year must be in [" + std::to_string(kYearMin) + ", " +
                                              std::to_string(max_year) + "]"});
    }
    for (std::size_t i = 0; i < rec.authors.size(); ++i) {
        const auto& orcid = rec.authors[i].orcid;
        if (orcid && !is_valid_orcid(*orcid))
            violations.push_back({"authors[" + std::to_string(i) + "].orcid",
                                  "orcid must be 16 characters with a valid checksum digit"});
    }
    return violations;
}

nlohmann::json record_to_json(const PublicationRecord& rec) {
    json j;
    j["source_id"] = rec.source_id;
    j["source"] = to_string(rec.source);
    if (rec.doi)
        j["doi"] = *rec.doi;
    j["alternate_pids"] = json::array();
    for (const auto& pid : rec.alternate_pids)
        j["alternate_pids"].push_back(pid_to_json(pid));
    j["title"] = rec.title;
    j["authors"] = json::array();
    for (const auto& a : rec.authors) {
        json aj;
        aj["family"] = a.family;
        if (a.given)
            aj["given"] = *a.given;
        if (a.orcid)
            aj["orcid"] = *a.orcid;
        if (a.person_pid)
            aj["person_pid"] = pid_to_json(*a.person_pid);
        j["authors"].push_back(std::move(aj));
    }
    j["raw_affiliations"] = rec.raw_affiliations;
    j["journal_issns"] = rec.journal_issns;
    if (rec.journal_title)
        j["journal_title"] = *rec.journal_title;
    if (rec.publisher)
        j["publisher"] = *rec.publisher;
    if (rec.year)
        j["year"] = *rec.year;
    j["genre"] = to_string(rec.genre);
    j["related_identifiers"] = json::array();
    for (const auto& rel : rec.related_identifiers)
        j["related_identifiers"].push_back(
            json{{"relation", rel.relation}, {"scheme", rel.scheme}, {"value", rel.value}});
    j["licenses"] = rec.licenses;
    j["keywords"] = rec.keywords;
    return j;
}

PublicationRecord record_from_json(const nlohmann::json& j) {
    PublicationRecord rec;
    rec.source_id = j.at("source_id").get<std::string>();
    if (const auto source = source_from_string(j.at("source").get<std::string>()))
        rec.source = *source;
    if (j.contains("doi"))
        rec.doi = j.at("doi").get<std::string>();
    if (j.contains("alternate_pids")) {
        for (const auto& p : j.at("alternate_pids"))
            rec.alternate_pids.push_back(pid_from_json(p));
    }
    rec.title = j.at("title").get<std::string>();
    if (j.contains("authors")) {
        for (const auto& aj : j.at("authors")) {
            Author a;
            a.family = aj.at("family").get<std::string>();
            if (aj.contains("given"))
                a.given = aj.at("given").get<std::string>();
            if (aj.contains("orcid"))
                a.orcid = aj.at("orcid").get<std::string>();
            if (aj.contains("person_pid"))
                a.person_pid = pid_from_json(aj.at("person_pid"));
            rec.authors.push_back(std::move(a));
        }
    }
    if (j.contains("raw_affiliations"))
        rec.raw_affiliations = j.at("raw_affiliations").get<std::vector<std::string>>();
    if (j.contains("journal_issns"))
        rec.journal_issns = j.at("journal_issns").get<std::vector<std::string>>();
    if (j.contains("journal_title"))
        rec.journal_title = j.at("journal_title").get<std::string>();
    if (j.contains("publisher"))
        rec.publisher = j.at("publisher").get<std::string>();
    if (j.contains("year"))
        rec.year = j.at("year").get<int>();
    if (j.contains("genre")) {
        if (const auto genre = genre_from_string(j.at("genre").get<std::string>()))
            rec.genre = *genre;
    }
    if (j.contains("related_identifiers")) {
        for (const auto& rj : j.at("related_identifiers"))
            rec.related_identifiers.push_back(RelatedIdentifier{
                rj.at("relation").get<std::string>(), rj.at("scheme").get<std::string>(),
                rj.at("value").get<std::string>()});
    }
    if (j.contains("licenses"))
        rec.licenses = j.at("licenses").get<std::vector<std::string>>();
    if (j.contains("keywords"))
        rec.keywords = j.at("keywords").get<std::vector<std::string>>();
    return rec;
}

}  // namespace osmon
