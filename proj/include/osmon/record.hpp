#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace osmon {

enum class Source { crossref, pubmed, repository, institution, other };
enum class Genre { journal_article, proceedings, preprint, book_chapter, thesis, other };

std::string_view to_string(Source source);
std::string_view to_string(Genre genre);
std::optional<Source> source_from_string(std::string_view s);
std::optional<Genre> genre_from_string(std::string_view s);

// (scheme, value) persistent identifier, e.g. ("hal", "hal-01234567").
struct PidRef {
    std::string scheme;
    std::string value;

    friend bool operator==(const PidRef&, const PidRef&) = default;
    friend auto operator<=>(const PidRef&, const PidRef&) = default;

    std::string key() const { return scheme + ":" + value; }
};

struct RelatedIdentifier {
    std::string relation;  // e.g. IsVersionOf
    std::string scheme;    // e.g. doi
    std::string value;

    friend bool operator==(const RelatedIdentifier&, const RelatedIdentifier&) = default;
};

struct Author {
    std::string family;
    std::optional<std::string> given;
    std::optional<std::string> orcid;
    std::optional<PidRef> person_pid;

    friend bool operator==(const Author&, const Author&) = default;
};

// One source's metadata for one research output.
struct PublicationRecord {
    std::string source_id;
    Source source = Source::other;
    std::optional<std::string> doi;  // canonical when present
    std::vector<PidRef> alternate_pids;
    std::string title;
    std::vector<Author> authors;
    std::vector<std::string> raw_affiliations;
    std::vector<std::string> journal_issns;  // normalized 8-char form
    std::optional<std::string> journal_title;
    std::optional<std::string> publisher;
    std::optional<int> year;
    Genre genre = Genre::other;
    std::vector<RelatedIdentifier> related_identifiers;
    std::vector<std::string> licenses;
    std::vector<std::string> keywords;

    friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct Violation {
    std::string field;
    std::string rule;
};

// Empty list iff every type invariant holds. Pure.
std::vector<Violation> validate_record(const PublicationRecord& rec);

constexpr int kYearMin = 1500;

nlohmann::json record_to_json(const PublicationRecord& rec);

// Strict parse of the canonical record shape; throws nlohmann::json::exception
// on malformed input. Unknown keys are ignored.
PublicationRecord record_from_json(const nlohmann::json& j);

}  // namespace osmon
