#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "osmon/record.hpp"
#include "osmon/util.hpp"

namespace osmon {

// Maps one source family's JSONL objects onto PublicationRecord. Field paths
// are dotted object paths into the source object ("issued.year"). Scalars
// accept arrays (first element wins); list targets accept scalars (singleton).
struct SourceAdapter {
    Source source = Source::other;
    // record field name -> source path; unmapped fields stay empty
    std::map<std::string, std::string> field_map;
    // keys inside one author object
    struct AuthorKeys {
        std::string family = "family";
        std::string given = "given";
        std::string orcid = "orcid";
        std::string affiliations;  // optional per-author affiliation array
    } author_keys;
    struct PidKeys {
        std::string scheme = "scheme";
        std::string value = "value";
    } alt_pid_keys;
    struct RelatedKeys {
        std::string relation = "relation";
        std::string scheme = "scheme";
        std::string value = "value";
    } related_keys;
    // source genre string -> genre enum; anything unmapped falls back to other
    std::map<std::string, Genre> genre_map;
    // lines already hold the canonical record shape; field_map is bypassed
    bool canonical = false;

    // every adapter must map at least title and one of {doi, alternate_pids}
    std::optional<std::string> validate() const;
};

// Built-in field maps for the known source families; "institution" reuses the
// repository map. Throws ConfigError for unknown names.
SourceAdapter builtin_adapter(std::string_view name);

// Parses adapter JSON from the pipeline config ({"field_map": ..., "genre_map":
// ..., "author_keys": ...}); unspecified parts keep the base adapter's values.
SourceAdapter adapter_from_json(SourceAdapter base, const nlohmann::json& j);

// Maps one parsed source object; throws nlohmann::json::exception or
// DataError on shape errors (the caller turns that into a line reject).
PublicationRecord map_record(const nlohmann::json& src, const SourceAdapter& adapter);

struct IngestResult {
    std::vector<PublicationRecord> records;
    std::vector<LineReject> rejects;
    std::size_t line_count = 0;
};

// Reads a UTF-8 JSONL file; every line becomes either a validated record or a
// reject naming the line and reason. |records| + |rejects| = line count.
IngestResult read_source_file(const std::filesystem::path& path, const SourceAdapter& adapter);

// Sidecar path for a given input: <input>.rejects.jsonl
std::filesystem::path reject_sidecar_path(const std::filesystem::path& input);
void write_reject_sidecar(const std::filesystem::path& input, const std::vector<LineReject>& rejects);

// Policy perimeter; the country requirement is applied only after affiliation
// matching (see filter_by_country).
struct PerimeterRule {
    std::set<Genre> allowed_genres;
    int year_min = kYearMin;
    int year_max = 9999;
    std::optional<std::set<std::string>> required_countries;

    std::optional<std::string> validate() const;
};

struct PerimeterResult {
    std::vector<PublicationRecord> kept;
    std::vector<PublicationRecord> excluded;
};

// Exact partition: kept iff genre is allowed and year lies in range.
PerimeterResult apply_perimeter(std::vector<PublicationRecord> records, const PerimeterRule& rule);

}  // namespace osmon
