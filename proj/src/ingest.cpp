#include "osmon/ingest.hpp"

#include <charconv>

#include "osmon/text.hpp"

namespace osmon {

namespace {

using nlohmann::json;

// Dotted object path lookup; nullptr when any step is missing.
const json* lookup_path(const json& obj, std::string_view path) {
    const json* cur = &obj;
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t end = path.find('.', start);
        if (end == std::string_view::npos)
            end = path.size();
        const std::string key(path.substr(start, end - start));
        if (!cur->is_object() || !cur->contains(key))
            return nullptr;
        cur = &cur->at(key);
        if (end == path.size())
            break;
        start = end + 1;
    }
    return cur;
}

std::optional<std::string> as_scalar_string(const json& v) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number_float())
        return std::to_string(v.get<double>());
    if (v.is_array() && !v.empty())
        return as_scalar_string(v.front());
    return std::nullopt;
}

std::vector<std::string> as_string_list(const json& v) {
    std::vector<std::string> out;
    if (v.is_array()) {
        for (const auto& e : v) {
            if (auto s = as_scalar_string(e))
                out.push_back(std::move(*s));
            else if (e.is_object() && e.contains("name") && e.at("name").is_string())
                out.push_back(e.at("name").get<std::string>());
            else if (e.is_object() && e.contains("URL") && e.at("URL").is_string())
                out.push_back(e.at("URL").get<std::string>());
        }
    } else if (auto s = as_scalar_string(v)) {
        out.push_back(std::move(*s));
    }
    return out;
}

std::optional<int> as_year(const json& v) {
    if (v.is_number_integer())
        return v.get<int>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        int year = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), year);
        if (ec == std::errc{} && ptr == s.data() + s.size())
            return year;
        return std::nullopt;
    }
    if (v.is_array() && !v.empty())
        return as_year(v.front());
    return std::nullopt;
}

const json* mapped(const json& src, const SourceAdapter& adapter, const char* field) {
    const auto it = adapter.field_map.find(field);
    if (it == adapter.field_map.end() || it->second.empty())
        return nullptr;
    return lookup_path(src, it->second);
}

}  // namespace

std::optional<std::string> SourceAdapter::validate() const {
    const auto has = [&](const char* f) {
        const auto it = field_map.find(f);
        return it != field_map.end() && !it->second.empty();
    };
    if (!has("title"))
        return "adapter must map title";
    if (!has("doi") && !has("alternate_pids"))
        return "adapter must map doi or alternate_pids";
    return std::nullopt;
}

SourceAdapter builtin_adapter(std::string_view name) {
    SourceAdapter a;
    if (name == "crossref") {
        a.source = Source::crossref;
        a.field_map = {
            {"source_id", "DOI"},
            {"doi", "DOI"},
            {"title", "title"},
            {"year", "issued.year"},
            {"genre", "type"},
            {"journal_title", "container-title"},
            {"publisher", "publisher"},
            {"journal_issns", "ISSN"},
            {"authors", "author"},
            {"licenses", "license"},
            {"keywords", "subject"},
            {"related_identifiers", "related_identifiers"},
        };
        a.author_keys = {"family", "given", "ORCID", "affiliation"};
        a.genre_map = {
            {"journal-article", Genre::journal_article},
            {"proceedings-article", Genre::proceedings},
            {"posted-content", Genre::preprint},
            {"book-chapter", Genre::book_chapter},
            {"dissertation", Genre::thesis},
        };
        return a;
    }
    if (name == "pubmed") {
        a.source = Source::pubmed;
        a.field_map = {
            {"source_id", "pmid"},
            {"doi", "doi"},
            {"title", "title"},
            {"year", "year"},
            {"genre", "publication_type"},
            {"journal_title", "journal"},
            {"journal_issns", "issn"},
            {"authors", "authors"},
            {"raw_affiliations", "affiliations"},
            {"keywords", "mesh_terms"},
        };
        a.author_keys = {"last_name", "fore_name", "orcid", ""};
        a.genre_map = {
            {"Journal Article", Genre::journal_article},
            {"Preprint", Genre::preprint},
            {"Review", Genre::journal_article},
        };
        return a;
    }
    if (name == "repository" || name == "institution") {
        a.source = name == "repository" ? Source::repository : Source::institution;
        a.field_map = {
            {"source_id", "id"},
            {"doi", "doi"},
            {"title", "title"},
            {"year", "publication_year"},
            {"genre", "resource_type"},
            {"journal_title", "journal_title"},
            {"publisher", "publisher"},
            {"journal_issns", "issns"},
            {"authors", "creators"},
            {"raw_affiliations", "affiliations"},
            {"keywords", "keywords"},
            {"licenses", "licenses"},
            {"alternate_pids", "alternate_identifiers"},
            {"related_identifiers", "related_identifiers"},
        };
        a.alt_pid_keys = {"scheme", "identifier"};
        a.related_keys = {"relation", "scheme", "identifier"};
        a.genre_map = {
            {"article", Genre::journal_article},
            {"publication-article", Genre::journal_article},
            {"preprint", Genre::preprint},
            {"conference-paper", Genre::proceedings},
            {"book-section", Genre::book_chapter},
            {"thesis", Genre::thesis},
        };
        return a;
    }
    if (name == "canonical") {
        // lines already in the canonical record shape (work artifacts, bottom-up dumps)
        a.source = Source::other;
        a.canonical = true;
        a.field_map = {{"title", "title"}, {"doi", "doi"}, {"alternate_pids", "alternate_pids"}};
        return a;
    }
    throw ConfigError("unknown adapter: " + std::string(name));
}

SourceAdapter adapter_from_json(SourceAdapter base, const nlohmann::json& j) {
    if (j.contains("field_map")) {
        for (const auto& [key, value] : j.at("field_map").items())
            base.field_map[key] = value.get<std::string>();
    }
    if (j.contains("genre_map")) {
        base.genre_map.clear();
        for (const auto& [key, value] : j.at("genre_map").items()) {
            const auto genre = genre_from_string(value.get<std::string>());
            if (!genre)
                throw ConfigError("genre_map: unknown genre '" + value.get<std::string>() + "'");
            base.genre_map[key] = *genre;
        }
    }
    if (j.contains("author_keys")) {
        const auto& ak = j.at("author_keys");
        if (ak.contains("family"))
            base.author_keys.family = ak.at("family").get<std::string>();
        if (ak.contains("given"))
            base.author_keys.given = ak.at("given").get<std::string>();
        if (ak.contains("orcid"))
            base.author_keys.orcid = ak.at("orcid").get<std::string>();
        if (ak.contains("affiliations"))
            base.author_keys.affiliations = ak.at("affiliations").get<std::string>();
    }
    return base;
}

PublicationRecord map_record(const nlohmann::json& src, const SourceAdapter& adapter) {
    PublicationRecord rec;
    rec.source = adapter.source;

    if (const json* v = mapped(src, adapter, "source_id")) {
        if (auto s = as_scalar_string(*v))
            rec.source_id = std::move(*s);
    }
    if (const json* v = mapped(src, adapter, "doi")) {
        if (auto s = as_scalar_string(*v))
            rec.doi = normalize_doi(*s);  // unparseable DOI -> absent
    }
    if (const json* v = mapped(src, adapter, "title")) {
        if (auto s = as_scalar_string(*v))
            rec.title = std::move(*s);
    }
    if (const json* v = mapped(src, adapter, "year"))
        rec.year = as_year(*v);
    if (const json* v = mapped(src, adapter, "journal_title")) {
        if (auto s = as_scalar_string(*v))
            rec.journal_title = std::move(*s);
    }
    if (const json* v = mapped(src, adapter, "publisher")) {
        if (auto s = as_scalar_string(*v))
            rec.publisher = std::move(*s);
    }
    if (const json* v = mapped(src, adapter, "journal_issns")) {
        for (const auto& raw : as_string_list(*v)) {
            if (auto issn = normalize_issn(raw))
                rec.journal_issns.push_back(std::move(*issn));
        }
    }
    if (const json* v = mapped(src, adapter, "raw_affiliations"))
        rec.raw_affiliations = as_string_list(*v);
    if (const json* v = mapped(src, adapter, "keywords"))
        rec.keywords = as_string_list(*v);
    if (const json* v = mapped(src, adapter, "licenses"))
        rec.licenses = as_string_list(*v);
    if (const json* v = mapped(src, adapter, "genre")) {
        if (const auto s = as_scalar_string(*v)) {
            const auto it = adapter.genre_map.find(*s);
            rec.genre = it != adapter.genre_map.end() ? it->second : Genre::other;
        }
    }
    if (const json* v = mapped(src, adapter, "authors"); v && v->is_array()) {
        for (const auto& aj : *v) {
            if (!aj.is_object())
                continue;
            Author author;
            if (aj.contains(adapter.author_keys.family)) {
                if (auto s = as_scalar_string(aj.at(adapter.author_keys.family)))
                    author.family = std::move(*s);
            }
            if (aj.contains(adapter.author_keys.given)) {
                if (auto s = as_scalar_string(aj.at(adapter.author_keys.given)))
                    author.given = std::move(*s);
            }
            if (!adapter.author_keys.orcid.empty() && aj.contains(adapter.author_keys.orcid)) {
                if (auto s = as_scalar_string(aj.at(adapter.author_keys.orcid)))
                    author.orcid = std::move(*s);
            }
            if (!adapter.author_keys.affiliations.empty() &&
                aj.contains(adapter.author_keys.affiliations)) {
                for (auto& aff : as_string_list(aj.at(adapter.author_keys.affiliations)))
                    rec.raw_affiliations.push_back(std::move(aff));
            }
            rec.authors.push_back(std::move(author));
        }
    }
    if (const json* v = mapped(src, adapter, "alternate_pids"); v && v->is_array()) {
        for (const auto& pj : *v) {
            if (!pj.is_object() || !pj.contains(adapter.alt_pid_keys.scheme) ||
                !pj.contains(adapter.alt_pid_keys.value))
                continue;
            rec.alternate_pids.push_back(
                PidRef{pj.at(adapter.alt_pid_keys.scheme).get<std::string>(),
                       pj.at(adapter.alt_pid_keys.value).get<std::string>()});
        }
    }
    if (const json* v = mapped(src, adapter, "related_identifiers"); v && v->is_array()) {
        for (const auto& rj : *v) {
            if (!rj.is_object() || !rj.contains(adapter.related_keys.relation) ||
                !rj.contains(adapter.related_keys.value))
                continue;
            RelatedIdentifier rel;
            rel.relation = rj.at(adapter.related_keys.relation).get<std::string>();
            if (rj.contains(adapter.related_keys.scheme))
                rel.scheme = rj.at(adapter.related_keys.scheme).get<std::string>();
            rel.value = rj.at(adapter.related_keys.value).get<std::string>();
            rec.related_identifiers.push_back(std::move(rel));
        }
    }
    return rec;
}

IngestResult read_source_file(const std::filesystem::path& path, const SourceAdapter& adapter) {
    if (const auto err = adapter.validate())
        throw ConfigError("invalid adapter for " + path.string() + ": " + *err);
    IngestResult result;
    result.line_count = for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        try {
            const json src = json::parse(line);
            PublicationRecord rec =
                adapter.canonical ? record_from_json(src) : map_record(src, adapter);
            if (rec.source_id.empty())
                rec.source_id = path.filename().string() + ":" + std::to_string(line_no);
            const auto violations = validate_record(rec);
            if (!violations.empty()) {
                std::string reason = "invalid record:";
                for (const auto& v : violations)
                    reason += " [" + v.field + "] " + v.rule + ";";
                result.rejects.push_back({line_no, reason});
                return;
            }
            result.records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            result.rejects.push_back({line_no, std::string("parse error: ") + e.what()});
        }
    });
    return result;
}

std::filesystem::path reject_sidecar_path(const std::filesystem::path& input) {
    return std::filesystem::path(input.string() + ".rejects.jsonl");
}

void write_reject_sidecar(const std::filesystem::path& input, const std::vector<LineReject>& rejects) {
    std::string body;
    for (const auto& r : rejects) {
        nlohmann::json j;
        j["line"] = r.line;
        j["reason"] = r.reason;
        body += j.dump();
        body += '\n';
    }
    write_text_atomic(reject_sidecar_path(input), body);
}

std::optional<std::string> PerimeterRule::validate() const {
    if (year_min > year_max)
        return "perimeter.year_min must be <= year_max";
    if (allowed_genres.empty())
        return "perimeter.allowed_genres must not be empty";
    return std::nullopt;
}

PerimeterResult apply_perimeter(std::vector<PublicationRecord> records, const PerimeterRule& rule) {
    PerimeterResult result;
    for (auto& rec : records) {
        const bool genre_ok = rule.allowed_genres.contains(rec.genre);
        const bool year_ok = rec.year && *rec.year >= rule.year_min && *rec.year <= rule.year_max;
        if (genre_ok && year_ok)
            result.kept.push_back(std::move(rec));
        else
            result.excluded.push_back(std::move(rec));
    }
    return result;
}

}  // namespace osmon
