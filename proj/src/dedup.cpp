#include "osmon/dedup.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "osmon/text.hpp"
#include "osmon/util.hpp"

namespace osmon {

namespace {

using nlohmann::json;

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Disjoint-set forest with path compression and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

// Every PID a record carries, as scheme-prefixed keys ("doi:10.1/x", "hal:...").
std::vector<std::string> pid_keys(const PublicationRecord& rec) {
    std::vector<std::string> keys;
    if (rec.doi)
        keys.push_back("doi:" + *rec.doi);
    for (const auto& pid : rec.alternate_pids) {
        const std::string scheme = ascii_lower(pid.scheme);
        if (scheme == "doi") {
            if (const auto doi = normalize_doi(pid.value))
                keys.push_back("doi:" + *doi);
            else
                keys.push_back("doi:" + ascii_lower(pid.value));
        } else {
            keys.push_back(scheme + ":" + pid.value);
        }
    }
    return keys;
}

std::optional<std::string> related_target_key(const RelatedIdentifier& rel) {
    const std::string scheme = ascii_lower(rel.scheme);
    if (scheme == "doi" || scheme.empty()) {
        if (const auto doi = normalize_doi(rel.value))
            return "doi:" + *doi;
        if (scheme.empty())
            return std::nullopt;
        return "doi:" + ascii_lower(rel.value);
    }
    return scheme + ":" + rel.value;
}

std::vector<std::string> normalized_family_names(const PublicationRecord& rec) {
    std::vector<std::string> names;
    for (const auto& author : rec.authors) {
        auto key = normalize_text(author.family).value;
        if (!key.empty())
            names.push_back(std::move(key));
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

bool shares_family_name(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib)
            return true;
        if (*ia < *ib)
            ++ia;
        else
            ++ib;
    }
    return false;
}

std::vector<Cluster> cluster_impl(const std::vector<const PublicationRecord*>& records,
                                  const SourcePriority& priority) {
    const std::size_t n = records.size();
    UnionFind uf(n);

    // (a) identical canonical DOI
    std::unordered_map<std::string, std::size_t> doi_first;
    for (std::size_t i = 0; i < n; ++i) {
        if (!records[i]->doi)
            continue;
        const auto [it, inserted] = doi_first.emplace(*records[i]->doi, i);
        if (!inserted)
            uf.unite(it->second, i);
    }

    // (b) version/preprint relations between two in-corpus PIDs
    std::unordered_map<std::string, std::vector<std::size_t>> pid_index;
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& key : pid_keys(*records[i]))
            pid_index[key].push_back(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& rel : records[i]->related_identifiers) {
            if (!is_version_relation(rel.relation))
                continue;
            const auto key = related_target_key(rel);
            if (!key)
                continue;
            if (const auto it = pid_index.find(*key); it != pid_index.end()) {
                for (std::size_t j : it->second)
                    uf.unite(i, j);
            }
        }
    }

    // (c) identical normalized title + shared family name + year within 1
    std::unordered_map<std::string, std::vector<std::size_t>> title_blocks;
    for (std::size_t i = 0; i < n; ++i) {
        auto title = normalize_text(records[i]->title).value;
        if (!title.empty())
            title_blocks[title].push_back(i);
    }
    std::vector<std::vector<std::string>> families(n);
    for (const auto& [title, block] : title_blocks) {
        if (block.size() < 2)
            continue;
        for (std::size_t i : block) {
            if (families[i].empty())
                families[i] = normalized_family_names(*records[i]);
        }
        for (std::size_t a = 0; a < block.size(); ++a) {
            for (std::size_t b = a + 1; b < block.size(); ++b) {
                const auto& ra = *records[block[a]];
                const auto& rb = *records[block[b]];
                if (!ra.year || !rb.year || std::abs(*ra.year - *rb.year) > 1)
                    continue;
                if (shares_family_name(families[block[a]], families[block[b]]))
                    uf.unite(block[a], block[b]);
            }
        }
    }

    // group by root, members ordered by (priority rank, source_id, payload)
    std::unordered_map<std::size_t, std::size_t> root_to_cluster;
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = uf.find(i);
        const auto [it, inserted] = root_to_cluster.emplace(root, clusters.size());
        if (inserted)
            clusters.emplace_back();
        clusters[it->second].members.push_back(i);
    }
    std::vector<std::string> payload_key(n);
    for (auto& cluster : clusters) {
        std::sort(cluster.members.begin(), cluster.members.end(),
                  [&](std::size_t a, std::size_t b) {
                      const int ra = priority.rank(records[a]->source);
                      const int rb = priority.rank(records[b]->source);
                      if (ra != rb)
                          return ra < rb;
                      if (records[a]->source_id != records[b]->source_id)
                          return records[a]->source_id < records[b]->source_id;
                      if (payload_key[a].empty())
                          payload_key[a] = record_to_json(*records[a]).dump();
                      if (payload_key[b].empty())
                          payload_key[b] = record_to_json(*records[b]).dump();
                      return payload_key[a] < payload_key[b];
                  });
    }
    return clusters;
}

// Union of list fields in member-priority order, first occurrence wins.
template <typename T, typename KeyFn>
std::vector<T> union_list(const std::vector<const std::vector<T>*>& lists, KeyFn key_of) {
    std::vector<T> out;
    std::unordered_set<std::string> seen;
    for (const auto* list : lists) {
        for (const auto& item : *list) {
            if (seen.insert(key_of(item)).second)
                out.push_back(item);
        }
    }
    return out;
}

std::string author_key(const Author& a) {
    std::string key = normalize_text(a.family).value;
    key += '|';
    key += normalize_text(a.given.value_or("")).value;
    key += '|';
    key += ascii_lower(a.orcid.value_or(""));
    key += '|';
    if (a.person_pid)
        key += ascii_lower(a.person_pid->scheme) + ":" + a.person_pid->value;
    return key;
}

// Walks members in priority order and assembles the merged record plus
// provenance; `members` must already be priority-sorted.
MergedPublication merge_records(const std::vector<const PublicationRecord*>& members) {
    MergedPublication out;
    const PublicationRecord& top = *members.front();
    out.fields.source = top.source;
    out.fields.source_id = top.source_id;

    const auto provenance_of = [&](auto getter) -> const PublicationRecord* {
        for (const auto* member : members) {
            if (getter(*member))
                return member;
        }
        return nullptr;
    };

    // scalar fields: highest-priority member that has them populated
    if (const auto* m = provenance_of([](const auto& r) { return !r.title.empty(); })) {
        out.fields.title = m->title;
        out.field_provenance["title"] = std::string(to_string(m->source));
    }
    if (const auto* m = provenance_of([](const auto& r) { return r.year.has_value(); })) {
        out.fields.year = m->year;
        out.field_provenance["year"] = std::string(to_string(m->source));
    }
    if (const auto* m = provenance_of([](const auto& r) { return r.journal_title.has_value(); })) {
        out.fields.journal_title = m->journal_title;
        out.field_provenance["journal_title"] = std::string(to_string(m->source));
    }
    if (const auto* m = provenance_of([](const auto& r) { return r.publisher.has_value(); })) {
        out.fields.publisher = m->publisher;
        out.field_provenance["publisher"] = std::string(to_string(m->source));
    }
    // genre is an enum and always populated: the top member decides
    out.fields.genre = top.genre;
    out.field_provenance["genre"] = std::string(to_string(top.source));
    if (const auto* m = provenance_of([](const auto& r) { return r.doi.has_value(); })) {
        out.fields.doi = m->doi;
        out.field_provenance["doi"] = std::string(to_string(m->source));
    }

    // list fields: deduplicated union across all members
    std::vector<const std::vector<std::string>*> affiliations, keywords, licenses, issns;
    std::vector<const std::vector<Author>*> authors;
    std::vector<const std::vector<PidRef>*> alt_pids;
    std::vector<const std::vector<RelatedIdentifier>*> relateds;
    for (const auto* member : members) {
        affiliations.push_back(&member->raw_affiliations);
        keywords.push_back(&member->keywords);
        licenses.push_back(&member->licenses);
        issns.push_back(&member->journal_issns);
        authors.push_back(&member->authors);
        alt_pids.push_back(&member->alternate_pids);
        relateds.push_back(&member->related_identifiers);
    }
    const auto text_key = [](const std::string& s) { return normalize_text(s).value; };
    out.fields.raw_affiliations = union_list(affiliations, text_key);
    out.fields.keywords = union_list(keywords, text_key);
    out.fields.licenses = union_list(licenses, text_key);
    out.fields.journal_issns = union_list(issns, [](const std::string& s) { return s; });
    out.fields.authors = union_list(authors, author_key);
    out.fields.alternate_pids = union_list(
        alt_pids, [](const PidRef& p) { return ascii_lower(p.scheme) + ":" + p.value; });
    out.fields.related_identifiers =
        union_list(relateds, [](const RelatedIdentifier& rel) {
            return ascii_lower(rel.relation) + "|" + ascii_lower(rel.scheme) + "|" + rel.value;
        });

    // canonical PID: DOI of the best member holding one, else best alternate
    if (out.fields.doi) {
        out.canonical_pid = PidRef{"doi", *out.fields.doi};
    } else {
        const PublicationRecord* holder = nullptr;
        for (const auto* member : members) {
            if (!member->alternate_pids.empty()) {
                holder = member;
                break;
            }
        }
        if (holder == nullptr)
            throw MergeNoPidError();
        const auto best = std::min_element(holder->alternate_pids.begin(),
                                           holder->alternate_pids.end());
        out.canonical_pid = *best;
    }

    for (const auto* member : members)
        out.member_sources.emplace_back(member->source, member->source_id);
    return out;
}

std::string corpus_sort_key(const MergedPublication& pub) {
    std::string key = pub.canonical_pid.key();
    key += '\x1f';
    for (const auto& [source, id] : pub.member_sources) {
        key += to_string(source);
        key += ':';
        key += id;
        key += '\x1f';
    }
    return key;
}

void sort_corpus(std::vector<MergedPublication>& corpus) {
    std::sort(corpus.begin(), corpus.end(), [](const auto& a, const auto& b) {
        return corpus_sort_key(a) < corpus_sort_key(b);
    });
}

}  // namespace

bool is_version_relation(std::string_view relation) {
    static const std::vector<std::string> kRelations = {
        "isversionof", "hasversion", "isidenticalto", "ispreprintof", "haspreprint",
    };
    const std::string lowered = ascii_lower(relation);
    return std::find(kRelations.begin(), kRelations.end(), lowered) != kRelations.end();
}

SourcePriority SourcePriority::default_priority() {
    return SourcePriority{{Source::crossref, Source::pubmed, Source::repository,
                           Source::institution, Source::other}};
}

int SourcePriority::rank(Source source) const {
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] == source)
            return static_cast<int>(i);
    }
    return static_cast<int>(order.size()) + static_cast<int>(source);
}

std::optional<std::string> SourcePriority::validate() const {
    std::unordered_set<int> seen;
    for (Source s : order) {
        if (!seen.insert(static_cast<int>(s)).second)
            return "priority lists a source twice";
    }
    if (!seen.contains(static_cast<int>(Source::crossref)))
        return "priority must contain crossref";
    return std::nullopt;
}

std::vector<Cluster> cluster_records(const std::vector<PublicationRecord>& records,
                                     const SourcePriority& priority) {
    std::vector<const PublicationRecord*> ptrs;
    ptrs.reserve(records.size());
    for (const auto& rec : records)
        ptrs.push_back(&rec);
    return cluster_impl(ptrs, priority);
}

MergedPublication merge_cluster(const std::vector<PublicationRecord>& records,
                                const Cluster& cluster, const SourcePriority& priority) {
    std::vector<const PublicationRecord*> members;
    members.reserve(cluster.members.size());
    for (std::size_t i : cluster.members)
        members.push_back(&records[i]);
    std::sort(members.begin(), members.end(), [&](const auto* a, const auto* b) {
        const int ra = priority.rank(a->source);
        const int rb = priority.rank(b->source);
        if (ra != rb)
            return ra < rb;
        if (a->source_id != b->source_id)
            return a->source_id < b->source_id;
        return record_to_json(*a).dump() < record_to_json(*b).dump();
    });
    return merge_records(members);
}

DedupResult dedup_corpus(const std::vector<PublicationRecord>& records,
                         const SourcePriority& priority) {
    DedupResult result;
    const auto clusters = cluster_records(records, priority);
    for (const auto& cluster : clusters) {
        try {
            result.corpus.push_back(merge_cluster(records, cluster, priority));
        } catch (const MergeNoPidError& e) {
            DedupReject reject;
            for (std::size_t i : cluster.members)
                reject.members.emplace_back(records[i].source, records[i].source_id);
            reject.reason = e.what();
            result.rejects.push_back(std::move(reject));
        }
    }
    sort_corpus(result.corpus);
    return result;
}

DedupResult dedup_corpus(const std::vector<MergedPublication>& corpus,
                         const SourcePriority& priority) {
    std::vector<const PublicationRecord*> ptrs;
    ptrs.reserve(corpus.size());
    for (const auto& pub : corpus)
        ptrs.push_back(&pub.fields);
    const auto clusters = cluster_impl(ptrs, priority);

    DedupResult result;
    for (const auto& cluster : clusters) {
        if (cluster.members.size() == 1) {
            result.corpus.push_back(corpus[cluster.members.front()]);
            continue;
        }
        // colliding merged publications: combine them, keeping original provenance
        std::vector<const MergedPublication*> members;
        for (std::size_t i : cluster.members)
            members.push_back(&corpus[i]);
        std::sort(members.begin(), members.end(), [&](const auto* a, const auto* b) {
            const auto& ta = a->member_sources.front();
            const auto& tb = b->member_sources.front();
            const int ra = priority.rank(ta.first);
            const int rb = priority.rank(tb.first);
            if (ra != rb)
                return ra < rb;
            return ta.second < tb.second;
        });
        std::vector<const PublicationRecord*> fields;
        for (const auto* m : members)
            fields.push_back(&m->fields);
        MergedPublication combined = merge_records(fields);
        // restore the true origin of each scalar from the winning member
        combined.field_provenance.clear();
        for (const char* field : {"title", "year", "journal_title", "publisher", "genre", "doi"}) {
            for (const auto* m : members) {
                if (const auto it = m->field_provenance.find(field);
                    it != m->field_provenance.end()) {
                    combined.field_provenance[field] = it->second;
                    break;
                }
            }
        }
        combined.member_sources.clear();
        for (const auto* m : members) {
            for (const auto& ms : m->member_sources)
                combined.member_sources.push_back(ms);
        }
        std::sort(combined.member_sources.begin(), combined.member_sources.end(),
                  [&](const auto& a, const auto& b) {
                      const int ra = priority.rank(a.first);
                      const int rb = priority.rank(b.first);
                      if (ra != rb)
                          return ra < rb;
                      return a.second < b.second;
                  });
        combined.member_sources.erase(
            std::unique(combined.member_sources.begin(), combined.member_sources.end()),
            combined.member_sources.end());
        for (const auto* m : members) {
            for (const auto& c : m->countries)
                combined.countries.push_back(c);
        }
        std::sort(combined.countries.begin(), combined.countries.end());
        combined.countries.erase(std::unique(combined.countries.begin(), combined.countries.end()),
                                 combined.countries.end());
        for (const auto* m : members) {
            if (m->discipline) {
                combined.discipline = m->discipline;
                break;
            }
        }
        result.corpus.push_back(std::move(combined));
    }
    sort_corpus(result.corpus);
    return result;
}

nlohmann::json merged_to_json(const MergedPublication& pub) {
    json j = record_to_json(pub.fields);
    j["canonical_pid"] = json{{"scheme", pub.canonical_pid.scheme}, {"value", pub.canonical_pid.value}};
    j["field_provenance"] = json::object();
    for (const auto& [field, source] : pub.field_provenance)
        j["field_provenance"][field] = source;
    j["member_sources"] = json::array();
    for (const auto& [source, id] : pub.member_sources)
        j["member_sources"].push_back(json{{"source", to_string(source)}, {"source_id", id}});
    j["countries"] = pub.countries;
    if (pub.discipline)
        j["discipline"] = *pub.discipline;
    return j;
}

MergedPublication merged_from_json(const nlohmann::json& j) {
    MergedPublication pub;
    pub.fields = record_from_json(j);
    pub.canonical_pid = PidRef{j.at("canonical_pid").at("scheme").get<std::string>(),
                               j.at("canonical_pid").at("value").get<std::string>()};
    if (j.contains("field_provenance")) {
        for (const auto& [field, source] : j.at("field_provenance").items())
            pub.field_provenance[field] = source.get<std::string>();
    }
    for (const auto& mj : j.at("member_sources")) {
        const auto source = source_from_string(mj.at("source").get<std::string>());
        pub.member_sources.emplace_back(source.value_or(Source::other),
                                        mj.at("source_id").get<std::string>());
    }
    if (j.contains("countries"))
        pub.countries = j.at("countries").get<std::vector<std::string>>();
    if (j.contains("discipline"))
        pub.discipline = j.at("discipline").get<std::string>();
    return pub;
}

std::string corpus_to_jsonl(const std::vector<MergedPublication>& corpus) {
    std::string out;
    for (const auto& pub : corpus) {
        out += merged_to_json(pub).dump();
        out += '\n';
    }
    return out;
}

}  // namespace osmon
