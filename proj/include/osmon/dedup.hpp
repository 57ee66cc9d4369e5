#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "osmon/record.hpp"

namespace osmon {

enum class ClusterKeyKind { doi, version_group, title_author };

struct ClusterKey {
    ClusterKeyKind kind;
    std::string value;
};

// Merge precedence over source families, highest first. Sources missing from
// the list rank below every listed one, in enum order, so merging stays total.
struct SourcePriority {
    std::vector<Source> order;

    static SourcePriority default_priority();
    int rank(Source source) const;
    // nullopt when valid: no duplicates, crossref present
    std::optional<std::string> validate() const;
};

// Canonical post-deduplication publication with field provenance.
struct MergedPublication {
    PidRef canonical_pid;
    PublicationRecord fields;  // source/source_id are the top member's
    std::map<std::string, std::string> field_provenance;  // scalar field -> source tag
    std::vector<std::pair<Source, std::string>> member_sources;
    std::vector<std::string> countries;         // filled by the affiliation matcher
    std::optional<std::string> discipline;      // filled by the classifier
};

struct Cluster {
    std::vector<std::size_t> members;  // indices, sorted by (priority rank, source_id)
};

// Partition of the input records into duplicate groups: union-find over
//   (a) identical canonical DOI,
//   (b) related-identifier version/preprint links between two in-corpus PIDs,
//   (c) identical normalized title + shared author family name + year within 1.
std::vector<Cluster> cluster_records(const std::vector<PublicationRecord>& records,
                                     const SourcePriority& priority);

struct MergeNoPidError : std::runtime_error {
    MergeNoPidError() : std::runtime_error("MERGE_NO_PID: cluster has no persistent identifier") {}
};

// Scalar fields come from the highest-priority member holding them; list
// fields are the normalized union across members. Throws MergeNoPidError when
// no member carries any PID.
MergedPublication merge_cluster(const std::vector<PublicationRecord>& records,
                                const Cluster& cluster, const SourcePriority& priority);

struct DedupReject {
    std::vector<std::pair<Source, std::string>> members;
    std::string reason;
};

struct DedupResult {
    std::vector<MergedPublication> corpus;  // sorted by canonical_pid
    std::vector<DedupReject> rejects;
};

DedupResult dedup_corpus(const std::vector<PublicationRecord>& records,
                         const SourcePriority& priority);

// Re-running dedup over an already-merged corpus is a fixed point: clusters
// that stay singletons pass through untouched (member lists and provenance
// included), so the corpus file is byte-stable under repeated runs.
DedupResult dedup_corpus(const std::vector<MergedPublication>& corpus,
                         const SourcePriority& priority);

// The relation vocabulary that links versions/preprints of one output.
bool is_version_relation(std::string_view relation);

nlohmann::json merged_to_json(const MergedPublication& pub);
MergedPublication merged_from_json(const nlohmann::json& j);
std::string corpus_to_jsonl(const std::vector<MergedPublication>& corpus);

}  // namespace osmon
