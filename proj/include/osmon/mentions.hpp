#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osmon/util.hpp"

namespace osmon {

enum class ObjectKind { dataset, software };
enum class FunnelDenominator { use_or_create, use_and_create };

std::string_view to_string(ObjectKind kind);
std::string_view to_string(FunnelDenominator mode);
std::optional<ObjectKind> object_kind_from_string(std::string_view s);
std::optional<FunnelDenominator> funnel_denominator_from_string(std::string_view s);

// One classified mention from the TDM extraction output.
struct MentionRecord {
    std::string document_pid;
    ObjectKind object_kind = ObjectKind::dataset;
    std::string mention_text;
    double p_used = 0.0;
    double p_created = 0.0;
    double p_shared = 0.0;
};

struct MentionsParseResult {
    std::vector<MentionRecord> records;
    std::vector<LineReject> rejects;
    std::size_t line_count = 0;
};

// JSONL {document_pid, object_kind, mention_text, p_used, p_created, p_shared}.
// Probabilities outside [0,1] reject the line; they are never clamped.
MentionsParseResult parse_mentions_file(const std::filesystem::path& path);

struct KindIndicators {
    bool uses = false;
    bool creates = false;
    bool shares = false;
    std::size_t mention_count = 0;
};

// Document-level use/create/share flags per object kind.
struct DocumentMentionIndicators {
    std::string document_pid;
    KindIndicators dataset;
    KindIndicators software;

    const KindIndicators& of(ObjectKind kind) const {
        return kind == ObjectKind::dataset ? dataset : software;
    }
};

// uses := any mention of that kind with p_used >= tau; same for creates/shares.
DocumentMentionIndicators document_indicators(const std::vector<MentionRecord>& mentions,
                                              double tau);

// Groups mentions by document and computes indicators for each.
std::vector<DocumentMentionIndicators> indicators_for_corpus(
    const std::vector<MentionRecord>& mentions, double tau);

struct FunnelKPI {
    ObjectKind object_kind = ObjectKind::dataset;
    FunnelDenominator mode = FunnelDenominator::use_or_create;
    Ratio rate;  // numerator: sharing docs among the denominator
};

// denominator: documents that use/create (per mode); numerator: those that
// also share. Undefined when the denominator is zero.
FunnelKPI funnel_kpi(const std::vector<DocumentMentionIndicators>& indicators, ObjectKind kind,
                     FunnelDenominator mode);

}  // namespace osmon
