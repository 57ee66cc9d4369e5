#include "osmon/mentions.hpp"

#include <map>

#include <json.hpp>

namespace osmon {

namespace {

using nlohmann::json;

}  // namespace

std::string_view to_string(ObjectKind kind) {
    return kind == ObjectKind::dataset ? "dataset" : "software";
}

std::string_view to_string(FunnelDenominator mode) {
    return mode == FunnelDenominator::use_or_create ? "or" : "and";
}

std::optional<ObjectKind> object_kind_from_string(std::string_view s) {
    if (s == "dataset")
        return ObjectKind::dataset;
    if (s == "software")
        return ObjectKind::software;
    return std::nullopt;
}

std::optional<FunnelDenominator> funnel_denominator_from_string(std::string_view s) {
    if (s == "or")
        return FunnelDenominator::use_or_create;
    if (s == "and")
        return FunnelDenominator::use_and_create;
    return std::nullopt;
}

MentionsParseResult parse_mentions_file(const std::filesystem::path& path) {
    MentionsParseResult result;
    result.line_count = for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        try {
            const json j = json::parse(line);
            MentionRecord rec;
            rec.document_pid = j.at("document_pid").get<std::string>();
            const auto kind = object_kind_from_string(j.at("object_kind").get<std::string>());
            if (!kind) {
                result.rejects.push_back(
                    {line_no, "unknown object_kind: " + j.at("object_kind").get<std::string>()});
                return;
            }
            rec.object_kind = *kind;
            if (j.contains("mention_text") && j.at("mention_text").is_string())
                rec.mention_text = j.at("mention_text").get<std::string>();
            rec.p_used = j.at("p_used").get<double>();
            rec.p_created = j.at("p_created").get<double>();
            rec.p_shared = j.at("p_shared").get<double>();
            for (const double p : {rec.p_used, rec.p_created, rec.p_shared}) {
                if (!(p >= 0.0 && p <= 1.0)) {
                    result.rejects.push_back({line_no, "probability outside [0,1]"});
                    return;
                }
            }
            if (rec.document_pid.empty()) {
                result.rejects.push_back({line_no, "empty document_pid"});
                return;
            }
            result.records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            result.rejects.push_back({line_no, std::string("parse error: ") + e.what()});
        }
    });
    return result;
}

DocumentMentionIndicators document_indicators(const std::vector<MentionRecord>& mentions,
                                              double tau) {
    DocumentMentionIndicators ind;
    if (!mentions.empty())
        ind.document_pid = mentions.front().document_pid;
    for (const auto& m : mentions) {
        KindIndicators& k = m.object_kind == ObjectKind::dataset ? ind.dataset : ind.software;
        k.mention_count += 1;
        if (m.p_used >= tau)
            k.uses = true;
        if (m.p_created >= tau)
            k.creates = true;
        if (m.p_shared >= tau)
            k.shares = true;
    }
    return ind;
}

std::vector<DocumentMentionIndicators> indicators_for_corpus(
    const std::vector<MentionRecord>& mentions, double tau) {
    std::map<std::string, std::vector<MentionRecord>> by_document;
    for (const auto& m : mentions)
        by_document[m.document_pid].push_back(m);
    std::vector<DocumentMentionIndicators> out;
    out.reserve(by_document.size());
    for (const auto& [pid, group] : by_document)
        out.push_back(document_indicators(group, tau));
    return out;
}

FunnelKPI funnel_kpi(const std::vector<DocumentMentionIndicators>& indicators, ObjectKind kind,
                     FunnelDenominator mode) {
    FunnelKPI kpi;
    kpi.object_kind = kind;
    kpi.mode = mode;
    for (const auto& doc : indicators) {
        const KindIndicators& k = doc.of(kind);
        const bool engaged = mode == FunnelDenominator::use_or_create ? (k.uses || k.creates)
                                                                      : (k.uses && k.creates);
        if (!engaged)
            continue;
        kpi.rate.denominator += 1;
        if (k.shares)
            kpi.rate.numerator += 1;
    }
    return kpi;
}

}  // namespace osmon
