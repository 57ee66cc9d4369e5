#include "osmon/classifier.hpp"

#include <algorithm>
#include <set>

#include "osmon/text.hpp"
#include "osmon/util.hpp"

namespace osmon {

namespace {

// Token-boundary presence of a multi-token keyword in a token stream.
bool contains_keyword(const std::vector<std::string>& tokens, const std::string& keyword) {
    std::vector<std::string> kw_tokens;
    std::size_t start = 0;
    while (start <= keyword.size()) {
        std::size_t end = keyword.find(' ', start);
        if (end == std::string::npos)
            end = keyword.size();
        if (end > start)
            kw_tokens.push_back(keyword.substr(start, end - start));
        if (end == keyword.size())
            break;
        start = end + 1;
    }
    if (kw_tokens.empty() || kw_tokens.size() > tokens.size())
        return false;
    for (std::size_t i = 0; i + kw_tokens.size() <= tokens.size(); ++i) {
        if (std::equal(kw_tokens.begin(), kw_tokens.end(), tokens.begin() + static_cast<long>(i)))
            return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(ClassificationBasis basis) {
    switch (basis) {
    case ClassificationBasis::issn: return "issn";
    case ClassificationBasis::keywords: return "keywords";
    case ClassificationBasis::unclassified: return "unclassified";
    }
    return "unclassified";
}

Taxonomy Taxonomy::from_csv_file(const std::filesystem::path& path) {
    return from_rows(read_csv(path));
}

Taxonomy Taxonomy::from_rows(const std::vector<std::vector<std::string>>& rows) {
    Taxonomy tax;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::string& section = row.empty() ? "" : row[0];
        if (section == "section")  // header
            continue;
        if (section == "category" && row.size() >= 3)
            tax.add_category(row[1], row[2]);
        else if (section == "issn" && row.size() >= 3)
            tax.add_issn(row[1], row[2]);
        else if (section == "keyword" && row.size() >= 4)
            tax.add_keyword(row[1], row[2], std::stod(row[3]));
        else
            throw DataError("taxonomy row " + std::to_string(i + 1) + ": malformed entry");
    }
    if (const auto err = tax.validate())
        throw DataError("taxonomy: " + *err);
    return tax;
}

void Taxonomy::add_category(std::string_view id, std::string_view label) {
    categories_.push_back({std::string(id), std::string(label)});
}

void Taxonomy::add_issn(std::string_view issn, std::string_view category_id) {
    if (const auto normalized = normalize_issn(issn))
        issn_map_[*normalized] = std::string(category_id);
}

void Taxonomy::add_keyword(std::string_view keyword, std::string_view category_id, double weight) {
    const std::string key = normalize_text(keyword).value;
    if (!key.empty())
        keyword_weights_[{key, std::string(category_id)}] = weight;
}

std::optional<std::string> Taxonomy::validate() const {
    if (categories_.empty())
        return "no categories defined";
    std::set<std::string> ids;
    for (const auto& cat : categories_) {
        if (!ids.insert(cat.id).second)
            return "duplicate category id '" + cat.id + "'";
    }
    for (const auto& [issn, cat] : issn_map_) {
        if (!ids.contains(cat))
            return "issn " + issn + " maps to unknown category '" + cat + "'";
    }
    for (const auto& [key, weight] : keyword_weights_) {
        if (!ids.contains(key.second))
            return "keyword '" + key.first + "' maps to unknown category '" + key.second + "'";
        if (weight <= 0)
            return "keyword '" + key.first + "' has non-positive weight";
    }
    return std::nullopt;
}

std::optional<std::string> Taxonomy::category_for_issn(const std::string& normalized_issn) const {
    const auto it = issn_map_.find(normalized_issn);
    if (it == issn_map_.end())
        return std::nullopt;
    return it->second;
}

Classification classify(const MergedPublication& pub, const Taxonomy& taxonomy) {
    // ISSN lookup always preempts keyword scoring; first ISSN in record order
    for (const auto& issn : pub.fields.journal_issns) {
        if (const auto category = taxonomy.category_for_issn(issn))
            return {*category, ClassificationBasis::issn};
    }

    std::string text = pub.fields.title;
    for (const auto& kw : pub.fields.keywords) {
        text += ' ';
        text += kw;
    }
    const auto tokens = tokenize(normalize_text(text));

    std::map<std::string, double> scores;
    for (const auto& [key, weight] : taxonomy.keyword_weights()) {
        if (contains_keyword(tokens, key.first))
            scores[key.second] += weight;
    }
    // argmax; ties resolved to the lexicographically smallest category id,
    // which the sorted map ordering yields for free
    std::optional<std::string> best;
    double best_score = 0.0;
    for (const auto& [category, score] : scores) {
        if (score > best_score) {
            best = category;
            best_score = score;
        }
    }
    if (!best)
        return {std::nullopt, ClassificationBasis::unclassified};
    return {best, ClassificationBasis::keywords};
}

ClassifySummary classify_corpus(std::vector<MergedPublication>& corpus, const Taxonomy& taxonomy) {
    ClassifySummary summary;
    std::vector<Classification> results(corpus.size());
    parallel_for(corpus.size(),
                 [&](std::size_t i) { results[i] = classify(corpus[i], taxonomy); });
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        corpus[i].discipline = results[i].category;
        summary.counts[results[i].category.value_or(kUnclassified)] += 1;
        summary.total += 1;
    }
    return summary;
}

}  // namespace osmon
