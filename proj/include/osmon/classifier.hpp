#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osmon/dedup.hpp"

namespace osmon {

struct TaxonomyCategory {
    std::string id;
    std::string label;
};

// Macro-discipline taxonomy: ISSN lookup table plus weighted keyword scoring.
// Loaded from a sectioned CSV:
//   category,<id>,<label>
//   issn,<issn>,<category_id>
//   keyword,<keyword>,<category_id>,<weight>
class Taxonomy {
public:
    static Taxonomy from_csv_file(const std::filesystem::path& path);
    static Taxonomy from_rows(const std::vector<std::vector<std::string>>& rows);

    void add_category(std::string_view id, std::string_view label);
    void add_issn(std::string_view issn, std::string_view category_id);
    void add_keyword(std::string_view keyword, std::string_view category_id, double weight);

    std::optional<std::string> validate() const;  // nullopt when well-formed

    const std::vector<TaxonomyCategory>& categories() const { return categories_; }
    std::optional<std::string> category_for_issn(const std::string& normalized_issn) const;
    // (normalized keyword, category_id) -> weight
    const std::map<std::pair<std::string, std::string>, double>& keyword_weights() const {
        return keyword_weights_;
    }

private:
    std::vector<TaxonomyCategory> categories_;
    std::map<std::string, std::string> issn_map_;
    std::map<std::pair<std::string, std::string>, double> keyword_weights_;
};

enum class ClassificationBasis { issn, keywords, unclassified };

std::string_view to_string(ClassificationBasis basis);

struct Classification {
    std::optional<std::string> category;  // absent iff unclassified
    ClassificationBasis basis = ClassificationBasis::unclassified;
};

// ISSN lookup wins (first ISSN in record order); otherwise keyword scores over
// the normalized title + keywords decide, ties to the smallest category id.
Classification classify(const MergedPublication& pub, const Taxonomy& taxonomy);

struct ClassifySummary {
    std::map<std::string, std::size_t> counts;  // per category id + "unclassified"
    std::size_t total = 0;
};

ClassifySummary classify_corpus(std::vector<MergedPublication>& corpus, const Taxonomy& taxonomy);

constexpr const char* kUnclassified = "unclassified";

}  // namespace osmon
