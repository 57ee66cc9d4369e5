#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace osmon {

// Key produced by normalize_text(): lowercase ASCII, diacritics folded,
// punctuation runs collapsed to single spaces. Idempotent by construction.
struct NormalizedKey {
    std::string value;

    friend bool operator==(const NormalizedKey&, const NormalizedKey&) = default;
    friend std::strong_ordering operator<=>(const NormalizedKey&, const NormalizedKey&) = default;
};

// Lowercases, folds Latin diacritics to ASCII via a fixed table shipped with
// the artifact (never locale-dependent), replaces every non-alphanumeric run
// by one space and trims. Output alphabet is [a-z0-9 ].
NormalizedKey normalize_text(std::string_view raw);

// Token view of a normalized key.
std::vector<std::string> tokenize(const NormalizedKey& key);

// Canonical DOI: resolver prefixes ("https://doi.org/", "http://dx.doi.org/",
// "doi:", ...) stripped, lowercased. nullopt unless the remainder is
// "10.<registrant>/<suffix>" with non-empty parts and no inner whitespace.
std::optional<std::string> normalize_doi(std::string_view raw);

// ISSN normalized to 8 characters with an uppercase X check digit.
// nullopt when the input does not reduce to that shape.
std::optional<std::string> normalize_issn(std::string_view raw);

// 16-character ORCID (hyphens optional) with a valid ISO 7064 11-2 check digit.
bool is_valid_orcid(std::string_view raw);

}  // namespace osmon
