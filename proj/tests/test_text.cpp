#include <doctest.h>

#include <random>

#include "osmon/text.hpp"

using namespace osmon;

TEST_CASE("normalize_doi strips resolver prefixes") {
    CHECK(normalize_doi("https://doi.org/10.5281/zenodo.8042997") == "10.5281/zenodo.8042997");
    CHECK(normalize_doi("http://dx.doi.org/10.5281/zenodo.8042997") == "10.5281/zenodo.8042997");
    CHECK(normalize_doi("doi:10.5281/zenodo.8042997") == "10.5281/zenodo.8042997");
    CHECK(normalize_doi("DOI:10.1234/ABC") == "10.1234/abc");
}

TEST_CASE("normalize_doi lowercases") {
    CHECK(normalize_doi("10.1234/ABC.DEF") == "10.1234/abc.def");
}

TEST_CASE("normalize_doi rejects malformed input") {
    CHECK(!normalize_doi("not-a-doi"));
    CHECK(!normalize_doi(""));
    CHECK(!normalize_doi("10./abc"));
    CHECK(!normalize_doi("10.1234"));      // no suffix
    CHECK(!normalize_doi("10.1234/"));     // empty suffix
    CHECK(!normalize_doi("11.1234/abc"));  // wrong prefix
    CHECK(!normalize_doi("10.12 34/abc")); // inner whitespace
}

TEST_CASE("normalize_doi is idempotent on its own outputs") {
    for (const char* raw : {"https://doi.org/10.5281/zenodo.8042997", "10.1234/ABC.DEF",
                            "doi:10.1000/XYZ-9(a)", "  10.999/x  "}) {
        const auto once = normalize_doi(raw);
        REQUIRE(once.has_value());
        CHECK(normalize_doi(*once) == *once);
    }
}

TEST_CASE("normalize_text folds diacritics and strips punctuation") {
    CHECK(normalize_text("Économie & Société").value == "economie societe");
    CHECK(normalize_text("").value == "");
    CHECK(normalize_text("  A  B ").value == "a b");
    CHECK(normalize_text("Straße").value == "strasse");
    CHECK(normalize_text("L'Hôte").value == "l hote");
    CHECK(normalize_text("Œuvre complète, Vol. 2").value == "oeuvre complete vol 2");
}

TEST_CASE("normalize_text output alphabet and idempotence") {
    std::mt19937 rng(20240531);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> len(0, 60);
    for (int iter = 0; iter < 500; ++iter) {
        std::string raw;
        const int n = len(rng);
        for (int i = 0; i < n; ++i)
            raw.push_back(static_cast<char>(byte(rng)));
        const auto key = normalize_text(raw);
        for (const char c : key.value)
            CHECK(((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' '));
        CHECK(key.value.find("  ") == std::string::npos);
        if (!key.value.empty()) {
            CHECK(key.value.front() != ' ');
            CHECK(key.value.back() != ' ');
        }
        CHECK(normalize_text(key.value) == key);
    }
}

TEST_CASE("tokenize splits a normalized key") {
    const auto tokens = tokenize(normalize_text("Univ. of Lyon, France"));
    REQUIRE(tokens.size() == 4);
    CHECK(tokens[0] == "univ");
    CHECK(tokens[3] == "france");
}

TEST_CASE("normalize_issn") {
    CHECK(normalize_issn("1234-5678") == "12345678");
    CHECK(normalize_issn("2049-363x") == "2049363X");
    CHECK(!normalize_issn("1234-567"));
    CHECK(!normalize_issn("abcd-efgh"));
}

TEST_CASE("orcid checksum validation") {
    // 0000-0002-1825-0097 is the ORCID documentation example
    CHECK(is_valid_orcid("0000-0002-1825-0097"));
    CHECK(is_valid_orcid("0000000218250097"));
    CHECK(!is_valid_orcid("0000-0002-1825-0098"));
    CHECK(!is_valid_orcid("0000-0002-1825-009"));
    CHECK(!is_valid_orcid(""));
    // X check digit
    CHECK(is_valid_orcid("0000-0002-9079-593X"));
}
