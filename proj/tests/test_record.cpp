#include <doctest.h>

#include "osmon/record.hpp"
#include "osmon/util.hpp"

using namespace osmon;

namespace {

PublicationRecord valid_record() {
    PublicationRecord rec;
    rec.source_id = "crossref:1";
    rec.source = Source::crossref;
    rec.doi = "10.1234/abc.def";
    rec.title = "A study of studies";
    rec.year = 2020;
    rec.genre = Genre::journal_article;
    rec.authors.push_back({"Durand", "Marie", std::nullopt, std::nullopt});
    return rec;
}

}  // namespace

TEST_CASE("validate_record accepts a fully valid record") {
    CHECK(validate_record(valid_record()).empty());
}

TEST_CASE("validate_record flags out-of-range years") {
    auto rec = valid_record();
    rec.year = 3050;
    const auto violations = validate_record(rec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].field == "year");

    rec.year = 1499;
    CHECK(validate_record(rec).size() == 1);
    rec.year = 1500;
    CHECK(validate_record(rec).empty());
    rec.year = current_utc_year() + 2;
    CHECK(validate_record(rec).empty());
}

TEST_CASE("validate_record flags empty titles") {
    auto rec = valid_record();
    rec.title = "";
    auto violations = validate_record(rec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].field == "title");

    // punctuation-only titles are empty after normalization
    rec.title = "###  --- !!";
    violations = validate_record(rec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].field == "title");
}

TEST_CASE("validate_record flags non-canonical DOIs and bad ORCIDs") {
    auto rec = valid_record();
    rec.doi = "https://doi.org/10.1234/abc";
    CHECK(validate_record(rec).size() == 1);
    rec.doi = "10.1234/ABC";
    CHECK(validate_record(rec).size() == 1);
    rec.doi = "10.1234/abc";
    CHECK(validate_record(rec).empty());

    rec.authors.push_back({"Martin", std::nullopt, "0000-0002-1825-0098", std::nullopt});
    const auto violations = validate_record(rec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].field == "authors[1].orcid");
}

TEST_CASE("validate_record is pure") {
    const auto rec = valid_record();
    const auto a = validate_record(rec);
    const auto b = validate_record(rec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].field == b[i].field);
        CHECK(a[i].rule == b[i].rule);
    }
}

TEST_CASE("record json round trip") {
    auto rec = valid_record();
    rec.alternate_pids.push_back({"hal", "hal-01234567"});
    rec.related_identifiers.push_back({"IsVersionOf", "doi", "10.5281/zenodo.1"});
    rec.raw_affiliations = {"CNRS, Paris, France"};
    rec.journal_issns = {"12345678"};
    rec.journal_title = "Journal of Studies";
    rec.publisher = "Presses";
    rec.licenses = {"cc-by"};
    rec.keywords = {"science"};
    rec.authors[0].orcid = "0000-0002-1825-0097";
    rec.authors[0].person_pid = PidRef{"idref", "123456789"};

    const auto j = record_to_json(rec);
    const auto back = record_from_json(j);
    CHECK(back == rec);
    // canonical serialization is stable
    CHECK(record_to_json(back).dump() == j.dump());
}
