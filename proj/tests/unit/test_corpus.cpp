#include <catch_amalgamated.hpp>

#include <random>
#include <regex>

#include "asreval/corpus.hpp"
#include "asreval/error.hpp"
#include "support/fixtures.hpp"

using namespace asreval;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

using Tokens = std::vector<std::string>;

TEST_CASE("normalize: case, punctuation, whitespace") {
    CHECK(normalize("open duolingo.").tokens == Tokens{"OPEN", "DUOLINGO"});
    CHECK(normalize("SET THE AIR CONDITIONING").tokens == Tokens{"SET", "THE", "AIR", "CONDITIONING"});
    CHECK(normalize("  don't   stop ").tokens == Tokens{"DON'T", "STOP"});
    CHECK(normalize("").tokens.empty());
    CHECK(normalize(" \t\n").empty());
    CHECK(normalize("...!?").empty());
}

TEST_CASE("normalize: apostrophes and hyphens") {
    CHECK(normalize("'quoted'").tokens == Tokens{"QUOTED"});
    CHECK(normalize("rock 'n' roll").tokens == Tokens{"ROCK", "N", "ROLL"});
    CHECK(normalize("it\xE2\x80\x99s").tokens == Tokens{"IT'S"});
    CHECK(normalize("dogs' bowls").tokens == Tokens{"DOGS", "BOWLS"});
    CHECK(normalize("x-ray well-known").tokens == Tokens{"X", "RAY", "WELL", "KNOWN"});
    CHECK(normalize("a''b").tokens == Tokens{"A'B"});
}

TEST_CASE("normalize: digits kept, non-ASCII dropped") {
    CHECK(normalize("turn to 78").tokens == Tokens{"TURN", "TO", "78"});
    CHECK(normalize("caf\xC3\xA9 ol\xC3\xA9").tokens == Tokens{"CAF", "OL"});
    CHECK(normalize("raw text kept").original == "raw text kept");
}

TEST_CASE("normalize: idempotent and alphabet-closed on random strings") {
    std::mt19937_64 rng(7);
    const std::string alphabet = "abcXYZ019 '-\t.,!?\xE2\x80\x99\xC3\xA9";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 40);
    const std::regex allowed("[A-Z0-9']+");
    for (int trial = 0; trial < 2000; ++trial) {
        std::string s;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) s += alphabet[pick(rng)];
        const auto once = normalize(s);
        for (const auto& t : once.tokens) {
            INFO(s);
            REQUIRE(std::regex_match(t, allowed));
        }
        REQUIRE(normalize(once.joined()).tokens == once.tokens);
    }
}

TEST_CASE("severity labels round-trip") {
    for (Severity s : kSeverityOrder) CHECK(parse_severity(severity_label(s)) == s);
    CHECK_FALSE(parse_severity("X").has_value());
    CHECK_FALSE(parse_severity("h").has_value());
    CHECK(severity_label(Severity::Unknown).empty());
}

namespace {

const char* kThreeLines =
    R"({"id":"a","system_id":"s1","severity":"H","reference":"open duolingo","hypothesis":"open gulamnba","corrected_hypothesis":null,"ratings":[3,4]}
{"id":"b","system_id":"s1","severity":null,"reference":"x","hypothesis":""}

{"id":"c","system_id":"s2","severity":"VL","reference":"y z","hypothesis":"y","corrected_hypothesis":"y z","ratings":[1,5,2]}
)";

}  // namespace

TEST_CASE("parse_corpus: well-formed file") {
    const auto recs = parse_corpus(kThreeLines, "t.jsonl");
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].id == "a");
    CHECK(recs[0].severity == Severity::High);
    CHECK_FALSE(recs[0].corrected_hypothesis.has_value());
    CHECK(recs[0].ratings == std::vector<int>{3, 4});
    CHECK(recs[1].severity == Severity::Unknown);
    CHECK_FALSE(recs[1].ratings.has_value());
    CHECK(recs[2].severity == Severity::VeryLow);
    CHECK(recs[2].corrected_hypothesis == "y z");
}

TEST_CASE("parse_corpus: errors") {
    SECTION("rating out of range names the record") {
        const char* text = R"({"id":"ok","system_id":"s","reference":"a","hypothesis":"a"}
{"id":"bad7","system_id":"s","reference":"a","hypothesis":"a","ratings":[3,7]})";
        try {
            parse_corpus(text, "r.jsonl");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.record_id() == "bad7");
            CHECK_THAT(std::string(e.what()), ContainsSubstring("bad7") && ContainsSubstring("r.jsonl:2"));
        }
    }
    SECTION("duplicate id cites both lines") {
        const char* text = R"({"id":"u1","system_id":"s","reference":"a","hypothesis":"a"}
{"id":"u2","system_id":"s","reference":"a","hypothesis":"a"}
{"id":"u3","system_id":"s","reference":"a","hypothesis":"a"}

{"id":"u2","system_id":"s","reference":"b","hypothesis":"b"})";
        try {
            parse_corpus(text, "d.jsonl");
            FAIL("expected duplicate-id error");
        } catch (const Error& e) {
            const std::string msg = e.what();
            CHECK_THAT(msg, ContainsSubstring("duplicate id 'u2'"));
            CHECK_THAT(msg, ContainsSubstring("lines 2 and 5"));
        }
    }
    SECTION("malformed JSON carries the line number") {
        const char* text = "{\"id\":\"u1\",\"system_id\":\"s\",\"reference\":\"a\",\"hypothesis\":\"a\"}\n{not json}\n";
        try {
            parse_corpus(text, "m.jsonl");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(e.path() == "m.jsonl");
        }
    }
    SECTION("reference that normalizes to nothing") {
        CHECK_THROWS_AS(parse_corpus(R"({"id":"e","system_id":"s","reference":"?!","hypothesis":"a"})", "x"),
                        ValidationError);
    }
    SECTION("empty id, missing field, bad severity") {
        CHECK_THROWS_AS(parse_corpus(R"({"id":"","system_id":"s","reference":"a","hypothesis":"a"})", "x"),
                        ValidationError);
        CHECK_THROWS_AS(parse_corpus(R"({"id":"q","reference":"a","hypothesis":"a"})", "x"), ValidationError);
        CHECK_THROWS_AS(
            parse_corpus(R"({"id":"q","system_id":"s","severity":"XL","reference":"a","hypothesis":"a"})", "x"),
            ValidationError);
        CHECK_THROWS_AS(parse_corpus("[1,2]", "x"), ParseError);
    }
}

TEST_CASE("corpus round-trip through JSONL") {
    testsupport::TempDir dir("corpus");
    const auto recs = parse_corpus(kThreeLines, "t.jsonl");
    save_corpus((dir / "out.jsonl").string(), recs);
    const auto again = load_corpus((dir / "out.jsonl").string());
    CHECK(again == recs);

    const auto demo = load_corpus((testsupport::source_dir() / "data/demo/corpus.jsonl").string());
    save_corpus((dir / "demo.jsonl").string(), demo);
    CHECK(load_corpus((dir / "demo.jsonl").string()) == demo);
}

TEST_CASE("load_corpus: missing file") { CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), Error); }

TEST_CASE("mean_rating") {
    TranscriptRecord r{"u", "s", Severity::Unknown, "a", "a", std::nullopt, std::vector<int>{3, 3, 3, 3, 3, 3}};
    CHECK(mean_rating(r) == 3.0);
    r.ratings = std::vector<int>{1, 5};
    CHECK(mean_rating(r) == 3.0);
    r.ratings = std::vector<int>{4, 5, 4, 5, 4, 5};
    CHECK(mean_rating(r) == 4.5);
    r.ratings.reset();
    CHECK_THROWS_AS(mean_rating(r), ValidationError);
    r.ratings = std::vector<int>{};
    CHECK_THROWS(mean_rating(r));
}

TEST_CASE("mean_rating stays within the rating range") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> val(1, 5), cnt(1, 8);
    for (int t = 0; t < 500; ++t) {
        std::vector<int> ratings(cnt(rng));
        for (auto& v : ratings) v = val(rng);
        TranscriptRecord r{"u", "s", Severity::Unknown, "a", "a", std::nullopt, ratings};
        const double m = mean_rating(r);
        REQUIRE(m >= *std::min_element(ratings.begin(), ratings.end()));
        REQUIRE(m <= *std::max_element(ratings.begin(), ratings.end()));
    }
}

TEST_CASE("annotator_agreement: trivial columns") {
    std::vector<std::vector<double>> same{{1, 1}, {2, 2}, {4, 4}, {5, 5}};
    auto rep = annotator_agreement(same);
    REQUIRE(rep.pairwise_pearson.size() == 1);
    CHECK_THAT(rep.pairwise_pearson[0], WithinAbs(1.0, 1e-12));

    std::vector<std::vector<double>> reversed{{1, 5}, {2, 4}, {4, 2}, {5, 1}};
    rep = annotator_agreement(reversed);
    CHECK_THAT(rep.pairwise_pearson[0], WithinAbs(-1.0, 1e-12));
}

TEST_CASE("annotator_agreement: oracle fixture") {
    const auto& fx = testsupport::oracle()["agreement"];
    std::vector<std::vector<double>> m;
    for (const auto& row : fx["ratings"]) m.push_back(row.get<std::vector<double>>());
    const auto rep = annotator_agreement(m);
    const auto expected = testsupport::doubles(fx["pairwise"]);
    REQUIRE(rep.pairwise_pearson.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(rep.pairwise_pearson[i], WithinRel(expected[i], 1e-9));
    CHECK_THAT(rep.min_r, WithinRel(*std::min_element(expected.begin(), expected.end()), 1e-9));
    CHECK_THAT(rep.max_r, WithinRel(*std::max_element(expected.begin(), expected.end()), 1e-9));
    CHECK_THAT(rep.rating_std, WithinRel(fx["rating_std"].get<double>(), 1e-12));
}

TEST_CASE("annotator_agreement: incomplete matrix") {
    CHECK_THROWS_AS(annotator_agreement({{1, 2}, {3}}), DomainError);
    CHECK_THROWS_AS(annotator_agreement({{1}, {3}}), DomainError);
    CHECK_THROWS_AS(annotator_agreement({}), DomainError);
}

TEST_CASE("ratings_matrix requires equal counts") {
    std::vector<TranscriptRecord> recs{
        {"a", "s", Severity::Unknown, "x", "x", std::nullopt, std::vector<int>{1, 2}},
        {"b", "s", Severity::Unknown, "x", "x", std::nullopt, std::vector<int>{3, 4}},
    };
    const auto m = ratings_matrix(recs);
    CHECK(m == std::vector<std::vector<double>>{{1, 2}, {3, 4}});
    recs[1].ratings = std::vector<int>{3};
    CHECK_THROWS(ratings_matrix(recs));
}
