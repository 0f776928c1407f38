#include <doctest.h>

#include "factcheck/errors.hpp"
#include "factcheck/text.hpp"
#include "factcheck/types.hpp"

using namespace factcheck;

TEST_SUITE("types") {
    TEST_CASE("canonical labels round-trip") {
        for (auto label : kAllLabels) CHECK(parse_label(to_string(label)) == label);
        CHECK(to_string(VeracityLabel::ConflictingEvidenceCherrypicking) == "Conflicting Evidence/Cherrypicking");
        CHECK_THROWS_AS(parse_label("supported"), ValidationError);
        CHECK_THROWS_AS(parse_label("Maybe"), ValidationError);
    }

    TEST_CASE("lenient label parsing accepts common variants") {
        CHECK(parse_label_lenient(" supported ") == VeracityLabel::Supported);
        CHECK(parse_label_lenient("NEE") == VeracityLabel::NotEnoughEvidence);
        CHECK(parse_label_lenient("Cherrypicking") == VeracityLabel::ConflictingEvidenceCherrypicking);
        CHECK(parse_label_lenient("REFUTED") == VeracityLabel::Refuted);
        CHECK_FALSE(parse_label_lenient("probably").has_value());
    }

    TEST_CASE("answer types") {
        CHECK(parse_answer_type("Boolean") == AnswerType::Boolean);
        CHECK_THROWS_AS(parse_answer_type("Yes/No"), ValidationError);
        CHECK(parse_answer_type_lenient("extractive") == AnswerType::Extractive);
        CHECK_FALSE(parse_answer_type_lenient("numeric").has_value());
    }

    TEST_CASE("chunk key") {
        Chunk c;
        c.doc_url = "https://a.example/x";
        c.index_in_doc = 3;
        CHECK(c.key() == "https://a.example/x#3");
    }

    TEST_CASE("text helpers") {
        CHECK(text::utf8_length("héllo") == 5);
        CHECK(text::trim("  a b \n") == "a b");
        CHECK(text::to_lower_ascii("AbC") == "abc");
        CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
        CHECK(text::hex64(255).size() == 16);
    }
}
