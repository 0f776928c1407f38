#include <doctest.h>

#include "factcheck/errors.hpp"
#include "factcheck/prediction.hpp"
#include "support.hpp"

using namespace factcheck;

TEST_SUITE("prediction") {
    TEST_CASE("json round trip") {
        Prediction p;
        p.claim_id = 4;
        p.claim = "c";
        p.evidence = {{"q", "a", "https://u", AnswerType::Boolean}};
        p.ratings = {1, 2, 3, 4};
        p.verdict = VeracityLabel::ConflictingEvidenceCherrypicking;
        p.probs = std::array<double, 4>{0.1, 0.2, 0.3, 0.4};
        const auto j = to_json(p);
        CHECK(j["ratings"]["Refuted"] == 2);
        CHECK(j["verdict"] == "Conflicting Evidence/Cherrypicking");
        CHECK(j["evidence"][0]["source_url"] == "https://u");
        CHECK(prediction_from_json(j) == p);
        p.probs.reset();
        CHECK(prediction_from_json(to_json(p)) == p);
    }

    TEST_CASE("invalid predictions") {
        CHECK_THROWS_AS(prediction_from_json(nlohmann::json::parse(R"({"claim":"c"})")), ValidationError);
        CHECK_THROWS_AS(prediction_from_json(nlohmann::json::parse(
                            R"({"claim_id":1,"claim":"c","evidence":[],"verdict":"Maybe"})")),
                        ValidationError);
    }

    TEST_CASE("files are written atomically and read back") {
        testing_support::TempDir dir("pred");
        std::vector<Prediction> preds(2);
        preds[1].claim_id = 1;
        write_predictions(dir / "sub" / "p.json", preds);
        CHECK(load_predictions(dir / "sub" / "p.json") == preds);
        CHECK_FALSE(std::filesystem::exists(dir / "sub" / "p.json.tmp"));
        testing_support::write_file(dir / "empty.json", "[]");
        CHECK(load_predictions(dir / "empty.json").empty());
        testing_support::write_file(dir / "bad.json", "{");
        CHECK_THROWS_AS(load_predictions(dir / "bad.json"), ParseError);
    }
}
