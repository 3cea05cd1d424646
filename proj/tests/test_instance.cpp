#include <doctest.h>

#include "vcnk/instance.hpp"

using namespace vcnk;

namespace {

const char* kMinimal = R"({
  "universe": {"k": 1, "ground_sets": [["a","b","c"]], "labels": ["0","1"]},
  "class": {"name": "consts", "members": [
    {"table": ["0","0","0"]},
    {"table": ["1","1","1"], "declared_rank": 0}
  ]},
  "loss": {"kind": "zero_one"},
  "measures": {"uniform": [["1/3","1/3","1/3"]]}
})";

}  // namespace

TEST_SUITE("instance") {

TEST_CASE("minimal instance parses") {
    InstanceSpec spec = parse_instance_text(kMinimal);
    CHECK(spec.universe.k == 1);
    CHECK(spec.cls.members.size() == 2);
    CHECK(spec.loss.kind() == LossTable::Kind::ZeroOne);
    REQUIRE(spec.measures.size() == 1);
    CHECK(spec.measures[0].first == "uniform");
    // Canonical text is stable across parses.
    CHECK(parse_instance_text(kMinimal).canonical_text == spec.canonical_text);
}

TEST_CASE("bad measures are rejected with positioned errors") {
    std::string text = kMinimal;
    auto pos = text.find("\"1/3\",\"1/3\",\"1/3\"");
    text.replace(pos, 17, "\"1/2\",\"1/3\",\"0\"");
    CHECK_THROWS_AS(parse_instance_text(text), ParseError);
    try {
        parse_instance_text(text);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("measures.uniform") != std::string::npos);
    }
}

TEST_CASE("unknown labels and malformed rationals are rejected") {
    std::string text = kMinimal;
    auto pos = text.find("\"1\",\"1\",\"1\"");
    text.replace(pos, 11, "\"1\",\"2\",\"1\"");
    CHECK_THROWS_AS(parse_instance_text(text), ParseError);

    std::string text2 = kMinimal;
    auto pos2 = text2.find("1/3\",\"1/3\",\"1/3");
    text2.replace(pos2, 3, "x/y");
    CHECK_THROWS_AS(parse_instance_text(text2), ParseError);

    CHECK_THROWS_AS(parse_instance_text("{not json"), ParseError);
}

TEST_CASE("generators") {
    const char* gen = R"({
      "universe": {"k": 1, "ground_sets": [["a","b","c"]], "labels": ["0","1"]},
      "class": {"generator": {"kind": "all_functions"}},
      "loss": {"kind": "zero_one"},
      "measures": {"uniform": [["1/3","1/3","1/3"]]}
    })";
    InstanceSpec spec = parse_instance_text(gen);
    CHECK(spec.cls.members.size() == 8);

    Universe uni(1, {{"a", "b", "c"}}, {"0", "1"});
    ClassContext ctx(uni);
    CHECK(generate_constants(ctx).members.size() == 2);
    CHECK(generate_indicators(ctx).members.size() == 3);

    HypothesisClass r1 = generate_random_class(ctx, 5, 7, 1);
    HypothesisClass r2 = generate_random_class(ctx, 5, 7, 1);
    REQUIRE(r1.members.size() == r2.members.size());
    for (size_t i = 0; i < r1.members.size(); ++i) {
        CHECK(r1.members[i].table == r2.members[i].table);
    }

    // Rank caps hold for generated members.
    Universe uni2(2, {{"a", "b"}, {"e", "f"}}, {"0", "1"});
    ClassContext ctx2(uni2);
    HypothesisClass capped = generate_random_class(ctx2, 6, 9, 1);
    CHECK(class_rank(capped, ctx2) <= 1);
}

TEST_CASE("explicit table losses parse") {
    const char* spec_text = R"({
      "universe": {"k": 1, "ground_sets": [["a","b"]], "labels": ["0","1"]},
      "class": {"generator": {"kind": "constants"}},
      "loss": {"kind": "table", "matrix": [["0","2"],["2","0"]]},
      "measures": {"uniform": [["1/2","1/2"]]}
    })";
    InstanceSpec spec = parse_instance_text(spec_text);
    CHECK(spec.loss.kind() == LossTable::Kind::Table);
    CHECK(spec.loss.min_distinct() == Rat(2));
    CHECK(spec.loss.flags().metric);

    // Wrong matrix shape.
    std::string bad = spec_text;
    auto pos = bad.find("[\"0\",\"2\"],");
    bad.erase(pos, 10);
    CHECK_THROWS_AS(parse_instance_text(bad), ParseError);
}

}  // TEST_SUITE
