#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "infocoh/spec_io.hpp"
#include "support.hpp"

using namespace infocoh;
using testing::load_data;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_spec_text(text, "t.json");
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("shipped files load") {
    CHECK(load_data("inverse_limit").structure.size() == 6);
    CHECK(load_data("two_binary_full").structure.size() == 4);
    CHECK(load_data("three_binary_full").structure.size() == 8);
    CHECK(load_data("die").structure.size() == 2);
    auto tb = load_data("two_block_4x4");
    CHECK(tb.kind == "abstract");
    CHECK_FALSE(tb.q.at(tb.structure.index_of("XY")).full);
    CHECK(tb.q.at(tb.structure.terminal()).full);
}

TEST_CASE("malformed files name the position") {
    CHECK(error_of("{\"kind\": ").find("byte") != std::string::npos);
    CHECK(error_of("{\"kind\": \"weird\"}").find("/kind") != std::string::npos);
    auto e = error_of(R"({"kind":"concrete","omega":["a","b"],"partitions":[{"id":"X","blocks":[["a"],["c"]]}]})");
    CHECK(e.find("/partitions/0/blocks/1/0") != std::string::npos);
    auto f = error_of(R"({"kind":"simplicial","vertices":[{"id":"A","cardinality":0}],"faces":[]})");
    CHECK(f.find("/vertices/0/cardinality") != std::string::npos);
    auto g = error_of(R"({"kind":"simplicial","vertices":[{"id":"A","cardinality":2}],"faces":[["A"]],
                         "Q":{"A":{"maximal_supports":[["9"]]}}})");
    CHECK(g.find("/Q/A/maximal_supports/0/0") != std::string::npos);
    auto h = error_of(R"({"kind":"abstract","variables":[{"id":"1","values":["*"]},{"id":"X","values":["a","b"]}],
                         "arrows":[{"from":"X","to":"1","map":{"a":"*"}}],"terminal":"1"})");
    CHECK(h.find("unmapped") != std::string::npos);
    CHECK_THROWS_AS(load_spec("/nonexistent/file.json"), InputError);
}

TEST_CASE("structures round-trip through the abstract form") {
    for (const auto& name : {"inverse_limit", "three_binary_full", "two_block_4x4"}) {
        auto p = load_data(name);
        auto doc = structure_to_json(p.structure, &p.q);
        auto back = parse_spec(doc, "roundtrip");
        REQUIRE(back.structure.size() == p.structure.size());
        for (std::size_t i = 0; i < p.structure.size(); ++i) {
            CHECK(back.structure.id(i) == p.structure.id(i));
            CHECK(back.structure.variable(i).values == p.structure.variable(i).values);
            for (std::size_t j = 0; j < p.structure.size(); ++j) CHECK(back.structure.arrow(i, j) == p.structure.arrow(i, j));
            CHECK(back.q.at(i).full == p.q.at(i).full);
            CHECK(back.q.at(i).maximal == p.q.at(i).maximal);
        }
        CHECK(structure_to_json(back.structure, &back.q).dump() == doc.dump());
    }
}

TEST_CASE("cochains round-trip through JSON") {
    auto p = load_data("two_binary_full");
    auto ctx = std::make_shared<const GridContext>(p.structure, p.q, 3);
    auto e = entropy_cochain<ExactReal>(ctx, AlphaParam(1.0));
    auto doc = cochain_to_json(e);
    auto back = cochain_from_json<ExactReal>(doc, ctx, AlphaParam(1.0));
    for (std::size_t s = 0; s < e.slot_count(); ++s) CHECK(back.table(s) == e.table(s));

    auto f = random_cochain<double>(ctx, AlphaParam(2.0), 2, 4);
    auto fb = cochain_from_json<double>(cochain_to_json(f), ctx, AlphaParam(2.0));
    for (std::size_t s = 0; s < f.slot_count(); ++s) CHECK(fb.table(s) == f.table(s));

    Json bad = {{"degree", 1}, {"tables", {{"[Q]", Json::object()}}}};
    CHECK_THROWS_AS(cochain_from_json<double>(bad, ctx, AlphaParam(2.0)), InputError);
}

TEST_CASE("shortest round-trip decimals") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
