#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "infocoh/exact_real.hpp"
#include "infocoh/partition.hpp"
#include "infocoh/rational.hpp"
#include "infocoh/structure.hpp"
#include "support.hpp"

using namespace infocoh;
using testing::load_data;

namespace {

std::set<std::vector<std::string>> labelled(const InfoStructure& s, const std::vector<Section>& secs) {
    std::set<std::vector<std::string>> out;
    for (const auto& sec : secs) {
        std::vector<std::string> row;
        for (std::size_t i = 0; i < sec.size(); ++i) row.push_back(s.variable(i).values[sec[i]]);
        out.insert(row);
    }
    return out;
}

}  // namespace

TEST_CASE("rational arithmetic stays reduced") {
    Rational a(6, -8);
    CHECK(a.num() == -3);
    CHECK(a.den() == 4);
    CHECK(a + Rational(3, 4) == Rational(0));
    CHECK(Rational(1, 3) * Rational(3, 5) == Rational(1, 5));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational::parse(" 7/21 ") == Rational(1, 3));
    CHECK(Rational::parse("-4") == Rational(-4));
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS(Rational::parse("1/x"));
}

TEST_CASE("rational overflow is reported, not wrapped") {
    const Rational big(std::int64_t{1} << 62);
    CHECK_THROWS_AS(big * Rational(4), OverflowError);
    CHECK_THROWS_AS(big + big, OverflowError);
}

TEST_CASE("exact reals combine logarithms of primes") {
    auto l6 = ExactReal::log(Rational(6));
    CHECK(l6 == ExactReal::log(Rational(2)) + ExactReal::log(Rational(3)));
    CHECK((ExactReal::log(Rational(1, 4)) + ExactReal::log(Rational(4))).is_zero());
    CHECK(l6.log_coefficient(2) == Rational(1));
    CHECK(l6.log_coefficient(5) == Rational(0));
    CHECK(l6.to_double() == doctest::Approx(std::log(6.0)).epsilon(1e-15));
    auto v = ExactReal(Rational(3, 4)) + ExactReal::log(Rational(2)) * Rational(1, 2);
    CHECK(ExactReal::parse(v.str()) == v);
    CHECK(factorize(360) == std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {5, 1}});
}

TEST_CASE("partitions: canonical form, refinement, product") {
    auto p = canonical_partition({{2, 3}, {0, 1}}, 4);
    CHECK(p.assignment() == std::vector<int>{0, 0, 1, 1});
    auto q = canonical_partition({{0, 2}, {1, 3}}, 4);
    auto pq = partition_product(p, q);
    CHECK(pq == Partition::points(4));
    CHECK(partition_refines(pq, p));
    CHECK(partition_refines(p, Partition::trivial(4)));
    CHECK_FALSE(partition_refines(p, q));
    CHECK(partition_product(p, Partition::trivial(4)) == p);
    CHECK_THROWS_AS(canonical_partition({{0, 1}, {1, 2}}, 3), StructuralInputError);
    CHECK_THROWS_AS(canonical_partition({{0}, {1}}, 3), StructuralInputError);
}

TEST_CASE("die structure") {
    auto p = load_data("die");
    const auto& s = p.structure;
    CHECK(s.size() == 2);
    auto r = validate_structure(s);
    CHECK(r.all_pass());
    CHECK(r.height == 1);
    CHECK(limit_sections(s).size() == 6);
    auto model = concrete_model(s);
    CHECK(model.omega.size() == 6);
    CHECK(check_model(s, model).ok());
    auto pm = product_model(s, s, model, model);
    CHECK(pm.omega.size() == 36);
    auto prod = product_structure(s, s);
    CHECK(check_model(prod.structure, pm).ok());
}

TEST_CASE("inverse limit example lists the five sections") {
    auto p = load_data("inverse_limit");
    const auto& s = p.structure;
    CHECK(s.size() == 6);
    CHECK(validate_structure(s).all_pass());
    auto secs = limit_sections(s);
    REQUIRE(secs.size() == 5);
    const std::string all = "{1,2,3,4}";
    std::set<std::vector<std::string>> expected = {
        {all, "{1}", "{1,3,4}", "{3}", "{1}", "{3}"},
        {all, "{1}", "{1,3,4}", "{1,2,4}", "{1}", "{1,4}"},
        {all, "{2,3,4}", "{2}", "{1,2,4}", "{2}", "{2}"},
        {all, "{2,3,4}", "{1,3,4}", "{3}", "{3,4}", "{3}"},
        {all, "{2,3,4}", "{1,3,4}", "{1,2,4}", "{3,4}", "{1,4}"},
    };
    CHECK(labelled(s, secs) == expected);
    CHECK(concrete_model(s).omega.size() == 4);

    auto q = load_data("inverse_limit_x1x3");
    CHECK(validate_structure(q.structure).all_pass());
    CHECK(limit_sections(q.structure).size() == 4);
}

TEST_CASE("limit enumeration: serial and parallel agree") {
    for (const auto& name : {"inverse_limit", "three_binary_full", "two_block_4x4"}) {
        auto p = load_data(name);
        CHECK(limit_sections(p.structure, Exec::serial) == limit_sections(p.structure, Exec::parallel));
    }
    for (const auto& s : testing::random_structures(6, 11))
        CHECK(limit_sections(s, Exec::serial) == limit_sections(s, Exec::parallel));
}

TEST_CASE("simplicial builder") {
    std::vector<std::pair<std::string, std::size_t>> v = {{"A", 2}, {"B", 2}, {"C", 2}};
    std::vector<std::vector<std::string>> full = {{"A"}, {"B"}, {"C"}, {"A", "B"}, {"A", "C"}, {"B", "C"}, {"A", "B", "C"}};
    auto s = build_simplicial_structure(v, full);
    CHECK(s.size() == 8);
    CHECK(validate_structure(s).all_pass());
    auto open = full;
    open.pop_back();
    CHECK(build_simplicial_structure(v, open).size() == 7);
    CHECK(build_simplicial_structure({{"A", 2}}, {{"A"}}).size() == 2);
    CHECK_THROWS_AS(build_simplicial_structure(v, {{"A", "B"}}), StructuralInputError);
    CHECK_THROWS_AS(build_simplicial_structure({{"A", 1}}, {{"A"}}), StructuralInputError);
}

TEST_CASE("concrete builder rejects coinciding partitions") {
    std::vector<std::string> omega = {"a", "b", "c"};
    auto x = canonical_partition({{0}, {1, 2}}, 3);
    CHECK_THROWS_AS(build_concrete_structure(omega, {{"X", x}, {"Y", x}}, false), StructuralInputError);
    CHECK_THROWS_AS(build_concrete_structure({}, {}, false), StructuralInputError);
}

TEST_CASE("axiom failures carry witnesses") {
    auto bad = load_data("bad_surjection");
    auto r = validate_structure(bad.structure);
    CHECK_FALSE(r.all_pass());
    CHECK_FALSE(r.axiom("strict_surjection").pass);
    CHECK(r.axiom("strict_surjection").witness.find("X->Y") != std::string::npos);

    auto rem = load_data("remark_simplicial");
    auto rr = validate_structure(rem.structure);
    CHECK_FALSE(rr.axiom("conditional_meets").pass);
}

TEST_CASE("two minimal variables with the same fibers") {
    auto p = load_data("two_minimal_same_fibers");
    auto r = validate_structure(p.structure);
    // X1 and X2 have two incomparable common refiners
    CHECK_FALSE(r.axiom("conditional_meets").pass);
    CHECK(r.axiom("strict_surjection").pass);
    CHECK(r.axiom("fiber_condition").pass);
    auto im = induced_model(p.structure);
    REQUIRE(im.collision.has_value());
    std::set<std::string> pair = {p.structure.id(im.collision->first), p.structure.id(im.collision->second)};
    CHECK(pair == std::set<std::string>{"M", "N"});
}

TEST_CASE("meets and minimal objects") {
    auto p = load_data("two_binary_full");
    const auto& s = p.structure;
    const auto x = s.index_of("X"), y = s.index_of("Y"), xy = s.index_of("XY");
    CHECK(s.meet(x, y) == xy);
    CHECK(s.meet(x, s.terminal()) == x);
    auto m = analyze_minimal(s);
    REQUIRE(m.minimal.size() == 1);
    CHECK(m.minimal[0].object == xy);
    CHECK_FALSE(m.minimal[0].factorizations.empty());
    CHECK(m.components.size() == 1);

    auto chain = load_data("chain_irreducible");
    auto mc = analyze_minimal(chain.structure);
    REQUIRE(mc.minimal.size() == 1);
    CHECK(mc.minimal[0].factorizations.empty());
}

TEST_CASE("products and coproducts") {
    auto a = load_data("two_binary_full").structure;
    auto d = load_data("die").structure;
    auto prod = product_structure(a, d);
    CHECK(prod.structure.size() == a.size() * d.size());
    CHECK(validate_structure(prod.structure).all_pass());
    CHECK(validate_morphism(prod.proj1, prod.structure, a).all_pass());
    CHECK(validate_morphism(prod.proj2, prod.structure, d).all_pass());
    CHECK(limit_sections(prod.structure).size() == limit_sections(a).size() * limit_sections(d).size());

    auto b = renamed(a, "'");
    auto co = coproduct_structure(a, b);
    CHECK(co.structure.size() == 2 * a.size() - 1);
    CHECK(validate_structure(co.structure).all_pass());
    CHECK(validate_morphism(co.inj1, a, co.structure).all_pass());
    CHECK(limit_sections(co.structure).size() == limit_sections(a).size() * limit_sections(b).size());
    CHECK(analyze_minimal(co.structure).components.size() == 2);
    CHECK_THROWS_AS(coproduct_structure(a, a), StructuralInputError);

    auto ab = product_structure(a, b);
    auto emb = coproduct_to_product(co, ab, a, b);
    auto rep = validate_morphism(emb, co.structure, ab.structure);
    CHECK(rep.all_pass());
    CHECK(rep.embedding);
}

TEST_CASE("nerve height of a product adds") {
    auto chain = build_simplicial_structure({{"A", 2}}, {{"A"}});
    CHECK(chain.height() == 1);
    CHECK(product_structure(chain, chain).structure.height() == 2);
    auto three = load_data("three_binary_full").structure;
    CHECK(three.height() == 3);
    CHECK(product_structure(three, chain).structure.height() == 4);
}

TEST_CASE("morphism checks catch a broken value map") {
    auto a = load_data("two_binary_full").structure;
    auto id = identity_morphism(a);
    CHECK(validate_morphism(id, a, a).all_pass());
    auto broken = id;
    const auto x = a.index_of("X");
    broken.value_maps[x] = {0, 0};
    CHECK_FALSE(validate_morphism(broken, a, a).all_pass());
}

TEST_CASE("random structures are valid and small") {
    auto ss = testing::random_structures(5, 3);
    for (const auto& s : ss) {
        CHECK(s.size() <= 8);
        CHECK(validate_structure(s).all_pass());
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.value_count(i) <= 4);
    }
}
