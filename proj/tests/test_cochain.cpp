#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "infocoh/bar.hpp"
#include "infocoh/cochain.hpp"
#include "support.hpp"

using namespace infocoh;
using testing::load_data;

namespace {

std::shared_ptr<const GridContext> context(const std::string& name, int n) {
    auto p = load_data(name);
    return std::make_shared<const GridContext>(p.structure, p.q, n);
}

RationalLaw law(std::vector<Rational> w) { return make_law(0, std::move(w)); }

template <class V>
bool same(const Cochain<V>& a, const Cochain<V>& b) {
    if (a.slot_count() != b.slot_count()) return false;
    for (std::size_t s = 0; s < a.slot_count(); ++s)
        if (a.table(s) != b.table(s)) return false;
    return true;
}

}  // namespace

TEST_CASE("entropy values") {
    auto half = law({Rational(1, 2), Rational(1, 2)});
    CHECK(shannon_exact(half) == ExactReal::log(Rational(2)));
    CHECK(entropy(1.0, half) == doctest::Approx(std::log(2.0)));
    CHECK(entropy(2.0, half) == doctest::Approx(0.5));
    CHECK(entropy(0.5, half) == doctest::Approx((std::sqrt(2.0) - 1) / 0.5));
    CHECK(shannon_exact(law({Rational(1), Rational(0)})).is_zero());
    CHECK(entropy(2.0, law({Rational(0), Rational(1)})) == 0.0);
}

TEST_CASE("grouping identity for Shannon entropy holds exactly") {
    auto lhs = shannon_exact(law({Rational(1, 2), Rational(1, 3), Rational(1, 6)}));
    auto rhs = shannon_exact(law({Rational(1, 2), Rational(1, 2)})) +
               shannon_exact(law({Rational(2, 3), Rational(1, 3)})) * Rational(1, 2);
    CHECK((lhs - rhs).is_zero());
    const double d = entropy(1, law({Rational(1, 2), Rational(1, 3), Rational(1, 6)})) -
                     entropy(1, law({Rational(1, 2), Rational(1, 2)})) -
                     0.5 * entropy(1, law({Rational(2, 3), Rational(1, 3)}));
    CHECK(std::fabs(d) <= 1e-14);
}

TEST_CASE("alpha parameter") {
    CHECK(AlphaParam(1.0).exact);
    CHECK_FALSE(AlphaParam(2.0).exact);
    CHECK_FALSE(AlphaParam::floating(1.0).exact);
    CHECK_THROWS(AlphaParam(0.0));
    CHECK_THROWS(AlphaParam(-1.0));
}

TEST_CASE("cochain slots and names") {
    auto ctx = context("two_binary_full", 2);
    FloatCochain f(ctx, AlphaParam(2.0), 2);
    const auto& s = ctx->structure();
    CHECK(f.slot_count() == s.size() * s.size());
    const std::size_t slot = f.slot({s.index_of("X"), s.index_of("Y")});
    CHECK(f.tuple_name(slot) == "[X|Y]");
    CHECK(f.product(slot) == s.index_of("XY"));
    CHECK_THROWS_AS(f.slot({0}), CochainError);
}

TEST_CASE("monoid action weights conditioned values by P(y)^alpha") {
    auto ctx = context("two_binary_full", 4);
    const auto& s = ctx->structure();
    const auto xy = s.index_of("XY"), y = s.index_of("Y");
    std::vector<double> f(ctx->laws(xy).size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = entropy(2.0, ctx->laws(xy)[i]);
    auto act = monoid_action(*ctx, AlphaParam(2.0), y, f, xy);
    auto p = make_law(xy, {Rational(1, 4), Rational(1, 4), Rational(1, 2), Rational(0)});
    const std::size_t i = ctx->index_of(p);
    // Y=0 has mass 3/4 with conditional (1/3, 2/3); Y=1 has mass 1/4 and is certain
    const double expect = 0.5625 * entropy(2.0, law({Rational(1, 3), Rational(2, 3)}));
    CHECK(act[i] == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("constants are cocycles at alpha = 1 only") {
    auto ctx = context("two_binary_full", 3);
    auto c1 = constant_cochain<ExactReal>(ctx, AlphaParam(1.0), ExactReal(Rational(5)));
    CHECK(cochain_max(coboundary(c1)).exact_zero);
    auto c2 = constant_cochain<double>(ctx, AlphaParam(2.0), 1.0);
    CHECK(cochain_max(coboundary(c2)).max_abs > 0.1);
}

TEST_CASE("entropy cochain is a cocycle") {
    auto ctx = context("three_binary_full", 4);
    CHECK(cocycle_residual(entropy_cochain<ExactReal>(ctx, AlphaParam(1.0))).exact_zero);
    for (double a : {0.5, 2.0, 3.0}) CHECK(cocycle_residual(entropy_cochain<double>(ctx, AlphaParam(a))).max_abs <= 1e-12);
}

TEST_CASE("tsallis entropy is the coboundary of a constant") {
    auto ctx = context("two_binary_full", 4);
    const double a = 2.0;
    auto k = constant_cochain<double>(ctx, AlphaParam(a), 1.0 / (1.0 - a));
    auto s = entropy_cochain<double>(ctx, AlphaParam(a));
    CHECK(cochain_max(cochain_difference(coboundary(k), s)).max_abs <= 1e-15);
}

TEST_CASE("delta squared vanishes") {
    auto ctx = context("two_binary_full", 3);
    for (int deg = 0; deg <= 2; ++deg) {
        auto f = random_cochain<ExactReal>(ctx, AlphaParam(1.0), deg, 7 + deg);
        CHECK(cochain_max(coboundary(coboundary(f, Exec::serial, 4), Exec::serial, 4)).exact_zero);
        auto g = random_cochain<double>(ctx, AlphaParam(0.5), deg, 9 + deg);
        CHECK(cochain_max(coboundary(coboundary(g, Exec::serial, 4), Exec::serial, 4)).max_abs <= 1e-12);
    }
    CHECK_THROWS_AS(coboundary(random_cochain<double>(ctx, AlphaParam(2.0), 3, 1)), CochainError);
}

TEST_CASE("coboundary: serial and parallel agree bit for bit") {
    auto ctx = context("three_binary_full", 3);
    for (int deg = 0; deg <= 2; ++deg) {
        auto f = random_cochain<double>(ctx, AlphaParam(2.0), deg, 40 + deg);
        CHECK(same(coboundary(f, Exec::serial), coboundary(f, Exec::parallel)));
        auto e = random_cochain<ExactReal>(ctx, AlphaParam(1.0), deg, 50 + deg);
        CHECK(same(coboundary(e, Exec::serial), coboundary(e, Exec::parallel)));
    }
    auto s = entropy_cochain<double>(ctx, AlphaParam(0.5));
    auto a = cocycle_residual(s, Exec::serial), b = cocycle_residual(s, Exec::parallel);
    CHECK(a.max_abs == b.max_abs);
}

TEST_CASE("pullback of entropy along the coproduct embedding is entropy") {
    auto a = load_data("two_binary_full").structure;
    auto b = renamed(a, "'");
    auto co = coproduct_structure(a, b);
    auto prod = product_structure(a, b);
    auto phi = coproduct_to_product(co, prod, a, b);
    auto cctx = std::make_shared<const GridContext>(co.structure, ProbabilityFunctor::full(co.structure), 4);
    auto pctx = std::make_shared<const GridContext>(prod.structure, ProbabilityFunctor::full(prod.structure), 4);
    for (double al : {1.0, 2.0}) {
        AlphaParam alpha = AlphaParam::floating(al);
        auto pulled = pullback_cochain(phi, cctx, entropy_cochain<double>(pctx, alpha));
        auto direct = entropy_cochain<double>(cctx, alpha);
        CHECK(cochain_max(cochain_difference(pulled, direct)).max_abs <= 1e-15);
    }
    auto pulled = pullback_cochain(phi, cctx, entropy_cochain<ExactReal>(pctx, AlphaParam(1.0)));
    CHECK(cochain_max(cochain_difference(pulled, entropy_cochain<ExactReal>(cctx, AlphaParam(1.0)))).exact_zero);
}

TEST_CASE("bar complex: boundary squared and augmentation") {
    auto s = load_data("three_binary_full").structure;
    const auto x = s.index_of("X"), y = s.index_of("Y"), z = s.index_of("Z"), xyz = s.index_of("XYZ");
    auto g = bar_generator(s, xyz, {x, y, z});
    CHECK(g.degree == 3);
    auto d = bar_boundary(s, g);
    CHECK(d.degree == 2);
    CHECK_FALSE(d.is_zero());
    CHECK(bar_boundary(s, d).is_zero());
    auto one = bar_generator(s, xyz, {x});
    CHECK(augmentation(bar_boundary(s, one)) == Rational(0));
    CHECK(augmentation(bar_generator(s, xyz, {})) == Rational(1));
}

TEST_CASE("semidirect sum: cocycles split, perturbations do not") {
    auto ctx = context("two_binary_full", 4);
    for (double a : {1.0, 2.0}) {
        auto s = entropy_cochain<double>(ctx, AlphaParam::floating(a));
        auto v = semidirect_check(s, 300, 5);
        CHECK(v.splitting);
        CHECK(v.max_defect <= 1e-12);
        auto bent = s;
        const std::size_t slot = bent.slot({ctx->structure().index_of("X")});
        for (auto& val : bent.table(slot)) val *= 1.5;
        auto w = semidirect_check(bent, 300, 5);
        CHECK_FALSE(w.splitting);
        CHECK(w.max_defect > 1e-3);
    }
    auto g = random_cochain<double>(ctx, AlphaParam(2.0), 1, 3);
    CHECK(factor_set_check(g, 200, 8).max_defect <= 1e-12);
}
