#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "infocoh/cohomology.hpp"
#include "support.hpp"

using namespace infocoh;
using testing::load_data;

namespace {

std::shared_ptr<const GridContext> context(const ParsedSpec& p, int n) {
    return std::make_shared<const GridContext>(p.structure, p.q, n);
}

template <class V>
bool solves(const LinearSystem& sys, const Cochain<V>& f, double tol = 1e-12) {
    auto r = system_residual(sys, cochain_vector(sys, f));
    return sys.exact ? r.exact_zero : r.max_abs <= tol;
}

ParsedSpec coproduct_of_two(const std::string& name) {
    auto a = load_data(name).structure;
    auto co = coproduct_structure(a, renamed(a, "'"));
    return {"abstract", co.structure, ProbabilityFunctor::full(co.structure)};
}

ParsedSpec product_of_two(const std::string& name) {
    auto a = load_data(name).structure;
    auto pr = product_structure(a, renamed(a, "'"));
    return {"abstract", pr.structure, ProbabilityFunctor::full(pr.structure)};
}

}  // namespace

TEST_CASE("exact and float linear algebra") {
    // rows (1,2,3), (2,4,6), (0,1,1): rank 2
    std::vector<ExactRow> rows = {{{0, Rational(1)}, {1, Rational(2)}, {2, Rational(3)}},
                                  {{0, Rational(2)}, {1, Rational(4)}, {2, Rational(6)}},
                                  {{1, Rational(1, 3)}, {2, Rational(1, 3)}}};
    CHECK(bareiss_rank(rows, 3).rank == 2);
    auto ns = exact_nullspace(rows, 3);
    CHECK(ns.rank == 2);
    REQUIRE(ns.basis.size() == 1);
    const auto& v = ns.basis[0];
    CHECK(v[0] + 2 * v[1] + 3 * v[2] == 0);
    CHECK(v[1] + v[2] == 0);
    CHECK(exact_rank_of_vectors({v, v}) == 1);

    std::vector<FloatRow> frows = {{{0, 1.0}, {1, 2.0}, {2, 3.0}}, {{0, 2.0}, {1, 4.0}, {2, 6.0}}, {{1, 1.0}, {2, 1.0}}};
    auto svd = float_nullspace(frows, 3);
    CHECK(svd.rank == 2);
    CHECK(svd.null_basis.cols() == 1);
    CHECK(bareiss_rank({}, 4).rank == 0);
}

TEST_CASE("sparse exact rank agrees with SVD rank on random sparse matrices") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 3 + rng() % 12, cols = 2 + rng() % 10;
        std::vector<ExactRow> er;
        std::vector<FloatRow> fr;
        for (std::size_t i = 0; i < rows; ++i) {
            ExactRow e;
            FloatRow f;
            for (std::size_t c = 0; c < cols; ++c)
                if (rng() % 3 == 0) {
                    const auto v = static_cast<std::int64_t>(rng() % 7) - 3;
                    e.emplace_back(c, Rational(v, 1 + static_cast<std::int64_t>(rng() % 4)));
                    f.emplace_back(c, e.back().second.to_double());
                }
            // duplicate rows keep the rank below the row count
            if (i > 0 && rng() % 4 == 0) {
                e = er.back();
                f = fr.back();
            }
            er.push_back(e);
            fr.push_back(f);
        }
        const auto rank = bareiss_rank(er, cols).rank;
        CHECK(rank == float_nullspace(fr, cols, 1e-10).rank);
        auto ns = exact_nullspace(er, cols);
        CHECK(ns.basis.size() == cols - rank);
        for (const auto& v : ns.basis)
            for (const auto& row : er) {
                mpq_class acc = 0;
                for (const auto& [c, w] : row) acc += mpq_class(w.num(), w.den()) * v[c];
                CHECK(acc == 0);
            }
        if (!ns.basis.empty()) CHECK(exact_rank_of_vectors(ns.basis) == ns.basis.size());
    }
}

TEST_CASE("two-bit Z1 system matches the exact rank oracle") {
    auto p = load_data("two_binary_full");
    struct Expect {
        int n;
        std::size_t unknowns, rows, rank;
    };
    for (auto e : {Expect{3, 36, 192, 34}, Expect{4, 65, 371, 63}, Expect{5, 125, 743, 122}}) {
        CAPTURE(e.n);
        auto ctx = context(p, e.n);
        auto sys = assemble_z1_system(*ctx, AlphaParam(1.0));
        auto d = z1_h1_dimensions(sys, *ctx);
        CHECK(d.unknowns == e.unknowns);
        CHECK(d.rows == e.rows);
        CHECK(d.rank == e.rank);
        CHECK(d.exact);
        CHECK(d.b1 == 0);
        CHECK(solves(sys, entropy_cochain<ExactReal>(ctx, AlphaParam(1.0))));
    }
    auto ctx = context(p, 4);
    auto sys2 = assemble_z1_system(*ctx, AlphaParam(2.0));
    auto d2 = z1_h1_dimensions(sys2, *ctx);
    CHECK(d2.rank == 63);
    CHECK(d2.b1 == 1);
    CHECK_FALSE(d2.gap_warning);
    CHECK(solves(sys2, entropy_cochain<double>(ctx, AlphaParam(2.0))));
}

TEST_CASE("Z1 assembly: serial and parallel agree") {
    auto p = load_data("three_binary_full");
    auto ctx = context(p, 3);
    for (double a : {1.0, 2.0}) {
        auto s = assemble_z1_system(*ctx, AlphaParam(a), Exec::serial);
        auto q = assemble_z1_system(*ctx, AlphaParam(a), Exec::parallel);
        CHECK(s.exact_rows == q.exact_rows);
        CHECK(s.float_rows == q.float_rows);
        CHECK(s.row_count() == q.row_count());
    }
}

TEST_CASE("small systems") {
    auto chain = load_data("binary_chain");
    auto ctx = context(chain, 4);
    auto sys = assemble_z1_system(*ctx, AlphaParam(1.0));
    auto d = z1_h1_dimensions(sys, *ctx);
    // only f at the two Dirac laws is pinned
    CHECK(d.unknowns == ctx->laws(chain.structure.index_of("X")).size());
    CHECK(d.z1 == d.unknowns - 2);

    auto one = terminal_only_structure();
    GridContext tctx(one, ProbabilityFunctor::full(one), 3);
    auto empty = assemble_z1_system(tctx, AlphaParam(1.0));
    CHECK(empty.row_count() == 0);
    CHECK(empty.unknowns.empty());
}

TEST_CASE("nullspace vectors vanish on Dirac laws") {
    auto p = load_data("two_binary_full");
    auto ctx = context(p, 4);
    auto sys = assemble_z1_system(*ctx, AlphaParam(1.0));
    auto ns = exact_nullspace(sys.exact_rows, sys.unknowns.size());
    REQUIRE_FALSE(ns.basis.empty());
    for (const auto& v : ns.basis)
        for (std::size_t c = 0; c < sys.unknowns.size(); ++c) {
            const auto& u = sys.unknowns[c];
            if (ctx->laws(u.object)[u.law].is_dirac()) CHECK(v[c] == 0);
        }
}

TEST_CASE("coproduct systems are block diagonal across components") {
    auto co = coproduct_of_two("two_binary_full");
    auto ctx = context(co, 3);
    auto sys = assemble_z1_system(*ctx, AlphaParam(1.0));
    auto comp = analyze_minimal(co.structure);
    for (const auto& row : sys.exact_rows) {
        std::set<std::size_t> seen;
        for (const auto& [col, c] : row) seen.insert(comp.component_of(sys.unknowns[col].object));
        CHECK(seen.size() <= 1);
    }
}

TEST_CASE("H0") {
    auto p = load_data("two_binary_full");
    auto ctx = context(p, 3);
    CHECK(h0_compute(*ctx, AlphaParam(1.0)).dimension == 1);
    CHECK(h0_compute(*ctx, AlphaParam(2.0)).dimension == 0);
    CHECK(h0_compute(*ctx, AlphaParam(0.5)).dimension == 0);
    auto chain = load_data("binary_chain");
    auto q = chain.q;
    q.q[chain.structure.index_of("X")] = SupportComplex::from_supports({0b01, 0b10});
    GridContext dctx(chain.structure, q, 4);
    CHECK(h0_compute(dctx, AlphaParam(2.0)).dimension == 1);
}

TEST_CASE("non-degenerate products") {
    auto p = load_data("two_binary_full");
    const auto& s = p.structure;
    const auto x = s.index_of("X"), y = s.index_of("Y");
    auto chain = nondegenerate_product_check(s, p.q, x, y);
    REQUIRE(chain.has_value());
    CHECK(chain->blocks.size() == 1);
    CHECK(chain->blocks[0].cells.size() == 3);
    CHECK_FALSE(nondegenerate_product_check(s, p.q, x, x).has_value());
    CHECK_THROWS(nondegenerate_product_check(s, p.q, x, s.terminal()));

    // the block's three cells fill the grid simplex at N = 3
    auto ctx = context(p, 3);
    std::vector<std::size_t> cells;
    for (auto [a, b] : chain->blocks[0].cells) cells.push_back(static_cast<std::size_t>(a * 2 + b));
    CHECK(block_complete_on_grid(*ctx, s.index_of("XY"), cells));

    auto tb = load_data("two_block_4x4");
    CHECK_FALSE(nondegenerate_product_check(tb.structure, tb.q, tb.structure.index_of("X"), tb.structure.index_of("Y"))
                    .has_value());
    auto full_q = ProbabilityFunctor::full(tb.structure);
    auto c4 = nondegenerate_product_check(tb.structure, full_q, tb.structure.index_of("X"), tb.structure.index_of("Y"));
    REQUIRE(c4.has_value());
    CHECK(c4->blocks.front().row == 0);
    CHECK(c4->blocks.back().row == 2);
    CHECK(c4->blocks.back().col == 2);
    for (const auto& o : c4->overlaps) CHECK(o.size() == 2);
}

TEST_CASE("structural H1") {
    auto two = load_data("two_binary_full");
    auto h = predict_h1(two.structure, two.q, AlphaParam(1.0));
    CHECK(h.kind == H1Prediction::Kind::finite);
    CHECK(h.dimension == 1);
    CHECK(predict_h1(two.structure, two.q, AlphaParam(2.0)).dimension == 0);

    auto co = coproduct_of_two("two_binary_full");
    CHECK(predict_h1(co.structure, co.q, AlphaParam(1.0)).dimension == 2);
    CHECK(predict_h1(co.structure, co.q, AlphaParam(2.0)).dimension == 1);

    auto pr = product_of_two("two_binary_full");
    auto hp = predict_h1(pr.structure, pr.q, AlphaParam(1.0));
    CHECK(hp.kind == H1Prediction::Kind::finite);
    CHECK(hp.dimension == 1);
    CHECK(predict_h1(pr.structure, pr.q, AlphaParam(2.0)).dimension == 0);

    auto ch = load_data("chain_irreducible");
    auto hc = predict_h1(ch.structure, ch.q, AlphaParam(1.0));
    CHECK(hc.kind == H1Prediction::Kind::infinite);
    CHECK(ch.structure.id(hc.irreducible) == "M");
    CHECK_FALSE(hc.witness.empty());

    auto die = load_data("die");
    CHECK(predict_h1(die.structure, die.q, AlphaParam(1.0)).kind == H1Prediction::Kind::infinite);
    auto tb = load_data("two_block_4x4");
    CHECK(predict_h1(tb.structure, tb.q, AlphaParam(1.0)).kind == H1Prediction::Kind::unknown);
}

TEST_CASE("lambda fits") {
    auto p = load_data("two_binary_full");
    auto ctx = context(p, 4);
    auto s = entropy_cochain<double>(ctx, AlphaParam(2.0));
    auto scaled = s;
    for (std::size_t k = 0; k < scaled.slot_count(); ++k)
        for (auto& v : scaled.table(k)) v *= 2.5;
    auto fit = fit_entropy_multiples(scaled);
    REQUIRE(fit.lambda.size() == 1);
    CHECK(fit.lambda[0] == doctest::Approx(2.5));
    CHECK(fit.residual <= 1e-10);

    auto co = coproduct_of_two("two_binary_full");
    auto cctx = context(co, 3);
    auto comps = analyze_minimal(co.structure).components;
    REQUIRE(comps.size() == 2);
    auto f = component_entropy<ExactReal>(cctx, AlphaParam(1.0), comps[0]);
    auto cf = fit_entropy_multiples(f);
    REQUIRE(cf.lambda.size() == 2);
    CHECK(cf.lambda[0] == doctest::Approx(1.0));
    CHECK(cf.lambda[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cf.residual <= 1e-10);
}

TEST_CASE("nullspace explanation and concordance on the two-bit structure") {
    auto p = load_data("two_binary_full");
    for (int n : {3, 4, 5}) {
        auto ctx = context(p, n);
        auto sys = assemble_z1_system(*ctx, AlphaParam(1.0));
        auto ex = explain_nullspace(sys, *ctx);
        CHECK(ex.entropy_in_nullspace);
        CHECK(ex.nullity == sys.unknowns.size() - bareiss_rank(sys.exact_rows, sys.unknowns.size()).rank);
        CHECK(ex.explained <= ex.nullity);
    }
    auto c = grid_concordance(p.structure, p.q, {3, 4, 5});
    CHECK(c.grid_dims == std::vector<std::size_t>{2, 2, 3});
    CHECK(c.non_increasing);
    CHECK(c.projections_solve_base);
}

TEST_CASE("two-block Q: two independent entropy directions") {
    auto p = load_data("two_block_4x4");
    const auto& s = p.structure;
    const std::size_t xy = s.index_of("XY");
    struct Expect {
        int n;
        std::size_t unknowns, rows, rank;
    };
    for (auto e : {Expect{3, 72, 384, 68}, Expect{5, 250, 1486, 244}}) {
        CAPTURE(e.n);
        auto ctx = context(p, e.n);
        auto sys = assemble_z1_system(*ctx, AlphaParam(1.0));
        auto d = z1_h1_dimensions(sys, *ctx);
        CHECK(d.unknowns == e.unknowns);
        CHECK(d.rows == e.rows);
        CHECK(d.rank == e.rank);
        auto b1 = restricted_entropy<ExactReal>(ctx, AlphaParam(1.0), xy, {0, 1, 4, 5});
        auto b2 = restricted_entropy<ExactReal>(ctx, AlphaParam(1.0), xy, {10, 11, 14, 15});
        CHECK(solves(sys, b1));
        CHECK(solves(sys, b2));
    }
    auto ctx = context(p, 4);
    auto sys = assemble_z1_system(*ctx, AlphaParam(2.0));
    CHECK(solves(sys, restricted_entropy<double>(ctx, AlphaParam(2.0), xy, {0, 1, 4, 5})));
    CHECK(solves(sys, restricted_entropy<double>(ctx, AlphaParam(2.0), xy, {10, 11, 14, 15})));
}

TEST_CASE("diagonal-degenerate Q: arbitrary functions enter Z1") {
    auto p = load_data("diagonal_degenerate");
    struct Expect {
        int n;
        std::size_t unknowns, rows, rank;
    };
    for (auto e : {Expect{3, 51, 237, 46}, Expect{5, 158, 842, 146}}) {
        CAPTURE(e.n);
        auto ctx = context(p, e.n);
        auto sys = assemble_z1_system(*ctx, AlphaParam(1.0));
        auto d = z1_h1_dimensions(sys, *ctx);
        CHECK(d.unknowns == e.unknowns);
        CHECK(d.rows == e.rows);
        CHECK(d.rank == e.rank);
        auto g = [](const Rational& t) { return ExactReal(t * (Rational(1) - t) * (t + Rational(3))); };
        auto f = testing::diagonal_injection<ExactReal>(ctx, AlphaParam(1.0), g);
        CHECK(solves(sys, f));
        CHECK_FALSE(cochain_max(f).exact_zero);
    }
}

TEST_CASE("irreducible chain: explicit cocycle family") {
    auto p = load_data("chain_irreducible");
    auto ctx = context(p, 5);
    std::function<Rational(const Rational&, const Rational&)> g = [](const Rational& x, const Rational& y) {
        return x * y * (x + Rational(2));
    };
    auto f = testing::chain_family<ExactReal>(ctx, AlphaParam(1.0), g);
    CHECK(cocycle_residual(f).exact_zero);
    auto fit = fit_entropy_multiples(f);
    CHECK(fit.residual > 1e-6);

    std::function<double(const Rational&, const Rational&)> gd = [](const Rational& x, const Rational& y) {
        return x.to_double() * y.to_double();
    };
    auto f2 = testing::chain_family<double>(ctx, AlphaParam(2.0), gd);
    CHECK(cocycle_residual(f2).max_abs <= 1e-14);

    // grid Z1 keeps growing with N
    std::size_t prev = 0;
    for (int n : {2, 3, 4, 5}) {
        auto c = context(p, n);
        auto d = z1_h1_dimensions(assemble_z1_system(*c, AlphaParam(1.0)), *c);
        CHECK(d.z1 > prev);
        prev = d.z1;
    }
}
