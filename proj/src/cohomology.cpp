#include "infocoh/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace infocoh {

std::size_t LinearSystem::column(std::size_t object, std::size_t law) const {
    const std::size_t o = offset.at(object);
    return o == npos ? npos : o + law;
}

namespace {

template <class C>
void add_entry(std::map<std::size_t, C>& row, std::size_t col, const C& c) {
    if (col == LinearSystem::npos) return;
    auto [it, fresh] = row.emplace(col, c);
    if (!fresh) it->second += c;
}

template <class C>
std::vector<std::pair<std::size_t, C>> flatten(const std::map<std::size_t, C>& row) {
    std::vector<std::pair<std::size_t, C>> out;
    for (const auto& [c, v] : row)
        if (v != C(0)) out.emplace_back(c, v);
    return out;
}

}  // namespace

LinearSystem assemble_z1_system(const GridContext& ctx, AlphaParam alpha, Exec exec) {
    const InfoStructure& s = ctx.structure();
    const std::size_t n = s.size(), t = s.terminal();
    LinearSystem sys;
    sys.alpha = alpha;
    sys.n = ctx.n();
    sys.exact = alpha.exact;
    sys.offset.assign(n, LinearSystem::npos);
    for (std::size_t x = 0; x < n; ++x) {
        if (x == t) continue;
        sys.offset[x] = sys.unknowns.size();
        for (std::size_t i = 0; i < ctx.laws(x).size(); ++i) sys.unknowns.push_back({x, i});
    }
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
            if (y == t || z == t) continue;
            auto w = s.meet(y, z);
            if (!w) continue;
            for (std::size_t i = 0; i < ctx.laws(*w).size(); ++i) sys.tags.push_back({y, z, i});
        }
    const std::size_t rows = sys.tags.size();
    if (sys.exact)
        sys.exact_rows.resize(rows);
    else
        sys.float_rows.resize(rows);

    auto build = [&](std::size_t r) {
        const RowTag& tag = sys.tags[r];
        const std::size_t w = *s.meet(tag.y, tag.z);
        const auto& to_z = ctx.marginal(w, tag.z);
        const auto& to_y = ctx.marginal(w, tag.y);
        const auto& cond = ctx.conditional(w, tag.z, tag.law);
        if (sys.exact) {
            std::map<std::size_t, Rational> row;
            add_entry(row, sys.column(w, tag.law), Rational(1));
            add_entry(row, sys.column(tag.z, to_z[tag.law]), Rational(-1));
            for (const auto& c : cond) add_entry(row, sys.column(tag.y, to_y[c.law]), -c.weight);
            sys.exact_rows[r] = flatten(row);
        } else {
            std::map<std::size_t, double> row;
            add_entry(row, sys.column(w, tag.law), 1.0);
            add_entry(row, sys.column(tag.z, to_z[tag.law]), -1.0);
            for (const auto& c : cond)
                add_entry(row, sys.column(tag.y, to_y[c.law]), -std::pow(c.weight.to_double(), alpha.value));
            sys.float_rows[r] = flatten(row);
        }
    };
    if (exec == Exec::parallel) {
        const auto count = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t r = 0; r < count; ++r) build(static_cast<std::size_t>(r));
    } else {
        for (std::size_t r = 0; r < rows; ++r) build(r);
    }
    return sys;
}

namespace {

template <class V>
std::vector<V> gather(const LinearSystem& sys, const Cochain<V>& f) {
    if (f.degree() != 1) throw std::invalid_argument("expected a degree-1 cochain");
    std::vector<V> x(sys.unknowns.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = f.table(sys.unknowns[i].object).at(sys.unknowns[i].law);
    return x;
}

}  // namespace

std::vector<double> cochain_vector(const LinearSystem& sys, const FloatCochain& f) { return gather(sys, f); }
std::vector<ExactReal> cochain_vector(const LinearSystem& sys, const ExactCochain& f) { return gather(sys, f); }

SystemResidual system_residual(const LinearSystem& sys, const std::vector<double>& x) {
    SystemResidual res;
    for (std::size_t r = 0; r < sys.row_count(); ++r) {
        double v = 0.0;
        if (sys.exact)
            for (const auto& [c, a] : sys.exact_rows[r]) v += a.to_double() * x.at(c);
        else
            for (const auto& [c, a] : sys.float_rows[r]) v += a * x.at(c);
        if (v != 0.0) res.exact_zero = false;
        if (std::fabs(v) > res.max_abs) {
            res.max_abs = std::fabs(v);
            res.worst_row = r;
        }
    }
    return res;
}

SystemResidual system_residual(const LinearSystem& sys, const std::vector<ExactReal>& x) {
    if (!sys.exact) throw std::invalid_argument("exact residual of a floating-point system");
    SystemResidual res;
    for (std::size_t r = 0; r < sys.row_count(); ++r) {
        ExactReal v;
        for (const auto& [c, a] : sys.exact_rows[r]) v += x.at(c) * a;
        if (!v.is_zero()) res.exact_zero = false;
        const double m = std::fabs(v.to_double());
        if (m > res.max_abs) {
            res.max_abs = m;
            res.worst_row = r;
        }
    }
    return res;
}

namespace {

bool has_nonatomic_law(const GridContext& ctx) {
    const auto& s = ctx.structure();
    for (std::size_t x = 0; x < s.size(); ++x)
        for (const auto& p : ctx.laws(x))
            if (!p.is_dirac()) return true;
    return false;
}

}  // namespace

GridDimensions z1_h1_dimensions(const LinearSystem& sys, const GridContext& ctx) {
    GridDimensions d;
    d.unknowns = sys.unknowns.size();
    d.rows = sys.row_count();
    d.exact = sys.exact;
    if (sys.exact) {
        auto b = bareiss_rank(sys.exact_rows, d.unknowns);
        d.rank = b.rank;
        d.pivot_bits = b.last_pivot_bits;
        d.gap = std::numeric_limits<double>::infinity();
    } else {
        auto sv = float_nullspace(sys.float_rows, d.unknowns);
        d.rank = sv.rank;
        d.gap = sv.gap;
        d.gap_warning = sv.gap_warning;
    }
    d.z1 = d.unknowns - d.rank;
    d.b1 = (sys.alpha.value != 1.0 && has_nonatomic_law(ctx)) ? 1 : 0;
    d.h1 = d.z1 >= d.b1 ? d.z1 - d.b1 : 0;
    return d;
}

H0Result h0_compute(const GridContext& ctx, AlphaParam alpha) {
    if (alpha.value == 1.0) return {1, "constant 1"};
    const auto& s = ctx.structure();
    for (std::size_t x = 0; x < s.size(); ++x)
        for (const auto& p : ctx.laws(x))
            if (!p.is_dirac()) return {0, s.id(x) + ":(" + p.key() + ")"};
    return {1, "constant 1"};
}

// ---- elementary blocks ----

namespace {

struct BlockTable {
    std::size_t k = 0, l = 0;
    // three cells of the block on rows {i1,i2} and columns {j1,j2}, empty when not elementary
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cells;

    const std::vector<std::pair<std::size_t, std::size_t>>& at(std::size_t i1, std::size_t i2, std::size_t j1,
                                                                std::size_t j2) const {
        if (i1 > i2) std::swap(i1, i2);
        if (j1 > j2) std::swap(j1, j2);
        return cells[(i1 * k + i2) * l * l + j1 * l + j2];
    }
};

BlockTable block_table(const InfoStructure& s, const ProbabilityFunctor& q, std::size_t x, std::size_t y,
                       std::size_t w) {
    BlockTable bt;
    bt.k = s.value_count(x);
    bt.l = s.value_count(y);
    std::vector<long> cell(bt.k * bt.l, -1);
    const auto& mx = s.map(w, x);
    const auto& my = s.map(w, y);
    for (std::size_t v = 0; v < s.value_count(w); ++v) {
        auto& c = cell[static_cast<std::size_t>(mx[v]) * bt.l + static_cast<std::size_t>(my[v])];
        if (c < 0) c = static_cast<long>(v);
    }
    const SupportComplex& qw = q.at(w);
    bt.cells.resize(bt.k * bt.k * bt.l * bt.l);
    for (std::size_t i1 = 0; i1 < bt.k; ++i1)
        for (std::size_t i2 = i1 + 1; i2 < bt.k; ++i2)
            for (std::size_t j1 = 0; j1 < bt.l; ++j1)
                for (std::size_t j2 = j1 + 1; j2 < bt.l; ++j2) {
                    const std::pair<std::size_t, std::size_t> pos[4] = {{i1, j1}, {i1, j2}, {i2, j1}, {i2, j2}};
                    for (int skip = 3; skip >= 0; --skip) {
                        std::vector<std::pair<std::size_t, std::size_t>> three;
                        std::uint64_t mask = 0;
                        bool ok = true;
                        for (int p = 0; p < 4 && ok; ++p) {
                            if (p == skip) continue;
                            long v = cell[pos[p].first * bt.l + pos[p].second];
                            if (v < 0) {
                                ok = false;
                                break;
                            }
                            if (!qw.full) {
                                if (v >= 64) throw std::invalid_argument("restricted Q needs at most 64 values");
                                mask |= std::uint64_t{1} << v;
                            }
                            three.push_back(pos[p]);
                        }
                        if (ok && (qw.full || qw.admits(mask))) {
                            bt.cells[(i1 * bt.k + i2) * bt.l * bt.l + j1 * bt.l + j2] = three;
                            break;
                        }
                    }
                }
    return bt;
}

std::optional<BlockChain> chain_for_order(const BlockTable& bt, const std::vector<std::size_t>& xo,
                                          const std::vector<std::size_t>& yo) {
    const std::size_t R = bt.k - 1, C = bt.l - 1;
    auto elem = [&](std::size_t r, std::size_t c) -> const std::vector<std::pair<std::size_t, std::size_t>>& {
        return bt.at(xo[r], xo[r + 1], yo[c], yo[c + 1]);
    };
    if (elem(0, 0).empty() || elem(R - 1, C - 1).empty()) return std::nullopt;
    std::vector<long> prev(R * C, -2);
    std::deque<std::size_t> queue{0};
    prev[0] = -1;
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        if (cur == R * C - 1) break;
        const std::size_t r = cur / C, c = cur % C;
        const long dr[4] = {1, 0, -1, 0}, dc[4] = {0, 1, 0, -1};
        for (int d = 0; d < 4; ++d) {
            const long nr = static_cast<long>(r) + dr[d], nc = static_cast<long>(c) + dc[d];
            if (nr < 0 || nc < 0 || nr >= static_cast<long>(R) || nc >= static_cast<long>(C)) continue;
            const std::size_t nxt = static_cast<std::size_t>(nr) * C + static_cast<std::size_t>(nc);
            if (prev[nxt] != -2 || elem(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc)).empty()) continue;
            prev[nxt] = static_cast<long>(cur);
            queue.push_back(nxt);
        }
    }
    if (prev[R * C - 1] == -2) return std::nullopt;
    std::vector<std::size_t> path;
    for (long p = static_cast<long>(R * C - 1); p >= 0; p = prev[static_cast<std::size_t>(p)])
        path.push_back(static_cast<std::size_t>(p));
    std::reverse(path.begin(), path.end());
    BlockChain chain;
    chain.x_order = xo;
    chain.y_order = yo;
    for (auto p : path) {
        const std::size_t r = p / C, c = p % C;
        chain.blocks.push_back({r, c, elem(r, c)});
    }
    for (std::size_t b = 0; b + 1 < chain.blocks.size(); ++b) {
        const auto& a = chain.blocks[b];
        const auto& n = chain.blocks[b + 1];
        std::vector<std::pair<std::size_t, std::size_t>> shared;
        for (std::size_t r = std::max(a.row, n.row); r <= std::min(a.row, n.row) + 1; ++r)
            for (std::size_t c = std::max(a.col, n.col); c <= std::min(a.col, n.col) + 1; ++c)
                shared.emplace_back(xo[r], yo[c]);
        chain.overlaps.push_back(std::move(shared));
    }
    return chain;
}

}  // namespace

std::optional<BlockChain> nondegenerate_product_check(const InfoStructure& s, const ProbabilityFunctor& q,
                                                      std::size_t x, std::size_t y, std::uint64_t seed) {
    if (x == s.terminal() || y == s.terminal()) throw std::invalid_argument("factors must not be the terminal object");
    auto w = s.meet(x, y);
    if (!w) throw std::invalid_argument("the product " + s.id(x) + s.id(y) + " is not an object");
    const std::size_t k = s.value_count(x), l = s.value_count(y);
    if (k < 2 || l < 2) return std::nullopt;
    const BlockTable bt = block_table(s, q, x, y, *w);
    std::vector<std::size_t> xo(k), yo(l);
    std::iota(xo.begin(), xo.end(), 0);
    std::iota(yo.begin(), yo.end(), 0);
    if (k <= 6 && l <= 6) {
        do {
            std::iota(yo.begin(), yo.end(), 0);
            do {
                if (auto c = chain_for_order(bt, xo, yo)) return c;
            } while (std::next_permutation(yo.begin(), yo.end()));
        } while (std::next_permutation(xo.begin(), xo.end()));
        return std::nullopt;
    }
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        if (auto c = chain_for_order(bt, xo, yo)) return c;
        std::shuffle(xo.begin(), xo.end(), rng);
        std::shuffle(yo.begin(), yo.end(), rng);
    }
    return std::nullopt;
}

bool block_complete_on_grid(const GridContext& ctx, std::size_t w, const std::vector<std::size_t>& cells) {
    std::set<std::vector<Rational>> want, seen;
    const std::size_t m = cells.size();
    for (std::int64_t d = 1; d <= ctx.n(); ++d) {
        std::vector<std::int64_t> a(m, 0);
        std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
            if (i + 1 == m) {
                a[i] = left;
                std::vector<Rational> v;
                for (auto k : a) v.emplace_back(k, d);
                want.insert(std::move(v));
                return;
            }
            for (std::int64_t k = 0; k <= left; ++k) {
                a[i] = k;
                rec(i + 1, left - k);
            }
        };
        if (m > 0) rec(0, d);
    }
    for (const auto& p : ctx.laws(w)) {
        Rational inside(0);
        std::vector<Rational> v;
        for (auto c : cells) {
            v.push_back(p.weights.at(c));
            inside += p.weights[c];
        }
        if (inside == Rational(1)) seen.insert(std::move(v));
    }
    return std::includes(seen.begin(), seen.end(), want.begin(), want.end());
}

// ---- structural prediction ----

std::string kind_name(H1Prediction::Kind k) {
    switch (k) {
        case H1Prediction::Kind::finite:
            return "finite";
        case H1Prediction::Kind::infinite:
            return "infinite";
        default:
            return "unknown";
    }
}

H1Prediction predict_h1(const InfoStructure& s, const ProbabilityFunctor& q, AlphaParam alpha) {
    H1Prediction out;
    const MinimalReport mr = analyze_minimal(s);
    out.components = mr.components.size();
    const std::size_t t = s.terminal();
    std::vector<std::size_t> failing;
    for (const auto& m : mr.minimal) {
        if (m.object == t) continue;
        bool found = false;
        for (const auto& [x, y] : m.factorizations) {
            if (auto chain = nondegenerate_product_check(s, q, x, y)) {
                out.certificates.emplace_back(m.object, std::move(*chain));
                found = true;
                break;
            }
        }
        if (!found) failing.push_back(m.object);
    }
    if (failing.empty()) {
        out.kind = H1Prediction::Kind::finite;
        if (alpha.value == 1.0)
            out.dimension = out.components;
        else
            out.dimension = out.components > 0 ? out.components - 1 : 0;
        out.reason = "every minimal object is a non-degenerate product";
        return out;
    }
    for (auto m : failing) {
        bool irreducible = true;
        for (const auto& mo : mr.minimal)
            if (mo.object == m && !mo.factorizations.empty()) irreducible = false;
        if (!irreducible) continue;
        std::vector<std::size_t> coarser;
        for (std::size_t j = 0; j < s.size(); ++j)
            if (j != m && j != t && s.arrow(m, j)) coarser.push_back(j);
        bool linear = true;
        for (auto a : coarser)
            for (auto b : coarser)
                if (!s.arrow(a, b) && !s.arrow(b, a)) linear = false;
        if (!linear) continue;
        auto depth = [&](std::size_t a) {
            return std::count_if(coarser.begin(), coarser.end(), [&](std::size_t b) { return s.arrow(a, b); });
        };
        std::sort(coarser.begin(), coarser.end(), [&](std::size_t a, std::size_t b) { return depth(a) > depth(b); });
        coarser.push_back(t);
        const std::size_t vm = s.value_count(m);
        for (auto xk : coarser) {
            const auto& fib = s.map(m, xk);
            for (const auto& face : q.at(m).faces(vm)) {
                std::map<int, std::vector<std::size_t>> by_value;
                for (auto v : face) by_value[fib[v]].push_back(v);
                for (const auto& [xv, pts] : by_value) {
                    if (pts.size() < 2) continue;
                    std::vector<Rational> wts(vm, Rational(0));
                    wts[pts[0]] = Rational(1, 2);
                    wts[pts[1]] = Rational(1, 2);
                    out.kind = H1Prediction::Kind::infinite;
                    out.irreducible = m;
                    out.chain = coarser;
                    out.witness = s.id(m) + ":(" + RationalLaw{m, wts}.key() + ") given " + s.id(xk) + "=" +
                                  s.variable(xk).values[static_cast<std::size_t>(xv)];
                    out.reason = "irreducible minimal object " + s.id(m) + " over a linear chain";
                    return out;
                }
            }
        }
    }
    out.kind = H1Prediction::Kind::unknown;
    out.reason = "minimal object " + s.id(failing.front()) + " has no non-degenerate factorization";
    return out;
}

// ---- entropy multiples ----

namespace {

template <class V>
V entropy_as(const AlphaParam& a, const RationalLaw& p);

template <>
ExactReal entropy_as<ExactReal>(const AlphaParam& a, const RationalLaw& p) {
    if (a.value != 1.0) throw CochainError("exact entropy values exist only for alpha = 1");
    return shannon_exact(p);
}

template <>
double entropy_as<double>(const AlphaParam& a, const RationalLaw& p) {
    return entropy(a.value, p);
}

}  // namespace

template <class V>
Cochain<V> component_entropy(std::shared_ptr<const GridContext> ctx, AlphaParam alpha,
                             const std::vector<std::size_t>& component) {
    std::vector<char> in(ctx->structure().size(), 0);
    for (auto c : component) in.at(c) = 1;
    const GridContext* g = ctx.get();
    return cochain_from<V>(ctx, alpha, [&](std::size_t x, std::size_t i) {
        return in[x] ? entropy_as<V>(alpha, g->laws(x)[i]) : V(0);
    });
}

template <class V>
Cochain<V> restricted_entropy(std::shared_ptr<const GridContext> ctx, AlphaParam alpha, std::size_t w,
                              const std::vector<std::size_t>& cells) {
    const auto& s = ctx->structure();
    const GridContext* g = ctx.get();
    return cochain_from<V>(ctx, alpha, [&](std::size_t x, std::size_t i) {
        if (!s.arrow(w, x)) return V(0);
        std::vector<char> image(s.value_count(x), 0);
        for (auto c : cells) image[static_cast<std::size_t>(s.map(w, x).at(c))] = 1;
        const auto& p = g->laws(x)[i];
        for (std::size_t v = 0; v < p.weights.size(); ++v)
            if (!p.weights[v].is_zero() && !image[v]) return V(0);
        return entropy_as<V>(alpha, p);
    });
}

namespace {

double as_double(const ExactReal& v) { return v.to_double(); }
double as_double(double v) { return v; }

}  // namespace

template <class V>
LambdaFit fit_entropy_multiples(const Cochain<V>& f) {
    if (f.degree() != 1) throw std::invalid_argument("expected a degree-1 cochain");
    const GridContext& ctx = f.context();
    const auto& s = ctx.structure();
    LambdaFit fit;
    fit.components = analyze_minimal(s).components;
    std::vector<long> comp(s.size(), -1);
    for (std::size_t c = 0; c < fit.components.size(); ++c)
        for (auto x : fit.components[c]) comp[x] = static_cast<long>(c);
    const double a = f.alpha().value;
    std::vector<double> num(fit.components.size(), 0.0), den(fit.components.size(), 0.0);
    for (std::size_t x = 0; x < s.size(); ++x) {
        if (comp[x] < 0) continue;
        for (std::size_t i = 0; i < ctx.laws(x).size(); ++i) {
            const double e = entropy(a, ctx.laws(x)[i]);
            num[static_cast<std::size_t>(comp[x])] += e * as_double(f.table(x)[i]);
            den[static_cast<std::size_t>(comp[x])] += e * e;
        }
    }
    for (std::size_t c = 0; c < num.size(); ++c) fit.lambda.push_back(den[c] > 0 ? num[c] / den[c] : 0.0);
    for (std::size_t x = 0; x < s.size(); ++x)
        for (std::size_t i = 0; i < ctx.laws(x).size(); ++i) {
            const double model =
                comp[x] < 0 ? 0.0 : fit.lambda[static_cast<std::size_t>(comp[x])] * entropy(a, ctx.laws(x)[i]);
            fit.residual = std::max(fit.residual, std::fabs(as_double(f.table(x)[i]) - model));
        }
    return fit;
}

template Cochain<ExactReal> component_entropy(std::shared_ptr<const GridContext>, AlphaParam,
                                              const std::vector<std::size_t>&);
template Cochain<double> component_entropy(std::shared_ptr<const GridContext>, AlphaParam,
                                           const std::vector<std::size_t>&);
template Cochain<ExactReal> restricted_entropy(std::shared_ptr<const GridContext>, AlphaParam, std::size_t,
                                               const std::vector<std::size_t>&);
template Cochain<double> restricted_entropy(std::shared_ptr<const GridContext>, AlphaParam, std::size_t,
                                            const std::vector<std::size_t>&);
template LambdaFit fit_entropy_multiples(const Cochain<ExactReal>&);
template LambdaFit fit_entropy_multiples(const Cochain<double>&);

// ---- nullspace explanation and concordance ----

namespace {

mpq_class to_mpq(const Rational& r) {
    mpq_class q(mpz_class(static_cast<long>(r.num())), mpz_class(static_cast<long>(r.den())));
    q.canonicalize();
    return q;
}

bool solves(const std::vector<ExactRow>& rows, const std::vector<mpq_class>& v) {
    for (const auto& row : rows) {
        mpq_class acc = 0;
        for (const auto& [c, a] : row)
            if (v[c] != 0) acc += to_mpq(a) * v[c];
        if (acc != 0) return false;
    }
    return true;
}

// rational coordinate vectors of the component entropies: one per (component, log prime)
std::vector<std::vector<mpq_class>> entropy_span(const LinearSystem& sys, const GridContext& ctx,
                                                 const std::vector<std::vector<std::size_t>>& components) {
    std::vector<std::vector<mpq_class>> out;
    const std::size_t cols = sys.unknowns.size();
    for (const auto& comp : components) {
        std::map<std::int64_t, std::vector<mpq_class>> by_prime;
        std::vector<mpq_class> constant(cols, 0);
        for (auto x : comp) {
            const std::size_t base = sys.offset[x];
            if (base == LinearSystem::npos) continue;
            for (std::size_t i = 0; i < ctx.laws(x).size(); ++i) {
                ExactReal e = shannon_exact(ctx.laws(x)[i]);
                constant[base + i] = to_mpq(e.constant());
                for (const auto& [p, c] : e.log_terms()) {
                    auto& v = by_prime[p];
                    if (v.empty()) v.assign(cols, 0);
                    v[base + i] = to_mpq(c);
                }
            }
        }
        if (std::any_of(constant.begin(), constant.end(), [](const mpq_class& q) { return q != 0; }))
            out.push_back(std::move(constant));
        for (auto& [p, v] : by_prime) out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

NullspaceExplanation explain_nullspace(const LinearSystem& sys, const GridContext& ctx) {
    NullspaceExplanation ex;
    const auto components = analyze_minimal(ctx.structure()).components;
    const std::size_t cols = sys.unknowns.size();
    if (sys.exact) {
        auto ns = exact_nullspace(sys.exact_rows, cols);
        ex.nullity = ns.basis.size();
        auto span = entropy_span(sys, ctx, components);
        ex.entropy_in_nullspace = std::all_of(span.begin(), span.end(),
                                              [&](const auto& v) { return solves(sys.exact_rows, v); });
        const std::size_t rs = exact_rank_of_vectors(span);
        auto joint = ns.basis;
        joint.insert(joint.end(), span.begin(), span.end());
        ex.explained = ex.nullity + rs - exact_rank_of_vectors(joint);
    } else {
        auto sv = float_nullspace(sys.float_rows, cols);
        ex.nullity = static_cast<std::size_t>(sv.null_basis.cols());
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cols),
                                                  static_cast<Eigen::Index>(components.size()));
        Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols));
        for (std::size_t c = 0; c < components.size(); ++c)
            for (auto x : components[c]) {
                const std::size_t base = sys.offset[x];
                if (base == LinearSystem::npos) continue;
                for (std::size_t i = 0; i < ctx.laws(x).size(); ++i) {
                    const double v = entropy(sys.alpha.value, ctx.laws(x)[i]);
                    e(static_cast<Eigen::Index>(base + i), static_cast<Eigen::Index>(c)) = v;
                    total(static_cast<Eigen::Index>(base + i)) += v;
                }
            }
        std::vector<double> tv(total.data(), total.data() + total.size());
        const double scale = std::max(1.0, total.cwiseAbs().maxCoeff());
        ex.entropy_in_nullspace = system_residual(sys, tv).max_abs <= 1e-10 * scale;
        if (ex.nullity > 0 && components.size() > 0) {
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(e);
            const auto r = qr.rank();
            if (r > 0) {
                Eigen::MatrixXd qe = qr.householderQ() * Eigen::MatrixXd::Identity(e.rows(), r);
                Eigen::JacobiSVD<Eigen::MatrixXd> cosines(qe.transpose() * sv.null_basis);
                for (Eigen::Index i = 0; i < cosines.singularValues().size(); ++i)
                    if (cosines.singularValues()(i) > 1.0 - 1e-8) ++ex.explained;
            }
        }
    }
    ex.fraction = ex.nullity ? static_cast<double>(ex.explained) / static_cast<double>(ex.nullity) : 1.0;
    return ex;
}

Concordance grid_concordance(const InfoStructure& s, const ProbabilityFunctor& q, const std::vector<int>& bounds) {
    if (bounds.empty()) throw std::invalid_argument("no denominator bounds");
    Concordance out;
    out.bounds = bounds;
    std::sort(out.bounds.begin(), out.bounds.end());
    const AlphaParam one(1.0);
    const GridContext base(s, q, out.bounds.front());
    const LinearSystem base_sys = assemble_z1_system(base, one);
    out.projections_solve_base = true;
    for (int n : out.bounds) {
        const GridContext ctx(s, q, n);
        const LinearSystem sys = assemble_z1_system(ctx, one);
        auto ns = exact_nullspace(sys.exact_rows, sys.unknowns.size());
        out.grid_dims.push_back(ns.basis.size());
        std::vector<std::size_t> col_of(base_sys.unknowns.size());
        for (std::size_t u = 0; u < base_sys.unknowns.size(); ++u) {
            const auto& un = base_sys.unknowns[u];
            col_of[u] = sys.column(un.object, ctx.index_of(base.laws(un.object)[un.law]));
        }
        std::vector<std::vector<mpq_class>> projected;
        for (const auto& v : ns.basis) {
            std::vector<mpq_class> p(col_of.size());
            for (std::size_t u = 0; u < col_of.size(); ++u) p[u] = v[col_of[u]];
            if (!solves(base_sys.exact_rows, p)) out.projections_solve_base = false;
            projected.push_back(std::move(p));
        }
        out.projected_dims.push_back(exact_rank_of_vectors(projected));
    }
    out.non_increasing = std::is_sorted(out.projected_dims.rbegin(), out.projected_dims.rend());
    return out;
}

}  // namespace infocoh
