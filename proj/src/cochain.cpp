#include "infocoh/cochain.hpp"

#include <algorithm>
#include <random>

namespace infocoh {

double entropy(double alpha, const RationalLaw& p) {
    if (alpha == 1.0) {
        double s = 0.0;
        for (const auto& w : p.weights) {
            if (w.is_zero()) continue;
            double x = w.to_double();
            s -= x * std::log(x);
        }
        return s;
    }
    double t = 0.0;
    for (const auto& w : p.weights)
        if (!w.is_zero()) t += std::pow(w.to_double(), alpha);
    return (t - 1.0) / (1.0 - alpha);
}

ExactReal shannon_exact(const RationalLaw& p) {
    ExactReal s;
    for (const auto& w : p.weights) {
        if (w.is_zero()) continue;
        s -= ExactReal::log(w) * w;
    }
    return s;
}

namespace {

template <class V>
V entropy_value(const AlphaParam& a, const RationalLaw& p);

template <>
ExactReal entropy_value<ExactReal>(const AlphaParam& a, const RationalLaw& p) {
    if (a.value != 1.0) throw CochainError("exact entropy values exist only for alpha = 1");
    return shannon_exact(p);
}

template <>
double entropy_value<double>(const AlphaParam& a, const RationalLaw& p) {
    return entropy(a.value, p);
}

template <class V>
V random_value(std::mt19937_64& rng);

template <>
ExactReal random_value<ExactReal>(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-12, 12), den(1, 6);
    return ExactReal(Rational(num(rng), den(rng)));
}

template <>
double random_value<double>(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return u(rng);
}

template <class V>
void check_field(const AlphaParam& a) {
    if constexpr (std::is_same_v<V, ExactReal>) {
        if (a.value != 1.0) throw CochainError("exact cochains require alpha = 1");
    }
}

std::string law_name(const RationalLaw& p) { return "(" + p.key() + ")"; }

}  // namespace

template <class V>
Cochain<V>::Cochain(std::shared_ptr<const GridContext> ctx, AlphaParam alpha, int degree)
    : ctx_(std::move(ctx)), alpha_(alpha), degree_(degree) {
    check_field<V>(alpha_);
    if (degree < 0) throw CochainError("negative degree");
    const auto& s = ctx_->structure();
    const std::size_t n = s.size();
    std::size_t count = 1;
    for (int k = 0; k < degree; ++k) count *= n;
    products_.assign(count, npos);
    tables_.resize(count);
    for (std::size_t slot = 0; slot < count; ++slot) {
        auto p = s.product(tuple(slot));
        if (!p) continue;
        products_[slot] = *p;
        tables_[slot].assign(ctx_->laws(*p).size(), V{});
    }
}

template <class V>
std::vector<std::size_t> Cochain<V>::tuple(std::size_t slot) const {
    const std::size_t n = ctx_->structure().size();
    std::vector<std::size_t> t(degree_);
    for (int k = degree_; k-- > 0;) {
        t[k] = slot % n;
        slot /= n;
    }
    return t;
}

template <class V>
std::size_t Cochain<V>::slot(const std::vector<std::size_t>& t) const {
    if (static_cast<int>(t.size()) != degree_) throw CochainError("tuple length differs from the degree");
    const std::size_t n = ctx_->structure().size();
    std::size_t s = 0;
    for (auto x : t) {
        if (x >= n) throw CochainError("tuple entry out of range");
        s = s * n + x;
    }
    return s;
}

template <class V>
std::string Cochain<V>::tuple_name(std::size_t slot) const {
    const auto& s = ctx_->structure();
    std::string out = "[";
    auto t = tuple(slot);
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) out += "|";
        out += s.id(t[k]);
    }
    return out + "]";
}

template <class V>
V Cochain<V>::evaluate(std::size_t slot, std::size_t object, std::size_t law) const {
    std::size_t p = products_[slot];
    if (p == npos) throw CochainError("tuple " + tuple_name(slot) + " has no product");
    if (object == p) return tables_[slot][law];
    return tables_[slot][ctx_->marginal(object, p)[law]];
}

template <class V>
Cochain<V> entropy_cochain(std::shared_ptr<const GridContext> ctx, AlphaParam alpha) {
    Cochain<V> f(ctx, alpha, 1);
    for (std::size_t x = 0; x < ctx->structure().size(); ++x) {
        auto& t = f.table(x);
        const auto& laws = ctx->laws(x);
        for (std::size_t i = 0; i < laws.size(); ++i) t[i] = entropy_value<V>(alpha, laws[i]);
    }
    return f;
}

template <class V>
Cochain<V> constant_cochain(std::shared_ptr<const GridContext> ctx, AlphaParam alpha, const V& k) {
    Cochain<V> f(ctx, alpha, 0);
    for (auto& v : f.table(0)) v = k;
    return f;
}

template <class V>
Cochain<V> random_cochain(std::shared_ptr<const GridContext> ctx, AlphaParam alpha, int degree, std::uint64_t seed) {
    Cochain<V> f(ctx, alpha, degree);
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < f.slot_count(); ++s)
        for (auto& v : f.table(s)) v = random_value<V>(rng);
    return f;
}

template <class V>
Cochain<V> cochain_from(std::shared_ptr<const GridContext> ctx, AlphaParam alpha,
                        const std::function<V(std::size_t, std::size_t)>& fn) {
    Cochain<V> f(ctx, alpha, 1);
    for (std::size_t x = 0; x < ctx->structure().size(); ++x) {
        auto& t = f.table(x);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = fn(x, i);
    }
    return f;
}

template <class V>
std::vector<V> monoid_action(const GridContext& ctx, AlphaParam alpha, std::size_t y, const std::vector<V>& f,
                             std::size_t x) {
    check_field<V>(alpha);
    if (f.size() != ctx.laws(x).size()) throw CochainError("table size differs from the grid");
    std::vector<V> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        V acc{};
        for (const auto& c : ctx.conditional(x, y, i)) acc += weighted(c.weight, f[c.law], alpha.value);
        out[i] = acc;
    }
    return out;
}

template <class V>
Cochain<V> coboundary(const Cochain<V>& f, Exec exec, int max_degree) {
    const int n = f.degree();
    if (n + 1 > max_degree)
        throw CochainError("coboundary would reach degree " + std::to_string(n + 1) + " above the cap " +
                           std::to_string(max_degree));
    const GridContext& ctx = f.context();
    const auto& s = ctx.structure();
    const double alpha = f.alpha().value;
    Cochain<V> g(f.context_ptr(), f.alpha(), n + 1);
    const std::size_t nobj = s.size();
    std::size_t tail_count = 1;
    for (int k = 0; k < n; ++k) tail_count *= nobj;

    auto fill = [&](std::size_t slot) {
        const std::size_t w = g.product(slot);
        if (w == Cochain<V>::npos) return;
        auto t = g.tuple(slot);
        const std::size_t tail = slot % tail_count;
        const std::size_t head = slot / nobj;
        const std::size_t tail_prod = f.product(tail);
        const std::size_t head_prod = f.product(head);
        const auto& tail_table = f.table(tail);
        const auto& head_table = f.table(head);
        const auto& tail_marg = ctx.marginal(w, tail_prod);
        const auto& head_marg = ctx.marginal(w, head_prod);
        std::vector<std::pair<int, const std::vector<V>*>> merged;
        for (int k = 1; k <= n; ++k) {
            std::vector<std::size_t> m;
            for (int j = 0; j < n + 1; ++j) {
                if (j == k - 1) {
                    m.push_back(*s.meet(t[j], t[j + 1]));
                    ++j;
                } else {
                    m.push_back(t[j]);
                }
            }
            merged.emplace_back(k % 2 ? -1 : 1, &f.table(f.slot(m)));
        }
        const int last_sign = (n + 1) % 2 ? -1 : 1;
        auto& out = g.table(slot);
        for (std::size_t i = 0; i < out.size(); ++i) {
            V acc{};
            for (const auto& c : ctx.conditional(w, t[0], i))
                acc += weighted(c.weight, tail_table[tail_marg[c.law]], alpha);
            for (const auto& [sign, tab] : merged) {
                if (sign > 0)
                    acc += (*tab)[i];
                else
                    acc -= (*tab)[i];
            }
            if (last_sign > 0)
                acc += head_table[head_marg[i]];
            else
                acc -= head_table[head_marg[i]];
            out[i] = std::move(acc);
        }
    };
    const long long slots = static_cast<long long>(g.slot_count());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long k = 0; k < slots; ++k) fill(static_cast<std::size_t>(k));
    } else {
        for (long long k = 0; k < slots; ++k) fill(static_cast<std::size_t>(k));
    }
    return g;
}

template <class V>
Residual cochain_max(const Cochain<V>& f) {
    Residual r;
    for (std::size_t slot = 0; slot < f.slot_count(); ++slot) {
        std::size_t p = f.product(slot);
        if (p == Cochain<V>::npos) continue;
        const auto& t = f.table(slot);
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!is_exact_zero(t[i])) r.exact_zero = false;
            double m = magnitude(t[i]);
            if (m > r.max_abs || (r.tuple.empty() && !is_exact_zero(t[i]))) {
                r.max_abs = std::max(r.max_abs, m);
                r.tuple = f.tuple_name(slot);
                r.law = law_name(f.context().laws(p)[i]);
            }
        }
    }
    return r;
}

template <class V>
Residual cocycle_residual(const Cochain<V>& f, Exec exec) {
    return cochain_max(coboundary(f, exec, std::max(3, f.degree() + 1)));
}

template <class V>
Cochain<V> pullback_cochain(const StructureMorphism& phi, std::shared_ptr<const GridContext> source_ctx,
                            const Cochain<V>& f) {
    const auto& s = source_ctx->structure();
    const GridContext& tctx = f.context();
    const auto& t = tctx.structure();
    if (phi.object_map.size() != s.size()) throw CochainError("morphism does not match the source structure");
    for (std::size_t x = 0; x < s.size(); ++x) {
        const auto& vm = phi.value_maps[x];
        std::vector<int> seen(t.value_count(phi.object_map[x]), 0);
        for (int v : vm) ++seen[v];
        if (vm.size() != seen.size() || std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
            throw CochainError("value map of " + s.id(x) + " is not a bijection");
    }
    Cochain<V> out(source_ctx, f.alpha(), f.degree());
    for (std::size_t slot = 0; slot < out.slot_count(); ++slot) {
        const std::size_t w = out.product(slot);
        if (w == Cochain<V>::npos) continue;
        auto tup = out.tuple(slot);
        for (auto& x : tup) x = phi.object_map[x];
        const std::size_t tslot = f.slot(tup);
        const std::size_t tw = f.product(tslot);
        if (tw != phi.object_map[w])
            throw CochainError("morphism does not preserve the product of " + out.tuple_name(slot));
        const auto& laws = source_ctx->laws(w);
        auto& table = out.table(slot);
        for (std::size_t i = 0; i < laws.size(); ++i) {
            RationalLaw img{tw, std::vector<Rational>(t.value_count(tw), Rational(0))};
            for (std::size_t v = 0; v < laws[i].weights.size(); ++v)
                img.weights[phi.value_maps[w][v]] += laws[i].weights[v];
            auto at = tctx.find(img);
            if (!at) throw CochainError("image law (" + img.key() + ") leaves Q on " + t.id(tw));
            table[i] = f.table(tslot)[*at];
        }
    }
    return out;
}

template <class V>
Cochain<V> cochain_difference(const Cochain<V>& a, const Cochain<V>& b) {
    if (a.degree() != b.degree() || a.slot_count() != b.slot_count()) throw CochainError("cochain shapes differ");
    Cochain<V> out = a;
    for (std::size_t slot = 0; slot < out.slot_count(); ++slot) {
        auto& t = out.table(slot);
        const auto& u = b.table(slot);
        if (t.size() != u.size()) throw CochainError("cochain shapes differ");
        for (std::size_t i = 0; i < t.size(); ++i) t[i] -= u[i];
    }
    return out;
}

namespace {

template <class V>
struct Sampler {
    const GridContext& ctx;
    std::mt19937_64 rng;
    std::vector<std::vector<std::size_t>> tuples;  // tuples with a product

    Sampler(const GridContext& c, std::uint64_t seed, int len) : ctx(c), rng(seed) {
        const auto& s = ctx.structure();
        const std::size_t n = s.size();
        std::size_t count = 1;
        for (int k = 0; k < len; ++k) count *= n;
        for (std::size_t code = 0; code < count; ++code) {
            std::vector<std::size_t> t(len);
            std::size_t c2 = code;
            for (int k = len; k-- > 0;) {
                t[k] = c2 % n;
                c2 /= n;
            }
            if (s.product(t)) tuples.push_back(t);
        }
    }
    std::pair<std::vector<std::size_t>, std::size_t> draw() {
        std::uniform_int_distribution<std::size_t> pick(0, tuples.size() - 1);
        const auto& t = tuples[pick(rng)];
        std::size_t w = *ctx.structure().product(t);
        std::uniform_int_distribution<std::size_t> lp(0, ctx.laws(w).size() - 1);
        return {t, lp(rng)};
    }
};

// (Y.g)(P) where g is given as a function of a law index on w
template <class V, class G>
V act(const GridContext& ctx, double alpha, std::size_t w, std::size_t y, std::size_t law, G&& g) {
    V acc{};
    for (const auto& c : ctx.conditional(w, y, law)) acc += weighted(c.weight, g(c.law), alpha);
    return acc;
}

}  // namespace

template <class V>
SemidirectVerdict semidirect_check(const Cochain<V>& d, std::size_t trials, std::uint64_t seed, double tol) {
    if (d.degree() != 1) throw CochainError("semidirect check expects a 1-cochain");
    const GridContext& ctx = d.context();
    const auto& s = ctx.structure();
    const double alpha = d.alpha().value;
    SemidirectVerdict v;
    Sampler<V> pairs(ctx, seed, 2), triples(ctx, seed ^ 0x9e3779b97f4a7c15ULL, 3);
    auto val = [&](std::size_t x, std::size_t w, std::size_t law) { return d.evaluate(x, w, law); };
    for (std::size_t k = 0; k < trials; ++k) {
        V defect{};
        std::string where;
        if (k % 2 == 0) {
            auto [t, law] = pairs.draw();
            std::size_t y = t[0], x = t[1], w = *s.meet(y, x);
            // (d[Y], Y) * (d[X], X) = (d[Y] + Y.d[X], YX)
            V rhs = val(y, w, law) + act<V>(ctx, alpha, w, y, law, [&](std::size_t l) { return val(x, w, l); });
            defect = val(w, w, law) - rhs;
            where = "pair [" + s.id(y) + "|" + s.id(x) + "]";
        } else {
            auto [t, law] = triples.draw();
            std::size_t z = t[0], y = t[1], x = t[2];
            std::size_t w = *s.product(t);
            auto inner = [&](std::size_t l) {
                return val(y, w, l) + act<V>(ctx, alpha, w, y, l, [&](std::size_t l2) { return val(x, w, l2); });
            };
            V rhs = val(z, w, law) + act<V>(ctx, alpha, w, z, law, inner);
            defect = val(w, w, law) - rhs;
            where = "triple [" + s.id(z) + "|" + s.id(y) + "|" + s.id(x) + "]";
        }
        ++v.samples;
        double m = magnitude(defect);
        if (m > v.max_defect || (v.witness.empty() && !is_exact_zero(defect))) {
            v.max_defect = std::max(v.max_defect, m);
            v.witness = where;
        }
    }
    v.splitting = v.max_defect <= tol;
    v.cocycle_residual = cocycle_residual(d).max_abs;
    return v;
}

template <class V>
SemidirectVerdict factor_set_check(const Cochain<V>& g, std::size_t trials, std::uint64_t seed, double tol) {
    if (g.degree() != 1) throw CochainError("factor sets are built from 1-cochains");
    Cochain<V> a = coboundary(g);
    const GridContext& ctx = g.context();
    const auto& s = ctx.structure();
    const double alpha = g.alpha().value;
    SemidirectVerdict v;
    Sampler<V> triples(ctx, seed, 3);
    auto av = [&](std::size_t p, std::size_t q, std::size_t w, std::size_t law) {
        return a.evaluate(a.slot({p, q}), w, law);
    };
    for (std::size_t k = 0; k < trials; ++k) {
        auto [t, law] = triples.draw();
        std::size_t x = t[0], y = t[1], z = t[2];
        std::size_t w = *s.product(t);
        std::size_t xy = *s.meet(x, y), yz = *s.meet(y, z);
        // ((X,0)(Y,0))(Z,0) against (X,0)((Y,0)(Z,0))
        V left = av(x, y, w, law) + av(xy, z, w, law);
        V right = act<V>(ctx, alpha, w, x, law, [&](std::size_t l) { return av(y, z, w, l); }) + av(x, yz, w, law);
        V defect = left - right;
        ++v.samples;
        double m = magnitude(defect);
        if (m > v.max_defect || (v.witness.empty() && !is_exact_zero(defect))) {
            v.max_defect = std::max(v.max_defect, m);
            v.witness = "triple [" + s.id(x) + "|" + s.id(y) + "|" + s.id(z) + "]";
        }
    }
    v.splitting = v.max_defect <= tol;
    return v;
}

#define INFOCOH_INSTANTIATE(V)                                                                                   \
    template class Cochain<V>;                                                                                   \
    template Cochain<V> entropy_cochain<V>(std::shared_ptr<const GridContext>, AlphaParam);                     \
    template Cochain<V> constant_cochain<V>(std::shared_ptr<const GridContext>, AlphaParam, const V&);          \
    template Cochain<V> random_cochain<V>(std::shared_ptr<const GridContext>, AlphaParam, int, std::uint64_t);  \
    template Cochain<V> cochain_from<V>(std::shared_ptr<const GridContext>, AlphaParam,                         \
                                        const std::function<V(std::size_t, std::size_t)>&);                    \
    template std::vector<V> monoid_action<V>(const GridContext&, AlphaParam, std::size_t, const std::vector<V>&, \
                                             std::size_t);                                                      \
    template Cochain<V> coboundary<V>(const Cochain<V>&, Exec, int);                                            \
    template Residual cochain_max<V>(const Cochain<V>&);                                                        \
    template Residual cocycle_residual<V>(const Cochain<V>&, Exec);                                             \
    template Cochain<V> pullback_cochain<V>(const StructureMorphism&, std::shared_ptr<const GridContext>,       \
                                            const Cochain<V>&);                                                 \
    template Cochain<V> cochain_difference<V>(const Cochain<V>&, const Cochain<V>&);                            \
    template SemidirectVerdict semidirect_check<V>(const Cochain<V>&, std::size_t, std::uint64_t, double);      \
    template SemidirectVerdict factor_set_check<V>(const Cochain<V>&, std::size_t, std::uint64_t, double);

INFOCOH_INSTANTIATE(ExactReal)
INFOCOH_INSTANTIATE(double)

#undef INFOCOH_INSTANTIATE

}  // namespace infocoh
