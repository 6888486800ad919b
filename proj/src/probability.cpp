#include "infocoh/probability.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace infocoh {

std::uint64_t RationalLaw::support_mask() const {
    if (weights.size() > 64) throw std::length_error("support masks need at most 64 values");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (!weights[i].is_zero()) m |= std::uint64_t{1} << i;
    return m;
}

std::size_t RationalLaw::support_size() const {
    return static_cast<std::size_t>(std::count_if(weights.begin(), weights.end(), [](const Rational& w) { return !w.is_zero(); }));
}

std::int64_t RationalLaw::common_denominator() const {
    std::int64_t d = 1;
    for (const auto& w : weights) d = std::lcm(d, w.den());
    return d;
}

std::string RationalLaw::key() const {
    std::string s;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (i) s += ",";
        s += weights[i].str();
    }
    return s;
}

RationalLaw make_law(std::size_t variable, std::vector<Rational> weights) {
    if (weights.empty()) throw std::invalid_argument("law with no values");
    Rational total(0);
    for (const auto& w : weights) {
        if (w.sign() < 0) throw std::invalid_argument("negative probability");
        total += w;
    }
    if (total != Rational(1)) throw std::invalid_argument("weights sum to " + total.str() + ", not 1");
    return RationalLaw{variable, std::move(weights)};
}

RationalLaw parse_law(std::size_t variable, const std::string& key) {
    std::vector<Rational> w;
    std::stringstream ss(key);
    std::string item;
    while (std::getline(ss, item, ',')) w.push_back(Rational::parse(item));
    return make_law(variable, std::move(w));
}

RationalLaw dirac(std::size_t variable, std::size_t size, std::size_t at) {
    RationalLaw p{variable, std::vector<Rational>(size, Rational(0))};
    p.weights.at(at) = Rational(1);
    return p;
}

SupportComplex SupportComplex::from_supports(std::vector<std::uint64_t> supports) {
    SupportComplex c;
    c.full = false;
    std::sort(supports.begin(), supports.end());
    supports.erase(std::unique(supports.begin(), supports.end()), supports.end());
    for (auto s : supports) {
        if (s == 0) continue;
        bool dominated = false;
        for (auto t : supports)
            if (t != s && (s & ~t) == 0) dominated = true;
        if (!dominated) c.maximal.push_back(s);
    }
    return c;
}

bool SupportComplex::admits(std::uint64_t support) const {
    if (full) return true;
    for (auto m : maximal)
        if ((support & ~m) == 0) return true;
    return false;
}

std::vector<std::vector<std::size_t>> SupportComplex::faces(std::size_t value_count) const {
    std::vector<std::vector<std::size_t>> out;
    if (full) {
        std::vector<std::size_t> all(value_count);
        std::iota(all.begin(), all.end(), 0);
        out.push_back(std::move(all));
        return out;
    }
    for (auto m : maximal) {
        std::vector<std::size_t> f;
        for (std::size_t i = 0; i < 64; ++i)
            if ((m >> i) & 1u) f.push_back(i);
        out.push_back(std::move(f));
    }
    return out;
}

ProbabilityFunctor ProbabilityFunctor::full(const InfoStructure& s) {
    return ProbabilityFunctor{std::vector<SupportComplex>(s.size())};
}

namespace {

void compositions(int remaining, std::size_t slot, std::vector<int>& parts, const std::function<void()>& emit) {
    if (slot + 1 == parts.size()) {
        parts[slot] = remaining;
        emit();
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        parts[slot] = v;
        compositions(remaining - v, slot + 1, parts, emit);
    }
}

}  // namespace

std::vector<RationalLaw> enumerate_grid_laws(std::size_t variable, std::size_t value_count, const SupportComplex& qx,
                                             int n) {
    if (n < 1) throw std::invalid_argument("denominator bound must be >= 1");
    std::set<std::vector<Rational>> found;
    for (const auto& face : qx.faces(value_count)) {
        std::vector<int> parts(face.size());
        for (int d = 1; d <= n; ++d) {
            compositions(d, 0, parts, [&]() {
                std::vector<Rational> w(value_count, Rational(0));
                for (std::size_t k = 0; k < face.size(); ++k) w[face[k]] = Rational(parts[k], d);
                found.insert(std::move(w));
            });
        }
    }
    std::vector<RationalLaw> out;
    out.reserve(found.size());
    for (const auto& w : found) out.push_back(RationalLaw{variable, w});
    return out;
}

RationalLaw marginalize(const RationalLaw& p, const InfoStructure& s, std::size_t target) {
    if (p.variable >= s.size() || p.weights.size() != s.value_count(p.variable))
        throw std::invalid_argument("law does not live on a variable of this structure");
    if (!s.arrow(p.variable, target))
        throw std::invalid_argument("no arrow " + s.id(p.variable) + "->" + s.id(target));
    const auto& m = s.map(p.variable, target);
    RationalLaw out{target, std::vector<Rational>(s.value_count(target), Rational(0))};
    for (std::size_t x = 0; x < p.weights.size(); ++x) out.weights[m[x]] += p.weights[x];
    return out;
}

std::optional<RationalLaw> condition(const RationalLaw& p, const InfoStructure& s, std::size_t y_var, std::size_t y) {
    if (!s.arrow(p.variable, y_var))
        throw std::invalid_argument(s.id(y_var) + " is not coarser than " + s.id(p.variable));
    const auto& m = s.map(p.variable, y_var);
    Rational mass(0);
    for (std::size_t x = 0; x < p.weights.size(); ++x)
        if (m[x] == static_cast<int>(y)) mass += p.weights[x];
    if (mass.is_zero()) return std::nullopt;
    RationalLaw out{p.variable, std::vector<Rational>(p.weights.size(), Rational(0))};
    for (std::size_t x = 0; x < p.weights.size(); ++x)
        if (m[x] == static_cast<int>(y)) out.weights[x] = p.weights[x] / mass;
    return out;
}

AdaptedReport check_adapted(const InfoStructure& s, const ProbabilityFunctor& q, int n) {
    AdaptedReport r;
    for (std::size_t x = 0; x < s.size(); ++x) {
        for (const auto& p : enumerate_grid_laws(x, s.value_count(x), q.at(x), n)) {
            ++r.laws_checked;
            for (std::size_t y = 0; y < s.size(); ++y) {
                if (!s.arrow(x, y)) continue;
                auto marg = marginalize(p, s, y);
                if (r.marginals_ok && !q.at(y).full && !q.at(y).admits(marg.support_mask())) {
                    r.marginals_ok = false;
                    if (r.witness.empty())
                        r.witness = "marginal of (" + p.key() + ") on " + s.id(x) + " leaves Q on " + s.id(y);
                }
                for (std::size_t v = 0; v < s.value_count(y); ++v) {
                    auto c = condition(p, s, y, v);
                    if (c && r.conditioning_ok && !q.at(x).full && !q.at(x).admits(c->support_mask())) {
                        r.conditioning_ok = false;
                        if (r.witness.empty())
                            r.witness = "conditioning (" + p.key() + ") on " + s.id(y) + "=" + s.variable(y).values[v] +
                                        " leaves Q on " + s.id(x);
                    }
                }
            }
        }
    }
    return r;
}

}  // namespace infocoh
