#include "infocoh/grid.hpp"

#include <numeric>

namespace infocoh {

GridContext::GridContext(InfoStructure s, ProbabilityFunctor q, int n) : s_(std::move(s)), q_(std::move(q)), n_(n) {
    if (q_.q.size() != s_.size()) throw std::invalid_argument("probability functor does not match the structure");
    if (n_ < 1) throw std::invalid_argument("denominator bound must be >= 1");
    for (int d = 2; d <= n_; ++d) scale_ = std::lcm(scale_, static_cast<std::int64_t>(d));
    const std::size_t count = s_.size();
    laws_.resize(count);
    index_.resize(count);
    for (std::size_t x = 0; x < count; ++x) {
        laws_[x] = enumerate_grid_laws(x, s_.value_count(x), q_.at(x), n_);
        for (std::size_t i = 0; i < laws_[x].size(); ++i) index_[x].emplace(scaled(laws_[x][i]), i);
    }
    marginal_.resize(count * count);
    conditional_.resize(count * count);
    for (std::size_t x = 0; x < count; ++x)
        for (std::size_t y = 0; y < count; ++y) {
            if (!s_.arrow(x, y)) continue;
            const auto& m = s_.map(x, y);
            auto& marg = marginal_[x * count + y];
            auto& cond = conditional_[x * count + y];
            marg.resize(laws_[x].size());
            cond.resize(laws_[x].size());
            for (std::size_t i = 0; i < laws_[x].size(); ++i) {
                const RationalLaw& p = laws_[x][i];
                RationalLaw mp{y, std::vector<Rational>(s_.value_count(y), Rational(0))};
                for (std::size_t v = 0; v < p.weights.size(); ++v) mp.weights[m[v]] += p.weights[v];
                auto at = find(mp);
                if (!at)
                    throw AdaptednessError("marginal (" + mp.key() + ") of (" + p.key() + ") on " + s_.id(x) +
                                           " is not a grid law of Q on " + s_.id(y));
                marg[i] = *at;
                for (std::size_t yv = 0; yv < mp.weights.size(); ++yv) {
                    const Rational& mass = mp.weights[yv];
                    if (mass.is_zero()) continue;
                    RationalLaw c{x, std::vector<Rational>(p.weights.size(), Rational(0))};
                    for (std::size_t v = 0; v < p.weights.size(); ++v)
                        if (m[v] == static_cast<int>(yv)) c.weights[v] = p.weights[v] / mass;
                    auto ci = find(c);
                    if (!ci)
                        throw AdaptednessError("conditioning (" + p.key() + ") on " + s_.id(y) + "=" +
                                               s_.variable(y).values[yv] + " leaves the grid of Q on " + s_.id(x));
                    cond[i].push_back({mass, *ci});
                }
            }
        }
}

std::vector<std::int64_t> GridContext::scaled(const RationalLaw& p) const {
    std::vector<std::int64_t> k(p.weights.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        const Rational& w = p.weights[i];
        if (scale_ % w.den() != 0) return {};
        k[i] = w.num() * (scale_ / w.den());
    }
    return k;
}

std::optional<std::size_t> GridContext::find(const RationalLaw& p) const {
    if (p.variable >= laws_.size()) return std::nullopt;
    auto k = scaled(p);
    if (k.empty()) return std::nullopt;
    auto it = index_[p.variable].find(k);
    if (it == index_[p.variable].end()) return std::nullopt;
    return it->second;
}

std::size_t GridContext::index_of(const RationalLaw& p) const {
    auto i = find(p);
    if (!i) throw std::out_of_range("law (" + p.key() + ") is not on the grid of " + s_.id(p.variable));
    return *i;
}

const std::vector<std::size_t>& GridContext::marginal(std::size_t from, std::size_t to) const {
    if (!s_.arrow(from, to)) throw std::invalid_argument("no arrow " + s_.id(from) + "->" + s_.id(to));
    return marginal_[from * s_.size() + to];
}

const std::vector<GridContext::Conditional>& GridContext::conditional(std::size_t object, std::size_t by,
                                                                      std::size_t law) const {
    if (!s_.arrow(object, by)) throw std::invalid_argument(s_.id(by) + " is not coarser than " + s_.id(object));
    return conditional_[object * s_.size() + by][law];
}

}  // namespace infocoh
