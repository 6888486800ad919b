#include "infocoh/bar.hpp"

#include <stdexcept>

namespace infocoh {

void BarChain::add(std::size_t monoid, std::vector<std::size_t> tuple, const Rational& c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(monoid, std::move(tuple));
    auto it = terms.find(key);
    if (it == terms.end()) {
        terms.emplace(std::move(key), c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

namespace {

void check_in_sx(const InfoStructure& s, std::size_t base, std::size_t y) {
    if (y >= s.size() || !s.arrow(base, y))
        throw std::invalid_argument("entry " + (y < s.size() ? s.id(y) : std::to_string(y)) + " is not coarser than " +
                                    s.id(base));
}

}  // namespace

BarChain bar_generator(const InfoStructure& s, std::size_t base, std::vector<std::size_t> tuple) {
    for (auto y : tuple) check_in_sx(s, base, y);
    BarChain c;
    c.base = base;
    c.degree = static_cast<int>(tuple.size());
    c.add(s.terminal(), std::move(tuple), Rational(1));
    return c;
}

BarChain bar_boundary(const InfoStructure& s, const BarChain& c) {
    if (c.degree < 1) throw std::invalid_argument("boundary of a degree-0 chain");
    BarChain out;
    out.base = c.base;
    out.degree = c.degree - 1;
    const int n = c.degree;
    for (const auto& [key, coef] : c.terms) {
        const auto& [y, t] = key;
        check_in_sx(s, c.base, y);
        for (auto x : t) check_in_sx(s, c.base, x);
        if (static_cast<int>(t.size()) != n) throw std::invalid_argument("term of the wrong degree");
        // Y X1 [X2|...|Xn]
        out.add(*s.meet(y, t[0]), std::vector<std::size_t>(t.begin() + 1, t.end()), coef);
        for (int k = 1; k < n; ++k) {
            std::vector<std::size_t> m(t.begin(), t.begin() + (k - 1));
            m.push_back(*s.meet(t[k - 1], t[k]));
            m.insert(m.end(), t.begin() + k + 1, t.end());
            out.add(y, std::move(m), k % 2 ? -coef : coef);
        }
        out.add(y, std::vector<std::size_t>(t.begin(), t.end() - 1), n % 2 ? -coef : coef);
    }
    return out;
}

Rational augmentation(const BarChain& c) {
    if (c.degree != 0) throw std::invalid_argument("augmentation is defined on degree 0");
    Rational total(0);
    for (const auto& [key, coef] : c.terms) total += coef;
    return total;
}

}  // namespace infocoh
