#pragma once

#include <map>
#include <utility>
#include <vector>

#include "infocoh/rational.hpp"
#include "infocoh/structure.hpp"

namespace infocoh {

// Formal Q-combination of Y[X1|...|Xn] in B_n(X), with Y and all Xi in S_X.
struct BarChain {
    std::size_t base = 0;
    int degree = 0;
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, Rational> terms;

    void add(std::size_t monoid, std::vector<std::size_t> tuple, const Rational& c);
    bool is_zero() const { return terms.empty(); }
};

BarChain bar_generator(const InfoStructure& s, std::size_t base, std::vector<std::size_t> tuple);
BarChain bar_boundary(const InfoStructure& s, const BarChain& c);
// epsilon into the trivial module: every monoid element acts as 1, [ ] goes to 1
Rational augmentation(const BarChain& c);

}  // namespace infocoh
