#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "infocoh/probability.hpp"
#include "infocoh/structure.hpp"

namespace infocoh {

class AdaptednessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LawKeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
        std::size_t h = v.size();
        for (auto x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
        return h;
    }
};

// Grid laws of every object at denominator bound N, with precomputed
// marginal and conditional lookups between them.
class GridContext {
public:
    struct Conditional {
        Rational weight;  // P(Y=y)
        std::size_t law;  // index of P|Y=y in the grid of the same object
    };

    GridContext(InfoStructure s, ProbabilityFunctor q, int n);

    const InfoStructure& structure() const { return s_; }
    const ProbabilityFunctor& functor() const { return q_; }
    int n() const { return n_; }

    const std::vector<RationalLaw>& laws(std::size_t object) const { return laws_[object]; }
    std::optional<std::size_t> find(const RationalLaw& p) const;
    std::size_t index_of(const RationalLaw& p) const;  // throws when absent

    // for an arrow from -> to, law index on `from` to the index of its marginal on `to`
    const std::vector<std::size_t>& marginal(std::size_t from, std::size_t to) const;
    // nonzero-mass values y of `by` (coarser than object), with the conditioned laws
    const std::vector<Conditional>& conditional(std::size_t object, std::size_t by, std::size_t law) const;

private:
    std::vector<std::int64_t> scaled(const RationalLaw& p) const;

    InfoStructure s_;
    ProbabilityFunctor q_;
    int n_ = 1;
    std::int64_t scale_ = 1;
    std::vector<std::vector<RationalLaw>> laws_;
    std::vector<std::unordered_map<std::vector<std::int64_t>, std::size_t, LawKeyHash>> index_;
    std::vector<std::vector<std::size_t>> marginal_;                   // from*n+to
    std::vector<std::vector<std::vector<Conditional>>> conditional_;  // object*n+by
};

}  // namespace infocoh
