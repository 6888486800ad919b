#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infocoh/rational.hpp"
#include "infocoh/structure.hpp"

namespace infocoh {

struct RationalLaw {
    std::size_t variable = 0;
    std::vector<Rational> weights;

    std::uint64_t support_mask() const;  // requires at most 64 values
    std::size_t support_size() const;
    bool is_dirac() const { return support_size() == 1; }
    // least common denominator of the weights
    std::int64_t common_denominator() const;
    // "w0,w1,..." each as num/den
    std::string key() const;
    friend bool operator==(const RationalLaw& a, const RationalLaw& b) {
        return a.variable == b.variable && a.weights == b.weights;
    }
};

// validates nonnegativity and total mass 1
RationalLaw make_law(std::size_t variable, std::vector<Rational> weights);
RationalLaw parse_law(std::size_t variable, const std::string& key);
RationalLaw dirac(std::size_t variable, std::size_t size, std::size_t at);

// Support-generated subcomplex of the simplex on E(X).
struct SupportComplex {
    bool full = true;
    std::vector<std::uint64_t> maximal;  // bitmasks over value indices, none contained in another

    static SupportComplex all() { return {}; }
    static SupportComplex from_supports(std::vector<std::uint64_t> supports);
    bool admits(std::uint64_t support) const;
    // the maximal supports as index lists (the whole set when full)
    std::vector<std::vector<std::size_t>> faces(std::size_t value_count) const;
};

struct ProbabilityFunctor {
    std::vector<SupportComplex> q;  // per object

    static ProbabilityFunctor full(const InfoStructure& s);
    const SupportComplex& at(std::size_t object) const { return q[object]; }
};

std::vector<RationalLaw> enumerate_grid_laws(std::size_t variable, std::size_t value_count, const SupportComplex& qx,
                                             int n);

RationalLaw marginalize(const RationalLaw& p, const InfoStructure& s, std::size_t target);
// absent when P(Y=y) = 0
std::optional<RationalLaw> condition(const RationalLaw& p, const InfoStructure& s, std::size_t y_var, std::size_t y);

struct AdaptedReport {
    bool conditioning_ok = true;
    bool marginals_ok = true;
    std::string witness;
    std::size_t laws_checked = 0;
    bool ok() const { return conditioning_ok && marginals_ok; }
};

AdaptedReport check_adapted(const InfoStructure& s, const ProbabilityFunctor& q, int n);

}  // namespace infocoh
