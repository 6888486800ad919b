#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "infocoh/exact_real.hpp"
#include "infocoh/exec.hpp"
#include "infocoh/grid.hpp"

namespace infocoh {

struct AlphaParam {
    double value = 1.0;
    bool exact = true;  // exact log-linear arithmetic; only meaningful for value 1

    AlphaParam() = default;
    explicit AlphaParam(double a) : value(a), exact(a == 1.0) {
        if (!(a > 0)) throw std::invalid_argument("alpha must be positive");
    }
    static AlphaParam floating(double a) {
        AlphaParam p(a);
        p.exact = false;
        return p;
    }
};

double entropy(double alpha, const RationalLaw& p);
ExactReal shannon_exact(const RationalLaw& p);

// P(y)^alpha * v
inline ExactReal weighted(const Rational& p, const ExactReal& v, double) { return v * p; }
inline double weighted(const Rational& p, double v, double alpha) {
    return (alpha == 1.0 ? p.to_double() : std::pow(p.to_double(), alpha)) * v;
}
inline double magnitude(const ExactReal& v) { return std::fabs(v.to_double()); }
inline double magnitude(double v) { return std::fabs(v); }
inline bool is_exact_zero(const ExactReal& v) { return v.is_zero(); }
inline bool is_exact_zero(double v) { return v == 0.0; }

class CochainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Jointly local cochain: one table per generator tuple [X1|...|Xn], indexed by
// grid laws of the product X1...Xn.
template <class V>
class Cochain {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Cochain(std::shared_ptr<const GridContext> ctx, AlphaParam alpha, int degree);

    const GridContext& context() const { return *ctx_; }
    const std::shared_ptr<const GridContext>& context_ptr() const { return ctx_; }
    const AlphaParam& alpha() const { return alpha_; }
    int degree() const { return degree_; }

    std::size_t slot_count() const { return products_.size(); }
    // product object of a slot, npos when the tuple has no product
    std::size_t product(std::size_t slot) const { return products_[slot]; }
    std::vector<std::size_t> tuple(std::size_t slot) const;
    std::size_t slot(const std::vector<std::size_t>& tuple) const;
    std::string tuple_name(std::size_t slot) const;

    std::vector<V>& table(std::size_t slot) { return tables_[slot]; }
    const std::vector<V>& table(std::size_t slot) const { return tables_[slot]; }
    V& at(const std::vector<std::size_t>& t, std::size_t law) { return tables_[slot(t)].at(law); }
    const V& at(const std::vector<std::size_t>& t, std::size_t law) const { return tables_[slot(t)].at(law); }

    // value at a law on any object refining the product (joint locality)
    V evaluate(std::size_t slot, std::size_t object, std::size_t law) const;

private:
    std::shared_ptr<const GridContext> ctx_;
    AlphaParam alpha_;
    int degree_ = 0;
    std::vector<std::size_t> products_;
    std::vector<std::vector<V>> tables_;
};

using ExactCochain = Cochain<ExactReal>;
using FloatCochain = Cochain<double>;

// Builders.
template <class V>
Cochain<V> entropy_cochain(std::shared_ptr<const GridContext> ctx, AlphaParam alpha);
template <class V>
Cochain<V> constant_cochain(std::shared_ptr<const GridContext> ctx, AlphaParam alpha, const V& k);
template <class V>
Cochain<V> random_cochain(std::shared_ptr<const GridContext> ctx, AlphaParam alpha, int degree, std::uint64_t seed);
// degree 1 from f(object, law index)
template <class V>
Cochain<V> cochain_from(std::shared_ptr<const GridContext> ctx, AlphaParam alpha,
                        const std::function<V(std::size_t, std::size_t)>& f);

// (Y.f)(P) for a table f over laws of X; Y coarser than X
template <class V>
std::vector<V> monoid_action(const GridContext& ctx, AlphaParam alpha, std::size_t y, const std::vector<V>& f,
                             std::size_t x);

template <class V>
Cochain<V> coboundary(const Cochain<V>& f, Exec exec = Exec::serial, int max_degree = 3);

struct Residual {
    double max_abs = 0.0;
    bool exact_zero = true;
    std::string tuple;
    std::string law;
};

template <class V>
Residual cochain_max(const Cochain<V>& f);
template <class V>
Residual cocycle_residual(const Cochain<V>& f, Exec exec = Exec::serial);

// phi: S -> S' with bijective value maps; f lives on S' (target_ctx), result on S (source_ctx)
template <class V>
Cochain<V> pullback_cochain(const StructureMorphism& phi, std::shared_ptr<const GridContext> source_ctx,
                            const Cochain<V>& f);

template <class V>
Cochain<V> cochain_difference(const Cochain<V>& a, const Cochain<V>& b);

struct SemidirectVerdict {
    bool splitting = false;
    double max_defect = 0.0;
    std::string witness;
    std::size_t samples = 0;
    double cocycle_residual = 0.0;
};

// multiplicativity of X -> (d[X], X) in the square-zero extension
template <class V>
SemidirectVerdict semidirect_check(const Cochain<V>& d, std::size_t trials, std::uint64_t seed, double tol = 1e-12);
// associativity defect of the extension with factor set a = delta g
template <class V>
SemidirectVerdict factor_set_check(const Cochain<V>& g, std::size_t trials, std::uint64_t seed, double tol = 1e-12);

}  // namespace infocoh
