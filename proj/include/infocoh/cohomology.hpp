#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "infocoh/cochain.hpp"
#include "infocoh/linalg.hpp"

namespace infocoh {

struct Unknown {
    std::size_t object = 0;
    std::size_t law = 0;
};

struct RowTag {
    std::size_t y = 0;
    std::size_t z = 0;
    std::size_t law = 0;  // on the meet of y and z
};

// Cocycle equations f[YZ] = f[Z] + Y.f[...] sampled on grid laws.
struct LinearSystem {
    AlphaParam alpha;
    int n = 1;
    bool exact = true;
    std::vector<Unknown> unknowns;
    std::vector<std::size_t> offset;  // first column of each object, npos for the terminal
    std::vector<RowTag> tags;
    std::vector<ExactRow> exact_rows;
    std::vector<FloatRow> float_rows;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t row_count() const { return tags.size(); }
    std::size_t column(std::size_t object, std::size_t law) const;  // npos for the terminal
};

LinearSystem assemble_z1_system(const GridContext& ctx, AlphaParam alpha, Exec exec = Exec::serial);

// unknown vector of a degree-1 cochain, in the column order of the system
std::vector<double> cochain_vector(const LinearSystem& sys, const FloatCochain& f);
std::vector<ExactReal> cochain_vector(const LinearSystem& sys, const ExactCochain& f);

struct SystemResidual {
    double max_abs = 0.0;
    bool exact_zero = true;
    std::size_t worst_row = 0;
};

SystemResidual system_residual(const LinearSystem& sys, const std::vector<double>& x);
SystemResidual system_residual(const LinearSystem& sys, const std::vector<ExactReal>& x);

struct GridDimensions {
    std::size_t unknowns = 0;
    std::size_t rows = 0;
    std::size_t rank = 0;
    std::size_t z1 = 0;
    std::size_t b1 = 0;
    std::size_t h1 = 0;
    bool exact = true;
    double gap = 0.0;
    bool gap_warning = false;
    std::size_t pivot_bits = 0;
};

GridDimensions z1_h1_dimensions(const LinearSystem& sys, const GridContext& ctx);

struct H0Result {
    std::size_t dimension = 0;
    std::string witness;  // constant cochain, or the non-atomic law that kills constants
};

H0Result h0_compute(const GridContext& ctx, AlphaParam alpha);

struct ElementaryBlock {
    std::size_t row = 0;  // position in the ordered array
    std::size_t col = 0;
    std::vector<std::pair<std::size_t, std::size_t>> cells;  // three (x,y) value pairs realizing the simplex
};

struct BlockChain {
    std::vector<std::size_t> x_order;
    std::vector<std::size_t> y_order;
    std::vector<ElementaryBlock> blocks;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> overlaps;  // shared cells of consecutive blocks
};

std::optional<BlockChain> nondegenerate_product_check(const InfoStructure& s, const ProbabilityFunctor& q,
                                                      std::size_t x, std::size_t y, std::uint64_t seed = 1);

// every law of the simplex on `cells` at denominator <= n is the restriction of a grid law of Q on w
bool block_complete_on_grid(const GridContext& ctx, std::size_t w, const std::vector<std::size_t>& cells);

struct H1Prediction {
    enum class Kind { finite, infinite, unknown };
    Kind kind = Kind::unknown;
    std::size_t dimension = 0;
    std::size_t components = 0;
    std::vector<std::pair<std::size_t, BlockChain>> certificates;  // per minimal object
    std::size_t irreducible = 0;
    std::vector<std::size_t> chain;  // objects coarser than the irreducible minimal object, finest first
    std::string witness;             // non-atomic conditioned law
    std::string reason;
};

std::string kind_name(H1Prediction::Kind k);
H1Prediction predict_h1(const InfoStructure& s, const ProbabilityFunctor& q, AlphaParam alpha);

// S_alpha on the objects of one component of S minus the terminal, zero elsewhere
template <class V>
Cochain<V> component_entropy(std::shared_ptr<const GridContext> ctx, AlphaParam alpha,
                             const std::vector<std::size_t>& component);

// S_alpha on laws whose support lies in the image of `cells` (values of w), zero elsewhere
template <class V>
Cochain<V> restricted_entropy(std::shared_ptr<const GridContext> ctx, AlphaParam alpha, std::size_t w,
                              const std::vector<std::size_t>& cells);

struct LambdaFit {
    std::vector<std::vector<std::size_t>> components;
    std::vector<double> lambda;
    double residual = 0.0;
};

template <class V>
LambdaFit fit_entropy_multiples(const Cochain<V>& f);

struct NullspaceExplanation {
    std::size_t nullity = 0;
    std::size_t explained = 0;  // dimension of the entropy span inside the nullspace
    double fraction = 0.0;
    bool entropy_in_nullspace = false;
};

// at alpha = 1 the span uses each log-prime coefficient of every S_1^(c) separately
NullspaceExplanation explain_nullspace(const LinearSystem& sys, const GridContext& ctx);

struct Concordance {
    std::vector<int> bounds;
    std::vector<std::size_t> grid_dims;        // Z1 at each bound
    std::vector<std::size_t> projected_dims;   // rank of the projection to the smallest grid
    bool non_increasing = false;
    bool projections_solve_base = false;
};

// exact, at alpha = 1
Concordance grid_concordance(const InfoStructure& s, const ProbabilityFunctor& q, const std::vector<int>& bounds);

}  // namespace infocoh
