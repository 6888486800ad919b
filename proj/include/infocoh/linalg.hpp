#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "infocoh/rational.hpp"

namespace infocoh {

using ExactRow = std::vector<std::pair<std::size_t, Rational>>;
using FloatRow = std::vector<std::pair<std::size_t, double>>;

struct BareissResult {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
    std::size_t last_pivot_bits = 0;  // size of the final pivot, a measure of growth
};

// Rank over Q by sparse fraction-free (Bareiss) elimination; rows are scaled to integers first.
BareissResult bareiss_rank(const std::vector<ExactRow>& rows, std::size_t cols);

struct ExactNullspace {
    std::size_t rank = 0;
    std::vector<std::vector<mpq_class>> basis;  // each of length cols
};

// echelon form from the same elimination; basis vectors have a 1 at their free column and 0 at the others
ExactNullspace exact_nullspace(const std::vector<ExactRow>& rows, std::size_t cols);

std::size_t exact_rank_of_vectors(const std::vector<std::vector<mpq_class>>& vectors);

struct SvdResult {
    std::size_t rank = 0;
    std::vector<double> singular_values;
    double threshold = 0.0;
    double gap = 0.0;  // sigma_rank-1 / sigma_rank, infinite when no small singular value
    bool gap_warning = false;
    Eigen::MatrixXd null_basis;  // orthonormal columns
};

SvdResult float_nullspace(const std::vector<FloatRow>& rows, std::size_t cols, double relative_threshold = 1e-8);

}  // namespace infocoh
