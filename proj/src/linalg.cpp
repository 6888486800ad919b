#include "infocoh/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace infocoh {

namespace {

using SparseRow = std::vector<std::pair<std::size_t, mpz_class>>;

struct Echelon {
    std::vector<SparseRow> rows;  // pivot rows, leading entry first, in pivot order
    std::vector<std::size_t> pivot_columns;
    mpz_class last_pivot = 1;
};

// Fraction-free elimination touching only the rows that have an entry in the pivot column.
// A row last updated when the previous pivot was pivots[s] holds the Bareiss values
// scaled by pivots[s] / prev, which is restored before the row is used again.
Echelon sparse_bareiss(const std::vector<ExactRow>& input, std::size_t cols) {
    std::vector<SparseRow> rows;
    rows.reserve(input.size());
    for (const auto& row : input) {
        std::int64_t l = 1;
        for (const auto& [c, v] : row) l = std::lcm(l, v.den());
        std::vector<std::pair<std::size_t, mpz_class>> acc;
        for (const auto& [c, v] : row) {
            if (c >= cols) throw std::out_of_range("row entry beyond the column count");
            acc.emplace_back(c, mpz_class(static_cast<long>(v.num())) * (l / v.den()));
        }
        std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseRow merged;
        for (auto& [c, v] : acc) {
            if (!merged.empty() && merged.back().first == c)
                merged.back().second += v;
            else
                merged.emplace_back(c, std::move(v));
        }
        std::erase_if(merged, [](const auto& e) { return e.second == 0; });
        if (!merged.empty()) rows.push_back(std::move(merged));
    }

    std::vector<std::vector<std::size_t>> lead(cols);
    for (std::size_t i = 0; i < rows.size(); ++i) lead[rows[i].front().first].push_back(i);
    std::vector<std::size_t> stamp(rows.size(), 0);
    std::vector<mpz_class> pivots = {mpz_class(1)};

    auto restore = [&](std::size_t i) {
        const std::size_t now = pivots.size() - 1;
        if (stamp[i] == now) return;
        for (auto& [c, v] : rows[i]) {
            v *= pivots[now];
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), pivots[stamp[i]].get_mpz_t());
        }
        stamp[i] = now;
    };

    Echelon out;
    for (std::size_t c = 0; c < cols; ++c) {
        auto& bucket = lead[c];
        if (bucket.empty()) continue;
        auto best = std::min_element(bucket.begin(), bucket.end(),
                                     [&](std::size_t a, std::size_t b) { return rows[a].size() < rows[b].size(); });
        const std::size_t r = *best;
        std::swap(*best, bucket.back());
        bucket.pop_back();
        restore(r);
        const SparseRow& pr = rows[r];
        const mpz_class piv = pr.front().second;
        const mpz_class& prev = pivots.back();
        for (std::size_t i : bucket) {
            restore(i);
            const SparseRow& row = rows[i];
            const mpz_class f = row.front().second;
            SparseRow next;
            next.reserve(row.size() + pr.size());
            std::size_t a = 1, b = 1;
            while (a < row.size() || b < pr.size()) {
                std::size_t col;
                mpz_class v;
                if (b >= pr.size() || (a < row.size() && row[a].first < pr[b].first)) {
                    col = row[a].first;
                    v = piv * row[a].second;
                    ++a;
                } else if (a >= row.size() || pr[b].first < row[a].first) {
                    col = pr[b].first;
                    v = -f * pr[b].second;
                    ++b;
                } else {
                    col = row[a].first;
                    v = piv * row[a].second - f * pr[b].second;
                    ++a;
                    ++b;
                }
                if (v == 0) continue;
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                next.emplace_back(col, std::move(v));
            }
            rows[i] = std::move(next);
            stamp[i] = pivots.size();  // current once piv is pushed
            if (!rows[i].empty()) lead[rows[i].front().first].push_back(i);
        }
        bucket.clear();
        bucket.shrink_to_fit();
        pivots.push_back(piv);
        out.rows.push_back(pr);
        out.pivot_columns.push_back(c);
    }
    out.last_pivot = pivots.back();
    return out;
}

}  // namespace

BareissResult bareiss_rank(const std::vector<ExactRow>& rows, std::size_t cols) {
    auto e = sparse_bareiss(rows, cols);
    BareissResult res;
    res.rank = e.pivot_columns.size();
    res.pivot_columns = std::move(e.pivot_columns);
    res.last_pivot_bits = mpz_sizeinbase(e.last_pivot.get_mpz_t(), 2);
    return res;
}

ExactNullspace exact_nullspace(const std::vector<ExactRow>& rows, std::size_t cols) {
    auto e = sparse_bareiss(rows, cols);
    ExactNullspace ns;
    ns.rank = e.pivot_columns.size();
    std::vector<char> is_pivot(cols, 0);
    for (auto c : e.pivot_columns) is_pivot[c] = 1;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<mpq_class> v(cols, 0);
        v[f] = 1;
        for (std::size_t k = e.rows.size(); k-- > 0;) {
            const auto& row = e.rows[k];
            if (row.front().first > f) continue;
            mpq_class acc = 0;
            for (std::size_t j = 1; j < row.size(); ++j)
                if (v[row[j].first] != 0) acc += mpq_class(row[j].second) * v[row[j].first];
            if (acc == 0) continue;
            v[row.front().first] = -acc / mpq_class(row.front().second);
        }
        ns.basis.push_back(std::move(v));
    }
    return ns;
}

std::size_t exact_rank_of_vectors(const std::vector<std::vector<mpq_class>>& vectors) {
    if (vectors.empty()) return 0;
    const std::size_t cols = vectors[0].size();
    auto m = vectors;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = m.size();
        for (std::size_t i = r; i < m.size(); ++i)
            if (m[i][c] != 0) {
                p = i;
                break;
            }
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c] == 0) continue;
            const mpq_class f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j)
                if (m[r][j] != 0) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

SvdResult float_nullspace(const std::vector<FloatRow>& rows, std::size_t cols, double relative_threshold) {
    SvdResult res;
    if (cols == 0) return res;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(std::max<std::size_t>(rows.size(), 1)),
                                              static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [c, v] : rows[i]) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) += v;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    res.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double smax = sv.size() ? sv(0) : 0.0;
    res.threshold = relative_threshold * smax;
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > res.threshold && smax > 0) ++rank;
    res.rank = rank;
    const double above = rank > 0 ? sv(static_cast<Eigen::Index>(rank - 1)) : 0.0;
    const double below = static_cast<Eigen::Index>(rank) < sv.size() ? sv(static_cast<Eigen::Index>(rank)) : 0.0;
    res.gap = below > 0 ? above / below : std::numeric_limits<double>::infinity();
    res.gap_warning = res.gap < 1e3;
    const auto& v = svd.matrixV();
    res.null_basis = v.rightCols(static_cast<Eigen::Index>(cols - rank));
    return res;
}

}  // namespace infocoh
