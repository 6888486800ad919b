#pragma once

#include <random>
#include <string>
#include <vector>

#include <cmath>
#include <functional>

#include "infocoh/cochain.hpp"
#include "infocoh/spec_io.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(INFOCOH_DATA_DIR) + "/" + name + ".json"; }

inline infocoh::ParsedSpec load_data(const std::string& name) { return infocoh::load_spec(data_path(name)); }

// closed concrete structures on 3 or 4 points that pass every axiom
inline std::vector<infocoh::InfoStructure> random_structures(std::size_t count, std::uint64_t seed,
                                                             std::size_t max_objects = 8, std::size_t min_objects = 2) {
    using namespace infocoh;
    std::mt19937_64 rng(seed);
    std::vector<InfoStructure> out;
    while (out.size() < count) {
        const std::size_t m = 3 + rng() % 2;
        std::vector<std::string> omega;
        for (std::size_t i = 0; i < m; ++i) omega.push_back(std::to_string(i));
        const std::size_t k = 1 + rng() % (min_objects > 4 ? 4 : 3);
        std::vector<std::pair<std::string, Partition>> gens;
        for (std::size_t g = 0; g < k; ++g) {
            std::vector<int> labels(m);
            for (auto& l : labels) l = static_cast<int>(rng() % m);
            Partition p(labels);
            if (p.block_count() < 2) continue;
            gens.emplace_back(std::string(1, static_cast<char>('A' + g)), p);
        }
        if (gens.empty()) continue;
        try {
            auto s = build_concrete_structure(omega, gens, true);
            if (s.size() > max_objects || s.size() < min_objects || !validate_structure(s).all_pass()) continue;
            out.push_back(std::move(s));
        } catch (const StructuralInputError&) {
        }
    }
    return out;
}

inline infocoh::ExactReal scaled(const infocoh::Rational& w, const infocoh::Rational& g, double) {
    return infocoh::ExactReal(g * w);
}
inline double scaled(const infocoh::Rational& w, double g, double alpha) { return std::pow(w.to_double(), alpha) * g; }

// M -> X1 -> 1 on three points: f[M](P) = P(X1=0)^a g(P|X1=0), f[X1] = 0
template <class V, class G>
infocoh::Cochain<V> chain_family(std::shared_ptr<const infocoh::GridContext> ctx, infocoh::AlphaParam alpha,
                                 std::function<G(const infocoh::Rational&, const infocoh::Rational&)> g) {
    using namespace infocoh;
    const std::size_t m = ctx->structure().index_of("M");
    return cochain_from<V>(ctx, alpha, [=](std::size_t obj, std::size_t law) -> V {
        if (obj != m) return V{};
        const auto& w = ctx->laws(m)[law].weights;
        const Rational mass = w[0] + w[1];
        if (mass.is_zero()) return V{};
        return scaled(mass, g(w[0] / mass, w[1] / mass), alpha.value);
    });
}

// diagonal-degenerate example: g(P(x3)) on laws carried by {x3, x4}, {y3, y4} or the diagonal cells
template <class V>
infocoh::Cochain<V> diagonal_injection(std::shared_ptr<const infocoh::GridContext> ctx, infocoh::AlphaParam alpha,
                                       std::function<V(const infocoh::Rational&)> g) {
    using namespace infocoh;
    const auto& s = ctx->structure();
    const std::size_t x = s.index_of("X"), y = s.index_of("Y"), xy = s.index_of("XY");
    const std::size_t c33 = 2 * 4 + 2, c44 = 3 * 4 + 3;
    return cochain_from<V>(ctx, alpha, [=](std::size_t obj, std::size_t law) -> V {
        const auto& w = ctx->laws(obj)[law].weights;
        if (obj == x || obj == y) {
            if (!(w[0] + w[1]).is_zero()) return V{};
            return g(w[2]);
        }
        if (obj == xy) {
            if (!(w[c33] + w[c44] - Rational(1)).is_zero()) return V{};
            return g(w[c33]);
        }
        return V{};
    });
}

}  // namespace testing
