#include "infocoh/funceq.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace infocoh {

FareyGrid::FareyGrid(int n_) : n(n_) {
    if (n < 1) throw std::invalid_argument("Farey bound must be >= 1");
    for (std::int64_t b = 1; b <= n; ++b)
        for (std::int64_t a = 0; a <= b; ++a)
            if (std::gcd(a, b) == 1) points.emplace_back(a, b);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
}

std::optional<std::size_t> FareyGrid::find(const Rational& q) const {
    auto it = std::lower_bound(points.begin(), points.end(), q);
    if (it == points.end() || !(*it == q)) return std::nullopt;
    return static_cast<std::size_t>(it - points.begin());
}

std::size_t FareyGrid::index_of(const Rational& q) const {
    auto i = find(q);
    if (!i) throw std::out_of_range(q.str() + " is not on the Farey grid of order " + std::to_string(n));
    return *i;
}

FunceqSystem assemble_funceq_system(double alpha, int n) {
    if (n < 2) throw std::invalid_argument("the functional equation needs N >= 2");
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    FunceqSystem sys{alpha, alpha == 1.0, FareyGrid(n), {}, {}, {}};
    const FareyGrid& g = sys.grid;
    auto push_exact = [&](FunceqRowTag tag, std::map<std::size_t, Rational> row) {
        ExactRow r;
        for (auto& [c, v] : row)
            if (!v.is_zero()) r.emplace_back(c, v);
        sys.tags.push_back(tag);
        sys.exact_rows.push_back(std::move(r));
    };
    auto push_float = [&](FunceqRowTag tag, std::map<std::size_t, double> row) {
        FloatRow r;
        for (auto& [c, v] : row)
            if (v != 0.0) r.emplace_back(c, v);
        sys.tags.push_back(tag);
        sys.float_rows.push_back(std::move(r));
    };
    for (const Rational& end : {Rational(0), Rational(1)}) {
        FunceqRowTag tag{end, end, true};
        if (sys.exact)
            push_exact(tag, {{g.index_of(end), Rational(1)}});
        else
            push_float(tag, {{g.index_of(end), 1.0}});
    }
    std::set<std::pair<Rational, Rational>> seen;
    for (std::int64_t b = 1; b <= n; ++b)
        for (std::int64_t a = 0; a < b; ++a)
            for (std::int64_t c = 0; c < b && a + c <= b; ++c) {
                const Rational x(a, b), y(c, b);
                if (!seen.emplace(x, y).second) continue;
                const Rational one(1);
                const Rational u1 = one - x, u2 = y / (one - x), u3 = y, u4 = (one - x - y) / (one - y);
                FunceqRowTag tag{x, y, false};
                if (sys.exact) {
                    std::map<std::size_t, Rational> row;
                    row[g.index_of(u1)] += one;
                    row[g.index_of(u2)] += one - x;
                    row[g.index_of(u3)] -= one;
                    row[g.index_of(u4)] -= one - y;
                    push_exact(tag, std::move(row));
                } else {
                    std::map<std::size_t, double> row;
                    row[g.index_of(u1)] += 1.0;
                    row[g.index_of(u2)] += std::pow((one - x).to_double(), alpha);
                    row[g.index_of(u3)] -= 1.0;
                    row[g.index_of(u4)] -= std::pow((one - y).to_double(), alpha);
                    push_float(tag, std::move(row));
                }
            }
    return sys;
}

double binary_entropy(double alpha, double p) {
    if (alpha == 1.0) {
        double s = 0.0;
        if (p > 0) s -= p * std::log(p);
        if (p < 1) s -= (1 - p) * std::log(1 - p);
        return s;
    }
    return (std::pow(p, alpha) + std::pow(1 - p, alpha) - 1) / (1 - alpha);
}

ExactReal binary_shannon_exact(const Rational& p) {
    ExactReal s;
    const Rational q = Rational(1) - p;
    if (!p.is_zero()) s -= ExactReal::log(p) * p;
    if (!q.is_zero()) s -= ExactReal::log(q) * q;
    return s;
}

FunceqResidual funceq_entropy_residual(const FunceqSystem& sys) {
    FunceqResidual res;
    const auto& pts = sys.grid.points;
    if (sys.exact) {
        std::vector<ExactReal> u;
        for (const auto& p : pts) u.push_back(binary_shannon_exact(p));
        for (const auto& row : sys.exact_rows) {
            ExactReal v;
            for (const auto& [c, a] : row) v += u[c] * a;
            if (!v.is_zero()) res.exact_zero = false;
            res.max_abs = std::max(res.max_abs, std::fabs(v.to_double()));
        }
    } else {
        std::vector<double> u;
        for (const auto& p : pts) u.push_back(binary_entropy(sys.alpha, p.to_double()));
        for (const auto& row : sys.float_rows) {
            double v = 0.0;
            for (const auto& [c, a] : row) v += a * u[c];
            if (v != 0.0) res.exact_zero = false;
            res.max_abs = std::max(res.max_abs, std::fabs(v));
        }
    }
    return res;
}

FunceqDimensions funceq_dimensions(const FunceqSystem& sys) {
    FunceqDimensions d;
    const FareyGrid& g = sys.grid;
    d.unknowns = g.points.size();
    d.rows = sys.row_count();
    if (sys.exact) {
        d.rank = bareiss_rank(sys.exact_rows, d.unknowns).rank;
        auto rows = sys.exact_rows;
        for (std::size_t i = 0; i < g.points.size(); ++i) {
            const std::size_t j = g.index_of(Rational(1) - g.points[i]);
            if (j > i) rows.push_back({{i, Rational(1)}, {j, Rational(-1)}});
        }
        d.symmetric_nullity = d.unknowns - bareiss_rank(rows, d.unknowns).rank;
    } else {
        d.rank = float_nullspace(sys.float_rows, d.unknowns).rank;
        auto rows = sys.float_rows;
        for (std::size_t i = 0; i < g.points.size(); ++i) {
            const std::size_t j = g.index_of(Rational(1) - g.points[i]);
            if (j > i) rows.push_back({{i, 1.0}, {j, -1.0}});
        }
        d.symmetric_nullity = d.unknowns - float_nullspace(rows, d.unknowns).rank;
    }
    d.nullity = d.unknowns - d.rank;
    return d;
}

double closed_form_solution(double alpha, double k, double x) {
    if (alpha == 1.0) return k / std::log(2.0) * binary_entropy(1.0, x);
    return k / (std::pow(2.0, 1 - alpha) - 1) * (std::pow(x, alpha) + std::pow(1 - x, alpha) - 1);
}

ClosedFormReport closed_form_check(double alpha, double k, std::size_t samples, std::uint64_t seed) {
    ClosedFormReport r;
    r.alpha = alpha;
    r.k = k;
    r.samples = samples;
    r.u_half = closed_form_solution(alpha, k, 0.5);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto u = [&](double t) { return closed_form_solution(alpha, k, std::clamp(t, 0.0, 1.0)); };
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = unit(rng);
        const double y = unit(rng) * (1 - x);
        const double lhs = u(x) + std::pow(1 - x, alpha) * u(y / (1 - x));
        const double rhs = u(y) + std::pow(1 - y, alpha) * u(x / (1 - y));
        r.max_residual = std::max(r.max_residual, std::fabs(lhs - rhs));
    }
    return r;
}

namespace {

using Point = std::pair<std::int64_t, std::int64_t>;  // a/b mod 1, 0 <= a < b

Point reduce_mod1(std::int64_t num, std::int64_t den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num /= g;
    den /= g;
    num %= den;
    if (num < 0) num += den;
    if (num == 0) den = 1;
    return {num, den};
}

// zero set of h in Q/Z restricted to denominators <= m, with BFS depth
std::map<Point, int> propagate(int m) {
    std::map<Point, int> depth{{{0, 1}, 0}};
    std::deque<Point> queue{{0, 1}};
    auto visit = [&](Point p, int d) {
        if (p.second > m) return;
        if (depth.emplace(p, d).second) queue.push_back(p);
    };
    while (!queue.empty()) {
        const auto [a, b] = queue.front();
        queue.pop_front();
        const int d = depth[{a, b}] + 1;
        visit(reduce_mod1(-a, b), d);
        // 1/(x+k) for every representative x+k; the homographies 2-1/x and 1/x-1 agree with it mod 1
        for (std::int64_t t = a - (m / b + 1) * b; t <= m; t += b) {
            if (t == 0 || t < -m) continue;
            visit(reduce_mod1(b, t), d);
        }
    }
    return depth;
}

std::vector<std::pair<Rational, int>> forced_on_grid(int n, const std::map<Point, int>& depth) {
    std::vector<std::pair<Rational, int>> out;
    for (const auto& p : FareyGrid(n).points) {
        auto key = reduce_mod1(p.num(), p.den());
        auto it = depth.find(key);
        if (it != depth.end()) out.emplace_back(p, it->second);
    }
    return out;
}

}  // namespace

std::vector<Rational> forced_zero(int n, int ambient) {
    if (ambient < n) throw std::invalid_argument("ambient bound must be at least N");
    std::vector<Rational> out;
    for (auto& [p, d] : forced_on_grid(n, propagate(ambient))) out.push_back(p);
    return out;
}

PropagationReport symmetry_propagation(double alpha, int n, int max_factor) {
    if (n < 1) throw std::invalid_argument("N must be >= 1");
    PropagationReport r;
    r.alpha = alpha;
    r.n = n;
    r.grid_points = FareyGrid(n).points.size();
    for (int f = 1; f <= max_factor; f *= 2) {
        const int m = n * f;
        auto forced = forced_on_grid(n, propagate(m));
        PropagationAttempt at{m, forced.size(), forced.size() == r.grid_points};
        r.attempts.push_back(at);
        r.forced = forced.size();
        r.depth = std::move(forced);
        if (at.covered) {
            r.covered = true;
            r.ambient = m;
            break;
        }
    }
    return r;
}

// ---- modular group ----

ProjectiveMatrix operator*(const ProjectiveMatrix& x, const ProjectiveMatrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

ProjectiveMatrix ProjectiveMatrix::inverse() const {
    const std::int64_t e = det();
    if (e != 1 && e != -1) throw std::domain_error("matrix " + str() + " is not unimodular");
    return {e * d, -e * b, -e * c, e * a};
}

ProjectiveMatrix ProjectiveMatrix::normalized() const {
    const std::int64_t first = a != 0 ? a : (b != 0 ? b : (c != 0 ? c : d));
    if (first < 0) return {-a, -b, -c, -d};
    return *this;
}

std::string ProjectiveMatrix::str() const {
    return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," + std::to_string(d) +
           "]]";
}

namespace modular {
ProjectiveMatrix S() { return {0, -1, 1, 0}; }
ProjectiveMatrix T() { return {1, 1, 0, 1}; }
ProjectiveMatrix A() { return {2, -1, 1, 0}; }
ProjectiveMatrix B() { return {-1, 1, 1, 0}; }
ProjectiveMatrix P() { return {0, 1, -1, 1}; }

ProjectiveMatrix power(const ProjectiveMatrix& m, int k) {
    ProjectiveMatrix base = k < 0 ? m.inverse() : m;
    ProjectiveMatrix out;
    for (int i = 0; i < std::abs(k); ++i) out = out * base;
    return out;
}
}  // namespace modular

bool ModularReport::all_pass() const {
    return std::all_of(identities.begin(), identities.end(), [](const IdentityCheck& c) { return c.pass; });
}

ModularReport modular_group_check() {
    using namespace modular;
    const ProjectiveMatrix I, s = S(), t = T(), a = A(), p = P(), b2 = power(B(), 2);
    const ProjectiveMatrix si = s.inverse(), ti = t.inverse(), ai = a.inverse(), pi = p.inverse(), b2i = b2.inverse();
    auto check = [](std::string name, const ProjectiveMatrix& l, const ProjectiveMatrix& r) {
        return IdentityCheck{std::move(name), l == r, l.str(), r.str()};
    };
    ModularReport rep;
    rep.identities = {
        check("S^2 = I", s * s, I),
        check("(ST)^3 = I", power(s * t, 3), I),
        check("P = S^-1 T^-1", p, si * ti),
        check("P A P^-1 = T^-1", p * a * pi, ti),
        check("P B^-2 P^-1 = [[3,-1],[1,0]]", p * b2i * pi, ProjectiveMatrix{3, -1, 1, 0}),
        check("T = B^2 A^-1 B^-2", t, b2 * ai * b2i),
        check("S = B^2 A B^-2 A^2 B^-2", s, b2 * a * b2i * a * a * b2i),
    };
    rep.supplementary = {
        check("B^2 = [[2,-1],[-1,1]]", b2, ProjectiveMatrix{2, -1, -1, 1}),
        check("B A^-1 = [[-1,1],[0,1]]", B() * ai, ProjectiveMatrix{-1, 1, 0, 1}),
        check("T = P A^-1 P^-1", t, p * ai * pi),
        check("S = P A^3 B^-2 P^-1", s, p * power(a, 3) * b2i * pi),
        check("S = T^-3 P B^-2 P^-1", s, power(t, -3) * p * b2i * pi),
        check("P B^2 P^-1 = [[3,-1],[1,0]]", p * b2 * pi, ProjectiveMatrix{3, -1, 1, 0}),
    };
    return rep;
}

ProjectiveMatrix HomographyWord::evaluate() const {
    using namespace modular;
    const ProjectiveMatrix b2 = power(B(), 2);
    ProjectiveMatrix out;
    for (Letter l : letters) {
        switch (l) {
            case Letter::A:
                out = out * A();
                break;
            case Letter::A_inv:
                out = out * A().inverse();
                break;
            case Letter::B2:
                out = out * b2;
                break;
            case Letter::B2_inv:
                out = out * b2.inverse();
                break;
        }
    }
    return out;
}

std::string HomographyWord::str() const {
    if (letters.empty()) return "I";
    std::string s;
    for (Letter l : letters) {
        if (!s.empty()) s += ' ';
        switch (l) {
            case Letter::A:
                s += "A";
                break;
            case Letter::A_inv:
                s += "A^-1";
                break;
            case Letter::B2:
                s += "B^2";
                break;
            case Letter::B2_inv:
                s += "B^-2";
                break;
        }
    }
    return s;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Letter inverse_of(Letter l) {
    switch (l) {
        case Letter::A:
            return Letter::A_inv;
        case Letter::A_inv:
            return Letter::A;
        case Letter::B2:
            return Letter::B2_inv;
        default:
            return Letter::B2;
    }
}

void push_reduced(std::vector<Letter>& w, Letter l) {
    if (!w.empty() && w.back() == inverse_of(l))
        w.pop_back();
    else
        w.push_back(l);
}

}  // namespace

OrbitWitness orbit_witness(std::int64_t p, std::int64_t q) {
    if (p == 0 && q == 0) throw std::invalid_argument("[0:0] is not a point of the projective line");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("p and q must be coprime");
    OrbitWitness w;
    w.p = p;
    w.q = q;
    std::int64_t x = 0, y = 0;
    if (p == 0) {
        x = q;
        y = 0;
    } else if (q == 0) {
        x = 0;
        y = -p;
    } else {
        const std::int64_t m = p < 0 ? -p : p;
        // x = q^-1 mod |p|
        std::int64_t r0 = ((q % m) + m) % m, r1 = m, s0 = 1, s1 = 0;
        while (r1 != 0) {
            const std::int64_t k = r0 / r1;
            std::tie(r0, r1) = std::make_pair(r1, r0 - k * r1);
            std::tie(s0, s1) = std::make_pair(s1, s0 - k * s1);
        }
        x = m == 1 ? 0 : ((s0 % m) + m) % m;
        y = (x * q - 1) / p;
    }
    w.g = {x, p, y, q};

    // g = T^k1 S T^k2 S ... T^kn up to sign
    std::vector<std::pair<char, std::int64_t>> factors;
    ProjectiveMatrix m = w.g;
    while (m.c != 0) {
        const std::int64_t k = floor_div(m.a, m.c);
        if (k != 0) factors.emplace_back('T', k);
        m.a -= k * m.c;
        m.b -= k * m.d;
        factors.emplace_back('S', 1);
        m = {m.c, m.d, -m.a, -m.b};
    }
    if (m.a * m.b != 0) factors.emplace_back('T', m.a * m.b);

    for (const auto& [f, k] : factors) {
        if (!w.st_word.empty()) w.st_word += ' ';
        w.st_word += f == 'S' ? std::string("S") : "T^" + std::to_string(k);
        if (f == 'S') {
            for (Letter l : {Letter::B2, Letter::A, Letter::B2_inv, Letter::A, Letter::A, Letter::B2_inv})
                push_reduced(w.word.letters, l);
        } else {
            push_reduced(w.word.letters, Letter::B2);
            for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i)
                push_reduced(w.word.letters, k > 0 ? Letter::A_inv : Letter::A);
            push_reduced(w.word.letters, Letter::B2_inv);
        }
    }
    if (w.st_word.empty()) w.st_word = "I";
    const ProjectiveMatrix& g = w.g;
    w.verified = w.word.evaluate() == g && g.det() == 1 && g.b == p && g.d == q;
    return w;
}

}  // namespace infocoh
