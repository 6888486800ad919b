#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infocoh/exact_real.hpp"
#include "infocoh/linalg.hpp"
#include "infocoh/rational.hpp"

namespace infocoh {

// Reduced rationals in [0,1] with denominator <= N, ascending.
struct FareyGrid {
    int n = 1;
    std::vector<Rational> points;

    explicit FareyGrid(int n);
    std::optional<std::size_t> find(const Rational& q) const;
    std::size_t index_of(const Rational& q) const;
};

struct FunceqRowTag {
    Rational x, y;  // x and y both zero marks a boundary row
    bool boundary = false;
};

// u(1-x) + (1-x)^a u(y/(1-x)) - u(y) - (1-y)^a u((1-x-y)/(1-y)) = 0 on a Farey grid
struct FunceqSystem {
    double alpha = 1.0;
    bool exact = true;
    FareyGrid grid;
    std::vector<FunceqRowTag> tags;
    std::vector<ExactRow> exact_rows;
    std::vector<FloatRow> float_rows;

    std::size_t row_count() const { return tags.size(); }
};

FunceqSystem assemble_funceq_system(double alpha, int n);

// s_alpha(p); the binary Shannon entropy at alpha = 1
double binary_entropy(double alpha, double p);
ExactReal binary_shannon_exact(const Rational& p);

// residual of s_alpha sampled on the grid
struct FunceqResidual {
    double max_abs = 0.0;
    bool exact_zero = true;
};
FunceqResidual funceq_entropy_residual(const FunceqSystem& sys);

struct FunceqDimensions {
    std::size_t unknowns = 0;
    std::size_t rows = 0;
    std::size_t rank = 0;
    std::size_t nullity = 0;
    std::size_t symmetric_nullity = 0;  // after adjoining u(x) = u(1-x)
};
FunceqDimensions funceq_dimensions(const FunceqSystem& sys);

struct ClosedFormReport {
    double alpha = 1.0;
    double k = 1.0;
    std::size_t samples = 0;
    double max_residual = 0.0;
    double u_half = 0.0;
};

// u(x) = K/(2^(1-a)-1) (x^a + (1-x)^a - 1), and K s_1/log 2 at a = 1
double closed_form_solution(double alpha, double k, double x);
ClosedFormReport closed_form_check(double alpha, double k, std::size_t samples, std::uint64_t seed = 1);

struct PropagationAttempt {
    int ambient = 0;
    std::size_t forced = 0;
    bool covered = false;
};

struct PropagationReport {
    double alpha = 1.0;
    int n = 1;
    std::size_t grid_points = 0;
    std::size_t forced = 0;
    bool covered = false;
    int ambient = 0;  // smallest ambient bound found, 0 when inconclusive
    std::vector<PropagationAttempt> attempts;
    std::vector<std::pair<Rational, int>> depth;  // BFS distance from 0 for forced points of F_N
};

// zeros of h = u(x) - u(1-x), propagated from h(0) = 0 inside F_M for M = N, 2N, ..., max_factor*N
PropagationReport symmetry_propagation(double alpha, int n, int max_factor = 64);
// forced-zero points of F_N for a fixed ambient bound
std::vector<Rational> forced_zero(int n, int ambient);

// 2x2 integer matrix with determinant +-1, compared up to sign
struct ProjectiveMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return a * d - b * c; }
    ProjectiveMatrix inverse() const;
    ProjectiveMatrix normalized() const;
    std::string str() const;
    friend ProjectiveMatrix operator*(const ProjectiveMatrix& x, const ProjectiveMatrix& y);
    // equality in the quotient by +-I
    friend bool operator==(const ProjectiveMatrix& x, const ProjectiveMatrix& y) {
        auto p = x.normalized(), q = y.normalized();
        return p.a == q.a && p.b == q.b && p.c == q.c && p.d == q.d;
    }
};

namespace modular {
ProjectiveMatrix S();
ProjectiveMatrix T();
ProjectiveMatrix A();
ProjectiveMatrix B();
ProjectiveMatrix P();
ProjectiveMatrix power(const ProjectiveMatrix& m, int k);
}  // namespace modular

struct IdentityCheck {
    std::string name;
    bool pass = false;
    std::string lhs;
    std::string rhs;
};

struct ModularReport {
    std::vector<IdentityCheck> identities;     // the seven checked identities
    std::vector<IdentityCheck> supplementary;  // further consequences, and the literal B^2 conjugate
    bool all_pass() const;
};

ModularReport modular_group_check();

enum class Letter { A, A_inv, B2, B2_inv };

struct HomographyWord {
    std::vector<Letter> letters;

    ProjectiveMatrix evaluate() const;
    std::string str() const;
};

struct OrbitWitness {
    std::int64_t p = 0, q = 1;
    ProjectiveMatrix g;
    std::string st_word;  // g as a word in S and T
    HomographyWord word;
    bool verified = false;  // word evaluates to g and g [0:1] = [p:q]
};

OrbitWitness orbit_witness(std::int64_t p, std::int64_t q);

}  // namespace infocoh
