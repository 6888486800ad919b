#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infocoh/rational.hpp"

namespace infocoh {

// Element of Q + sum_p Q*log(p) over primes p. Closed under addition and
// rational scaling; log(prime) are linearly independent over Q, so equality
// here is equality of real numbers.
class ExactReal {
public:
    ExactReal() = default;
    ExactReal(const Rational& r) : constant_(r) {}
    ExactReal(std::int64_t n) : constant_(n) {}

    // log(r) for positive rational r.
    static ExactReal log(const Rational& r);

    const Rational& constant() const { return constant_; }
    const std::vector<std::pair<std::int64_t, Rational>>& log_terms() const { return logs_; }
    // coefficient of log(p)
    Rational log_coefficient(std::int64_t p) const;

    bool is_zero() const { return constant_.is_zero() && logs_.empty(); }
    bool is_rational() const { return logs_.empty(); }
    double to_double() const;

    ExactReal operator-() const;
    ExactReal& operator+=(const ExactReal& o);
    ExactReal& operator-=(const ExactReal& o);
    ExactReal& operator*=(const Rational& r);

    friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
    friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
    friend ExactReal operator*(ExactReal a, const Rational& r) { return a *= r; }
    friend ExactReal operator*(const Rational& r, ExactReal a) { return a *= r; }
    friend bool operator==(const ExactReal& a, const ExactReal& b) {
        return a.constant_ == b.constant_ && a.logs_ == b.logs_;
    }

    // "3/4+1/2*ln(2)-1/3*ln(3)"; pure rationals print as "num/den".
    std::string str() const;
    static ExactReal parse(std::string_view s);

private:
    void add_log(std::int64_t p, const Rational& c);

    Rational constant_;
    std::vector<std::pair<std::int64_t, Rational>> logs_;  // sorted by prime, nonzero coefficients
};

// Prime factorization by trial division, ascending primes with multiplicity.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

}  // namespace infocoh
