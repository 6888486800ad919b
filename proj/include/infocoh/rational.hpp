#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace infocoh {

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// int64 fraction in lowest terms with positive denominator.
// Intermediate products go through __int128; results that do not fit throw.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return (num_ > 0) - (num_ < 0); }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    // "num/den", always with the slash.
    std::string str() const;
    // Accepts "n", "n/d", surrounding whitespace.
    static Rational parse(std::string_view s);

private:
    static Rational from_wide(__int128 n, __int128 d);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

Rational abs(const Rational& r);

}  // namespace infocoh

template <>
struct std::hash<infocoh::Rational> {
    std::size_t operator()(const infocoh::Rational& r) const noexcept {
        return std::hash<std::int64_t>{}(r.num()) * 1000003u ^ std::hash<std::int64_t>{}(r.den());
    }
};
