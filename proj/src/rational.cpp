#include "infocoh/rational.hpp"

#include <charconv>
#include <compare>
#include <limits>

namespace infocoh {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() + 1 &&
           v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (!fits(n) || !fits(d)) throw OverflowError("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    if (den_ == o.den_) {
        *this = from_wide(static_cast<__int128>(num_) + o.num_, den_);
        return *this;
    }
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    *this = from_wide(n, d);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    *this = from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    *this = from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view s) {
    auto trim = [](std::string_view v) {
        while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
        while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
        return v;
    };
    s = trim(s);
    auto to_int = [&](std::string_view v) {
        v = trim(v);
        if (!v.empty() && v.front() == '+') v.remove_prefix(1);
        std::int64_t out = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size() || v.empty())
            throw std::invalid_argument("malformed rational: '" + std::string(s) + "'");
        return out;
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(to_int(s));
    return Rational(to_int(s.substr(0, slash)), to_int(s.substr(slash + 1)));
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace infocoh
