#include "infocoh/exact_real.hpp"

#include <cmath>
#include <stdexcept>

namespace infocoh {

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n <= 0) throw std::domain_error("factorize expects a positive integer");
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

ExactReal ExactReal::log(const Rational& r) {
    if (r.sign() <= 0) throw std::domain_error("log of non-positive rational");
    ExactReal x;
    for (auto [p, e] : factorize(r.num())) x.add_log(p, Rational(e));
    for (auto [p, e] : factorize(r.den())) x.add_log(p, Rational(-e));
    return x;
}

Rational ExactReal::log_coefficient(std::int64_t p) const {
    for (const auto& [q, c] : logs_)
        if (q == p) return c;
    return Rational(0);
}

void ExactReal::add_log(std::int64_t p, const Rational& c) {
    if (c.is_zero()) return;
    auto it = logs_.begin();
    while (it != logs_.end() && it->first < p) ++it;
    if (it != logs_.end() && it->first == p) {
        it->second += c;
        if (it->second.is_zero()) logs_.erase(it);
    } else {
        logs_.insert(it, {p, c});
    }
}

double ExactReal::to_double() const {
    double v = constant_.to_double();
    for (const auto& [p, c] : logs_) v += c.to_double() * std::log(static_cast<double>(p));
    return v;
}

ExactReal ExactReal::operator-() const {
    ExactReal r = *this;
    r.constant_ = -r.constant_;
    for (auto& t : r.logs_) t.second = -t.second;
    return r;
}

ExactReal& ExactReal::operator+=(const ExactReal& o) {
    constant_ += o.constant_;
    if (logs_.empty()) {
        logs_ = o.logs_;
        return *this;
    }
    std::vector<std::pair<std::int64_t, Rational>> merged;
    merged.reserve(logs_.size() + o.logs_.size());
    std::size_t i = 0, j = 0;
    while (i < logs_.size() || j < o.logs_.size()) {
        if (j == o.logs_.size() || (i < logs_.size() && logs_[i].first < o.logs_[j].first)) {
            merged.push_back(logs_[i++]);
        } else if (i == logs_.size() || o.logs_[j].first < logs_[i].first) {
            merged.push_back(o.logs_[j++]);
        } else {
            Rational c = logs_[i].second + o.logs_[j].second;
            if (!c.is_zero()) merged.emplace_back(logs_[i].first, c);
            ++i;
            ++j;
        }
    }
    logs_ = std::move(merged);
    return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& o) { return *this += -o; }

ExactReal& ExactReal::operator*=(const Rational& r) {
    if (r.is_zero()) {
        constant_ = Rational(0);
        logs_.clear();
        return *this;
    }
    constant_ *= r;
    for (auto& t : logs_) t.second *= r;
    return *this;
}

std::string ExactReal::str() const {
    if (logs_.empty()) return constant_.str();
    std::string s;
    if (!constant_.is_zero()) s = constant_.str();
    for (const auto& [p, c] : logs_) {
        if (c.sign() < 0)
            s += "-";
        else if (!s.empty())
            s += "+";
        s += abs(c).str() + "*ln(" + std::to_string(p) + ")";
    }
    return s;
}

ExactReal ExactReal::parse(std::string_view s) {
    ExactReal x;
    std::size_t i = 0;
    auto bad = [&]() { return std::invalid_argument("malformed exact value: '" + std::string(s) + "'"); };
    if (s.empty()) throw bad();
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-') sign = -1;
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-' && s[j] != '*') ++j;
        if (j == i) throw bad();
        Rational c = Rational::parse(s.substr(i, j - i));
        if (sign < 0) c = -c;
        if (j < s.size() && s[j] == '*') {
            if (s.substr(j, 4) != "*ln(") throw bad();
            std::size_t k = s.find(')', j);
            if (k == std::string_view::npos) throw bad();
            Rational p = Rational::parse(s.substr(j + 4, k - j - 4));
            if (p.den() != 1 || p.num() < 2) throw bad();
            auto f = factorize(p.num());
            if (f.size() != 1 || f[0].second != 1) throw bad();
            x.add_log(p.num(), c);
            i = k + 1;
        } else {
            x.constant_ += c;
            i = j;
        }
    }
    return x;
}

}  // namespace infocoh
