// ============================================================================
// idm/money.hpp — exact rational money amounts
// ============================================================================
//
// Every monetary quantity in the toolkit (debt amounts, cash assets, payments,
// bailouts, LP coefficients) is an exact rational. Floating point is never
// used: schedule validity and LP optimality are certification problems and a
// tolerance would make the verdicts meaningless.
//
// The value is kept in lowest terms with a positive denominator. A Money is
// "integral" when its denominator is 1; debt amounts and initial assets are
// required to be integral, payments are integral in the PP variant only.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace idm {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

class Money {
  public:
    Money() = default;
    Money(long long v) : v_(v) {}                  // NOLINT: implicit by design
    explicit Money(BigInt v) : v_(std::move(v)) {}
    explicit Money(BigRational v) : v_(std::move(v)) {}

    // num/den, reduced on construction. den must be nonzero.
    static Money ratio(BigInt num, BigInt den) {
        if (den == 0) throw std::invalid_argument("Money: zero denominator");
        return Money(BigRational(std::move(num), std::move(den)));
    }

    // Accepts an optionally signed integer ("30", "-4") or a fraction
    // ("7/3", "-1/6"). Anything else yields nullopt.
    static std::optional<Money> parse(std::string_view text);

    [[nodiscard]] bool is_integral() const { return denominator(v_) == 1; }
    [[nodiscard]] bool is_zero() const { return v_.is_zero(); }
    [[nodiscard]] bool is_negative() const { return v_ < 0; }
    [[nodiscard]] bool is_positive() const { return v_ > 0; }

    [[nodiscard]] BigInt num() const { return numerator(v_); }
    [[nodiscard]] BigInt den() const { return denominator(v_); }
    [[nodiscard]] const BigRational& value() const { return v_; }

    // Integral value as a BigInt; the value must be integral.
    [[nodiscard]] BigInt to_integer() const {
        if (!is_integral()) throw std::logic_error("Money: not integral");
        return numerator(v_);
    }

    // Integral value as long long; must be integral and in range.
    [[nodiscard]] long long to_int64() const {
        BigInt n = to_integer();
        if (n > (std::numeric_limits<long long>::max)() ||
            n < (std::numeric_limits<long long>::min)())
            throw std::overflow_error("Money: out of int64 range");
        return static_cast<long long>(n);
    }

    // "5" for integral values, "num/den" otherwise.
    [[nodiscard]] std::string str() const {
        std::string s = numerator(v_).str();
        if (!is_integral()) s += "/" + denominator(v_).str();
        return s;
    }

    Money& operator+=(const Money& o) { v_ += o.v_; return *this; }
    Money& operator-=(const Money& o) { v_ -= o.v_; return *this; }
    Money& operator*=(const Money& o) { v_ *= o.v_; return *this; }
    Money& operator/=(const Money& o) {
        if (o.v_.is_zero()) throw std::domain_error("Money: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Money operator+(Money a, const Money& b) { return a += b; }
    friend Money operator-(Money a, const Money& b) { return a -= b; }
    friend Money operator*(Money a, const Money& b) { return a *= b; }
    friend Money operator/(Money a, const Money& b) { return a /= b; }
    friend Money operator-(const Money& a) { return Money(BigRational(-a.v_)); }

    friend bool operator==(const Money& a, const Money& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Money& a, const Money& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Money& m) {
        return os << m.str();
    }

  private:
    BigRational v_;
};

inline std::optional<Money> Money::parse(std::string_view text) {
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            if (!is_int(text)) return std::nullopt;
            return Money(BigInt(std::string(text)));
        }
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        BigInt d{std::string(den)};
        if (d == 0) return std::nullopt;
        return Money::ratio(BigInt(std::string(num)), std::move(d));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline Money abs(const Money& m) { return m.is_negative() ? -m : m; }
inline Money min(const Money& a, const Money& b) { return a < b ? a : b; }
inline Money max(const Money& a, const Money& b) { return a < b ? b : a; }

} // namespace idm
