#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace okutsu {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown for malformed numeric text.
class NumberFormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Rational make_rational(std::int64_t num, std::int64_t den = 1)
{
    if (den == 0) throw std::domain_error("zero denominator");
    return Rational(Integer(num), Integer(den));
}

inline Integer floor_of(const Rational& r)
{
    Integer num = boost::multiprecision::numerator(r);
    const Integer den = boost::multiprecision::denominator(r);
    Integer q = num / den;
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

inline bool is_integer(const Rational& r)
{
    return boost::multiprecision::denominator(r) == 1;
}

/// Canonical text form: "n/d" with d > 0 and the fraction in lowest terms.
inline std::string to_string(const Rational& r)
{
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

/// Short form for display: "n" when the denominator is 1.
inline std::string to_display(const Rational& r)
{
    if (is_integer(r)) return boost::multiprecision::numerator(r).str();
    return to_string(r);
}

namespace detail {

inline Integer parse_integer(std::string_view text, std::string_view whole)
{
    std::size_t start = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) start = 1;
    if (start == text.size()) throw NumberFormatError("malformed rational '" + std::string(whole) + "'");
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw NumberFormatError("malformed rational '" + std::string(whole) + "'");
    }
    std::string digits(text.substr(text[0] == '+' ? 1 : 0));
    return Integer(digits);
}

}  // namespace detail

/// Parses "num/den" (den > 0) or a bare integer.
inline Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(detail::parse_integer(text, text));
    Integer num = detail::parse_integer(text.substr(0, slash), text);
    Integer den = detail::parse_integer(text.substr(slash + 1), text);
    if (den <= 0) throw NumberFormatError("denominator must be positive in '" + std::string(text) + "'");
    return Rational(num, den);
}

/// A rational number or the formal value infinity.
class ExtValue {
public:
    ExtValue() = default;
    ExtValue(Rational v) : value_(std::move(v)) {}
    ExtValue(std::int64_t v) : value_(Rational(v)) {}

    static ExtValue infinity()
    {
        ExtValue x;
        x.infinite_ = true;
        return x;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    const Rational& value() const
    {
        if (infinite_) throw std::logic_error("value() on infinity");
        return value_;
    }

    friend ExtValue operator+(const ExtValue& a, const ExtValue& b)
    {
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtValue(a.value_ + b.value_);
    }

    ExtValue& operator+=(const ExtValue& b) { return *this = *this + b; }

    /// Subtracting a finite amount leaves infinity unchanged.
    friend ExtValue operator-(const ExtValue& a, const Rational& b)
    {
        if (a.infinite_) return a;
        return ExtValue(a.value_ - b);
    }

    /// k * v with the convention 0 * infinity = 0 (a factor with exponent 0 is absent).
    friend ExtValue operator*(std::int64_t k, const ExtValue& v)
    {
        if (k < 0) throw std::domain_error("negative multiplier on extended value");
        if (k == 0) return ExtValue(Rational(0));
        if (v.infinite_) return v;
        return ExtValue(v.value_ * k);
    }

    friend bool operator==(const ExtValue& a, const ExtValue& b)
    {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend std::strong_ordering operator<=>(const ExtValue& a, const ExtValue& b)
    {
        if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
        if (a.infinite_) return std::strong_ordering::greater;
        if (b.infinite_) return std::strong_ordering::less;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string str() const { return infinite_ ? "inf" : to_display(value_); }

    friend std::ostream& operator<<(std::ostream& os, const ExtValue& v) { return os << v.str(); }

private:
    Rational value_{0};
    bool infinite_ = false;
};

inline ExtValue parse_ext_value(std::string_view text)
{
    if (text == "inf" || text == "infinity") return ExtValue::infinity();
    return ExtValue(parse_rational(text));
}

}  // namespace okutsu
