#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bmg {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", "p" or a plain decimal integer. Throws Error(Parse).
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

/// 2^-k as an exact rational.
Rational dyadic(unsigned k);

Rational pow(const Rational& base, unsigned exponent);

/// Value in [0,1], checked at construction.
class Probability {
public:
    Probability() = default;
    explicit Probability(Rational value);

    const Rational& value() const noexcept { return value_; }
    double to_double() const { return value_.get_d(); }

    friend bool operator==(const Probability& a, const Probability& b) { return a.value_ == b.value_; }

private:
    Rational value_{0};
};

} // namespace bmg
