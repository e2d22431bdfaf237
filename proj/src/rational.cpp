#include "bmgame/rational.hpp"

#include "bmgame/error.hpp"

#include <cctype>

namespace bmg {

namespace {

bool is_integer_text(std::string_view s)
{
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    auto num = text.substr(0, slash);
    auto den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den)) {
        throw Error(ErrorKind::Parse, "not a rational: '" + std::string(text) + "'");
    }
    std::string n(num), d(den);
    if (n[0] == '+') n.erase(0, 1);
    if (d[0] == '+') d.erase(0, 1);
    BigInt dz(d);
    if (dz == 0) throw Error(ErrorKind::Parse, "zero denominator: '" + std::string(text) + "'");
    Rational r(BigInt(n), dz);
    r.canonicalize();
    return r;
}

std::string format_rational(const Rational& value)
{
    Rational r = value;
    r.canonicalize();
    return r.get_str();
}

Rational dyadic(unsigned k)
{
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
    return Rational(BigInt(1), den);
}

Rational pow(const Rational& base, unsigned exponent)
{
    Rational result(1);
    for (unsigned i = 0; i < exponent; ++i) result *= base;
    return result;
}

Probability::Probability(Rational value) : value_(std::move(value))
{
    value_.canonicalize();
    if (value_ < 0 || value_ > 1) {
        throw Error(ErrorKind::InvalidArgument, "probability out of range: " + format_rational(value_));
    }
}

} // namespace bmg
