#include "hk/rational.hpp"

#include <cctype>

namespace hk {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    const std::string shown(text);
    if (s.empty()) throw DomainError("empty rational literal");
    if (s.find_first_of(".eE") != std::string_view::npos) {
        throw DomainError("decimal literal '" + shown + "' is not exact; write it as p/q");
    }

    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string_view num = s;
    std::string_view den = "1";
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den)) {
        throw DomainError("malformed rational literal '" + shown + "'");
    }
    BigInt p(std::string(num), 10);
    BigInt q(std::string(den), 10);
    if (q == 0) throw DomainError("zero denominator in '" + shown + "'");
    Rational value(negative ? BigInt(-p) : p, q);
    value.canonicalize();
    return value;
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational make_rational(long num, long den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_decimal_string(const Rational& value, int digits) {
    // Long division on integers so the display is correctly rounded toward zero.
    BigInt num = abs(value.get_num());
    const BigInt& den = value.get_den();
    BigInt whole = num / den;
    BigInt rem = num % den;
    std::string out = (value < 0 ? "-" : "") + whole.get_str();
    if (digits <= 0) return out;
    out += '.';
    for (int d = 0; d < digits; ++d) {
        rem *= 10;
        BigInt q = rem / den;
        rem %= den;
        out += static_cast<char>('0' + q.get_ui());
    }
    return out;
}

BigInt common_denominator(const std::vector<Rational>& values) {
    BigInt l = 1;
    for (const auto& v : values) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    }
    return l;
}

}  // namespace hk
