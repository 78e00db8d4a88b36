#include "countdown/scalar.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "countdown/errors.hpp"

namespace countdown {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool isInteger(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

mpz_class parseInteger(const std::string& s) {
    if (!isInteger(s)) throw DomainError("not an integer literal: '" + s + "'");
    return mpz_class(s[0] == '+' ? s.substr(1) : s);
}

} // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (sgn(o.v_) == 0) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    const std::string s = trim(text);
    if (const auto e = s.find_first_of("eE"); e != std::string::npos && s.find('/') == std::string::npos) {
        const std::string expText = s.substr(e + 1);
        if (!isInteger(expText)) throw DomainError("bad exponent in literal: '" + s + "'");
        const long exp = std::stol(expText);
        require(exp >= -4096 && exp <= 4096, "exponent out of range in literal: '" + s + "'");
        const Rational scale = power(Rational(10), std::labs(exp));
        const Rational mant = parse(s.substr(0, e));
        return exp >= 0 ? mant * scale : mant / scale;
    }
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        return Rational(parseInteger(trim(s.substr(0, slash))), parseInteger(trim(s.substr(slash + 1))));
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        std::string intPart = s.substr(0, dot);
        const std::string frac = s.substr(dot + 1);
        if (frac.empty() || !isInteger(frac) || frac[0] == '-' || frac[0] == '+') {
            throw DomainError("bad decimal literal: '" + s + "'");
        }
        bool negative = false;
        if (!intPart.empty() && (intPart[0] == '-' || intPart[0] == '+')) {
            negative = intPart[0] == '-';
            intPart = intPart.substr(1);
        }
        if (intPart.empty()) intPart = "0";
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        mpz_class num = parseInteger(intPart) * den + parseInteger(frac);
        if (negative) num = -num;
        return Rational(num, den);
    }
    return Rational(parseInteger(s), mpz_class(1));
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
    mpf_class f(v_, 256);
    mp_exp_t exp = 0;
    std::string mant = f.get_str(exp, 10, static_cast<std::size_t>(digits));
    if (mant.empty() || mant == "0") return "0";
    bool negative = mant[0] == '-';
    if (negative) mant = mant.substr(1);
    std::ostringstream os;
    if (negative) os << '-';
    os << mant[0];
    if (mant.size() > 1) os << '.' << mant.substr(1);
    if (exp - 1 != 0) os << 'e' << (exp - 1);
    return os.str();
}

Tracked Tracked::ratio(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    const double v = static_cast<double>(num) / static_cast<double>(den);
    // num and den are exact in binary64 up to 2^53; one rounding in the quotient.
    double e = kUnit * std::fabs(v);
    if (std::labs(num) > (1L << 53) || std::labs(den) > (1L << 53)) e *= 3;
    return Tracked(v, e);
}

Tracked Tracked::fromRational(const Rational& r) {
    const double v = r.toDouble();
    return Tracked(v, 2 * kUnit * std::fabs(v));
}

Tracked Tracked::parse(std::string_view text) {
    return fromRational(Rational::parse(text));
}

Tracked& Tracked::operator/=(const Tracked& o) {
    const double denom = std::fabs(o.v_) - o.e_;
    if (o.v_ == 0.0 || denom <= 0.0) throw DomainError("division by a value whose enclosure contains zero");
    const double q = v_ / o.v_;
    const double e = (e_ + std::fabs(q) * o.e_) / denom;
    v_ = q;
    e_ = grow(e) + 2 * kUnit * std::fabs(v_);
    return *this;
}

std::string Tracked::decimal(int digits) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v_);
    return buf;
}

std::string Tracked::str() const { return decimal(17); }

Rational power(const Rational& x, long k) {
    if (k < 0) throw DomainError("negative exponent");
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), x.raw().get_num_mpz_t(), static_cast<unsigned long>(k));
    mpz_pow_ui(den.get_mpz_t(), x.raw().get_den_mpz_t(), static_cast<unsigned long>(k));
    return Rational(num, den);
}

Tracked power(const Tracked& x, long k) {
    if (k < 0) throw DomainError("negative exponent");
    if (k == 0) return Tracked(1.0);
    const double v = std::pow(x.value(), static_cast<double>(k));
    // |d(x^k)/dx| * err(x), evaluated at the worst point of the enclosure.
    const double hi = std::fabs(x.value()) + x.errBound();
    const double propagated =
        x.errBound() == 0.0 ? 0.0 : static_cast<double>(k) * std::pow(hi, static_cast<double>(k - 1)) * x.errBound();
    // glibc pow is accurate to within 1 ulp.
    return Tracked(v, propagated * (1 + 8 * Tracked::kUnit) + 2 * Tracked::kUnit * std::fabs(v));
}

} // namespace countdown
