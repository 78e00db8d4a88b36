#pragma once

// Two numeric backends used by every formula in the library:
//
//   Rational - arbitrary precision p/q in lowest terms, error bound always 0.
//   Tracked  - IEEE double carrying a conservative absolute error bound.
//
// Formulas are written once as templates constrained by the Scalar concept and
// explicitly instantiated for both backends.

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace countdown {

class Rational {
public:
    static constexpr bool kExact = true;
    static constexpr const char* kBackendName = "exact";

    Rational() = default;
    Rational(long v) : v_(v) {} // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
    Rational(const mpz_class& num, const mpz_class& den);

    /// Accepts "p/q", "p" and finite decimals ("0.25" becomes 1/4).
    static Rational parse(std::string_view text);

    const mpq_class& raw() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    double toDouble() const { return v_.get_d(); }
    /// Upper end of the value's enclosure; identical to the value.
    double upper() const { return toDouble(); }
    Rational err() const { return Rational(0); }
    std::string str() const;
    /// Decimal rendering with the given number of significant digits.
    std::string decimal(int digits = 17) const;

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class v_{0};
};

class Tracked {
public:
    static constexpr bool kExact = false;
    static constexpr const char* kBackendName = "float";
    /// Unit roundoff for round-to-nearest binary64.
    static constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;

    Tracked() = default;
    Tracked(double v) : v_(v) {} // NOLINT(google-explicit-constructor)
    Tracked(double v, double err) : v_(v), e_(err) {}
    /// p/q rounded to double; err covers the rounding.
    static Tracked ratio(long num, long den);
    static Tracked fromRational(const Rational& r);
    /// Decimal or "p/q" literal.
    static Tracked parse(std::string_view text);

    double value() const { return v_; }
    double toDouble() const { return v_; }
    double upper() const { return v_ + e_; }
    double lower() const { return v_ - e_; }
    Tracked err() const { return Tracked(e_); }
    double errBound() const { return e_; }
    std::string str() const;
    std::string decimal(int digits = 17) const;

    Tracked& operator+=(const Tracked& o) {
        v_ += o.v_;
        e_ = grow(e_ + o.e_) + kUnit * std::fabs(v_);
        return *this;
    }
    Tracked& operator-=(const Tracked& o) {
        v_ -= o.v_;
        e_ = grow(e_ + o.e_) + kUnit * std::fabs(v_);
        return *this;
    }
    Tracked& operator*=(const Tracked& o) {
        const double e = std::fabs(v_) * o.e_ + std::fabs(o.v_) * e_ + e_ * o.e_;
        v_ *= o.v_;
        e_ = grow(e) + kUnit * std::fabs(v_);
        return *this;
    }
    Tracked& operator/=(const Tracked& o);

    friend Tracked operator+(Tracked a, const Tracked& b) { return a += b; }
    friend Tracked operator-(Tracked a, const Tracked& b) { return a -= b; }
    friend Tracked operator*(Tracked a, const Tracked& b) { return a *= b; }
    friend Tracked operator/(Tracked a, const Tracked& b) { return a /= b; }
    friend Tracked operator-(const Tracked& a) { return Tracked(-a.v_, a.e_); }

    // Ordering compares stored values only; callers that need certified
    // comparisons use upper()/lower().
    friend bool operator==(const Tracked& a, const Tracked& b) { return a.v_ == b.v_; }
    friend std::partial_ordering operator<=>(const Tracked& a, const Tracked& b) { return a.v_ <=> b.v_; }

private:
    // Error terms are themselves rounded; inflate slightly so the bound stays an upper bound.
    static double grow(double e) { return e * (1.0 + 4.0 * kUnit); }

    double v_ = 0.0;
    double e_ = 0.0;
};

template <class S>
concept Scalar = requires(S a, const S& b) {
    { a + b } -> std::same_as<S>;
    { a - b } -> std::same_as<S>;
    { a * b } -> std::same_as<S>;
    { a / b } -> std::same_as<S>;
    { -a } -> std::same_as<S>;
    { a < b } -> std::convertible_to<bool>;
    { b.toDouble() } -> std::convertible_to<double>;
    { b.upper() } -> std::convertible_to<double>;
    { b.str() } -> std::convertible_to<std::string>;
    { S::kExact } -> std::convertible_to<bool>;
};

/// x^k for k >= 0.
Rational power(const Rational& x, long k);
Tracked power(const Tracked& x, long k);

inline Rational abs(const Rational& x) {
    mpq_class r;
    mpq_abs(r.get_mpq_t(), x.raw().get_mpq_t());
    return Rational(r);
}
inline Tracked abs(const Tracked& x) { return Tracked(std::fabs(x.value()), x.errBound()); }

/// Absolute error bound as a plain double (0 for the exact backend).
inline double errorOf(const Rational&) { return 0.0; }
inline double errorOf(const Tracked& x) { return x.errBound(); }

/// Lower end of the certified enclosure.
inline double lowerOf(const Rational& x) { return x.toDouble(); }
inline double lowerOf(const Tracked& x) { return x.lower(); }

/// The enclosure's upper end as an error-free scalar.
inline Rational upperBound(const Rational& x) { return x; }
inline Tracked upperBound(const Tracked& x) {
    return Tracked(std::nextafter(x.upper(), std::numeric_limits<double>::infinity()));
}

/// a < b for every value in both enclosures.
inline bool certifiedLess(const Rational& a, const Rational& b) { return a < b; }
inline bool certifiedLess(const Tracked& a, const Tracked& b) { return a.upper() < b.lower(); }
inline bool certifiedLessEq(const Rational& a, const Rational& b) { return a <= b; }
inline bool certifiedLessEq(const Tracked& a, const Tracked& b) { return a.upper() <= b.lower(); }

/// Build a scalar from an integer ratio in the given backend.
template <Scalar S>
S ratio(long num, long den) {
    if constexpr (S::kExact) {
        return Rational(num, den);
    } else {
        return Tracked::ratio(num, den);
    }
}

/// Convert a rational literal into the requested backend.
template <Scalar S>
S fromRational(const Rational& r) {
    if constexpr (S::kExact) {
        return r;
    } else {
        return Tracked::fromRational(r);
    }
}

/// Default truncation tolerance for certified infinite products and pmf tails.
template <Scalar S>
S defaultTol() {
    if constexpr (S::kExact) {
        return Rational(mpz_class(1), mpz_class("1000000000000"));
    } else {
        return Tracked(1e-12);
    }
}

/// A stored value plus a certified bound on its distance to the true quantity.
template <Scalar S>
struct Bounded {
    S value;
    S slack;
};

} // namespace countdown
