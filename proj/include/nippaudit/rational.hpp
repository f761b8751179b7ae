#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include <Eigen/Core>

namespace nippaudit {

using Integer = mpz_class;

// Exact rational, always in lowest terms with positive denominator.
// Wraps mpq_class so that arithmetic never yields gmpxx expression
// templates (Eigen needs a plain value type as scalar).
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT: implicit by design of a numeric type
    Rational(int value) : value_(value) {}   // NOLINT
    Rational(long long value);               // NOLINT
    Rational(const Integer& value) : value_(value) {}  // NOLINT
    Rational(const Integer& num, const Integer& den);
    explicit Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

    // Accepts "a", "-a", "a/b" (b != 0), surrounding whitespace ignored.
    static Rational parse(std::string_view text);

    Integer num() const { return value_.get_num(); }
    Integer den() const { return value_.get_den(); }
    const mpq_class& get() const { return value_; }

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { return Rational(mpq_class(-value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    // "a" for integers, "a/b" otherwise.
    std::string to_string() const;
    double to_double() const { return value_.get_d(); }

private:
    mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& r);
Rational pow(const Rational& base, int exponent);

}  // namespace nippaudit

namespace Eigen {

template <>
struct NumTraits<nippaudit::Rational> : GenericNumTraits<nippaudit::Rational> {
    using Real = nippaudit::Rational;
    using NonInteger = nippaudit::Rational;
    using Nested = nippaudit::Rational;
    using Literal = nippaudit::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 40,
        MulCost = 60
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
