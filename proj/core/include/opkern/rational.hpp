#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace opk {

/* Arbitrary-precision rational, always stored canonically (reduced,
 * positive denominator). Thin wrapper over GMP's mpq_class that keeps
 * expression templates out of the public surface. */
class Rational {
public:
    Rational() : value_(0) {}
    Rational(std::int64_t n) : value_(static_cast<long>(n)) {}
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class& v) : value_(v) { value_.canonicalize(); }

    /* Parses "n" or "n/d" with optional leading minus. Throws on junk. */
    static Rational parse(const std::string& text);

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    Rational operator-() const { return Rational(mpq_class(-value_)); }
    Rational operator+(const Rational& o) const { return Rational(mpq_class(value_ + o.value_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(value_ - o.value_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(value_ * o.value_)); }
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }

    Rational inverse() const;

    bool operator==(const Rational& o) const { return value_ == o.value_; }
    bool operator!=(const Rational& o) const { return value_ != o.value_; }
    bool operator<(const Rational& o) const { return value_ < o.value_; }

    /* "7", "-3/4". */
    std::string str() const;

    const mpq_class& raw() const { return value_; }

private:
    mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace opk
