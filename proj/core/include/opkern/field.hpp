#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "opkern/rational.hpp"

namespace opk {

/* Exact base field: the rationals or a prime field F_p. All arithmetic is
 * exact; there is no floating point anywhere in the kernel. */
class Field {
public:
    static Field rationals() { return Field(0); }
    static Field prime_field(std::uint64_t p);

    bool is_rationals() const { return p_ == 0; }
    /* 0 for Q, p for F_p. */
    std::uint64_t characteristic() const { return p_; }

    bool operator==(const Field& o) const { return p_ == o.p_; }
    bool operator!=(const Field& o) const { return p_ != o.p_; }

    std::string str() const;

private:
    explicit Field(std::uint64_t p) : p_(p) {}
    std::uint64_t p_;
};

/* Element of Q or of F_p. Carries its field so that mixed-field arithmetic
 * is caught at run time. F_p values are stored as reduced residues. */
class Scalar {
public:
    Scalar() : p_(0), res_(0) {}

    static Scalar of(const Field& f, std::int64_t n);
    static Scalar of(const Field& f, const Rational& r);

    const Field field() const;
    bool is_zero() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const;  // canonical order, for sorted containers

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }

    Scalar inverse() const;

    /* The Q value; throws for F_p scalars. */
    const Rational& rational() const;
    /* The residue in [0, p); throws for Q scalars. */
    std::uint64_t residue() const;

    std::string str() const;

private:
    Scalar(Rational r) : rat_(std::move(r)), p_(0), res_(0) {}
    Scalar(std::uint64_t p, std::uint64_t res) : p_(p), res_(res) {}
    void check_same_field(const Scalar& o) const;

    Rational rat_;
    std::uint64_t p_;    // 0 = rational
    std::uint64_t res_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/* Exact parity sign: (-1)^e as a scalar of f. */
Scalar sign_scalar(const Field& f, long long exponent);

}  // namespace opk
