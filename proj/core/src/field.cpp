#include "opkern/field.hpp"

#include <ostream>
#include <stdexcept>

namespace opk {

namespace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // extended Euclid on (a, p), a already reduced and nonzero
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        t -= q * new_t; std::swap(t, new_t);
        r -= q * new_r; std::swap(r, new_r);
    }
    if (r != 1)
        throw std::domain_error("Scalar: not invertible mod p");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

Field Field::prime_field(std::uint64_t p) {
    if (!is_prime(p))
        throw std::invalid_argument("Field: modulus " + std::to_string(p) + " is not prime");
    if (p >= (1ull << 31))
        throw std::invalid_argument("Field: prime modulus too large (must fit in 31 bits)");
    return Field(p);
}

std::string Field::str() const {
    return is_rationals() ? "Q" : "F" + std::to_string(p_);
}

Scalar Scalar::of(const Field& f, std::int64_t n) {
    if (f.is_rationals())
        return Scalar(Rational(n));
    std::uint64_t p = f.characteristic();
    std::int64_t m = n % static_cast<std::int64_t>(p);
    if (m < 0) m += static_cast<std::int64_t>(p);
    return Scalar(p, static_cast<std::uint64_t>(m));
}

Scalar Scalar::of(const Field& f, const Rational& r) {
    if (f.is_rationals())
        return Scalar(r);
    std::uint64_t p = f.characteristic();
    mpz_class num = r.raw().get_num(), den = r.raw().get_den();
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class nm = num % pz, dm = den % pz;
    if (nm < 0) nm += pz;
    if (dm == 0)
        throw std::domain_error("Scalar: denominator vanishes mod p");
    std::uint64_t n = nm.get_ui(), d = dm.get_ui();
    return Scalar(p, n * mod_inverse(d, p) % p);
}

const Field Scalar::field() const {
    return p_ == 0 ? Field::rationals() : Field::prime_field(p_);
}

bool Scalar::is_zero() const {
    return p_ == 0 ? rat_.is_zero() : res_ == 0;
}

void Scalar::check_same_field(const Scalar& o) const {
    if (p_ != o.p_)
        throw std::invalid_argument("Scalar: mixed-field arithmetic (" + field().str() + " vs " + o.field().str() + ")");
}

bool Scalar::operator==(const Scalar& o) const {
    check_same_field(o);
    return p_ == 0 ? rat_ == o.rat_ : res_ == o.res_;
}

bool Scalar::operator<(const Scalar& o) const {
    check_same_field(o);
    return p_ == 0 ? rat_ < o.rat_ : res_ < o.res_;
}

Scalar Scalar::operator-() const {
    return p_ == 0 ? Scalar(-rat_) : Scalar(p_, res_ == 0 ? 0 : p_ - res_);
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same_field(o);
    return p_ == 0 ? Scalar(rat_ + o.rat_) : Scalar(p_, (res_ + o.res_) % p_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same_field(o);
    return p_ == 0 ? Scalar(rat_ - o.rat_) : Scalar(p_, (res_ + p_ - o.res_) % p_);
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same_field(o);
    return p_ == 0 ? Scalar(rat_ * o.rat_) : Scalar(p_, res_ * o.res_ % p_);
}

Scalar Scalar::operator/(const Scalar& o) const {
    return *this * o.inverse();
}

Scalar Scalar::inverse() const {
    if (is_zero())
        throw std::domain_error("Scalar: inverse of zero");
    return p_ == 0 ? Scalar(rat_.inverse()) : Scalar(p_, mod_inverse(res_, p_));
}

const Rational& Scalar::rational() const {
    if (p_ != 0)
        throw std::logic_error("Scalar: rational() on an F_p value");
    return rat_;
}

std::uint64_t Scalar::residue() const {
    if (p_ == 0)
        throw std::logic_error("Scalar: residue() on a rational value");
    return res_;
}

std::string Scalar::str() const {
    return p_ == 0 ? rat_.str() : std::to_string(res_);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << s.str();
}

Scalar sign_scalar(const Field& f, long long exponent) {
    return Scalar::of(f, (exponent % 2 == 0) ? 1 : -1);
}

}  // namespace opk
