#include "opkern/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace opk {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0)
        throw std::invalid_argument("Rational: zero denominator");
    value_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
    value_.canonicalize();
}

Rational Rational::parse(const std::string& text) {
    mpq_class v;
    if (v.set_str(text, 10) != 0)
        throw std::invalid_argument("Rational: cannot parse '" + text + "'");
    if (v.get_den() == 0)
        throw std::invalid_argument("Rational: zero denominator in '" + text + "'");
    v.canonicalize();
    return Rational(v);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.is_zero())
        throw std::domain_error("Rational: division by zero");
    return Rational(mpq_class(value_ / o.value_));
}

Rational Rational::inverse() const {
    if (is_zero())
        throw std::domain_error("Rational: inverse of zero");
    mpq_class inv;
    mpq_inv(inv.get_mpq_t(), value_.get_mpq_t());
    return Rational(inv);
}

std::string Rational::str() const {
    return value_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

}  // namespace opk
