#include "vcnk/rational.hpp"

#include <utility>

namespace vcnk {

namespace mp = boost::multiprecision;

Rat::Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) {
        throw DomainError("rational with zero denominator");
    }
    normalize();
}

void Rat::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = mp::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rat Rat::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(BigInt(text), 1);
        }
        BigInt n(text.substr(0, slash));
        BigInt d(text.substr(slash + 1));
        return Rat(n, d);
    } catch (const std::runtime_error& e) {
        throw ParseError("bad rational literal '" + text + "': " + e.what());
    }
}

Rat Rat::operator+(const Rat& o) const { return Rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
Rat Rat::operator-(const Rat& o) const { return Rat(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
Rat Rat::operator*(const Rat& o) const { return Rat(num_ * o.num_, den_ * o.den_); }

Rat Rat::operator/(const Rat& o) const {
    if (o.num_ == 0) {
        throw DomainError("rational division by zero");
    }
    return Rat(num_ * o.den_, den_ * o.num_);
}

Rat Rat::operator-() const {
    Rat r = *this;
    r.num_ = -r.num_;
    return r;
}

Rat Rat::pow(unsigned e) const {
    Rat acc(1);
    Rat base = *this;
    while (e > 0) {
        if (e & 1u) acc *= base;
        base *= base;
        e >>= 1u;
    }
    return acc;
}

BigInt Rat::floor() const {
    BigInt q = num_ / den_;
    if (num_ < 0 && q * den_ != num_) q -= 1;
    return q;
}

BigInt Rat::ceil() const {
    BigInt q = num_ / den_;
    if (num_ > 0 && q * den_ != num_) q += 1;
    return q;
}

double Rat::to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
}

std::string Rat::str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
}

std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace vcnk
