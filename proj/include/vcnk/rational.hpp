#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

#include "vcnk/error.hpp"

namespace vcnk {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. Always normalized: denominator > 0, gcd(|num|, den) = 1.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rat(BigInt n, BigInt d);

    static Rat parse(const std::string& text);  // "p/q" or "p"

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    Rat operator-() const;

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const { return num_ * o.den_ < o.num_ * den_; }
    bool operator<=(const Rat& o) const { return num_ * o.den_ <= o.num_ * den_; }
    bool operator>(const Rat& o) const { return o < *this; }
    bool operator>=(const Rat& o) const { return o <= *this; }

    Rat pow(unsigned e) const;

    // Floor/ceil as big integers.
    BigInt floor() const;
    BigInt ceil() const;

    double to_double() const;
    std::string str() const;  // "p/q", or "p" when integer

private:
    void normalize();

    BigInt num_;
    BigInt den_;
};

std::string to_string(const BigInt& v);

}  // namespace vcnk
