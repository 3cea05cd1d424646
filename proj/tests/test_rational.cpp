#include <doctest.h>

#include <random>

#include "vcnk/rational.hpp"

using namespace vcnk;

TEST_SUITE("rational") {

TEST_CASE("construction normalizes") {
    CHECK(Rat(BigInt(2), BigInt(4)).str() == "1/2");
    CHECK(Rat(BigInt(-2), BigInt(4)).str() == "-1/2");
    CHECK(Rat(BigInt(2), BigInt(-4)).str() == "-1/2");
    CHECK(Rat(BigInt(0), BigInt(-7)).str() == "0");
    CHECK_THROWS_AS(Rat(BigInt(1), BigInt(0)), DomainError);
}

TEST_CASE("parse and round trip") {
    CHECK(Rat::parse("3/9") == Rat(BigInt(1), BigInt(3)));
    CHECK(Rat::parse("-5") == Rat(-5));
    CHECK(Rat::parse("7/1").str() == "7");
    CHECK_THROWS_AS(Rat::parse("x/y"), ParseError);
}

TEST_CASE("arithmetic agrees with a 64-bit oracle on random small fractions") {
    std::mt19937_64 rng(7);
    auto draw = [&]() {
        long long n = static_cast<long long>(rng() % 41) - 20;
        long long d = 1 + static_cast<long long>(rng() % 20);
        return std::pair<long long, long long>(n, d);
    };
    for (int iter = 0; iter < 2000; ++iter) {
        auto [an, ad] = draw();
        auto [bn, bd] = draw();
        Rat a{BigInt(an), BigInt(ad)};
        Rat b{BigInt(bn), BigInt(bd)};
        // Oracles via cross multiplication, no reduction needed.
        Rat sum = a + b;
        CHECK(sum.num() * (ad * bd) == BigInt(an * bd + bn * ad) * sum.den());
        Rat prod = a * b;
        CHECK(prod.num() * (ad * bd) == BigInt(an * bn) * prod.den());
        CHECK((a < b) == (an * bd < bn * ad));
        if (bn != 0) {
            Rat q = a / b;
            CHECK(q.num() * (ad * bn) == BigInt(an * bd) * q.den());
        }
    }
}

TEST_CASE("floor and ceil") {
    CHECK(Rat(BigInt(7), BigInt(2)).floor() == 3);
    CHECK(Rat(BigInt(7), BigInt(2)).ceil() == 4);
    CHECK(Rat(BigInt(-7), BigInt(2)).floor() == -4);
    CHECK(Rat(BigInt(-7), BigInt(2)).ceil() == -3);
    CHECK(Rat(6).floor() == 6);
    CHECK(Rat(6).ceil() == 6);
}

TEST_CASE("pow") {
    CHECK(Rat(BigInt(2), BigInt(3)).pow(3) == Rat(BigInt(8), BigInt(27)));
    CHECK(Rat(BigInt(5), BigInt(7)).pow(0) == Rat(1));
}

TEST_CASE("division by zero is rejected") {
    CHECK_THROWS_AS(Rat(1) / Rat(0), DomainError);
}

TEST_CASE("large denominators stay exact") {
    // Products of 21 factors of 1/12 and back.
    Rat w(1);
    for (int i = 0; i < 21; ++i) w *= Rat(BigInt(1), BigInt(12));
    Rat back = w;
    for (int i = 0; i < 21; ++i) back *= Rat(12);
    CHECK(back == Rat(1));
    CHECK(w.to_double() == doctest::Approx(std::pow(12.0, -21.0)));
}

}  // TEST_SUITE
