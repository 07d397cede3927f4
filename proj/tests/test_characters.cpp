#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdint>

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"

using namespace charsum;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("character indices are validated") {
    PrimeContext ctx(11);
    CHECK_NOTHROW(Character(ctx, 0));
    CHECK_NOTHROW(Character(ctx, 9));
    CHECK_THROWS_AS(Character(ctx, 10), std::invalid_argument);

    PrimeContext two(2);
    CHECK_NOTHROW(Character(two, 0));
    CHECK_THROWS_AS(Character(two, 1), std::invalid_argument);
}

TEST_CASE("char_value is the expected root of unity") {
    PrimeContext ctx(541);
    for (std::uint64_t a : {0ull, 1ull, 7ull, 270ull, 539ull}) {
        Character chr(ctx, a);
        // at the generator
        auto z = char_value(chr, static_cast<std::int64_t>(ctx.g()));
        auto w = std::polar(1.0, 2.0 * pi * double(a) / 540.0);
        CHECK(std::abs(z - w) < 1e-12);
        // multiples of q vanish
        CHECK(char_value(chr, 0) == std::complex<double>{0.0, 0.0});
        CHECK(char_value(chr, 541) == std::complex<double>{0.0, 0.0});
        CHECK(char_value(chr, -1082) == std::complex<double>{0.0, 0.0});
        // periodicity, multiplicativity, conjugate pairing
        for (std::int64_t m : {1, 2, 17, 100, 540}) {
            CHECK(std::abs(char_value(chr, m) - char_value(chr, m + 541)) <
                  1e-12);
            CHECK(std::abs(char_value(chr, m) - char_value(chr, m - 541)) <
                  1e-12);
            for (std::int64_t n : {3, 25, 123}) {
                CHECK(std::abs(char_value(chr, m * n) -
                               char_value(chr, m) * char_value(chr, n)) <
                      1e-12);
            }
            if (a > 0) {
                Character conj_chr(ctx, 540 - a);
                CHECK(std::abs(char_value(conj_chr, m) -
                               std::conj(char_value(chr, m))) < 1e-12);
            }
        }
    }
    // principal is 1 away from multiples of q
    Character principal(ctx, 0);
    for (std::int64_t n : {1, 2, 540, 542, -1})
        CHECK(std::abs(char_value(principal, n) -
                       std::complex<double>{1.0, 0.0}) < 1e-15);
}

TEST_CASE("legendre overloads agree and respect quadratic residues") {
    for (std::uint64_t q : {5ull, 7ull, 23ull, 1009ull}) {
        PrimeContext ctx(q);
        for (std::int64_t n = -int64_t(q); n <= std::int64_t(2 * q); ++n) {
            int a = legendre(n, ctx);
            int b = legendre(n, q);
            CHECK(a == b);
            if (n % std::int64_t(q) == 0) {
                CHECK(a == 0);
            } else {
                // residue iff some square hits n mod q
                bool residue = false;
                std::int64_t r = ((n % std::int64_t(q)) + std::int64_t(q)) %
                                 std::int64_t(q);
                for (std::uint64_t s = 1; s < q; ++s)
                    if (std::int64_t(s * s % q) == r) {
                        residue = true;
                        break;
                    }
                CHECK(a == (residue ? 1 : -1));
            }
        }
    }
    CHECK(legendre(-1, 5ull) == 1);
    CHECK(legendre(-1, 7ull) == -1);
    CHECK_THROWS_AS(legendre(3, 2ull), std::invalid_argument);
    CHECK_THROWS_AS(legendre(3, 10ull), std::invalid_argument);
    PrimeContext two(2);
    CHECK_THROWS_AS(legendre(1, two), std::invalid_argument);
}

TEST_CASE("legendre_row matches pointwise evaluation past one period") {
    for (std::uint64_t q : {23ull, 1009ull}) {
        auto row = legendre_row(q, q + 5);
        REQUIRE(row.size() == q + 6);
        for (std::uint64_t n = 1; n <= q + 5; ++n)
            CHECK(row[n] == legendre(static_cast<std::int64_t>(n), q));
    }
}

TEST_CASE("parity splits characters evenly") {
    PrimeContext ctx(11);
    int even = 0, odd = 0;
    for (std::uint64_t a = 0; a <= 9; ++a) {
        Character chr(ctx, a);
        auto p = parity(chr);
        if (a == 0) {
            CHECK(p == Parity::principal);
            continue;
        }
        auto cm1 = char_value(chr, -1);
        if (p == Parity::even) {
            ++even;
            CHECK(std::abs(cm1 - std::complex<double>{1.0, 0.0}) < 1e-12);
        } else {
            ++odd;
            CHECK(std::abs(cm1 - std::complex<double>{-1.0, 0.0}) < 1e-12);
        }
    }
    CHECK(even == 4);
    CHECK(odd == 5);

    // Legendre character parity tracks q mod 4
    PrimeContext c13(13);
    CHECK(parity(Character(c13, 6)) == Parity::even);
    PrimeContext c7(7);
    CHECK(parity(Character(c7, 3)) == Parity::odd);
}

TEST_CASE("gauss sums have modulus sqrt(q) and Legendre closed form") {
    PrimeContext ctx(29);
    CHECK_THROWS_AS(gauss_sum(Character(ctx, 0)), std::invalid_argument);
    for (std::uint64_t a = 1; a <= 27; ++a) {
        auto tau = gauss_sum(Character(ctx, a));
        CHECK(std::abs(std::abs(tau) - std::sqrt(29.0)) < 1e-10);
    }
    // conj character identity tau(conj chi) = chi(-1) conj(tau(chi))
    for (std::uint64_t a = 1; a <= 27; ++a) {
        Character chr(ctx, a), cc(ctx, 28 - a);
        auto lhs = gauss_sum(cc);
        auto rhs = char_value(chr, -1) * std::conj(gauss_sum(chr));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }

    PrimeContext c13(13);
    auto t13 = gauss_sum(Character(c13, 6));
    CHECK(std::abs(t13 - std::complex<double>{std::sqrt(13.0), 0.0}) < 1e-10);
    PrimeContext c7(7);
    auto t7 = gauss_sum(Character(c7, 3));
    CHECK(std::abs(t7 - std::complex<double>{0.0, std::sqrt(7.0)}) < 1e-10);
}

TEST_CASE("partial sums against a direct loop") {
    PrimeContext ctx(31);
    for (std::uint64_t a = 0; a <= 29; ++a) {
        Character chr(ctx, a);
        CHECK(partial_sum(chr, 0) == std::complex<double>{0.0, 0.0});
        for (std::uint64_t x : {1ull, 5ull, 30ull, 31ull, 40ull, 93ull}) {
            std::complex<double> direct{0.0, 0.0};
            for (std::uint64_t n = 1; n <= x; ++n)
                direct += char_value(chr, static_cast<std::int64_t>(n));
            CHECK(std::abs(partial_sum(chr, x) - direct) < 1e-10);
        }
        if (a > 0)
            CHECK(std::abs(partial_sum(chr, 31)) < 1e-10);
        else
            CHECK(std::abs(partial_sum(chr, 31) -
                           std::complex<double>{30.0, 0.0}) < 1e-10);
    }
}

TEST_CASE("orthogonality over characters detects congruence") {
    PrimeContext ctx(13);
    for (std::uint64_t n1 = 1; n1 <= 14; ++n1) {
        for (std::uint64_t n2 = 1; n2 <= 12; ++n2) {
            if (n1 % 13 == 0) continue;
            auto v = orthogonality_sum(ctx, n1, n2);
            double want = (n1 % 13 == n2 % 13) ? 1.0 : 0.0;
            CHECK(std::abs(v - std::complex<double>{want, 0.0}) < 1e-12);
        }
    }
    CHECK_THROWS_AS(orthogonality_sum(ctx, 13, 1), std::invalid_argument);
    CHECK_THROWS_AS(orthogonality_sum(ctx, 1, 26), std::invalid_argument);
}
