#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/rng.hpp"
#include "charsum/short_sums.hpp"

using namespace charsum;

TEST_CASE("sliding sums equal the direct window sum") {
    PrimeContext ctx(31);
    for (std::uint64_t a = 0; a <= 29; ++a) {
        Character chr(ctx, a);
        for (std::uint64_t H : {1ull, 5ull, 31ull}) {
            auto s = sliding_sums(chr, H);
            REQUIRE(s.size() == 31);
            for (std::uint64_t x = 0; x < 31; ++x) {
                std::complex<double> direct{0.0, 0.0};
                for (std::uint64_t n = x + 1; n <= x + H; ++n)
                    direct += char_value(chr, static_cast<std::int64_t>(n));
                CHECK(std::abs(s[x] - direct) < 1e-10);
            }
        }
        CHECK_THROWS_AS(sliding_sums(chr, 0), std::invalid_argument);
        CHECK_THROWS_AS(sliding_sums(chr, 32), std::invalid_argument);
    }
}

TEST_CASE("window variance identity H - H^2/q for non-principal characters") {
    PrimeContext ctx(101);
    for (std::uint64_t a : {1ull, 13ull, 50ull, 99ull}) {
        Character chr(ctx, a);
        for (std::uint64_t H : {1ull, 10ull, 50ull, 101ull}) {
            auto s = sliding_sums(chr, H);
            double acc = 0.0;
            for (auto v : s) acc += std::norm(v);
            acc /= 101.0;
            double want = double(H) - double(H) * double(H) / 101.0;
            CHECK(std::abs(acc - want) < 1e-9);
        }
    }
}

TEST_CASE("distributions require samples and track normalization") {
    DistMeta meta{101, 10, 13};
    CHECK_THROWS_AS(make_distribution({}, 1.0, meta), std::invalid_argument);
    std::vector<std::complex<double>> v{{3.0, 0.0}, {0.0, 4.0}};
    auto d = make_distribution(v, 0.5, meta);
    CHECK(d.normalization == 0.5);
    CHECK(d.meta.q == 101);
    CHECK(d.meta.H == 10);
    CHECK(d.meta.char_index == 13);
    REQUIRE(d.samples.size() == 2);
    CHECK(std::abs(d.samples[0] - std::complex<double>{1.5, 0.0}) < 1e-15);
    CHECK(std::abs(d.samples[1] - std::complex<double>{0.0, 2.0}) < 1e-15);
    CHECK(std::abs(second_moment(d) - (2.25 + 4.0) / 2.0) < 1e-12);
}

TEST_CASE("moments of hand-built samples") {
    DistMeta meta{};
    std::vector<std::complex<double>> v{{1.0, 0.0}, {0.0, 2.0}};
    auto d = make_distribution(v, 1.0, meta);
    // (j,k) = (2,1): mean of v^2 conj(v)
    std::complex<double> want =
        (std::complex<double>{1.0, 0.0} +
         std::complex<double>{0.0, 2.0} * std::complex<double>{0.0, 2.0} *
             std::complex<double>{0.0, -2.0}) /
        2.0;
    CHECK(std::abs(empirical_moment(d, 2, 1) - want) < 1e-12);
    CHECK(std::abs(empirical_moment(d, 0, 0) -
                   std::complex<double>{1.0, 0.0}) < 1e-15);
    CHECK_THROWS_AS(empirical_moment(d, 9, 8), std::invalid_argument);
    CHECK_NOTHROW(empirical_moment(d, 8, 8));
}

TEST_CASE("gaussian moment tables") {
    CHECK(gaussian_moment(0) == 1.0);
    CHECK(gaussian_moment(1) == 0.0);
    CHECK(gaussian_moment(2) == 1.0);
    CHECK(gaussian_moment(3) == 0.0);
    CHECK(gaussian_moment(4) == 3.0);
    CHECK(gaussian_moment(6) == 15.0);
    CHECK(gaussian_moment(8) == 105.0);
    CHECK(complex_gaussian_moment(0, 0) == 1.0);
    CHECK(complex_gaussian_moment(2, 2) == 2.0);
    CHECK(complex_gaussian_moment(3, 3) == 6.0);
    CHECK(complex_gaussian_moment(2, 1) == 0.0);
}

TEST_CASE("normal cdf values") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std::abs(std_normal_cdf(1.96) - 0.9750021048517795) < 1e-12);
    for (double x : {0.3, 1.0, 2.5})
        CHECK(std::abs(std_normal_cdf(-x) - (1.0 - std_normal_cdf(x))) <
              1e-14);
}

TEST_CASE("ks distance on tiny hand cases") {
    DistMeta meta{};
    auto d1 = make_distribution({{0.0, 0.0}}, 1.0, meta);
    CHECK(std::abs(ks_distance(d1, KsTarget::std_normal) - 0.5) < 1e-12);

    auto d2 = make_distribution({{-1.0, 0.0}, {1.0, 0.0}}, 1.0, meta);
    double want = std_normal_cdf(1.0) - 0.5;
    CHECK(std::abs(ks_distance(d2, KsTarget::std_normal) - want) < 1e-12);

    auto bad = make_distribution({{0.0, 1e-8}}, 1.0, meta);
    CHECK_THROWS_AS(ks_distance(bad, KsTarget::std_normal),
                    std::invalid_argument);
    EmpiricalDistribution empty;
    CHECK_THROWS_AS(ks_distance(empty, KsTarget::std_normal),
                    std::invalid_argument);
    CHECK_THROWS_AS(second_moment(empty), std::invalid_argument);
}

TEST_CASE("ks distance calibration on true normal draws") {
    // Box-Muller from the counter RNG; 10^6 draws should sit well under
    // 0.005 if the empirical cdf comparison is right
    const std::size_t n = 1000000;
    std::vector<std::complex<double>> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; i += 2) {
        double u1 = rng::uniform01_open(rng::key(42, 7, i));
        double u2 = rng::uniform01(rng::key(42, 8, i));
        double r = std::sqrt(-2.0 * std::log(u1));
        v.emplace_back(r * std::cos(2.0 * 3.14159265358979323846 * u2), 0.0);
        v.emplace_back(r * std::sin(2.0 * 3.14159265358979323846 * u2), 0.0);
    }
    auto d = make_distribution(v, 1.0, DistMeta{});
    double ks = ks_distance(d, KsTarget::std_normal);
    CHECK(ks < 0.005);
    CHECK(std::abs(second_moment(d) - 1.0) < 0.01);
}

TEST_CASE("second moment gate splits at tau") {
    DistMeta meta{};
    auto unit = make_distribution({{1.0, 0.0}, {1.0, 0.0}}, 1.0, meta);
    CHECK(second_moment_gate(unit, 0.95) == GateVerdict::inconclusive);
    auto small = make_distribution({{0.5, 0.0}}, 1.0, meta);
    CHECK(second_moment_gate(small, 0.95) == GateVerdict::blocked);
    CHECK(second_moment_gate(unit, 0.0) == GateVerdict::inconclusive);
    CHECK_THROWS_AS(second_moment_gate(unit, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(second_moment_gate(unit, -0.01), std::invalid_argument);
}
