#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "charsum/polya.hpp"
#include "charsum/short_sums.hpp"

// Dirichlet-kernel subtraction: the bias coefficient alpha over the initial
// Fourier range, the scaled kernel G that soaks up that range, the variance
// deficit E|S-G|^2/H it leaves behind, and the searches that find characters
// biased enough to make the subtraction bite.

namespace charsum {

namespace detail {

inline std::uint64_t kernel_length(std::uint64_t q, std::uint64_t H,
                                   double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("kernel: delta outside (0, 1]");
    if (H < 1 || H > q)
        throw std::invalid_argument("kernel: H outside [1, q]");
    double l = delta * static_cast<double>(q) / static_cast<double>(H);
    if (l < 1.0)
        throw std::invalid_argument("kernel: delta*q/H < 1, empty range");
    return static_cast<std::uint64_t>(l);
}

// sum_{k=1}^{L} e(k*x/q), geometric closed form; x == 0 mod q degenerates
// to L.
inline std::complex<double> dirichlet_kernel(std::uint64_t q, std::uint64_t L,
                                             std::uint64_t x) {
    std::uint64_t r = x % q;
    if (r == 0) return {static_cast<double>(L), 0.0};
    const double pi = std::numbers::pi;
    double t = static_cast<double>(r) / static_cast<double>(q);
    double mag = std::sin(pi * static_cast<double>(L) * t) / std::sin(pi * t);
    return std::polar(1.0, pi * static_cast<double>(L + 1) * t) * mag;
}

}  // namespace detail

struct KernelExperiment {
    std::uint64_t q = 0;
    std::uint64_t char_index = 0;
    std::uint64_t H = 0;
    double delta = 0.0;
    std::uint64_t L = 0;  // floor(delta*q/H)
    std::complex<double> alpha{0.0, 0.0};
    double deficit = 0.0;  // E|S - G|^2 / H
    double gmean = 0.0;    // E|G| / sqrt(H)
};

// Mean of conj(chi(-k)) over 1 <= k <= floor(delta*q/H).
inline std::complex<double> alpha(const Character& chr, std::uint64_t H,
                                  double delta) {
    const std::uint64_t q = chr.q();
    const std::uint64_t L = detail::kernel_length(q, H, delta);
    std::complex<double> acc{0.0, 0.0};
    for (std::uint64_t k = 1; k <= L; ++k)
        acc += std::conj(char_value(chr, -static_cast<std::int64_t>(k % q)));
    return acc / static_cast<double>(L);
}

// G(x) = alpha * tau * (H/q) * sum_{k <= L} e(kx/q), by direct summation.
inline std::complex<double> kernel_G(const Character& chr, std::uint64_t H,
                                     double delta, std::uint64_t x) {
    const std::uint64_t q = chr.q();
    const std::uint64_t L = detail::kernel_length(q, H, delta);
    const std::complex<double> a = alpha(chr, H, delta);
    const std::complex<double> tau = gauss_sum(chr);
    std::complex<double> acc{0.0, 0.0};
    for (std::uint64_t k = 1; k <= L; ++k)
        acc += chr.ctx->unity_q(detail::mulmod(k % q, x % q, q));
    return a * tau * static_cast<double>(H) / static_cast<double>(q) * acc;
}

// All q kernel values via the closed-form geometric sum.
inline std::vector<std::complex<double>> kernel_G_row(const Character& chr,
                                                      std::uint64_t H,
                                                      double delta) {
    const std::uint64_t q = chr.q();
    const std::uint64_t L = detail::kernel_length(q, H, delta);
    const std::complex<double> a = alpha(chr, H, delta);
    const std::complex<double> scale =
        a * gauss_sum(chr) * static_cast<double>(H) / static_cast<double>(q);
    std::vector<std::complex<double>> out(q);
    for (std::uint64_t x = 0; x < q; ++x)
        out[x] = scale * detail::dirichlet_kernel(q, L, x);
    return out;
}

// Residuals (S - G)/sqrt(H) over all start points; the distribution whose
// second moment is the variance deficit.
inline EmpiricalDistribution kernel_residual_distribution(const Character& chr,
                                                          std::uint64_t H,
                                                          double delta) {
    auto s = sliding_sums(chr, H);
    auto g = kernel_G_row(chr, H, delta);
    for (std::uint64_t x = 0; x < s.size(); ++x) s[x] -= g[x];
    DistMeta meta;
    meta.q = chr.q();
    meta.H = H;
    meta.char_index = chr.index;
    return make_distribution(std::move(s),
                             1.0 / std::sqrt(static_cast<double>(H)), meta);
}

// (1/(qH)) sum_x |S(x) - G(x)|^2
inline double variance_deficit(const Character& chr, std::uint64_t H,
                               double delta) {
    return second_moment(kernel_residual_distribution(chr, H, delta));
}

// (1/q) sum_x |G(x)| / sqrt(H)
inline double mean_abs_G(const Character& chr, std::uint64_t H, double delta) {
    auto g = kernel_G_row(chr, H, delta);
    double acc = 0.0;
    for (const auto& v : g) acc += std::abs(v);
    return acc / static_cast<double>(g.size()) /
           std::sqrt(static_cast<double>(H));
}

struct BiasRow {
    std::uint64_t q = 0;
    double bias = 0.0;
};

// Every odd prime in [Qlo, Qhi] with its normalized initial Legendre sum
// (1/x) sum_{n <= x} (n|q), sorted by bias descending (ties by q ascending).
inline std::vector<BiasRow> biased_real_search(std::uint64_t Qlo,
                                               std::uint64_t Qhi,
                                               std::uint64_t x) {
    if (x < 1) throw std::invalid_argument("biased_real_search: x < 1");
    if (Qhi > 10000000ull)
        throw std::invalid_argument("biased_real_search: Qhi above 10^7");
    auto primes = primes_in(Qlo, Qhi);
    std::vector<BiasRow> rows;
    rows.reserve(primes.size());
    for (std::uint64_t q : primes) {
        if (q == 2) continue;
        auto row = legendre_row(q, x);
        std::int64_t s = 0;
        for (std::uint64_t n = 1; n <= x; ++n) s += row[n];
        rows.push_back({q, static_cast<double>(s) / static_cast<double>(x)});
    }
    std::sort(rows.begin(), rows.end(), [](const BiasRow& a, const BiasRow& b) {
        if (a.bias != b.bias) return a.bias > b.bias;
        return a.q < b.q;
    });
    return rows;
}

struct CharBiasRow {
    std::uint64_t index = 0;
    double bias = 0.0;
};

// All non-principal characters mod q whose initial-segment mean bias
// |sum_{n <= x} chi(n)|/x reaches thresh, sorted descending.
inline std::vector<CharBiasRow> biased_complex_search(const PrimeContext& ctx,
                                                      std::uint64_t x,
                                                      double thresh) {
    const std::uint64_t q = ctx.q();
    if (x < 2 || x >= q)
        throw std::invalid_argument("biased_complex_search: need 2 <= x < q");
    if (!(thresh > 0.0))
        throw std::invalid_argument("biased_complex_search: thresh <= 0");
    std::vector<std::uint32_t> dlogs;
    dlogs.reserve(x);
    for (std::uint64_t n = 1; n <= x; ++n)
        if (n % q != 0) dlogs.push_back(ctx.dlog(n));
    std::vector<CharBiasRow> rows;
    for (std::uint64_t a = 1; a + 1 < q; ++a) {
        std::complex<double> s{0.0, 0.0};
        for (std::uint32_t t : dlogs) s += ctx.unity_order(a * t);
        double bias = std::abs(s) / static_cast<double>(x);
        if (bias >= thresh) rows.push_back({a, bias});
    }
    std::sort(rows.begin(), rows.end(),
              [](const CharBiasRow& a, const CharBiasRow& b) {
                  if (a.bias != b.bias) return a.bias > b.bias;
                  return a.index < b.index;
              });
    return rows;
}

}  // namespace charsum
