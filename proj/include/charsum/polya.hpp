#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "charsum/short_sums.hpp"

// ============================================================================
// Fourier-side machinery: the truncated partial-sum expansion, the window
// form of it for sliding sums, and the reduction to a cosine (or sine) series
// in a single uniform variable theta with coefficients
// a_k = q*sin(pi*k*H/q)/(pi*H*k).
// ============================================================================

namespace charsum {

enum class Flavor { cosine, sine };

// Truncated expansion of sum_{n <= x} chi(n):
//   (tau/2*pi*i) * sum_{0 < |k| <= K} (conj chi(-k)/k) (e(kx/q) - 1).
inline std::complex<double> polya_partial(const Character& chr,
                                          std::uint64_t x, std::uint64_t K) {
    if (chr.index == 0)
        throw std::invalid_argument("polya_partial: principal character");
    if (K < 1) throw std::invalid_argument("polya_partial: K < 1");
    const std::uint64_t q = chr.q();
    const std::complex<double> tau = gauss_sum(chr);
    std::complex<double> acc{0.0, 0.0};
    for (std::uint64_t k = 1; k <= K; ++k) {
        std::uint64_t kr = k % q;
        std::uint64_t kneg = (q - kr) % q;
        std::complex<double> phase =
            chr.ctx->unity_q(detail::mulmod(kr, x % q, q)) - 1.0;
        std::complex<double> phase_neg =
            chr.ctx->unity_q(detail::mulmod(kneg, x % q, q)) - 1.0;
        double kd = static_cast<double>(k);
        acc += std::conj(char_value(chr, -static_cast<std::int64_t>(kr))) / kd * phase;
        acc += std::conj(char_value(chr, static_cast<std::int64_t>(kr))) / (-kd) * phase_neg;
    }
    const std::complex<double> two_pi_i{0.0, 2.0 * std::numbers::pi};
    return tau / two_pi_i * acc;
}

// Full |k| < q/2 window series for S_{chi,H}(x); off from the exact sliding
// sum by the O(log q) truncation error.
inline std::complex<double> window_series(const Character& chr,
                                          std::uint64_t H, std::uint64_t x) {
    if (chr.index == 0)
        throw std::invalid_argument("window_series: principal character");
    const std::uint64_t q = chr.q();
    if (H < 1 || H > q)
        throw std::invalid_argument("window_series: H outside [1, q]");
    const std::complex<double> tau = gauss_sum(chr);
    std::complex<double> acc{0.0, 0.0};
    const std::uint64_t kcap = (q - 1) / 2;
    for (std::uint64_t k = 1; k <= kcap; ++k) {
        double kd = static_cast<double>(k);
        std::complex<double> win = chr.ctx->unity_q(detail::mulmod(k, H % q, q)) - 1.0;
        std::complex<double> win_neg = chr.ctx->unity_q(detail::mulmod(q - k, H % q, q)) - 1.0;
        acc += std::conj(char_value(chr, -static_cast<std::int64_t>(k))) / kd *
               chr.ctx->unity_q(detail::mulmod(k, x % q, q)) * win;
        acc += std::conj(char_value(chr, static_cast<std::int64_t>(k))) / (-kd) *
               chr.ctx->unity_q(detail::mulmod(q - k, x % q, q)) * win_neg;
    }
    const std::complex<double> two_pi_i{0.0, 2.0 * std::numbers::pi};
    return tau / two_pi_i * acc;
}

// Same series evaluated at every start point; the per-k coefficients are
// hoisted so the whole row costs O(q^2) instead of q gauss sums.
inline std::vector<std::complex<double>> window_series_all(const Character& chr,
                                                           std::uint64_t H) {
    if (chr.index == 0)
        throw std::invalid_argument("window_series_all: principal character");
    const std::uint64_t q = chr.q();
    if (H < 1 || H > q)
        throw std::invalid_argument("window_series_all: H outside [1, q]");
    const std::complex<double> tau = gauss_sum(chr);
    const std::complex<double> two_pi_i{0.0, 2.0 * std::numbers::pi};
    const std::uint64_t kcap = (q - 1) / 2;
    // coefficient of e(kx/q), signed k folded to residues k and q-k
    std::vector<std::complex<double>> coef(q, {0.0, 0.0});
    for (std::uint64_t k = 1; k <= kcap; ++k) {
        double kd = static_cast<double>(k);
        coef[k] = tau / two_pi_i *
                  std::conj(char_value(chr, -static_cast<std::int64_t>(k))) / kd *
                  (chr.ctx->unity_q(detail::mulmod(k, H % q, q)) - 1.0);
        coef[q - k] = tau / two_pi_i *
                      std::conj(char_value(chr, static_cast<std::int64_t>(k))) / (-kd) *
                      (chr.ctx->unity_q(detail::mulmod(q - k, H % q, q)) - 1.0);
    }
    std::vector<std::complex<double>> out(q);
    for (std::uint64_t x = 0; x < q; ++x) {
        std::complex<double> s{0.0, 0.0};
        for (std::uint64_t k = 1; k < q; ++k)
            s += coef[k] * chr.ctx->unity_q(k * x % q);
        out[x] = s;
    }
    return out;
}

// Coefficients a_k = ratio*sin(pi*k/ratio)/(pi*k) for 1 <= k < kmax, where
// ratio stands for q/H and kmax = ceil(ratio*log ratio) with ties upward.
// Parametrized by the real ratio so callers that never materialize an
// integer H (exact-bridge comparisons) share one code path.
inline std::vector<double> series_coefficients(double ratio) {
    if (!(ratio >= 3.0))
        throw std::invalid_argument("series_coefficients: ratio below 3");
    double bound = ratio * std::log(ratio);
    std::size_t kmax = static_cast<std::size_t>(std::floor(bound)) + 1;
    std::vector<double> a(kmax - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double k = static_cast<double>(i + 1);
        a[i] = ratio * std::sin(std::numbers::pi * k / ratio) /
               (std::numbers::pi * k);
    }
    return a;
}

struct CosineSeries {
    std::uint64_t q = 0;
    std::uint64_t H = 0;
    double ratio = 0.0;
    std::size_t kmax = 0;  // coeffs cover 1 <= k < kmax
    std::vector<double> coeffs;
    std::vector<std::complex<double>> charvals;  // conj(chi(k))
    Flavor flavor = Flavor::cosine;
    std::uint64_t char_index = 0;
};

inline CosineSeries build_series(const Character& chr, std::uint64_t H,
                                 Flavor flavor) {
    if (chr.index == 0)
        throw std::invalid_argument("build_series: principal character");
    const std::uint64_t q = chr.q();
    if (H < 1 || 3 * H > q)
        throw std::invalid_argument("build_series: need q/H >= 3");
    CosineSeries s;
    s.q = q;
    s.H = H;
    s.ratio = static_cast<double>(q) / static_cast<double>(H);
    s.coeffs = series_coefficients(s.ratio);
    s.kmax = s.coeffs.size() + 1;
    s.charvals.resize(s.coeffs.size());
    for (std::size_t i = 0; i < s.charvals.size(); ++i)
        s.charvals[i] =
            std::conj(char_value(chr, static_cast<std::int64_t>(i + 1)));
    s.flavor = flavor;
    s.char_index = chr.index;
    return s;
}

// sqrt(4H/q) * sum_k a_k conj(chi(k)) w(2*pi*k*theta), w = cos or sin.
inline std::complex<double> series_value(const CosineSeries& s, double theta) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        double ang = 2.0 * std::numbers::pi * static_cast<double>(i + 1) * theta;
        double w = s.flavor == Flavor::cosine ? std::cos(ang) : std::sin(ang);
        acc += s.coeffs[i] * s.charvals[i] * w;
    }
    return std::sqrt(4.0 / s.ratio) * acc;
}

// Exact mean square of the dropped tail kmax <= k < q/2:
//   (2q/pi^2 H) * sum sin^2(pi*k*H/q)/k^2.
inline double series_l2_tail(const Character& chr, std::uint64_t H) {
    if (chr.index == 0)
        throw std::invalid_argument("series_l2_tail: principal character");
    const std::uint64_t q = chr.q();
    if (H < 1 || 3 * H > q)
        throw std::invalid_argument("series_l2_tail: need q/H >= 3");
    double ratio = static_cast<double>(q) / static_cast<double>(H);
    std::size_t kmax =
        static_cast<std::size_t>(std::floor(ratio * std::log(ratio))) + 1;
    double acc = 0.0;
    for (std::uint64_t k = kmax; 2 * k < q; ++k) {
        double sn = std::sin(std::numbers::pi * static_cast<double>(k) *
                             static_cast<double>(H) / static_cast<double>(q));
        acc += sn * sn / (static_cast<double>(k) * static_cast<double>(k));
    }
    return 2.0 * static_cast<double>(q) /
           (std::numbers::pi * std::numbers::pi * static_cast<double>(H)) * acc;
}

// Series sampled on the equispaced grid theta_m = m/M.  The grid integrates
// every trigonometric monomial of frequency below M exactly, so empirical
// (j,k)-moments with (j+k)*(kmax-1) < M coincide with the theta-integrals.
inline EmpiricalDistribution series_distribution(const CosineSeries& s,
                                                 std::uint64_t M) {
    if (M < 2 * s.kmax + 1)
        throw std::invalid_argument("series_distribution: M below 2*kmax+1");
    const double scale = std::sqrt(4.0 / s.ratio);
    std::vector<std::complex<double>> samples(M);
    for (std::uint64_t m = 0; m < M; ++m) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
            std::uint64_t r = (i + 1) * m % M;
            double ang = 2.0 * std::numbers::pi * static_cast<double>(r) /
                         static_cast<double>(M);
            double w = s.flavor == Flavor::cosine ? std::cos(ang) : std::sin(ang);
            acc += s.coeffs[i] * s.charvals[i] * w;
        }
        samples[m] = scale * acc;
    }
    DistMeta meta;
    meta.q = s.q;
    meta.H = s.H;
    meta.char_index = s.char_index;
    return EmpiricalDistribution{std::move(samples), scale, meta};
}

}  // namespace charsum
