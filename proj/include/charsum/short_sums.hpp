#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "charsum/characters.hpp"

namespace charsum {

// Sliding window sums S_{chi,H}(x) = sum_{x < n <= x+H} chi(n), one entry
// per start point x in {0..q-1}.  One prefix pass over two periods; the
// window wraps through n = q where chi vanishes.
inline std::vector<std::complex<double>> sliding_sums(const Character& chr,
                                                      std::uint64_t H) {
    const std::uint64_t q = chr.q();
    if (H < 1 || H > q)
        throw std::invalid_argument("sliding_sums: H outside [1, q]");
    std::vector<std::complex<double>> vals(q);
    for (std::uint64_t n = 1; n < q; ++n)
        vals[n] = chr.ctx->unity_order(chr.index * chr.ctx->dlog(n));
    vals[0] = {0.0, 0.0};
    std::vector<std::complex<double>> prefix(2 * q + 1);
    prefix[0] = {0.0, 0.0};
    for (std::uint64_t n = 0; n < 2 * q; ++n)
        prefix[n + 1] = prefix[n] + vals[n % q];
    std::vector<std::complex<double>> out(q);
    for (std::uint64_t x = 0; x < q; ++x)
        out[x] = prefix[x + 1 + H] - prefix[x + 1];
    return out;
}

struct DistMeta {
    std::uint64_t q = 0;
    std::uint64_t H = 0;
    std::uint64_t char_index = 0;
};

// Samples with the scale already applied; `normalization` records that scale
// so reports can state what the values mean.
struct EmpiricalDistribution {
    std::vector<std::complex<double>> samples;
    double normalization = 1.0;
    DistMeta meta;
};

inline EmpiricalDistribution make_distribution(
    std::vector<std::complex<double>> samples, double scale, DistMeta meta) {
    if (samples.empty())
        throw std::invalid_argument("make_distribution: no samples");
    if (scale != 1.0)
        for (auto& v : samples) v *= scale;
    return EmpiricalDistribution{std::move(samples), scale, meta};
}

inline double second_moment(const EmpiricalDistribution& dist) {
    if (dist.samples.empty())
        throw std::invalid_argument("second_moment: empty distribution");
    double acc = 0.0;
    for (const auto& v : dist.samples) acc += std::norm(v);
    return acc / static_cast<double>(dist.samples.size());
}

// mean of V^j * conj(V)^k
inline std::complex<double> empirical_moment(const EmpiricalDistribution& dist,
                                             unsigned j, unsigned k) {
    if (dist.samples.empty())
        throw std::invalid_argument("empirical_moment: empty distribution");
    if (j + k > 16)
        throw std::invalid_argument("empirical_moment: order above cap 16");
    std::complex<double> acc{0.0, 0.0};
    for (const auto& v : dist.samples) {
        std::complex<double> t{1.0, 0.0};
        for (unsigned i = 0; i < j; ++i) t *= v;
        const std::complex<double> c = std::conj(v);
        for (unsigned i = 0; i < k; ++i) t *= c;
        acc += t;
    }
    return acc / static_cast<double>(dist.samples.size());
}

// E Z^j for Z ~ N(0,1): (j-1)!! for even j, 0 for odd.
inline double gaussian_moment(unsigned j) {
    if (j % 2 == 1) return 0.0;
    double r = 1.0;
    for (unsigned m = 1; m < j; m += 2) r *= static_cast<double>(m);
    return r;
}

// E Z^j conj(Z)^k for Z = Z1 + i Z2, Z1, Z2 independent N(0, 1/2):
// k! when j = k, else 0.
inline double complex_gaussian_moment(unsigned j, unsigned k) {
    if (j != k) return 0.0;
    double r = 1.0;
    for (unsigned m = 2; m <= k; ++m) r *= static_cast<double>(m);
    return r;
}

inline double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

enum class KsTarget { std_normal };

// Two-sided Kolmogorov distance of the (real) sample law from the target.
inline double ks_distance(const EmpiricalDistribution& dist, KsTarget target) {
    (void)target;  // single target for now
    if (dist.samples.empty())
        throw std::invalid_argument("ks_distance: empty distribution");
    std::vector<double> xs;
    xs.reserve(dist.samples.size());
    for (const auto& v : dist.samples) {
        if (std::abs(v.imag()) >= 1e-9)
            throw std::invalid_argument("ks_distance: samples not real");
        xs.push_back(v.real());
    }
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = std_normal_cdf(xs[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

enum class GateVerdict { blocked, inconclusive };

// Second-moment obstruction: mean |V|^2 <= tau < 1 rules out convergence to
// any unit-second-moment limit along a sequence with this bound.
inline GateVerdict second_moment_gate(const EmpiricalDistribution& dist,
                                      double tau) {
    if (!(tau >= 0.0 && tau < 1.0))
        throw std::invalid_argument("second_moment_gate: need 0 <= tau < 1");
    return second_moment(dist) <= tau ? GateVerdict::blocked
                                      : GateVerdict::inconclusive;
}

}  // namespace charsum
