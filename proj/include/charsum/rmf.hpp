#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/rng.hpp"

// Random multiplicative functions and their exact-moment machinery.  The
// extended Rademacher function puts i.i.d. +-1 at primes, Steinhaus puts
// i.i.d. unit-circle values; both extend completely multiplicatively, so
// f(p^a) = f(p)^a and f(n) is determined by the prime values below N.

namespace charsum {

enum class RmfKind { extended_rademacher, steinhaus };
enum class Basis { exponential, cosine, sine };

struct RmfSample {
    RmfKind kind;
    std::uint64_t N = 0;
    std::uint64_t seed = 0;
    // values[n] = f(n) for 1 <= n <= N; values[0] unused
    std::vector<std::complex<double>> values;
};

inline RmfSample sample_rmf(RmfKind kind, std::uint64_t N, std::uint64_t seed) {
    if (N < 1 || N > 1000000ull)
        throw std::invalid_argument("sample_rmf: N outside [1, 10^6]");
    RmfSample s;
    s.kind = kind;
    s.N = N;
    s.seed = seed;
    s.values.assign(N + 1, {0.0, 0.0});
    s.values[1] = {1.0, 0.0};
    std::vector<std::uint32_t> spf(N + 1, 0);
    for (std::uint64_t i = 2; i <= N; ++i)
        if (spf[i] == 0)
            for (std::uint64_t m = i; m <= N; m += i)
                if (spf[m] == 0) spf[m] = static_cast<std::uint32_t>(i);
    const std::uint64_t stream = kind == RmfKind::extended_rademacher ? 1 : 2;
    std::uint64_t prime_idx = 0;
    for (std::uint64_t n = 2; n <= N; ++n) {
        if (spf[n] == n) {
            ++prime_idx;
            std::uint64_t bits = rng::key(seed, stream, prime_idx);
            if (kind == RmfKind::extended_rademacher)
                s.values[n] = {static_cast<double>(rng::sign(bits)), 0.0};
            else
                s.values[n] = std::polar(
                    1.0, 2.0 * std::numbers::pi * rng::uniform01(bits));
        } else {
            s.values[n] = s.values[spf[n]] * s.values[n / spf[n]];
        }
    }
    return s;
}

namespace detail {

// prime -> signed exponent bookkeeping across a tuple of entries
inline void add_factors(std::map<std::uint64_t, std::int64_t>& exps,
                        std::uint64_t n, std::int64_t sign) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            exps[p] += sign;
            n /= p;
        }
    }
    if (n > 1) exps[n] += sign;
}

}  // namespace detail

// E[ prod f(m_i) * conj(prod f(n_i)) ], exactly 0 or 1.  Rademacher: 1 iff
// the combined product is a perfect square; Steinhaus: 1 iff the two
// products are equal.  Exponent bookkeeping per prime avoids overflowing
// the literal products.
inline int expected_product(RmfKind kind, std::span<const std::uint64_t> m,
                            std::span<const std::uint64_t> n) {
    std::map<std::uint64_t, std::int64_t> exps;
    for (std::uint64_t e : m) {
        if (e < 1) throw std::invalid_argument("expected_product: entry < 1");
        detail::add_factors(exps, e, 1);
    }
    const std::int64_t nsign =
        kind == RmfKind::extended_rademacher ? 1 : -1;
    for (std::uint64_t e : n) {
        if (e < 1) throw std::invalid_argument("expected_product: entry < 1");
        detail::add_factors(exps, e, nsign);
    }
    for (const auto& [p, c] : exps) {
        if (kind == RmfKind::extended_rademacher) {
            if (c % 2 != 0) return 0;
        } else {
            if (c != 0) return 0;
        }
    }
    return 1;
}

namespace detail {

inline double factorial_d(unsigned k) {
    double r = 1.0;
    for (unsigned i = 2; i <= k; ++i) r *= static_cast<double>(i);
    return r;
}

inline double double_factorial_odd(unsigned p) {
    // (p-1)!! for even p
    double r = 1.0;
    for (unsigned m = 1; m < p; m += 2) r *= static_cast<double>(m);
    return r;
}

// Target subtracted inside the expectation, straight from the probability
// results: exponential basis k!(sum a^2)^k 1_{j=k}; Steinhaus cosine/sine
// k!((1/2) sum a^2)^k 1_{j=k}; Rademacher cosine/sine treats the integrand
// as a single real power p = j+k with main (p-1)!!((1/2) sum a^2)^{p/2}.
inline double moment_main_term(RmfKind kind, Basis basis,
                               std::span<const double> coeffs, unsigned j,
                               unsigned k) {
    double sumsq = 0.0;
    for (double a : coeffs) sumsq += a * a;
    if (basis == Basis::exponential) {
        if (j != k) return 0.0;
        return factorial_d(k) * std::pow(sumsq, static_cast<double>(k));
    }
    if (kind == RmfKind::steinhaus) {
        if (j != k) return 0.0;
        return factorial_d(k) * std::pow(0.5 * sumsq, static_cast<double>(k));
    }
    unsigned p = j + k;
    if (p % 2 != 0) return 0.0;
    return double_factorial_odd(p) *
           std::pow(0.5 * sumsq, static_cast<double>(p) / 2.0);
}

// theta-integral of the product of basis functions with frequencies nu
// (all j+k of them; conjugation never touches the real cosine/sine bases,
// and for the exponential basis the last k frequencies enter negated).
inline double basis_integral(Basis basis, std::span<const std::uint64_t> nu,
                             unsigned j) {
    const unsigned p = static_cast<unsigned>(nu.size());
    if (basis == Basis::exponential) {
        std::int64_t s = 0;
        for (unsigned i = 0; i < p; ++i)
            s += i < j ? static_cast<std::int64_t>(nu[i])
                       : -static_cast<std::int64_t>(nu[i]);
        return s == 0 ? 1.0 : 0.0;
    }
    if (basis == Basis::sine && p % 2 != 0) return 0.0;
    std::int64_t count = 0;
    for (std::uint64_t mask = 0; mask < (1ull << p); ++mask) {
        std::int64_t s = 0;
        int parity = 0;
        for (unsigned i = 0; i < p; ++i) {
            if (mask & (1ull << i)) {
                s += static_cast<std::int64_t>(nu[i]);
            } else {
                s -= static_cast<std::int64_t>(nu[i]);
                ++parity;
            }
        }
        if (s != 0) continue;
        if (basis == Basis::cosine)
            ++count;
        else
            count += (parity % 2 == 0) ? 1 : -1;
    }
    double w = static_cast<double>(count) / std::ldexp(1.0, static_cast<int>(p));
    if (basis == Basis::sine && p % 4 == 2) w = -w;
    return w;
}

}  // namespace detail

// Exact E| int_0^1 P^j conj(P)^k dtheta - main |^2 for
// P(theta) = sum a_n f(n) b(2 pi n theta), by expanding both powers into
// tuples.  Tuples are grouped by the conserved quantity of the f-expectation
// (reduced product ratio for Steinhaus, squarefree part of the combined
// product for Rademacher), so the expectation of the squared modulus is the
// sum of squared group totals with the main term folded into the trivial
// group.
inline double exact_moment_discrepancy(RmfKind kind, Basis basis,
                                       std::span<const double> coeffs,
                                       unsigned j, unsigned k) {
    const std::uint64_t N = coeffs.size();
    if (N < 1 || N > 30)
        throw std::invalid_argument("exact_moment_discrepancy: N outside [1, 30]");
    if (j + k > 4)
        throw std::invalid_argument("exact_moment_discrepancy: j + k above 4");
    const unsigned p = j + k;
    const double main = detail::moment_main_term(kind, basis, coeffs, j, k);
    if (p == 0) {
        double d = 1.0 - main;
        return d * d;
    }
    std::vector<std::uint64_t> sf(N + 1);
    for (std::uint64_t n = 1; n <= N; ++n) sf[n] = squarefree_part(n);

    // key: Steinhaus reduced ratio packed as num * (30^4+1) + den would not
    // fit cleanly; use an ordered map over pairs instead
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> groups;

    std::vector<std::uint64_t> d(p, 1);
    bool done = false;
    while (!done) {
        double w = detail::basis_integral(basis, d, j);
        if (w != 0.0) {
            double amp = w;
            for (unsigned i = 0; i < p; ++i)
                amp *= coeffs[d[i] - 1];
            std::pair<std::uint64_t, std::uint64_t> key;
            if (kind == RmfKind::steinhaus) {
                std::uint64_t num = 1, den = 1;
                for (unsigned i = 0; i < p; ++i)
                    (i < j ? num : den) *= d[i];
                std::uint64_t g = std::gcd(num, den);
                key = {num / g, den / g};
            } else {
                std::uint64_t s = 1;
                for (unsigned i = 0; i < p; ++i) {
                    std::uint64_t b = sf[d[i]];
                    std::uint64_t g = std::gcd(s, b);
                    s = (s / g) * (b / g);
                }
                key = {s, 0};
            }
            groups[key] += amp;
        }
        // odometer, last digit fastest
        done = true;
        for (unsigned i = p; i-- > 0;) {
            if (d[i] < N) {
                ++d[i];
                std::fill(d.begin() + i + 1, d.end(), 1);
                done = false;
                break;
            }
        }
    }

    const std::pair<std::uint64_t, std::uint64_t> trivial =
        kind == RmfKind::steinhaus ? std::pair<std::uint64_t, std::uint64_t>{1, 1}
                                   : std::pair<std::uint64_t, std::uint64_t>{1, 0};
    double acc = 0.0;
    bool saw_trivial = false;
    for (const auto& [key, c] : groups) {
        double v = c;
        if (key == trivial) {
            v -= main;
            saw_trivial = true;
        }
        acc += v * v;
    }
    if (!saw_trivial) acc += main * main;
    return acc;
}

struct McResult {
    double estimate = 0.0;
    double stderr_est = 0.0;
};

// Monte Carlo counterpart: per sample the theta-integral is evaluated by
// equispaced quadrature with M = (j+k)*N + 1 nodes, which integrates the
// degree-(j+k)*N trigonometric polynomial exactly, so the only randomness
// is in f.
inline McResult mc_moment_discrepancy(RmfKind kind, Basis basis,
                                      std::span<const double> coeffs,
                                      unsigned j, unsigned k,
                                      std::uint64_t samples,
                                      std::uint64_t seed) {
    if (samples < 100)
        throw std::invalid_argument("mc_moment_discrepancy: samples < 100");
    const std::uint64_t N = coeffs.size();
    if (N < 1)
        throw std::invalid_argument("mc_moment_discrepancy: empty coefficients");
    const unsigned p = j + k;
    if (p == 0) return {0.0, 0.0};
    const double main = detail::moment_main_term(kind, basis, coeffs, j, k);
    const std::uint64_t M = static_cast<std::uint64_t>(p) * N + 1;

    // node tables: basis value of frequency n at theta = m/M
    std::vector<std::vector<std::complex<double>>> table(
        N + 1, std::vector<std::complex<double>>(M));
    for (std::uint64_t n = 1; n <= N; ++n)
        for (std::uint64_t m = 0; m < M; ++m) {
            double ang = 2.0 * std::numbers::pi *
                         static_cast<double>(n * m % M) / static_cast<double>(M);
            switch (basis) {
                case Basis::exponential:
                    table[n][m] = std::polar(1.0, ang);
                    break;
                case Basis::cosine:
                    table[n][m] = {std::cos(ang), 0.0};
                    break;
                case Basis::sine:
                    table[n][m] = {std::sin(ang), 0.0};
                    break;
            }
        }

    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t s = 1; s <= samples; ++s) {
        RmfSample f = sample_rmf(kind, N, rng::mix64(seed ^ rng::mix64(s)));
        std::complex<double> integral{0.0, 0.0};
        for (std::uint64_t m = 0; m < M; ++m) {
            std::complex<double> val{0.0, 0.0};
            for (std::uint64_t n = 1; n <= N; ++n)
                val += coeffs[n - 1] * f.values[n] * table[n][m];
            std::complex<double> term{1.0, 0.0};
            for (unsigned i = 0; i < j; ++i) term *= val;
            std::complex<double> cv = std::conj(val);
            for (unsigned i = 0; i < k; ++i) term *= cv;
            integral += term;
        }
        integral /= static_cast<double>(M);
        double y = std::norm(integral - main);
        sum += y;
        sumsq += y * y;
    }
    const double n = static_cast<double>(samples);
    double mean = sum / n;
    double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

enum class SetId { A, B, C };
enum class EnumOrder { forward, reversed };

struct TupleCountReport {
    SetId set_id = SetId::A;
    std::uint64_t N = 0;
    unsigned j = 0, J = 0, k = 0, K = 0;
    std::uint64_t total = 0;
    std::uint64_t non_permutation = 0;
    double ratio = 0.0;
};

namespace detail {

inline std::uint64_t checked_pow_budget(std::uint64_t N, unsigned e,
                                        std::uint64_t budget) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > budget / N) return budget + 1;
        r *= N;
    }
    return r;
}

inline std::int64_t signed_sum(std::span<const std::uint64_t> v, unsigned j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += i < j ? static_cast<std::int64_t>(v[i])
                   : -static_cast<std::int64_t>(v[i]);
    return s;
}

// weighted set of a tuple: value -> (count in first j slots) - (count in
// the rest), zero weights discarded; two all-cancelling tuples compare
// equal through the empty map
inline std::map<std::uint64_t, std::int64_t> weighted_set(
    std::span<const std::uint64_t> v, unsigned j) {
    std::map<std::uint64_t, std::int64_t> w;
    for (std::size_t i = 0; i < v.size(); ++i)
        w[v[i]] += i < j ? 1 : -1;
    for (auto it = w.begin(); it != w.end();)
        it = it->second == 0 ? w.erase(it) : std::next(it);
    return w;
}

inline bool is_permutation_of(std::span<const std::uint64_t> a,
                              std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) return false;
    std::vector<std::uint64_t> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

inline bool product_is_square(std::span<const std::uint64_t> v,
                              std::span<const std::uint64_t> w,
                              std::span<const std::uint64_t> sf) {
    std::uint64_t s = 1;
    auto fold = [&](std::uint64_t e) {
        std::uint64_t b = sf[e];
        std::uint64_t g = std::gcd(s, b);
        s = (s / g) * (b / g);
    };
    for (std::uint64_t e : v) fold(e);
    for (std::uint64_t e : w) fold(e);
    return s == 1;
}

template <typename Visit>
inline void enumerate_tuples(std::uint64_t N, unsigned digits, EnumOrder order,
                             Visit&& visit) {
    std::vector<std::uint64_t> d(digits, order == EnumOrder::forward ? 1 : N);
    bool done = false;
    while (!done) {
        visit(std::span<const std::uint64_t>(d));
        done = true;
        if (order == EnumOrder::forward) {
            for (unsigned i = digits; i-- > 0;) {
                if (d[i] < N) {
                    ++d[i];
                    std::fill(d.begin() + i + 1, d.end(), 1);
                    done = false;
                    break;
                }
            }
        } else {
            for (unsigned i = 0; i < digits; ++i) {
                if (d[i] > 1) {
                    --d[i];
                    std::fill(d.begin(), d.begin() + i, N);
                    done = false;
                    break;
                }
            }
        }
    }
}

}  // namespace detail

// Exhaustive census of the Diophantine tuple sets behind the moment
// off-diagonal bounds.  Set A: signed sums agree and the combined product
// is a square; violation is weighted-set inequality.  Set B: signed sums
// agree and the two products are equal; violation is non-permutation.
// Set C: two stacked copies sharing a cross product equation; violation is
// non-permutation of either block.
inline TupleCountReport count_set(SetId set, std::uint64_t N, unsigned j,
                                  unsigned J, unsigned k, unsigned K,
                                  EnumOrder order = EnumOrder::forward) {
    if (N < 1) throw std::invalid_argument("count_set: N < 1");
    if (J < 1 || K < 1 || j > J || k < 1 || k > K)
        throw std::invalid_argument("count_set: need 0 <= j <= J, 1 <= k <= K");
    if (J + K > 32) throw std::invalid_argument("count_set: J + K above 32");
    constexpr std::uint64_t budget = 1000000000ull;
    const unsigned digits = set == SetId::C ? 2 * (J + K) : J + K;
    if (detail::checked_pow_budget(N, digits, budget) > budget)
        throw std::invalid_argument("count_set: enumeration budget exceeded");

    std::vector<std::uint64_t> sf(N + 1);
    for (std::uint64_t n = 1; n <= N; ++n) sf[n] = squarefree_part(n);

    TupleCountReport rep;
    rep.set_id = set;
    rep.N = N;
    rep.j = j;
    rep.J = J;
    rep.k = k;
    rep.K = K;

    detail::enumerate_tuples(N, digits, order, [&](std::span<const std::uint64_t> d) {
        if (set != SetId::C) {
            auto m = d.subspan(0, J);
            auto n = d.subspan(J, K);
            if (detail::signed_sum(m, j) != detail::signed_sum(n, k)) return;
            if (set == SetId::A) {
                if (!detail::product_is_square(m, n, sf)) return;
                ++rep.total;
                if (detail::weighted_set(m, j) != detail::weighted_set(n, k))
                    ++rep.non_permutation;
            } else {
                std::uint64_t pm = 1, pn = 1;
                for (std::uint64_t e : m) pm *= e;
                for (std::uint64_t e : n) pn *= e;
                if (pm != pn) return;
                ++rep.total;
                if (!detail::is_permutation_of(m, n)) ++rep.non_permutation;
            }
        } else {
            auto m1 = d.subspan(0, J);
            auto n1 = d.subspan(J, K);
            auto m2 = d.subspan(J + K, J);
            auto n2 = d.subspan(2 * J + K, K);
            if (detail::signed_sum(m1, j) != detail::signed_sum(n1, k)) return;
            if (detail::signed_sum(m2, j) != detail::signed_sum(n2, k)) return;
            std::uint64_t lhs = 1, rhs = 1;
            for (std::uint64_t e : m1) lhs *= e;
            for (std::uint64_t e : n2) lhs *= e;
            for (std::uint64_t e : m2) rhs *= e;
            for (std::uint64_t e : n1) rhs *= e;
            if (lhs != rhs) return;
            ++rep.total;
            if (!detail::is_permutation_of(m1, n1) ||
                !detail::is_permutation_of(m2, n2))
                ++rep.non_permutation;
        }
    });

    rep.ratio = rep.total == 0
                    ? 0.0
                    : static_cast<double>(rep.non_permutation) /
                          static_cast<double>(rep.total);
    return rep;
}

// E|sum alpha_n f(n)|^2 for extended Rademacher f, exactly: f(n) = f(s(n))
// collapses the sum onto squarefree classes, whose f values are orthonormal.
inline double rmf_second_moment(std::span<const std::complex<double>> alpha) {
    const std::uint64_t N = alpha.size();
    if (N < 1 || N > 100000ull)
        throw std::invalid_argument("rmf_second_moment: N outside [1, 10^5]");
    std::map<std::uint64_t, std::complex<double>> classes;
    for (std::uint64_t n = 1; n <= N; ++n)
        classes[squarefree_part(n)] += alpha[n - 1];
    double acc = 0.0;
    for (const auto& [s, c] : classes) acc += std::norm(c);
    return acc;
}

// (log Q / Q) * sum over primes q in [Q, 2Q] of |sum alpha_n (n|q)|^2,
// by full enumeration.
inline double dyadic_prime_average(std::uint64_t Q,
                                   std::span<const std::complex<double>> alpha) {
    const std::uint64_t N = alpha.size();
    if (N < 1) throw std::invalid_argument("dyadic_prime_average: empty alpha");
    if (Q > 1000000ull)
        throw std::invalid_argument("dyadic_prime_average: Q above 10^6");
    if (N > Q)
        throw std::invalid_argument("dyadic_prime_average: N > Q");
    auto primes = primes_in(Q, 2 * Q);
    double acc = 0.0;
    for (std::uint64_t q : primes) {
        if (q == 2) continue;
        auto row = legendre_row(q, N);
        std::complex<double> s{0.0, 0.0};
        for (std::uint64_t n = 1; n <= N; ++n)
            s += alpha[n - 1] * static_cast<double>(row[n]);
        acc += std::norm(s);
    }
    return std::log(static_cast<double>(Q)) / static_cast<double>(Q) * acc;
}

}  // namespace charsum
