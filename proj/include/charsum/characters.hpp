#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "charsum/arith.hpp"

// Dirichlet characters mod a prime q, indexed against the fixed smallest
// primitive root g: character a sends g^t to e(a*t/(q-1)).  Index 0 is the
// principal character, index (q-1)/2 the Legendre symbol.  The index runs
// over {0..q-2}, which enumerates the full dual group exactly once.

namespace charsum {

struct Character {
    const PrimeContext* ctx;
    std::uint64_t index;

    Character(const PrimeContext& c, std::uint64_t a) : ctx(&c), index(a) {
        if (a + 2 > c.q())
            throw std::invalid_argument("Character: index outside {0..q-2}");
    }

    std::uint64_t q() const { return ctx->q(); }
};

enum class Parity { even, odd, principal };

// chi(n); 0 when q | n.  The index*dlog product stays below 2^54 at the
// context cap, so plain 64-bit arithmetic is exact here.
inline std::complex<double> char_value(const Character& chr,
                                       std::int64_t n) {
    const std::uint64_t q = chr.q();
    std::uint64_t r = static_cast<std::uint64_t>(((n % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q))) % q;
    if (r == 0) return {0.0, 0.0};
    return chr.ctx->unity_order(chr.index * chr.ctx->dlog(r));
}

// Quadratic residue symbol via dlog parity; exact integers, no rounding.
inline int legendre(std::int64_t n, const PrimeContext& ctx) {
    const std::uint64_t q = ctx.q();
    if (q == 2) throw std::invalid_argument("legendre: q = 2 has no quadratic character");
    std::uint64_t r = static_cast<std::uint64_t>(((n % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q))) % q;
    if (r == 0) return 0;
    return (ctx.dlog(r) & 1) ? -1 : 1;
}

// Context-free variant by the Euler criterion, for scans over many moduli
// where building a dlog table per prime would dominate.  q must be an odd
// prime; the caller owns that guarantee.
inline int legendre(std::int64_t n, std::uint64_t q) {
    if (q < 3 || (q & 1) == 0)
        throw std::invalid_argument("legendre: q must be an odd prime");
    std::uint64_t r = static_cast<std::uint64_t>(((n % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q))) % q;
    if (r == 0) return 0;
    std::uint64_t e = detail::powmod(r, (q - 1) / 2, q);
    return e == 1 ? 1 : -1;
}

// Row of symbols (n|q) for n = 0..N, filled multiplicatively from a
// smallest-prime-factor sieve; only the primes up to N hit the Euler
// criterion.
inline std::vector<std::int8_t> legendre_row(std::uint64_t q, std::uint64_t N) {
    if (q < 3 || (q & 1) == 0)
        throw std::invalid_argument("legendre_row: q must be an odd prime");
    std::vector<std::uint32_t> spf(N + 1, 0);
    for (std::uint64_t i = 2; i <= N; ++i) {
        if (spf[i] == 0)
            for (std::uint64_t j = i; j <= N; j += i)
                if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
    std::vector<std::int8_t> row(N + 1, 0);
    if (N >= 1) row[1] = 1;
    for (std::uint64_t n = 2; n <= N; ++n) {
        std::uint64_t p = spf[n];
        std::int8_t pv = (n == p) ? static_cast<std::int8_t>(legendre(static_cast<std::int64_t>(p), q))
                                  : row[p];
        row[n] = static_cast<std::int8_t>(pv * row[n / p]);
    }
    return row;
}

// tau(chi) = sum over n mod q of chi(n) e(n/q), direct O(q) summation.
inline std::complex<double> gauss_sum(const Character& chr) {
    if (chr.index == 0)
        throw std::invalid_argument("gauss_sum: principal character excluded");
    const std::uint64_t q = chr.q();
    std::complex<double> tau{0.0, 0.0};
    for (std::uint64_t n = 1; n < q; ++n)
        tau += chr.ctx->unity_order(chr.index * chr.ctx->dlog(n)) *
               chr.ctx->unity_q(n);
    return tau;
}

// sum_{1 <= n <= x} chi(n); whole periods contribute q-1 for the principal
// character and 0 otherwise.
inline std::complex<double> partial_sum(const Character& chr,
                                        std::uint64_t x) {
    const std::uint64_t q = chr.q();
    std::complex<double> s{0.0, 0.0};
    if (chr.index == 0)
        s += static_cast<double>((x / q) * (q - 1));
    for (std::uint64_t n = 1; n <= x % q; ++n)
        s += char_value(chr, static_cast<std::int64_t>(n));
    return s;
}

// (1/(q-1)) sum over all characters of chi(n1) conj(chi(n2)).
inline std::complex<double> orthogonality_sum(const PrimeContext& ctx,
                                              std::uint64_t n1,
                                              std::uint64_t n2) {
    const std::uint64_t q = ctx.q();
    if (n1 % q == 0 || n2 % q == 0)
        throw std::invalid_argument("orthogonality_sum: argument divisible by q");
    const std::uint64_t ord = q - 1;
    std::uint64_t d = (ctx.dlog(n1) + ord - ctx.dlog(n2)) % ord;
    std::complex<double> s{0.0, 0.0};
    for (std::uint64_t a = 0; a < ord; ++a) s += ctx.unity_order(a * d);
    return s / static_cast<double>(ord);
}

inline Parity parity(const Character& chr) {
    if (chr.index == 0) return Parity::principal;
    const std::uint64_t ord = chr.q() - 1;
    std::uint64_t t = chr.ctx->dlog(ord);  // dlog of -1 mod q
    return (chr.index * t) % ord == 0 ? Parity::even : Parity::odd;
}

}  // namespace charsum
