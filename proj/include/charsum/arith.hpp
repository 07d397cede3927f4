#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace charsum {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp,
                            std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

}  // namespace detail

// Deterministic Miller-Rabin; the 12-base set decides primality for all
// 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Ascending primes in the closed interval [lo, hi].  Segmented sieve over
// base primes up to sqrt(hi); the window cap keeps the segment allocation
// bounded.
inline std::vector<std::uint64_t> primes_in(std::uint64_t lo,
                                            std::uint64_t hi) {
    constexpr std::uint64_t max_hi = 1ull << 40;
    constexpr std::uint64_t max_width = 1ull << 28;
    if (lo < 2 || hi < lo)
        throw std::invalid_argument("primes_in: need 2 <= lo <= hi");
    if (hi > max_hi)
        throw std::invalid_argument("primes_in: hi exceeds 2^40");
    if (hi - lo + 1 > max_width)
        throw std::invalid_argument("primes_in: window wider than supported");

    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi)));
    while (root * root > hi) --root;
    while ((root + 1) * (root + 1) <= hi) ++root;

    // base primes <= sqrt(hi) by a plain sieve
    std::vector<std::uint64_t> base;
    if (root >= 2) {
        std::vector<bool> comp(root + 1, false);
        for (std::uint64_t p = 2; p * p <= root; ++p)
            if (!comp[p])
                for (std::uint64_t m = p * p; m <= root; m += p)
                    comp[m] = true;
        for (std::uint64_t p = 2; p <= root; ++p)
            if (!comp[p]) base.push_back(p);
    }

    std::uint64_t width = hi - lo + 1;
    std::vector<bool> comp(width, false);
    for (std::uint64_t p : base) {
        std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
        for (std::uint64_t m = start; m <= hi; m += p) comp[m - lo] = true;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < width; ++i) {
        std::uint64_t n = lo + i;
        if (n >= 2 && !comp[i]) out.push_back(n);
    }
    return out;
}

// Smallest g >= 1 of multiplicative order q-1 mod prime q.
inline std::uint64_t primitive_root(std::uint64_t q) {
    if (!is_prime(q)) throw std::invalid_argument("primitive_root: q not prime");
    if (q == 2) return 1;
    std::uint64_t phi = q - 1;
    std::vector<std::uint64_t> pf;
    std::uint64_t m = phi;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            pf.push_back(p);
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) pf.push_back(m);
    for (std::uint64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (std::uint64_t p : pf) {
            if (detail::powmod(g, phi / p, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

// n with every square divisor removed; trial division to sqrt(n).
inline std::uint64_t squarefree_part(std::uint64_t n) {
    constexpr std::uint64_t max_n = 1ull << 40;
    if (n == 0) throw std::invalid_argument("squarefree_part: n = 0");
    if (n > max_n) throw std::invalid_argument("squarefree_part: n exceeds 2^40");
    std::uint64_t s = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            if (e & 1) s *= p;
        }
    }
    return s * n;
}

namespace detail {

// Dickman rho on the grid u_i = i*h, h = 1e-4, via the integrated delay
// equation u*rho(u) = int_{u-1}^{u} rho.  Composite Simpson over the unit
// window with the unknown endpoint solved for linearly; fourth order in h.
struct DickmanTable {
    static constexpr int per_unit = 10000;
    static constexpr double h = 1.0 / per_unit;
    std::vector<double> rho;  // rho[i] = rho(i*h), i = 0..10*per_unit

    DickmanTable() {
        const int n = 10 * per_unit;
        rho.assign(n + 1, 0.0);
        // prefix sums over even/odd indices keep the window sums O(1)
        std::vector<double> pe(n + 2, 0.0), po(n + 2, 0.0);
        auto push = [&](int i) {
            pe[i + 1] = pe[i] + ((i & 1) ? 0.0 : rho[i]);
            po[i + 1] = po[i] + ((i & 1) ? rho[i] : 0.0);
        };
        for (int i = 0; i <= per_unit; ++i) {
            rho[i] = 1.0;
            push(i);
        }
        for (int i = per_unit + 1; i <= n; ++i) {
            int lo = i - per_unit;
            // window interior j in [lo, i-2] split by parity relative to i
            auto same = [&](int a, int b) {  // sum over j in [a,b], j = i mod 2
                if (a > b) return 0.0;
                return (i & 1) ? po[b + 1] - po[a] : pe[b + 1] - pe[a];
            };
            auto opp = [&](int a, int b) {
                if (a > b) return 0.0;
                return (i & 1) ? pe[b + 1] - pe[a] : po[b + 1] - po[a];
            };
            double a_known = same(lo, i - 2);
            double b_sum = opp(lo, i - 1);
            double u = i * h;
            // u*rho_i = (h/3)*(2*a_known + 4*b_sum - rho_lo + rho_i)
            rho[i] = (h / 3.0) * (2.0 * a_known + 4.0 * b_sum - rho[lo]) /
                     (u - h / 3.0);
            push(i);
        }
    }

    double eval(double u) const {
        if (u <= 1.0) return 1.0;
        double x = u * per_unit;
        int i = static_cast<int>(x);
        int last = 10 * per_unit;
        if (i >= last) return rho[last];
        // 4-point Lagrange around the bracketing nodes
        int i0 = std::max(0, std::min(i - 1, last - 3));
        double t = x - i0;
        double c0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
        double c1 = t * (t - 2) * (t - 3) / 2.0;
        double c2 = -t * (t - 1) * (t - 3) / 2.0;
        double c3 = t * (t - 1) * (t - 2) / 6.0;
        return c0 * rho[i0] + c1 * rho[i0 + 1] + c2 * rho[i0 + 2] +
               c3 * rho[i0 + 3];
    }
};

inline const DickmanTable& dickman_table() {
    static const DickmanTable t;
    return t;
}

}  // namespace detail

inline double dickman_rho(double u) {
    if (!(u >= 0.0 && u <= 10.0))
        throw std::domain_error("dickman_rho: u outside [0, 10]");
    return detail::dickman_table().eval(u);
}

// Everything needed to evaluate characters mod q exactly: the smallest
// primitive root g, the full discrete-log table, and cached roots of unity.
// Immutable after construction; share freely across threads.
class PrimeContext {
  public:
    explicit PrimeContext(std::uint64_t q) : q_(q) {
        constexpr std::uint64_t max_q = 1ull << 27;
        if (!is_prime(q)) throw std::invalid_argument("PrimeContext: q not prime");
        if (q > max_q)
            throw std::invalid_argument("PrimeContext: q exceeds supported cap");
        g_ = primitive_root(q);
        dlog_.assign(q, 0);
        std::uint64_t cur = 1;
        for (std::uint64_t t = 0; t + 1 < q; ++t) {
            dlog_[cur] = static_cast<std::uint32_t>(t);
            cur = detail::mulmod(cur, g_, q);
        }
        if (cur != 1) throw std::logic_error("PrimeContext: g not primitive");
        if (q <= table_cutoff) {
            const double tau_ord = 2.0 * std::numbers::pi / static_cast<double>(q - 1);
            const double tau_q = 2.0 * std::numbers::pi / static_cast<double>(q);
            roots_order_.resize(q - 1);
            for (std::uint64_t t = 0; t + 1 < q; ++t)
                roots_order_[t] = std::polar(1.0, tau_ord * static_cast<double>(t));
            roots_q_.resize(q);
            for (std::uint64_t r = 0; r < q; ++r)
                roots_q_[r] = std::polar(1.0, tau_q * static_cast<double>(r));
        }
    }

    std::uint64_t q() const { return q_; }
    std::uint64_t g() const { return g_; }

    // discrete log of n mod q; n must not be divisible by q
    std::uint32_t dlog(std::uint64_t n) const {
        std::uint64_t r = n % q_;
        if (r == 0) throw std::invalid_argument("dlog: q divides n");
        return dlog_[r];
    }

    // e(t / (q-1)), t reduced mod q-1
    std::complex<double> unity_order(std::uint64_t t) const {
        t %= q_ - 1;
        if (!roots_order_.empty()) return roots_order_[t];
        return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) /
                                   static_cast<double>(q_ - 1));
    }

    // e(r / q), r reduced mod q
    std::complex<double> unity_q(std::uint64_t r) const {
        r %= q_;
        if (!roots_q_.empty()) return roots_q_[r];
        return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) /
                                   static_cast<double>(q_));
    }

  private:
    static constexpr std::uint64_t table_cutoff = 1ull << 21;
    std::uint64_t q_;
    std::uint64_t g_;
    std::vector<std::uint32_t> dlog_;
    std::vector<std::complex<double>> roots_order_;
    std::vector<std::complex<double>> roots_q_;
};

}  // namespace charsum
