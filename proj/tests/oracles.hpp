#pragma once

// Brute-force reference implementations used only by tests. Everything here
// is written from definitions (trial division, direct enumeration,
// quadrature) and stays independent of the library code paths it checks.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

// (p, e) with n = p^e, by trial division.
inline std::optional<std::pair<std::uint64_t, std::uint32_t>> prime_power_of(
    std::uint64_t n) {
    if (n < 2) return std::nullopt;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        std::uint32_t e = 0;
        std::uint64_t m = n;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (m != 1) return std::nullopt;
        return std::make_pair(p, e);
    }
    return std::make_pair(n, std::uint32_t{1});  // n itself prime
}

inline double lambda_ref(std::uint64_t n) {
    const auto pp = prime_power_of(n);
    return pp ? std::log(static_cast<double>(pp->first)) : 0.0;
}

inline std::uint64_t phi_ref(std::uint64_t n) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= n; ++a) {
        std::uint64_t x = a, y = n;
        while (y != 0) {
            const std::uint64_t r = x % y;
            x = y;
            y = r;
        }
        if (x == 1) ++count;
    }
    return count;
}

inline int mobius_ref(std::uint64_t n) {
    int factors = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        ++factors;
    }
    if (n > 1) ++factors;
    return (factors % 2 == 0) ? 1 : -1;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Legendre symbol by Euler's criterion, odd prime p.
inline int legendre_pow(std::int64_t a, std::uint64_t p) {
    std::int64_t r = a % static_cast<std::int64_t>(p);
    if (r < 0) r += static_cast<std::int64_t>(p);
    if (r == 0) return 0;
    const std::uint64_t v = powmod(static_cast<std::uint64_t>(r), (p - 1) / 2, p);
    return v == 1 ? 1 : -1;
}

// Kronecker symbol straight from the definition: multiplicative over the
// factorization of n, with the standard values at -1, 0, 2.
inline int kronecker_ref(std::int64_t d, std::int64_t n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        result *= (d < 0) ? -1 : 1;
        n = -n;
    }
    while (n % 2 == 0) {
        if (d % 2 == 0) return 0;
        std::int64_t dm8 = d % 8;
        if (dm8 < 0) dm8 += 8;
        result *= (dm8 == 1 || dm8 == 7) ? 1 : -1;
        n /= 2;
    }
    for (std::uint64_t p = 3; p * p <= static_cast<std::uint64_t>(n); p += 2) {
        while (static_cast<std::uint64_t>(n) % p == 0) {
            result *= legendre_pow(d, p);
            n /= static_cast<std::int64_t>(p);
        }
    }
    if (n > 1) result *= legendre_pow(d, static_cast<std::uint64_t>(n));
    return result;
}

// psi2 by direct enumeration of all decompositions m + m' = n.
inline double psi2_ref(std::uint64_t n) {
    double s = 0.0;
    for (std::uint64_t m = 2; m + 2 <= n; ++m)
        s += lambda_ref(m) * lambda_ref(n - m);
    return s;
}

inline double psi2_pair_ref(double x, std::uint64_t k) {
    double s = 0.0;
    for (std::uint64_t n = k + 1; static_cast<double>(n) <= x; ++n)
        s += lambda_ref(n) * lambda_ref(n - k);
    return s;
}

// Gamma(s) by quadrature of the defining integral. The substitution
// t = u^{1/s} removes the endpoint singularity:
//   Gamma(s) = (1/s) * int_0^inf exp(-u^{1/s}) du.
// Composite Simpson, adequate to ~1e-10 for s in (0, 2.5].
inline double gamma_quadrature(double s) {
    const double upper = std::pow(45.0, s);
    const std::size_t intervals = 1 << 19;  // even
    const double h = upper / static_cast<double>(intervals);
    auto f = [s](double u) {
        return u == 0.0 ? 1.0 : std::exp(-std::pow(u, 1.0 / s));
    };
    double sum = f(0.0) + f(upper);
    for (std::size_t i = 1; i < intervals; ++i)
        sum += f(h * static_cast<double>(i)) * ((i % 2 == 1) ? 4.0 : 2.0);
    return sum * h / (3.0 * s);
}

// Number of real characters mod q: the index of the squares inside the unit
// group, computed by brute force.
inline std::uint64_t real_character_count(std::uint64_t q) {
    std::vector<std::uint64_t> units;
    for (std::uint64_t a = 1; a <= q; ++a) {
        std::uint64_t x = a % q, y = q;
        if (q == 1) x = 0;
        while (y != 0) {
            const std::uint64_t r = x % y;
            x = y;
            y = r;
        }
        if (x == 1 || q == 1) units.push_back(a % q);
    }
    if (q == 1) return 1;
    std::vector<char> is_square(q, 0);
    std::uint64_t squares = 0;
    for (std::uint64_t u : units) {
        const std::uint64_t sq = (u * u) % q;
        if (!is_square[sq]) {
            is_square[sq] = 1;
            ++squares;
        }
    }
    return units.size() / squares;
}

// Direct Dirichlet series sum with an Abel-summation tail bound:
// |sum_{n > M} chi(n) n^{-s}| <= 2 q M^{-s} for nonprincipal chi mod q.
inline double l_direct(std::int64_t d, std::uint64_t modulus, double sigma,
                       std::uint64_t terms, double* tail_bound,
                       int (*kron)(std::int64_t, std::int64_t)) {
    double s = 0.0;
    for (std::uint64_t n = 1; n <= terms; ++n)
        s += static_cast<double>(kron(d, static_cast<std::int64_t>(n))) *
             std::pow(static_cast<double>(n), -sigma);
    if (tail_bound)
        *tail_bound = 2.0 * static_cast<double>(modulus) *
                      std::pow(static_cast<double>(terms), -sigma);
    return s;
}

}  // namespace oracle
