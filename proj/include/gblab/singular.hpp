#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "gblab/arith.hpp"
#include "gblab/rational.hpp"
#include "gblab/util.hpp"

namespace gblab {

// Twin prime constant C2 = prod over odd primes of (1 - 1/(p-1)^2), as a
// finite product up to prime_limit together with an enclosure of the full
// product. The tail obeys sum_{p>P} -log(1 - 1/(p-1)^2) < 1/(P-3), so the
// infinite product lies in [value * exp(-1/(P-3)), value].
struct TwinPrimeConstant {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t prime_limit = 0;
};

inline TwinPrimeConstant twin_prime_constant(std::uint64_t prime_limit) {
    if (prime_limit < 1000)
        throw std::invalid_argument("twin_prime_constant: prime_limit must be >= 1e3");
    double prod = 1.0;
    for_primes_up_to(prime_limit, [&](std::uint64_t p) {
        if (p == 2) return;
        const double pm1 = static_cast<double>(p - 1);
        prod *= 1.0 - 1.0 / (pm1 * pm1);
    });
    TwinPrimeConstant c;
    c.value = prod;
    c.upper = prod;
    c.lower = prod * std::exp(-1.0 / static_cast<double>(prime_limit - 3));
    c.prime_limit = prime_limit;
    return c;
}

// Singular-series prime factor over the odd primes dividing k:
// prod_{p | k, p > 2} (p-1)/(p-2), exact.
inline RationalQ singular_factor(std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("singular_factor: k must be >= 1");
    RationalQ h = 1;
    factor_trial(k, [&](std::uint64_t p, std::uint32_t) {
        if (p > 2) h *= RationalQ(p - 1, p - 2);
    });
    return h;
}

// Same product restricted to primes coprime to 2q:
// prod_{p | k, gcd(p, 2q) = 1} (p-1)/(p-2), exact.
inline RationalQ singular_factor_coprime(std::uint64_t q, std::uint64_t k) {
    if (q < 1 || k < 1)
        throw std::invalid_argument("singular_factor_coprime: arguments must be >= 1");
    RationalQ h = 1;
    factor_trial(k, [&](std::uint64_t p, std::uint32_t) {
        if (p > 2 && q % p != 0) h *= RationalQ(p - 1, p - 2);
    });
    return h;
}

// Squarefree kernel whose divisor sums rebuild the factor above:
// 0 unless d is squarefree and coprime to 2q, else prod_{p | d} 1/(p-2).
inline RationalQ singular_kernel(std::uint64_t q, std::uint64_t d) {
    if (q < 1 || d < 1)
        throw std::invalid_argument("singular_kernel: arguments must be >= 1");
    RationalQ f = 1;
    bool zero = false;
    factor_trial(d, [&](std::uint64_t p, std::uint32_t e) {
        if (e > 1 || p == 2 || q % p == 0) {
            zero = true;
            return;
        }
        f *= RationalQ(1, p - 2);
    });
    return zero ? RationalQ(0) : f;
}

// Singular series S(k): 2*C2*prod_{p|k, p>2}(p-1)/(p-2) for even k, 0 for
// odd k. k = 0 is outside the definition.
inline double singular_series(std::uint64_t k, const TwinPrimeConstant& c2) {
    if (k == 0) throw std::domain_error("singular_series: k = 0 excluded");
    if (k % 2 != 0) return 0.0;
    double h = 1.0;
    factor_trial(k, [&](std::uint64_t p, std::uint32_t) {
        if (p > 2)
            h *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
    });
    return 2.0 * c2.value * h;
}

// Table-accelerated float paths used by the larger sweeps below.
inline double singular_factor_value(std::uint64_t k, const SieveTables& t) {
    double h = 1.0;
    t.for_each_prime_factor(k, [&](std::uint32_t p, std::uint32_t) {
        if (p > 2)
            h *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
    });
    return h;
}

inline double singular_factor_coprime_value(std::uint64_t q, std::uint64_t k,
                                            const SieveTables& t) {
    double h = 1.0;
    t.for_each_prime_factor(k, [&](std::uint32_t p, std::uint32_t) {
        if (p > 2 && q % p != 0)
            h *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
    });
    return h;
}

inline double singular_kernel_value(std::uint64_t q, std::uint64_t d,
                                    const SieveTables& t) {
    if (t.mobius(d) == 0) return 0.0;
    double f = 1.0;
    bool zero = false;
    t.for_each_prime_factor(d, [&](std::uint32_t p, std::uint32_t) {
        if (p == 2 || q % p == 0) {
            zero = true;
            return;
        }
        f /= static_cast<double>(p - 2);
    });
    return zero ? 0.0 : f;
}

// Cumulative singular-series average G_q(x) = sum_{k<=x} S(qk), kept next to
// its expected main term (q/phi(q)) x.
struct SingularAverage {
    std::uint64_t q = 0;
    double x = 0.0;
    double value = 0.0;
    double main_term = 0.0;
    double remainder = 0.0;
};

inline SingularAverage singular_series_average(std::uint64_t q, double x,
                                               const TwinPrimeConstant& c2,
                                               const SieveTables& t) {
    if (q < 1) throw std::invalid_argument("singular_series_average: q must be >= 1");
    if (x < 1) throw std::invalid_argument("singular_series_average: x must be >= 1");
    const std::uint64_t kmax = static_cast<std::uint64_t>(x);
    if (kmax > t.limit())
        throw std::out_of_range("singular_series_average: x exceeds sieve limit");
    const double hq = singular_factor_value(q, t);
    const bool q_even = (q % 2 == 0);
    NeumaierSum s;
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        if (!q_even && k % 2 != 0) continue;
        s.add(2.0 * c2.value * hq * singular_factor_coprime_value(q, k, t));
    }
    SingularAverage avg;
    avg.q = q;
    avg.x = x;
    avg.value = s.value();
    avg.main_term = static_cast<double>(q) / static_cast<double>(t.phi(q)) * x;
    avg.remainder = avg.value - avg.main_term;
    return avg;
}

// Sup over 1 <= x <= x_max of |G_q(x) - (q/phi(q)) x| / ((q/phi(q)) log 2x).
struct RemainderScan {
    std::uint64_t q = 0;
    double sup_ratio = 0.0;
    std::uint64_t x_at_sup = 0;
    SingularAverage at_x_max;
};

inline RemainderScan average_remainder_scan(std::uint64_t q, std::uint64_t x_max,
                                            const TwinPrimeConstant& c2,
                                            const SieveTables& t) {
    if (q < 1 || x_max < 1)
        throw std::invalid_argument("average_remainder_scan: arguments must be >= 1");
    if (x_max > t.limit())
        throw std::out_of_range("average_remainder_scan: x_max exceeds sieve limit");
    const double hq = singular_factor_value(q, t);
    const double density = static_cast<double>(q) / static_cast<double>(t.phi(q));
    const bool q_even = (q % 2 == 0);
    RemainderScan scan;
    scan.q = q;
    NeumaierSum s;
    for (std::uint64_t x = 1; x <= x_max; ++x) {
        if (q_even || x % 2 == 0)
            s.add(2.0 * c2.value * hq * singular_factor_coprime_value(q, x, t));
        const double value = s.value();
        const double remainder = value - density * static_cast<double>(x);
        const double ratio =
            std::abs(remainder) / (density * std::log(2.0 * static_cast<double>(x)));
        if (ratio > scan.sup_ratio) {
            scan.sup_ratio = ratio;
            scan.x_at_sup = x;
        }
    }
    scan.at_x_max.q = q;
    scan.at_x_max.x = static_cast<double>(x_max);
    scan.at_x_max.value = s.value();
    scan.at_x_max.main_term = density * static_cast<double>(x_max);
    scan.at_x_max.remainder = scan.at_x_max.value - scan.at_x_max.main_term;
    return scan;
}

// Exact partial sum of the coprime factor: sum_{k<=x} H_q(k).
inline RationalQ singular_factor_sum_exact(std::uint64_t q, std::uint64_t x) {
    RationalQ s = 0;
    for (std::uint64_t k = 1; k <= x; ++k) s += singular_factor_coprime(q, k);
    return s;
}

inline double singular_factor_sum(std::uint64_t q, std::uint64_t x) {
    return to_double(singular_factor_sum_exact(q, x));
}

// Exact G_q(x) / (2 C2) = sum_{k<=x, 2|qk} H(qk); pairs with the float
// average above for identity checks.
inline RationalQ singular_series_sum_exact(std::uint64_t q, std::uint64_t x) {
    RationalQ s = 0;
    for (std::uint64_t k = 1; k <= x; ++k) {
        if ((q * k) % 2 != 0) continue;
        s += singular_factor(q * k);
    }
    return s;
}

// Partial Dirichlet series sum_{d<=D} f_q(d)/d and its closed-form limit
// q / ((2,q) phi(q) C2 H(q)).
inline double singular_kernel_harmonic_sum(std::uint64_t q, std::uint64_t D,
                                           const SieveTables& t) {
    if (q < 1 || D < 1)
        throw std::invalid_argument("singular_kernel_harmonic_sum: arguments must be >= 1");
    if (D > t.limit())
        throw std::out_of_range("singular_kernel_harmonic_sum: D exceeds sieve limit");
    NeumaierSum s;
    for (std::uint64_t d = 1; d <= D; d += 2) {  // even d never contributes
        const double f = singular_kernel_value(q, d, t);
        if (f != 0.0) s.add(f / static_cast<double>(d));
    }
    return s.value();
}

inline double singular_kernel_harmonic_limit(std::uint64_t q,
                                             const TwinPrimeConstant& c2) {
    if (q < 1) throw std::invalid_argument("singular_kernel_harmonic_limit: q must be >= 1");
    double hq = 1.0;
    factor_trial(q, [&](std::uint64_t p, std::uint32_t) {
        if (p > 2)
            hq *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
    });
    const double two_q = (q % 2 == 0) ? 2.0 : 1.0;
    return static_cast<double>(q) /
           (two_q * static_cast<double>(euler_phi_u64(q)) * c2.value * hq);
}

// A truncated series value together with the bound used for the dropped
// tail. The truncation index K = ceil(40 N / q) makes e^{-qK/N} ~ 4e-18, so
// tails are far below double roundoff; the bound is still computed and
// reported per run.
struct TailedSum {
    double value = 0.0;
    double tail_bound = 0.0;
    std::uint64_t terms = 0;
};

namespace detail {

inline std::uint64_t smoothing_truncation(std::uint64_t q, double n_scale) {
    return static_cast<std::uint64_t>(std::ceil(40.0 * n_scale / static_cast<double>(q)));
}

}  // namespace detail

// V_q(N) = q * sum_{k>=1} S(qk) k e^{-qk/N}, truncated at K = ceil(40N/q)
// unless an explicit truncation is requested.
inline TailedSum weighted_singular_sum(std::uint64_t q, double n_scale,
                                       const TwinPrimeConstant& c2,
                                       const SieveTables& t,
                                       std::optional<std::uint64_t> truncation = {}) {
    if (q < 1 || static_cast<double>(q) > n_scale)
        throw std::invalid_argument("weighted_singular_sum: need 1 <= q <= N");
    const std::uint64_t K =
        truncation.value_or(detail::smoothing_truncation(q, n_scale));
    if (K > t.limit())
        throw std::out_of_range("weighted_singular_sum: truncation exceeds sieve limit");
    const double hq = singular_factor_value(q, t);
    const bool q_even = (q % 2 == 0);
    const double qd = static_cast<double>(q);
    NeumaierSum s;
    double max_sing = 0.0;
    for (std::uint64_t k = 1; k <= K; ++k) {
        if (!q_even && k % 2 != 0) continue;
        const double sing = 2.0 * c2.value * hq * singular_factor_coprime_value(q, k, t);
        if (sing > max_sing) max_sing = sing;
        s.add(sing * static_cast<double>(k) * std::exp(-qd * static_cast<double>(k) / n_scale));
    }
    TailedSum out;
    out.terms = K;
    out.value = qd * s.value();
    // Tail of sum_{k>K} k x^k with x = e^{-q/N}, times q and an empirical
    // cap of twice the largest singular-series value seen.
    const double x = std::exp(-qd / n_scale);
    const double geom = std::pow(x, static_cast<double>(K + 1));
    const double one_minus = 1.0 - x;
    out.tail_bound = 2.0 * max_sing * qd * geom *
                     (static_cast<double>(K + 1) / one_minus + x / (one_minus * one_minus));
    return out;
}

// sum_{j>=1} S(qj) e^{-qj/N}, truncated the same way.
inline TailedSum smoothed_singular_sum(std::uint64_t q, double n_scale,
                                       const TwinPrimeConstant& c2,
                                       const SieveTables& t,
                                       std::optional<std::uint64_t> truncation = {}) {
    if (q < 1 || static_cast<double>(q) > n_scale)
        throw std::invalid_argument("smoothed_singular_sum: need 1 <= q <= N");
    const std::uint64_t K =
        truncation.value_or(detail::smoothing_truncation(q, n_scale));
    if (K > t.limit())
        throw std::out_of_range("smoothed_singular_sum: truncation exceeds sieve limit");
    const double hq = singular_factor_value(q, t);
    const bool q_even = (q % 2 == 0);
    const double qd = static_cast<double>(q);
    NeumaierSum s;
    double max_sing = 0.0;
    for (std::uint64_t k = 1; k <= K; ++k) {
        if (!q_even && k % 2 != 0) continue;
        const double sing = 2.0 * c2.value * hq * singular_factor_coprime_value(q, k, t);
        if (sing > max_sing) max_sing = sing;
        s.add(sing * std::exp(-qd * static_cast<double>(k) / n_scale));
    }
    TailedSum out;
    out.terms = K;
    out.value = s.value();
    const double x = std::exp(-qd / n_scale);
    out.tail_bound = 2.0 * max_sing * std::pow(x, static_cast<double>(K + 1)) / (1.0 - x);
    return out;
}

}  // namespace gblab
