#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gblab/util.hpp"

namespace gblab {

// A prime power p^j together with its von Mangoldt weight log p.
struct PrimePowerTerm {
    std::uint32_t n;  // p^exponent
    std::uint32_t prime;
    std::uint32_t exponent;
    double log_prime;
};

struct PrimePower {
    std::uint32_t prime;
    std::uint32_t exponent;
};

// Dense sieved tables up to a fixed limit: least prime factor, Mobius,
// Euler phi, and von Mangoldt weights, plus the ascending list of primes
// and of prime powers. Immutable after build(); safe to share between
// threads.
//
// Memory is roughly 17 bytes per entry, so the practical ceiling on
// `limit` is a few times 10^7 on a desktop even though up to 10^9 is
// accepted. Prime-only enumeration beyond table scale goes through
// for_primes_up_to() below, which is segmented and needs no tables.
class SieveTables {
public:
    static SieveTables build(std::uint64_t limit) {
        if (limit < 2 || limit > 1'000'000'000ULL)
            throw std::invalid_argument("SieveTables: limit must be in [2, 1e9]");
        SieveTables t;
        t.limit_ = limit;
        const std::size_t n = static_cast<std::size_t>(limit) + 1;
        t.lpf_.assign(n, 0);
        t.phi_.assign(n, 0);
        t.mobius_.assign(n, 0);
        t.phi_[1] = 1;
        t.mobius_[1] = 1;
        t.primes_.reserve(n > 16 ? n / 12 : 8);
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (t.lpf_[i] == 0) {
                t.lpf_[i] = static_cast<std::uint32_t>(i);
                t.primes_.push_back(static_cast<std::uint32_t>(i));
                t.phi_[i] = static_cast<std::uint32_t>(i - 1);
                t.mobius_[i] = -1;
            }
            for (std::uint32_t p : t.primes_) {
                const std::uint64_t ip = i * p;
                if (p > t.lpf_[i] || ip > limit) break;
                t.lpf_[ip] = p;
                if (p == t.lpf_[i]) {
                    t.phi_[ip] = static_cast<std::uint32_t>(
                        static_cast<std::uint64_t>(t.phi_[i]) * p);
                    t.mobius_[ip] = 0;
                    break;  // lpf(i*p') for p' > p would be wrong
                }
                t.phi_[ip] = static_cast<std::uint32_t>(
                    static_cast<std::uint64_t>(t.phi_[i]) * (p - 1));
                t.mobius_[ip] = static_cast<std::int8_t>(-t.mobius_[i]);
            }
        }

        t.lambda_.assign(n, 0.0);
        for (std::uint32_t p : t.primes_) {
            const double lp = std::log(static_cast<double>(p));
            for (std::uint64_t pk = p; pk <= limit; pk *= p) {
                t.lambda_[pk] = lp;
                if (pk > limit / p) break;  // next pk would overflow past limit
            }
        }
        for (std::uint64_t m = 2; m <= limit; ++m) {
            if (t.lambda_[m] == 0.0) continue;
            const std::uint32_t p = t.lpf_[m];
            std::uint32_t e = 0;
            for (std::uint64_t v = m; v > 1; v /= p) ++e;
            t.prime_powers_.push_back(PrimePowerTerm{
                static_cast<std::uint32_t>(m), p, e, t.lambda_[m]});
        }
        return t;
    }

    std::uint64_t limit() const noexcept { return limit_; }
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
    const std::vector<PrimePowerTerm>& prime_powers() const noexcept {
        return prime_powers_;
    }

    std::uint32_t lpf(std::uint64_t m) const {
        check_range(m, 2);
        return lpf_[m];
    }

    int mobius(std::uint64_t m) const {
        check_range(m, 1);
        return mobius_[m];
    }

    std::uint64_t phi(std::uint64_t m) const {
        check_range(m, 1);
        return phi_[m];
    }

    // Von Mangoldt weight: log p when m = p^j, else 0.
    double lambda(std::uint64_t m) const {
        check_range(m, 1);
        return lambda_[m];
    }

    // Exact structure behind lambda(): the (p, j) with m = p^j, if any.
    std::optional<PrimePower> lambda_structure(std::uint64_t m) const {
        check_range(m, 1);
        if (m < 2 || lambda_[m] == 0.0) return std::nullopt;
        const std::uint32_t p = lpf_[m];
        std::uint32_t e = 0;
        for (std::uint64_t v = m; v > 1; v /= p) ++e;
        return PrimePower{p, e};
    }

    // Dense weights indexed by n in [0, limit]; entries outside prime powers
    // are 0. Intended for hot convolution loops.
    std::span<const double> lambda_weights() const noexcept {
        return {lambda_.data(), lambda_.size()};
    }

    // Calls f(p, multiplicity) for each distinct prime factor of m, ascending.
    template <class F>
    void for_each_prime_factor(std::uint64_t m, F&& f) const {
        check_range(m, 1);
        while (m > 1) {
            const std::uint32_t p = lpf_[m];
            std::uint32_t e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            f(p, e);
        }
    }

private:
    void check_range(std::uint64_t m, std::uint64_t lo) const {
        if (m < lo || m > limit_)
            throw std::out_of_range("SieveTables: index outside table range");
    }

    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> lpf_;
    std::vector<std::uint32_t> phi_;
    std::vector<std::int8_t> mobius_;
    std::vector<double> lambda_;
    std::vector<std::uint32_t> primes_;
    std::vector<PrimePowerTerm> prime_powers_;
};

// Chebyshev psi(x) = sum of Lambda(n) for n <= x, ascending compensated sum.
inline double chebyshev_psi(double x, const SieveTables& t) {
    if (x > static_cast<double>(t.limit()))
        throw std::out_of_range("chebyshev_psi: x exceeds sieve limit");
    NeumaierSum s;
    for (const auto& pp : t.prime_powers()) {
        if (static_cast<double>(pp.n) > x) break;
        s.add(pp.log_prime);
    }
    return s.value();
}

// psi(x; q, a) = sum of Lambda(n) over n <= x with n = a (mod q).
inline double psi_ap(double x, std::uint64_t q, std::int64_t a,
                     const SieveTables& t) {
    if (q < 1) throw std::invalid_argument("psi_ap: q must be >= 1");
    if (x > static_cast<double>(t.limit()))
        throw std::out_of_range("psi_ap: x exceeds sieve limit");
    const std::uint64_t r = static_cast<std::uint64_t>(
        ((a % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q)) %
        static_cast<std::int64_t>(q));
    NeumaierSum s;
    for (const auto& pp : t.prime_powers()) {
        if (static_cast<double>(pp.n) > x) break;
        if (pp.n % q == r) s.add(pp.log_prime);
    }
    return s.value();
}

// All residue sums psi(x; q, a) for a = 0..q-1 in one pass.
inline std::vector<double> psi_ap_all(double x, std::uint64_t q,
                                      const SieveTables& t) {
    if (q < 1) throw std::invalid_argument("psi_ap_all: q must be >= 1");
    if (x > static_cast<double>(t.limit()))
        throw std::out_of_range("psi_ap_all: x exceeds sieve limit");
    std::vector<NeumaierSum> acc(q);
    for (const auto& pp : t.prime_powers()) {
        if (static_cast<double>(pp.n) > x) break;
        acc[pp.n % q].add(pp.log_prime);
    }
    std::vector<double> out(q);
    for (std::uint64_t a = 0; a < q; ++a) out[a] = acc[a].value();
    return out;
}

// Kronecker symbol (d | n), the total extension of the Jacobi symbol.
// Completely multiplicative in n; for d = 0,1 (mod 4) periodic with period
// dividing |d|.
inline int kronecker(std::int64_t d, std::int64_t n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (d < 0) result = -result;
    }
    if (n % 2 == 0) {
        if (d % 2 == 0) return 0;
        std::int64_t dm8 = d % 8;
        if (dm8 < 0) dm8 += 8;
        const int two_part = (dm8 == 1 || dm8 == 7) ? 1 : -1;
        while (n % 2 == 0) {
            n /= 2;
            result *= two_part;
        }
    }
    // n is now odd and positive; the Jacobi symbol only depends on d mod n.
    std::int64_t a = d % n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const std::int64_t nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return (n == 1) ? result : 0;
}

// Trial-division factorization for small arguments where no tables are in
// scope. Calls f(p, multiplicity) ascending.
template <class F>
void factor_trial(std::uint64_t n, F&& f) {
    if (n < 1) throw std::invalid_argument("factor_trial: n must be >= 1");
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p != 0) continue;
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f(p, e);
    }
    if (n > 1) f(n, std::uint32_t{1});
}

inline std::uint64_t euler_phi_u64(std::uint64_t n) {
    std::uint64_t result = n;
    factor_trial(n, [&](std::uint64_t p, std::uint32_t) {
        result -= result / p;
    });
    return result;
}

// Streams the primes up to `limit` in ascending order without building
// dense tables; used where only primes are needed (e.g. the twin prime
// constant at large cutoffs). Segmented, ~1 bit of scratch per candidate.
template <class F>
void for_primes_up_to(std::uint64_t limit, F&& f) {
    if (limit < 2) return;
    f(static_cast<std::uint64_t>(2));
    if (limit < 3) return;

    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
    while (root * root > limit) --root;
    while ((root + 1) * (root + 1) <= limit) ++root;

    // Odd base primes up to sqrt(limit).
    std::vector<std::uint32_t> base;
    {
        std::vector<char> is_comp(root + 1, 0);
        for (std::uint64_t i = 3; i <= root; i += 2) {
            if (is_comp[i]) continue;
            base.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= root; j += 2 * i)
                is_comp[j] = 1;
        }
    }

    constexpr std::uint64_t kSegmentOdds = 1u << 20;
    std::vector<char> seg;
    for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSegmentOdds) {
        const std::uint64_t hi = std::min(limit, lo + 2 * kSegmentOdds - 2);
        const std::uint64_t count = (hi - lo) / 2 + 1;  // odd values lo..hi
        seg.assign(count, 0);
        for (std::uint32_t p : base) {
            const std::uint64_t p64 = p;
            std::uint64_t start = std::max(p64 * p64, ((lo + p64 - 1) / p64) * p64);
            if (start % 2 == 0) start += p64;
            if (start > hi) continue;
            for (std::uint64_t j = start; j <= hi; j += 2 * p64)
                seg[(j - lo) / 2] = 1;
        }
        for (std::uint64_t i = 0; i < count; ++i)
            if (!seg[i]) f(lo + 2 * i);
    }
}

}  // namespace gblab
