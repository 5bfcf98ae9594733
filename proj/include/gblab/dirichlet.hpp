#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gblab/arith.hpp"
#include "gblab/util.hpp"

namespace gblab {

// Real-argument gamma function. The standard library implementation is
// correctly rounded to well under the 1e-12 contract on (0, 5].
inline double gamma_real(double s) {
    if (!(s > 0.0) || s > 5.0)
        throw std::domain_error("gamma_real: s must lie in (0, 5]");
    return std::tgamma(s);
}

// A real Dirichlet character mod q, realized through the Kronecker symbol
// of a fundamental discriminant whose absolute value is the conductor.
// conductor 1 / discriminant 1 is the principal character.
struct RealCharacter {
    std::uint64_t modulus = 0;
    std::uint64_t conductor = 0;
    std::int64_t discriminant = 0;
    int parity = 1;  // chi(-1)

    bool principal() const noexcept { return conductor == 1; }
};

inline bool is_squarefree_u64(std::uint64_t n) {
    bool sf = true;
    factor_trial(n, [&](std::uint64_t, std::uint32_t e) {
        if (e > 1) sf = false;
    });
    return sf;
}

inline bool is_fundamental_discriminant(std::int64_t d) {
    if (d == 1) return true;
    if (d == 0) return false;
    const std::int64_t mod4 = ((d % 4) + 4) % 4;
    const std::uint64_t ad = static_cast<std::uint64_t>(d < 0 ? -d : d);
    if (mod4 == 1) return is_squarefree_u64(ad);
    if (mod4 == 0) {
        const std::int64_t m = d / 4;
        const std::int64_t m4 = ((m % 4) + 4) % 4;
        if (m4 != 2 && m4 != 3) return false;
        return is_squarefree_u64(static_cast<std::uint64_t>(m < 0 ? -m : m));
    }
    return false;
}

// All real characters mod q: the principal one plus the characters induced
// by Kronecker symbols of fundamental discriminants d with |d| dividing q.
// Ordered by (conductor, discriminant).
inline std::vector<RealCharacter> enumerate_real_characters(std::uint64_t q) {
    if (q < 1) throw std::invalid_argument("enumerate_real_characters: q must be >= 1");
    std::vector<RealCharacter> chars;
    chars.push_back(RealCharacter{q, 1, 1, 1});
    for (std::uint64_t f = 2; f <= q; ++f) {
        if (q % f != 0) continue;
        for (const std::int64_t sign : {+1, -1}) {
            const std::int64_t d = sign * static_cast<std::int64_t>(f);
            if (!is_fundamental_discriminant(d)) continue;
            chars.push_back(RealCharacter{q, f, d, d > 0 ? 1 : -1});
        }
    }
    std::sort(chars.begin(), chars.end(),
              [](const RealCharacter& a, const RealCharacter& b) {
                  if (a.conductor != b.conductor) return a.conductor < b.conductor;
                  return a.discriminant < b.discriminant;
              });
    return chars;
}

// chi(n) for the character mod q: the Kronecker value masked to 0 on
// non-units.
inline int char_value(const RealCharacter& chi, std::int64_t n) {
    const std::int64_t q = static_cast<std::int64_t>(chi.modulus);
    const std::uint64_t r = static_cast<std::uint64_t>(((n % q) + q) % q);
    if (gcd_u64(r, chi.modulus) != 1) return 0;
    return kronecker(chi.discriminant, n);
}

// ---------------------------------------------------------------------------
// Hurwitz zeta with the pole subtracted, by Euler-Maclaurin summation with a
// certified remainder bound.

namespace detail {

// B_{2j} / (2j)! for j = 1..13.
inline constexpr std::array<double, 13> kBernoulliOverFactorial = {
    8.3333333333333333333e-02,   // 1/12
    -1.3888888888888888889e-03,  // -1/720
    3.3068783068783068783e-05,   // 1/30240
    -8.2671957671957671958e-07,  // -1/1209600
    2.0876756987868098979e-08,   // 1/47900160
    -5.2841901386874931848e-10,
    1.3382536530684678833e-11,
    -3.3896802963225828668e-13,
    8.5860620562778445641e-15,
    -2.1748686985580618731e-16,
    5.5090028283602295152e-18,
    -1.3954464685812523340e-19,
    3.5347070396294674716e-21,
};

struct CertifiedValue {
    double value = 0.0;
    double error = 0.0;
};

// zeta(s, x) - 1/(s-1) for x in (0, 1], s in (0, 2.5], including s = 1
// where the subtracted pole makes the function regular. M is the number of
// directly summed terms; the returned error covers the Euler-Maclaurin
// remainder with a factor-4 safety margin.
inline CertifiedValue hurwitz_zeta_reg(double s, double x, unsigned m_terms) {
    constexpr unsigned kCorrections = 10;  // j = 1..10, remainder from j = 11
    NeumaierSum direct;
    for (unsigned k = 0; k < m_terms; ++k)
        direct.add(std::pow(static_cast<double>(k) + x, -s));

    const double big = static_cast<double>(m_terms) + x;
    const double log_big = std::log(big);
    // ((M+x)^{1-s} - 1) / (s - 1), written through expm1 so s = 1 is exact.
    const double u = (1.0 - s) * log_big;
    const double expm1_ratio = std::abs(u) < 1e-12 ? 1.0 + 0.5 * u : std::expm1(u) / u;
    const double pole_part = -log_big * expm1_ratio;

    const double inv_big = 1.0 / big;
    const double big_pow_ms = std::pow(big, -s);

    NeumaierSum tail;
    tail.add(pole_part);
    tail.add(0.5 * big_pow_ms);
    double pochhammer = s;                      // s (s+1) ... (s + 2j - 2)
    double power = big_pow_ms * inv_big;        // (M+x)^{-s-2j+1}
    double last_term = 0.0;
    for (unsigned j = 1; j <= kCorrections; ++j) {
        last_term = kBernoulliOverFactorial[j - 1] * pochhammer * power;
        tail.add(last_term);
        pochhammer *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        power *= inv_big * inv_big;
    }
    const double next_term =
        std::abs(kBernoulliOverFactorial[kCorrections] * pochhammer * power);

    CertifiedValue out;
    out.value = direct.value() + tail.value();
    // Remainder bound: 4x the first omitted correction term, plus a float
    // roundoff allowance scaled to the largest direct term x^{-s}.
    out.error = 4.0 * next_term +
                8.0 * std::numeric_limits<double>::epsilon() *
                    (std::abs(out.value) + std::pow(x, -s));
    return out;
}

inline CertifiedValue hurwitz_zeta_reg_adaptive(double s, double x,
                                                double target_abs_err) {
    for (unsigned m = 16; m <= (1u << 20); m *= 2) {
        const CertifiedValue v = hurwitz_zeta_reg(s, x, m);
        if (v.error <= target_abs_err) return v;
    }
    throw invariant_error("hurwitz_zeta_reg: cannot reach requested accuracy");
}

}  // namespace detail

struct LValue {
    double value = 0.0;
    double error_bound = 0.0;
};

// L(sigma, chi) for the primitive real character of conductor f behind chi,
// via the conductor decomposition
//   L(s, chi) = f^{-s} sum_{a=1}^{f} chi(a) zeta(s, a/f);
// the zeta poles cancel because the character values sum to zero, so each
// Hurwitz value enters with its pole already subtracted.
inline LValue l_value(const RealCharacter& chi, double sigma,
                      double target_abs_err = 1e-10) {
    if (chi.principal())
        throw std::domain_error("l_value: principal character excluded");
    if (!(sigma >= 0.05 && sigma <= 2.0))
        throw std::invalid_argument("l_value: sigma must lie in [0.05, 2]");
    const std::uint64_t f = chi.conductor;
    const double scale = std::pow(static_cast<double>(f), -sigma);
    const double per_term = target_abs_err / (scale * static_cast<double>(f));
    NeumaierSum sum;
    double err = 0.0;
    for (std::uint64_t a = 1; a < f; ++a) {
        const int c = kronecker(chi.discriminant, static_cast<std::int64_t>(a));
        if (c == 0) continue;
        const detail::CertifiedValue z = detail::hurwitz_zeta_reg_adaptive(
            sigma, static_cast<double>(a) / static_cast<double>(f), per_term);
        sum.add(static_cast<double>(c) * z.value);
        err += z.error;
    }
    LValue out;
    out.value = scale * sum.value();
    out.error_bound = scale * err +
                      64.0 * std::numeric_limits<double>::epsilon() *
                          (std::abs(out.value) + scale);
    return out;
}

// ---------------------------------------------------------------------------
// Zero scanning: grid evaluation with certified signs, bisection refinement.

struct ZeroBracket {
    double lo = 0.0;
    double hi = 0.0;
    double root = 0.0;
    double tol = 0.0;
};

struct ScanOutcome {
    std::vector<ZeroBracket> zeros;
    double min_value = 0.0;       // smallest grid value
    double min_value_error = 0.0;
    double sigma_at_min = 0.0;
};

// Generic engine over any evaluator returning (value, certified error).
// Brackets every sign change between adjacent certified grid values and
// bisects it down to refine_tol.
inline ScanOutcome scan_zeros_fn(
    const std::function<detail::CertifiedValue(double)>& eval, double lo,
    double hi, double step, double refine_tol = 1e-9, unsigned threads = 1) {
    if (!(lo < hi)) throw std::invalid_argument("scan_zeros_fn: need lo < hi");
    if (!(step > 0.0)) throw std::invalid_argument("scan_zeros_fn: bad step");
    const std::size_t count =
        static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-12)) + 1;
    std::vector<double> sigma(count);
    for (std::size_t i = 0; i < count; ++i)
        sigma[i] = lo + static_cast<double>(i) * step;
    std::vector<detail::CertifiedValue> grid(count);
    parallel_for_slots(count, threads,
                       [&](std::size_t i) { grid[i] = eval(sigma[i]); });

    ScanOutcome out;
    out.min_value = grid[0].value;
    out.min_value_error = grid[0].error;
    out.sigma_at_min = sigma[0];
    for (std::size_t i = 1; i < count; ++i) {
        if (grid[i].value < out.min_value) {
            out.min_value = grid[i].value;
            out.min_value_error = grid[i].error;
            out.sigma_at_min = sigma[i];
        }
    }

    auto certified_sign = [&](const detail::CertifiedValue& v) -> int {
        if (std::abs(v.value) <= v.error)
            throw invariant_error("scan_zeros_fn: sign not certified at grid point");
        return v.value > 0.0 ? 1 : -1;
    };

    for (std::size_t i = 0; i + 1 < count; ++i) {
        const int s_lo = certified_sign(grid[i]);
        const int s_hi = certified_sign(grid[i + 1]);
        if (s_lo == s_hi) continue;
        double a = sigma[i];
        double b = sigma[i + 1];
        int sign_a = s_lo;
        while (b - a > refine_tol) {
            const double mid = 0.5 * (a + b);
            const int sign_mid = certified_sign(eval(mid));
            if (sign_mid == sign_a)
                a = mid;
            else
                b = mid;
        }
        out.zeros.push_back(ZeroBracket{sigma[i], sigma[i + 1], 0.5 * (a + b),
                                        0.5 * (b - a)});
    }
    return out;
}

struct ZeroScanResult {
    RealCharacter character;
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
    ScanOutcome outcome;
};

// Scans L(sigma, chi) for real zeros on [lo, hi] subset of [0.05, 1).
inline ZeroScanResult scan_real_zeros(const RealCharacter& chi, double lo,
                                      double hi, double step,
                                      double target_abs_err = 1e-10,
                                      unsigned threads = 1) {
    if (!(lo >= 0.05 && hi < 1.0 && lo < hi))
        throw std::invalid_argument("scan_real_zeros: interval must sit inside [0.05, 1)");
    if (!(step > 0.0 && step <= 1e-2))
        throw std::invalid_argument("scan_real_zeros: step must be in (0, 1e-2]");
    ZeroScanResult result;
    result.character = chi;
    result.lo = lo;
    result.hi = hi;
    result.step = step;
    result.outcome = scan_zeros_fn(
        [&](double sigma) {
            const LValue v = l_value(chi, sigma, target_abs_err);
            return detail::CertifiedValue{v.value, v.error_bound};
        },
        lo, hi, step, 1e-9, threads);
    return result;
}

// Predicted psi(x; q, a): x/phi(q), minus the exceptional-zero term
// chi1(a) x^{beta1} / (phi(q) beta1) when exceptional data is supplied.
inline double psi_ap_predicted(double x, std::uint64_t q, std::int64_t a,
                               std::optional<double> beta1 = {},
                               const RealCharacter* chi1 = nullptr) {
    if (q < 1) throw std::invalid_argument("psi_ap_predicted: q must be >= 1");
    const std::int64_t qi = static_cast<std::int64_t>(q);
    const std::uint64_t r = static_cast<std::uint64_t>(((a % qi) + qi) % qi);
    if (gcd_u64(r, q) != 1)
        throw std::domain_error("psi_ap_predicted: a must be a unit mod q");
    if (beta1.has_value() != (chi1 != nullptr))
        throw std::invalid_argument("psi_ap_predicted: supply beta1 and chi1 together");
    const double phi = static_cast<double>(euler_phi_u64(q));
    double value = x / phi;
    if (beta1) {
        if (!(*beta1 > 0.0 && *beta1 <= 1.0))
            throw std::domain_error("psi_ap_predicted: beta1 must lie in (0, 1]");
        value -= static_cast<double>(char_value(*chi1, a)) *
                 std::pow(x, *beta1) / (phi * *beta1);
    }
    return value;
}

}  // namespace gblab
