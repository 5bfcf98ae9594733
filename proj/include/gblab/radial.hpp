#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gblab/arith.hpp"
#include "gblab/goldbach.hpp"
#include "gblab/util.hpp"

namespace gblab {

// Abel-smoothing configuration: weights r^n with r = e^{-1/N} concentrate
// mass at scale N. Series are truncated at X >= 40N, which puts the dropped
// tail (bounded by N log X e^{-X/N}) far below double roundoff.
struct RadialParam {
    double n_scale = 0.0;      // N
    double radius = 0.0;       // e^{-1/N}
    std::uint64_t truncation = 0;  // X
    double tail_bound = 0.0;   // N log X e^{-X/N}

    static RadialParam make(double n_scale,
                            std::optional<std::uint64_t> truncation = {}) {
        if (!(n_scale > 0.0))
            throw std::invalid_argument("RadialParam: N must be positive");
        RadialParam p;
        p.n_scale = n_scale;
        p.radius = std::exp(-1.0 / n_scale);
        p.truncation = truncation.value_or(
            static_cast<std::uint64_t>(std::ceil(40.0 * n_scale)));
        if (static_cast<double>(p.truncation) < 40.0 * n_scale)
            throw std::invalid_argument("RadialParam: truncation below 40N policy");
        p.tail_bound = n_scale * std::log(static_cast<double>(p.truncation)) *
                       std::exp(-static_cast<double>(p.truncation) / n_scale);
        if (!(p.tail_bound < 1e-12 * n_scale))
            throw invariant_error("RadialParam: tail bound not negligible");
        return p;
    }
};

namespace detail {

inline void check_sieve(const RadialParam& p, const SieveTables& t) {
    if (t.limit() < p.truncation)
        throw std::out_of_range("radial: sieve smaller than truncation");
}

// Prime powers up to X with their smoothing weights e^{-n/N}.
struct RadialTerms {
    std::vector<std::uint32_t> n;
    std::vector<double> weight;  // Lambda(n) e^{-n/N}
};

inline RadialTerms radial_terms(const RadialParam& p, const SieveTables& t) {
    check_sieve(p, t);
    RadialTerms terms;
    for (const auto& pp : t.prime_powers()) {
        if (pp.n > p.truncation) break;
        terms.n.push_back(pp.n);
        terms.weight.push_back(
            pp.log_prime * std::exp(-static_cast<double>(pp.n) / p.n_scale));
    }
    return terms;
}

}  // namespace detail

// Psi(r; q, b) = sum_{n <= X, n = b (mod q)} Lambda(n) r^n.
inline double psi_r_qb(const RadialParam& p, std::uint64_t q, std::int64_t b,
                       const SieveTables& t) {
    if (q < 1) throw std::invalid_argument("psi_r_qb: q must be >= 1");
    detail::check_sieve(p, t);
    const std::uint64_t r = static_cast<std::uint64_t>(
        ((b % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q)) %
        static_cast<std::int64_t>(q));
    NeumaierSum s;
    for (const auto& pp : t.prime_powers()) {
        if (pp.n > p.truncation) break;
        if (pp.n % q == r)
            s.add(pp.log_prime * std::exp(-static_cast<double>(pp.n) / p.n_scale));
    }
    return s.value();
}

// All residue sums Psi(r; q, b), b = 0..q-1, in one pass.
inline std::vector<double> progression_sums(const RadialParam& p, std::uint64_t q,
                                            const SieveTables& t) {
    if (q < 1) throw std::invalid_argument("progression_sums: q must be >= 1");
    detail::check_sieve(p, t);
    std::vector<NeumaierSum> acc(q);
    for (const auto& pp : t.prime_powers()) {
        if (pp.n > p.truncation) break;
        acc[pp.n % q].add(
            pp.log_prime * std::exp(-static_cast<double>(pp.n) / p.n_scale));
    }
    std::vector<double> out(q);
    for (std::uint64_t b = 0; b < q; ++b) out[b] = acc[b].value();
    return out;
}

enum class SqRoute { goldbach, progressions, dft };

struct SqResult {
    std::uint64_t q = 0;
    SqRoute route = SqRoute::goldbach;
    double value = 0.0;
    double imag_residual = 0.0;  // dft route only
    std::uint64_t truncation = 0;
};

// Route 1: S(q) = sum over multiples of q of the truncated Goldbach
// convolution, sum_{n <= 2X, q | n} psi2table(n) r^n. The table must be
// built at the same truncation so both sides of the identity match.
inline SqResult sq_via_goldbach(const RadialParam& p, std::uint64_t q,
                                const Psi2Table& table) {
    if (q < 1) throw std::invalid_argument("sq_via_goldbach: q must be >= 1");
    if (table.summand_limit != p.truncation)
        throw std::invalid_argument("sq_via_goldbach: table truncation mismatch");
    NeumaierSum s;
    for (std::uint64_t n = q; n <= 2 * p.truncation; n += q) {
        const double v = table.values[n];
        if (v != 0.0)
            s.add(v * std::exp(-static_cast<double>(n) / p.n_scale));
    }
    return {q, SqRoute::goldbach, s.value(), 0.0, p.truncation};
}

// Route 2: S(q) = sum_{b=1}^{q} Psi(r; q, b) Psi(r; q, -b).
inline SqResult sq_via_progressions(const RadialParam& p, std::uint64_t q,
                                    const SieveTables& t) {
    const std::vector<double> psi = progression_sums(p, q, t);
    NeumaierSum s;
    for (std::uint64_t b = 1; b <= q; ++b)
        s.add(psi[b % q] * psi[(q - b) % q]);
    return {q, SqRoute::progressions, s.value(), 0.0, p.truncation};
}

namespace detail {

inline std::vector<std::complex<double>> unit_roots(std::uint64_t q) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    std::vector<std::complex<double>> roots(q);
    for (std::uint64_t k = 0; k < q; ++k) {
        const double angle =
            two_pi * static_cast<double>(k) / static_cast<double>(q);
        roots[k] = std::polar(1.0, angle);
    }
    return roots;
}

// Psi evaluated at r e(a/q), from a fixed per-q root table so every a uses
// the same phase values.
inline std::complex<double> psi_at_arc(const RadialTerms& terms,
                                       const std::vector<std::complex<double>>& roots,
                                       const std::vector<std::uint32_t>& n_mod_q,
                                       std::uint64_t a, std::uint64_t q) {
    NeumaierSum re;
    NeumaierSum im;
    for (std::size_t i = 0; i < terms.n.size(); ++i) {
        const std::complex<double> root = roots[(a * n_mod_q[i]) % q];
        re.add(terms.weight[i] * root.real());
        im.add(terms.weight[i] * root.imag());
    }
    return {re.value(), im.value()};
}

}  // namespace detail

// Route 3: S(q) = (1/q) sum_{a=1}^{q} Psi(r e(a/q))^2, complex evaluation.
// Exactly real in exact arithmetic; the leftover imaginary part is reported.
inline SqResult sq_via_dft(const RadialParam& p, std::uint64_t q,
                           const SieveTables& t, unsigned threads = 1) {
    if (q < 1) throw std::invalid_argument("sq_via_dft: q must be >= 1");
    const detail::RadialTerms terms = detail::radial_terms(p, t);
    const auto roots = detail::unit_roots(q);
    std::vector<std::uint32_t> n_mod_q(terms.n.size());
    for (std::size_t i = 0; i < terms.n.size(); ++i)
        n_mod_q[i] = static_cast<std::uint32_t>(terms.n[i] % q);

    std::vector<std::complex<double>> slot(q);
    parallel_for_slots(q, threads, [&](std::size_t idx) {
        const std::uint64_t a = idx + 1;
        const std::complex<double> psi =
            detail::psi_at_arc(terms, roots, n_mod_q, a, q);
        slot[idx] = psi * psi;
    });
    NeumaierSum re;
    NeumaierSum im;
    for (std::uint64_t idx = 0; idx < q; ++idx) {
        re.add(slot[idx].real());
        im.add(slot[idx].imag());
    }
    const double qd = static_cast<double>(q);
    return {q, SqRoute::dft, re.value() / qd, std::abs(im.value()) / qd,
            p.truncation};
}

// Predicted S(q): N^2/phi(q) plus, when an exceptional zero beta1 is
// supplied, parity * Gamma(beta1)^2 N^{2 beta1} / phi(q). Parity is chi(-1).
inline double sq_predicted(const RadialParam& p, std::uint64_t q,
                           std::optional<double> beta1, int parity,
                           const SieveTables& t) {
    if (q < 1) throw std::invalid_argument("sq_predicted: q must be >= 1");
    if (parity != 1 && parity != -1)
        throw std::invalid_argument("sq_predicted: parity must be +1 or -1");
    const double phi = static_cast<double>(t.phi(q));
    double value = p.n_scale * p.n_scale / phi;
    if (beta1) {
        if (!(*beta1 > 0.0 && *beta1 <= 1.0))
            throw std::domain_error("sq_predicted: beta1 must lie in (0, 1]");
        const double g = std::tgamma(*beta1);
        value += static_cast<double>(parity) * g * g *
                 std::pow(p.n_scale, 2.0 * *beta1) / phi;
    }
    return value;
}

inline double tq_predicted(const RadialParam& p, std::uint64_t q,
                           std::optional<double> beta1, const SieveTables& t) {
    return sq_predicted(p, q, beta1, 1, t);
}

namespace detail {

// Shared inner sum for Psi2(r, k): r^k * sum over prime powers n in (k, X]
// of Lambda(n) * combined[n - k], where combined[m] = Lambda(m) e^{-2m/N}.
struct PairKernel {
    const RadialParam* param;
    const SieveTables* tables;
    std::vector<double> combined;  // index 0..X

    PairKernel(const RadialParam& p, const SieveTables& t)
        : param(&p), tables(&t) {
        check_sieve(p, t);
        combined.assign(p.truncation + 1, 0.0);
        for (const auto& pp : t.prime_powers()) {
            if (pp.n > p.truncation) break;
            combined[pp.n] =
                pp.log_prime *
                std::exp(-2.0 * static_cast<double>(pp.n) / p.n_scale);
        }
    }

    double eval(std::uint64_t k) const {
        const auto& pps = tables->prime_powers();
        NeumaierSum s;
        for (const auto& pp : pps) {
            if (pp.n > param->truncation) break;
            if (pp.n <= k) continue;
            const double c = combined[pp.n - k];
            if (c != 0.0) s.add(pp.log_prime * c);
        }
        return std::exp(-static_cast<double>(k) / param->n_scale) * s.value();
    }
};

}  // namespace detail

// Psi2(r, k) = sum_{n <= X} Lambda(n) Lambda(n-k) r^{2n-k}.
inline double psi2_r_k(const RadialParam& p, std::uint64_t k,
                       const SieveTables& t) {
    if (k > 2 * p.truncation)
        throw std::invalid_argument("psi2_r_k: k beyond 2X");
    detail::PairKernel kernel(p, t);
    return kernel.eval(k);
}

// Route 1 for T(q): Psi2(r, 0) + 2 sum_{j >= 1} Psi2(r, qj), truncated where
// the terms vanish (qj >= X gives an empty sum).
inline double tq_via_pairs(const RadialParam& p, std::uint64_t q,
                           const SieveTables& t) {
    if (q < 1) throw std::invalid_argument("tq_via_pairs: q must be >= 1");
    detail::PairKernel kernel(p, t);
    NeumaierSum s;
    s.add(kernel.eval(0));
    for (std::uint64_t k = q; k < p.truncation; k += q)
        s.add(2.0 * kernel.eval(k));
    return s.value();
}

// Route 2 for T(q): sum_{b=1}^{q} Psi(r; q, b)^2.
inline double tq_via_progressions(const RadialParam& p, std::uint64_t q,
                                  const SieveTables& t) {
    const std::vector<double> psi = progression_sums(p, q, t);
    NeumaierSum s;
    for (std::uint64_t b = 1; b <= q; ++b) {
        const double v = psi[b % q];
        s.add(v * v);
    }
    return s.value();
}

// Cross-check route: T(q) = (1/q) sum_{a=1}^{q} |Psi(r e(a/q))|^2.
inline double tq_via_dft(const RadialParam& p, std::uint64_t q,
                         const SieveTables& t, unsigned threads = 1) {
    if (q < 1) throw std::invalid_argument("tq_via_dft: q must be >= 1");
    const detail::RadialTerms terms = detail::radial_terms(p, t);
    const auto roots = detail::unit_roots(q);
    std::vector<std::uint32_t> n_mod_q(terms.n.size());
    for (std::size_t i = 0; i < terms.n.size(); ++i)
        n_mod_q[i] = static_cast<std::uint32_t>(terms.n[i] % q);

    std::vector<double> slot(q);
    parallel_for_slots(q, threads, [&](std::size_t idx) {
        const std::complex<double> psi =
            detail::psi_at_arc(terms, roots, n_mod_q, idx + 1, q);
        slot[idx] = std::norm(psi);
    });
    NeumaierSum s;
    for (std::uint64_t idx = 0; idx < q; ++idx) s.add(slot[idx]);
    return s.value() / static_cast<double>(q);
}

}  // namespace gblab
