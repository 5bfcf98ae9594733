#pragma once

#include <cmath>
#include <stdexcept>

namespace gblab {

// Constants of the exclusion argument. The source material leaves them
// symbolic; the defaults are placeholders and every one is configurable.
// Requires 0 < c' < c'' < c1 and 0 < delta < 1.
struct BoundParams {
    double delta = 0.5;
    double c = 1.0;        // hypothesis constant in 1 - c/log q < beta1
    double c1 = 1.0;       // progression error-term constant
    double c_prime = 0.9;
    double c_dprime = 0.95;

    void validate() const {
        if (!(delta > 0.0 && delta < 1.0))
            throw std::domain_error("BoundParams: delta must lie in (0, 1)");
        if (!(c > 0.0)) throw std::domain_error("BoundParams: c must be positive");
        if (!(c_prime > 0.0 && c_prime < c_dprime && c_dprime < c1))
            throw std::domain_error("BoundParams: need 0 < c' < c'' < c1");
    }
};

// log of Gamma(beta1)^2 N^{2(beta1 - 1)}, the ratio of the exceptional-zero
// term to the main term. Evaluated in log space so N as large as e^{10^12}
// stays finite.
inline double zero_term_log_ratio(double beta1, double log_n) {
    if (!(beta1 > 0.0 && beta1 <= 1.0))
        throw std::domain_error("zero_term_log_ratio: beta1 must lie in (0, 1]");
    if (!(log_n > 0.0))
        throw std::domain_error("zero_term_log_ratio: log N must be positive");
    return 2.0 * std::lgamma(beta1) + 2.0 * (beta1 - 1.0) * log_n;
}

// The smoothing scale used to turn the inequality into a zero bound:
// log N = (log q / c'')^2.
inline double smoothing_scale_log(double log_q, const BoundParams& p) {
    p.validate();
    if (!(log_q > 0.0))
        throw std::domain_error("smoothing_scale_log: log q must be positive");
    const double t = log_q / p.c_dprime;
    return t * t;
}

// Conditional upper bound on an exceptional zero:
// beta1 < 1 - (c'^2/2) log(1/(1-delta)) / log^2 q.
inline double beta1_upper_bound(const BoundParams& p, double log_q) {
    p.validate();
    if (!(log_q > 0.0))
        throw std::domain_error("beta1_upper_bound: log q must be positive");
    const double log_inv = -std::log1p(-p.delta);  // log(1/(1-delta))
    return 1.0 - 0.5 * p.c_prime * p.c_prime * log_inv / (log_q * log_q);
}

struct ExclusionReport {
    double log_q = 0.0;
    double log_n = 0.0;
    double key_lhs_log = 0.0;    // log of Gamma(beta1)^2 N^{2(beta1-1)}
    double rhs = 0.0;            // (1 - delta) + margin
    double bound_on_beta1 = 0.0;
    bool excluded = false;
};

// Tests a candidate zero against the inequality
//   Gamma(beta1)^2 N^{2(beta1-1)} <= (1 - delta) + margin
// at log N = (log q / c'')^2, and reports the equivalent beta1 bound
//   beta1 <= 1 + (log rhs - 2 log Gamma(beta1)) / (2 log N).
// `margin` stands in for the finite-size error terms; it must keep the
// right-hand side below 1.
inline ExclusionReport evaluate_exclusion(const BoundParams& p, double log_q,
                                          double beta1_candidate,
                                          double margin = 0.0) {
    p.validate();
    if (!(beta1_candidate > 0.0 && beta1_candidate < 1.0))
        throw std::domain_error("evaluate_exclusion: candidate must lie in (0, 1)");
    if (!(margin >= 0.0 && margin < p.delta))
        throw std::domain_error("evaluate_exclusion: margin must lie in [0, delta)");
    ExclusionReport r;
    r.log_q = log_q;
    r.log_n = smoothing_scale_log(log_q, p);
    r.key_lhs_log = zero_term_log_ratio(beta1_candidate, r.log_n);
    r.rhs = (1.0 - p.delta) + margin;
    const double log_rhs = std::log(r.rhs);
    r.bound_on_beta1 =
        1.0 + (log_rhs - 2.0 * std::lgamma(beta1_candidate)) / (2.0 * r.log_n);
    r.excluded = r.key_lhs_log > log_rhs;
    return r;
}

}  // namespace gblab
