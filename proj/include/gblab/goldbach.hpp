#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gblab/arith.hpp"
#include "gblab/singular.hpp"
#include "gblab/util.hpp"

namespace gblab {

// psi2(n) = sum_{m+m'=n} Lambda(m) Lambda(m'), by direct enumeration over
// prime powers m < n.
inline double psi2(std::uint64_t n, const SieveTables& t) {
    if (n < 2) throw std::invalid_argument("psi2: n must be >= 2");
    if (n > t.limit()) throw std::out_of_range("psi2: n exceeds sieve limit");
    const auto weights = t.lambda_weights();
    NeumaierSum s;
    for (const auto& pp : t.prime_powers()) {
        if (pp.n >= n) break;
        const double w = weights[n - pp.n];
        if (w != 0.0) s.add(pp.log_prime * w);
    }
    return s.value();
}

// Bulk convolution table: values[n] = sum over m + m' = n with both
// summands <= summand_limit. Equal to psi2(n) exactly for n <= summand_limit.
// For n <= 100 the contributing summand pairs are kept verbatim so small
// values can be checked symbolically.
struct Psi2Table {
    std::uint64_t summand_limit = 0;
    std::vector<double> values;  // index 0 .. 2 * summand_limit
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> exact_pairs;

    double at(std::uint64_t n) const {
        if (n >= values.size())
            throw std::out_of_range("Psi2Table: index outside table");
        return values[n];
    }
};

inline Psi2Table psi2_table(std::uint64_t summand_limit, const SieveTables& t) {
    if (summand_limit < 2)
        throw std::invalid_argument("psi2_table: summand limit must be >= 2");
    if (summand_limit > 1'000'000)
        throw std::invalid_argument("psi2_table: summand limit above 1e6 memory guard");
    if (summand_limit > t.limit())
        throw std::out_of_range("psi2_table: summand limit exceeds sieve limit");

    Psi2Table table;
    table.summand_limit = summand_limit;
    table.values.assign(2 * summand_limit + 1, 0.0);

    const auto& pps = t.prime_powers();
    std::size_t count = 0;
    while (count < pps.size() && pps[count].n <= summand_limit) ++count;
    for (std::size_t i = 0; i < count; ++i) {
        const double wi = pps[i].log_prime;
        const std::uint64_t ni = pps[i].n;
        for (std::size_t j = 0; j < count; ++j)
            table.values[ni + pps[j].n] += wi * pps[j].log_prime;
    }

    const std::uint64_t spot = std::min<std::uint64_t>(100, 2 * summand_limit);
    table.exact_pairs.assign(spot + 1, {});
    for (std::size_t i = 0; i < count && pps[i].n <= spot; ++i)
        for (std::size_t j = 0; j < count; ++j) {
            const std::uint64_t sum = pps[i].n + pps[j].n;
            if (sum > spot) break;
            table.exact_pairs[sum].emplace_back(pps[i].n, pps[j].n);
        }
    return table;
}

// psi2(x, k) = sum_{k < n <= x} Lambda(n) Lambda(n - k).
inline double psi2_pair(double x, std::uint64_t k, const SieveTables& t) {
    if (static_cast<double>(k) > x)
        throw std::invalid_argument("psi2_pair: need k <= x");
    if (x > static_cast<double>(t.limit()))
        throw std::out_of_range("psi2_pair: x exceeds sieve limit");
    const auto weights = t.lambda_weights();
    NeumaierSum s;
    for (const auto& pp : t.prime_powers()) {
        if (static_cast<double>(pp.n) > x) break;
        if (pp.n <= k) continue;
        const double w = weights[pp.n - k];
        if (w != 0.0) s.add(pp.log_prime * w);
    }
    return s.value();
}

// Ratio psi2(n) / (S(n) n) for even n; the scale on which the
// Hardy-Littlewood prediction is 1.
struct GoldbachRatio {
    std::uint64_t n = 0;
    double psi2 = 0.0;
    double singular = 0.0;
    double ratio = 0.0;
};

inline GoldbachRatio goldbach_ratio(std::uint64_t n, const TwinPrimeConstant& c2,
                                    const Psi2Table& table, const SieveTables& t) {
    if (n % 2 != 0)
        throw std::domain_error("goldbach_ratio: odd n has vanishing singular series");
    if (n < 6) throw std::invalid_argument("goldbach_ratio: n must be >= 6");
    if (n > table.summand_limit)
        throw std::out_of_range("goldbach_ratio: table not exact beyond its summand limit");
    GoldbachRatio r;
    r.n = n;
    r.psi2 = table.values[n];
    r.singular = 2.0 * c2.value * singular_factor_value(n, t);
    r.ratio = r.psi2 / (r.singular * static_cast<double>(n));
    return r;
}

// Sweep of the ratio over even n in [n_lo, n_hi]. implied_delta is the
// largest delta consistent with both the lower and upper weak-conjecture
// margins seen on the range: min(min_ratio, 2 - max_ratio).
struct GoldbachRatioScan {
    std::vector<GoldbachRatio> entries;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::uint64_t argmin = 0;
    std::uint64_t argmax = 0;
    double implied_delta = 0.0;
};

inline GoldbachRatioScan goldbach_ratio_scan(std::uint64_t n_lo, std::uint64_t n_hi,
                                             const TwinPrimeConstant& c2,
                                             const Psi2Table& table,
                                             const SieveTables& t,
                                             bool keep_entries = true) {
    if (n_lo % 2 != 0 || n_hi % 2 != 0)
        throw std::domain_error("goldbach_ratio_scan: range endpoints must be even");
    if (n_lo < 6 || n_lo > n_hi)
        throw std::invalid_argument("goldbach_ratio_scan: need 6 <= n_lo <= n_hi");
    GoldbachRatioScan scan;
    scan.min_ratio = std::numeric_limits<double>::infinity();
    scan.max_ratio = -std::numeric_limits<double>::infinity();
    for (std::uint64_t n = n_lo; n <= n_hi; n += 2) {
        const GoldbachRatio r = goldbach_ratio(n, c2, table, t);
        if (r.ratio < scan.min_ratio) {
            scan.min_ratio = r.ratio;
            scan.argmin = n;
        }
        if (r.ratio > scan.max_ratio) {
            scan.max_ratio = r.ratio;
            scan.argmax = n;
        }
        if (keep_entries) scan.entries.push_back(r);
    }
    scan.implied_delta = std::min(scan.min_ratio, 2.0 - scan.max_ratio);
    return scan;
}

// Prime-pair margin against the (2 - delta) upper-bound conjecture:
// ratio = psi2(x, k) / (S(k)(x - k)), margin = (2 - delta) - ratio.
struct PairRatio {
    std::uint64_t k = 0;
    double x = 0.0;
    double value = 0.0;
    double ratio = 0.0;
    double margin_vs_2minusdelta = 0.0;
};

inline PairRatio pair_margin(double x, std::uint64_t k, double delta,
                             const TwinPrimeConstant& c2, const SieveTables& t) {
    if (k % 2 != 0 || k < 2)
        throw std::domain_error("pair_margin: k must be even and >= 2");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("pair_margin: delta must lie in (0,1)");
    PairRatio r;
    r.k = k;
    r.x = x;
    r.value = psi2_pair(x, k, t);
    const double sing = 2.0 * c2.value * singular_factor_value(k, t);
    r.ratio = r.value / (sing * (x - static_cast<double>(k)));
    r.margin_vs_2minusdelta = (2.0 - delta) - r.ratio;
    return r;
}

}  // namespace gblab
