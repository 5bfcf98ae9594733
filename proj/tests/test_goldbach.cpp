#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gblab/goldbach.hpp"
#include "oracles.hpp"

using namespace gblab;
using Catch::Approx;

namespace {
const SieveTables& tables_1e5() {
    static const SieveTables t = SieveTables::build(100'000);
    return t;
}
const TwinPrimeConstant& c2() {
    static const TwinPrimeConstant c = twin_prime_constant(100'000);
    return c;
}
}  // namespace

TEST_CASE("psi2 small values against enumeration") {
    const SieveTables& t = tables_1e5();
    const double l2 = std::log(2.0), l3 = std::log(3.0), l5 = std::log(5.0),
                 l7 = std::log(7.0);
    CHECK(psi2(4, t) == Approx(l2 * l2).epsilon(1e-15));
    CHECK(psi2(4, t) == Approx(0.4804530).margin(1e-6));
    CHECK(psi2(5, t) == Approx(2 * l2 * l3).epsilon(1e-15));
    CHECK(psi2(5, t) == Approx(1.5230000).margin(1e-6));
    CHECK(psi2(10, t) == Approx(2 * l2 * l2 + 2 * l3 * l7 + l5 * l5).epsilon(1e-14));
    CHECK(psi2(10, t) == Approx(7.8267980).margin(1e-6));
    CHECK(psi2(2, t) == 0.0);
    CHECK(psi2(3, t) == 0.0);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> pick(2, 600);
    for (int i = 0; i < 40; ++i) {
        const std::uint64_t n = pick(rng);
        CAPTURE(n);
        CHECK(psi2(n, t) == Approx(oracle::psi2_ref(n)).margin(1e-10));
    }
}

TEST_CASE("psi2 table agrees with psi2 below the summand limit") {
    const SieveTables& t = tables_1e5();
    const Psi2Table table = psi2_table(2'000, t);
    const double l2 = std::log(2.0), l3 = std::log(3.0), l5 = std::log(5.0);

    CHECK(table.at(7) == Approx(2 * l2 * (l5 + l3)).epsilon(1e-14));
    CHECK(table.at(7) == Approx(3.7541547).margin(1e-6));

    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::uint64_t> pick(2, 2'000);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t n = pick(rng);
        CAPTURE(n);
        CHECK(table.at(n) == Approx(psi2(n, t)).margin(1e-9));
    }

    // Above the summand limit the table only counts bounded summands.
    CHECK(table.at(2 * 2'000) <= psi2(4'000, t));
}

TEST_CASE("psi2 table exact pairs reproduce small entries symbolically") {
    const SieveTables& t = tables_1e5();
    const Psi2Table table = psi2_table(2'000, t);
    for (std::uint64_t n = 4; n <= 100; ++n) {
        NeumaierSum s;
        for (const auto& [m, m2] : table.exact_pairs[n])
            s.add(oracle::lambda_ref(m) * oracle::lambda_ref(m2));
        CAPTURE(n);
        CHECK(s.value() == Approx(table.at(n)).margin(1e-12));
    }
}

TEST_CASE("psi2 table Cauchy identity: total mass is psi(X)^2") {
    const SieveTables& t = tables_1e5();
    const Psi2Table table = psi2_table(2'000, t);
    NeumaierSum total;
    for (std::uint64_t n = 0; n < table.values.size(); ++n)
        total.add(table.values[n]);
    const double psi = chebyshev_psi(2'000, t);
    CHECK(total.value() == Approx(psi * psi).epsilon(1e-9));
}

TEST_CASE("psi2 table generating-function identity at r = 0.5") {
    const SieveTables& t = tables_1e5();
    const Psi2Table table = psi2_table(60, t);
    const double r = 0.5;
    NeumaierSum lhs;
    for (std::uint64_t n = 0; n < table.values.size(); ++n)
        if (table.values[n] != 0.0)
            lhs.add(table.values[n] * std::pow(r, static_cast<double>(n)));
    NeumaierSum psi_r;
    for (const auto& pp : t.prime_powers()) {
        if (pp.n > 60) break;
        psi_r.add(pp.log_prime * std::pow(r, static_cast<double>(pp.n)));
    }
    CHECK(lhs.value() == Approx(psi_r.value() * psi_r.value()).epsilon(1e-12));
}

TEST_CASE("psi2 symmetry: half-range doubling equals direct enumeration") {
    const SieveTables& t = tables_1e5();
    const auto weights = t.lambda_weights();
    for (std::uint64_t n : {100ull, 101ull, 999ull, 1000ull, 7777ull}) {
        NeumaierSum half;
        for (const auto& pp : t.prime_powers()) {
            if (2 * static_cast<std::uint64_t>(pp.n) >= n) break;
            const double w = weights[n - pp.n];
            if (w != 0.0) half.add(2.0 * pp.log_prime * w);
        }
        double diag = 0.0;
        if (n % 2 == 0) {
            const double w = weights[n / 2];
            diag = w * w;
        }
        CAPTURE(n);
        CHECK(half.value() + diag == Approx(psi2(n, t)).epsilon(1e-12));
    }
}

TEST_CASE("odd psi2 stays under 2 log^2 n (sampled)") {
    const SieveTables& t = tables_1e5();
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::uint64_t> pick(3, 100'000);
    for (int i = 0; i < 120; ++i) {
        std::uint64_t n = pick(rng) | 1;
        const double logn = std::log(static_cast<double>(n));
        CAPTURE(n);
        CHECK(psi2(n, t) <= 2.0 * logn * logn);
    }
}

TEST_CASE("psi2_pair examples and k = 0 reduction") {
    const SieveTables& t = tables_1e5();
    const double l2 = std::log(2.0), l3 = std::log(3.0), l5 = std::log(5.0),
                 l7 = std::log(7.0);
    // Pairs n in {4, 5, 7, 9}: (2,4), (3,5), (5,7), (7,9).
    const double expected = l2 * l2 + l5 * l3 + l7 * l5 + l3 * l7;
    CHECK(psi2_pair(10, 2, t) == Approx(expected).epsilon(1e-14));
    CHECK(psi2_pair(10, 2, t) == Approx(oracle::psi2_pair_ref(10, 2)).epsilon(1e-13));

    NeumaierSum sq;
    for (const auto& pp : t.prime_powers()) {
        if (pp.n > 500) break;
        sq.add(pp.log_prime * pp.log_prime);
    }
    CHECK(psi2_pair(500, 0, t) == Approx(sq.value()).epsilon(1e-13));

    std::mt19937_64 rng(19);
    std::uniform_int_distribution<std::uint64_t> kpick(0, 50);
    for (int i = 0; i < 25; ++i) {
        const std::uint64_t k = kpick(rng);
        CAPTURE(k);
        CHECK(psi2_pair(400, k, t) ==
              Approx(oracle::psi2_pair_ref(400, k)).margin(1e-10));
    }
}

TEST_CASE("odd psi2_pair stays under 2 log^2 x") {
    const SieveTables& t = tables_1e5();
    const double cap = 2.0 * std::log(1e5) * std::log(1e5);
    for (std::uint64_t k = 1; k <= 99; k += 2) {
        CAPTURE(k);
        CHECK(psi2_pair(1e5, k, t) <= cap);
    }
}

TEST_CASE("goldbach ratios behave on [1e4, 2e4]") {
    const SieveTables& t = tables_1e5();
    const Psi2Table table = psi2_table(20'000, t);
    const GoldbachRatioScan scan =
        goldbach_ratio_scan(10'000, 20'000, c2(), table, t, /*keep_entries=*/false);
    CHECK(scan.min_ratio > 0.0);
    CHECK(scan.min_ratio > 0.7);
    CHECK(scan.max_ratio < 1.3);
    CHECK(scan.implied_delta > 0.0);
    CHECK(scan.implied_delta ==
          Approx(std::min(scan.min_ratio, 2.0 - scan.max_ratio)));
}

TEST_CASE("ratios are positive for all even n in [6, 1e4]") {
    const SieveTables& t = tables_1e5();
    const Psi2Table table = psi2_table(10'000, t);
    const GoldbachRatioScan scan =
        goldbach_ratio_scan(6, 10'000, c2(), table, t, /*keep_entries=*/false);
    CHECK(scan.min_ratio > 0.0);
}

TEST_CASE("ratio determinism and error contracts") {
    const SieveTables& t = tables_1e5();
    const Psi2Table table = psi2_table(1'000, t);
    const GoldbachRatio a = goldbach_ratio(308, c2(), table, t);
    const GoldbachRatio b = goldbach_ratio(308, c2(), table, t);
    CHECK(a.ratio == b.ratio);
    CHECK_THROWS_AS(goldbach_ratio(309, c2(), table, t), std::domain_error);
    CHECK_THROWS_AS(goldbach_ratio(4, c2(), table, t), std::invalid_argument);
    CHECK_THROWS_AS(goldbach_ratio_scan(7, 100, c2(), table, t), std::domain_error);
    CHECK_THROWS_AS(psi2_table(1, t), std::invalid_argument);
    CHECK_THROWS_AS(psi2(1, t), std::invalid_argument);
}

TEST_CASE("pair margins against the upper-bound conjecture") {
    const SieveTables& t = tables_1e5();
    const PairRatio r = pair_margin(50'000, 2, 0.2, c2(), t);
    CHECK(r.ratio > 0.5);
    CHECK(r.ratio < 1.5);
    CHECK(r.margin_vs_2minusdelta == Approx((2.0 - 0.2) - r.ratio));
    CHECK_THROWS_AS(pair_margin(100, 3, 0.2, c2(), t), std::domain_error);
}
