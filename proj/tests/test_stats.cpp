#include "netdiff/enrichment.hpp"
#include "netdiff/error.hpp"
#include "netdiff/node_class.hpp"
#include "netdiff/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace netdiff;

namespace {

// Independent chi-squared tail oracle using the closed forms:
//   even df = 2m:     Q = exp(-y) * sum_{i<m} y^i / i!
//   odd  df = 2m + 1: Q = erfc(sqrt(y)) + exp(-y) * sum_{j=1..m} y^(j-1/2) / Gamma(j+1/2)
// with y = x/2 and Gamma(j+1/2) = sqrt(pi) (2j)! / (4^j j!). No shared code
// with the continued-fraction implementation.
double chi2_tail_oracle(double x, int df) {
    const double y = x / 2.0;
    if (df % 2 == 0) {
        const int m = df / 2;
        double term = 1.0, sum = 0.0;
        for (int i = 0; i < m; ++i) {
            sum += term;
            term *= y / (i + 1);
        }
        return std::exp(-y) * sum;
    }
    const int m = df / 2;
    double result = std::erfc(std::sqrt(y));
    double gamma_half = std::sqrt(3.14159265358979323846) / 2.0; // Gamma(3/2)
    double y_pow = std::sqrt(y);
    for (int j = 1; j <= m; ++j) {
        result += std::exp(-y) * y_pow / gamma_half;
        gamma_half *= j + 0.5; // Gamma(j+3/2) = (j+1/2) Gamma(j+1/2)
        y_pow *= y;
    }
    return result;
}

// Hypergeometric pmf table by multiplicative recurrence in long double,
// normalized by its own total, then the two-sided sum. Independent of the
// log-gamma route used by the implementation.
double fisher_oracle(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    const std::uint64_t r1 = a + b, r2 = c + d, c1 = a + c;
    const std::uint64_t k_min = c1 > r2 ? c1 - r2 : 0;
    const std::uint64_t k_max = std::min(r1, c1);
    std::vector<long double> pmf(k_max - k_min + 1);
    pmf[0] = 1.0L;
    for (std::uint64_t k = k_min + 1; k <= k_max; ++k) {
        // P(k)/P(k-1) = (r1-k+1)(c1-k+1) / (k (r2-c1+k))
        const long double num = static_cast<long double>(r1 - k + 1) *
                                static_cast<long double>(c1 - k + 1);
        const long double den = static_cast<long double>(k) *
                                static_cast<long double>(r2 - c1 + k);
        pmf[k - k_min] = pmf[k - k_min - 1] * num / den;
    }
    long double total = 0.0L;
    for (long double p : pmf) total += p;
    for (long double& p : pmf) p /= total;
    const long double obs = pmf[a - k_min];
    long double two_sided = 0.0L;
    for (long double p : pmf) {
        if (p <= obs * (1.0L + 1e-7L)) two_sided += p;
    }
    return static_cast<double>(std::min(two_sided, 1.0L));
}

// Margin-formula route for the Yates-corrected 2x2 statistic; algebraically
// equal to the per-cell sum the implementation uses, but computed differently.
double prop_oracle(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2) {
    const double a = static_cast<double>(x1), b = static_cast<double>(n1 - x1);
    const double c = static_cast<double>(x2), d = static_cast<double>(n2 - x2);
    const double n = a + b + c + d;
    if (a + c == 0.0 || b + d == 0.0) return 1.0;
    const double cross = std::fabs(a * d - b * c);
    const double corrected = std::max(0.0, cross - n / 2.0);
    const double stat = n * corrected * corrected /
                        ((a + b) * (c + d) * (a + c) * (b + d));
    return chi2_tail_oracle(stat, 1);
}

} // namespace

TEST_CASE("chi2 tail matches frozen reference values") {
    CHECK(chi2_upper_tail(5.6, 2) == doctest::Approx(0.06081006262521797).epsilon(1e-10));
    CHECK(chi2_upper_tail(60.0, 2) == doctest::Approx(9.357622968840163e-14).epsilon(1e-9));
    CHECK(chi2_upper_tail(1.0, 1) == doctest::Approx(0.31731050786291115).epsilon(1e-10));
    CHECK(chi2_upper_tail(10.5, 3) == doctest::Approx(0.014760897143990665).epsilon(1e-10));
    CHECK(chi2_upper_tail(25.0, 6) == doctest::Approx(0.00034145459689170836).epsilon(1e-10));
    CHECK(chi2_upper_tail(3.2, 5) == doctest::Approx(0.6691829020332432).epsilon(1e-10));
    CHECK(chi2_upper_tail(304.08100776081136, 1) ==
          doctest::Approx(4.252818894377315e-68).epsilon(1e-9));
    CHECK(chi2_upper_tail(0.0, 4) == 1.0);
    CHECK(chi2_upper_tail(-1.0, 4) == 1.0);
    CHECK(chi2_upper_tail(5.0, 0) == 1.0);
}

TEST_CASE("chi2 tail agrees with the closed-form oracle across df and x") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ux(0.01, 80.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const int df = 1 + static_cast<int>(rng() % 10);
        const double x = ux(rng);
        const double expected = chi2_tail_oracle(x, df);
        const double got = chi2_upper_tail(x, df);
        CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("fisher exact matches frozen reference values") {
    CHECK(fisher_exact_2x2(8, 2, 1, 9) == doctest::Approx(0.005477494641581329).epsilon(1e-9));
    CHECK(fisher_exact_2x2(10, 10, 10, 10) == doctest::Approx(1.0));
    CHECK(fisher_exact_2x2(0, 0, 5, 5) == doctest::Approx(1.0));
    CHECK(fisher_exact_2x2(12, 5, 7, 20) == doctest::Approx(0.005313763698481829).epsilon(1e-9));
    CHECK(fisher_exact_2x2(2, 8, 9, 3) == doctest::Approx(0.029973122852379817).epsilon(1e-9));
    CHECK(fisher_exact_2x2(45, 31, 31, 893) ==
          doctest::Approx(4.347034991522175e-37).epsilon(1e-6));
    CHECK(fisher_exact_2x2(0, 5, 7, 2) == doctest::Approx(0.020979020979020983).epsilon(1e-9));
}

TEST_CASE("fisher exact agrees with the recurrence oracle on random tables") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint64_t a = rng() % 40, b = rng() % 40, c = rng() % 40, d = rng() % 40;
        if (a + b + c + d == 0) continue;
        const double expected = fisher_oracle(a, b, c, d);
        const double got = fisher_exact_2x2(a, b, c, d);
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("fisher exact is invariant under simultaneous row and column swaps") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t a = rng() % 30, b = rng() % 30, c = rng() % 30, d = rng() % 30;
        if (a + b + c + d == 0) continue;
        const double base = fisher_exact_2x2(a, b, c, d);
        CHECK(fisher_exact_2x2(d, c, b, a) == doctest::Approx(base).epsilon(1e-9));
        CHECK(fisher_exact_2x2(b, a, d, c) == doctest::Approx(base).epsilon(1e-9));
        CHECK(fisher_exact_2x2(c, d, a, b) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("proportion test matches frozen reference values") {
    // x1=45/76 vs x2=31/924: statistic 304.081..., p far below 1e-15
    CHECK(proportion_test(45, 76, 31, 924) < 1e-15);
    CHECK(proportion_test(5, 20, 10, 20) ==
          doctest::Approx(0.19141842523760344).epsilon(1e-9));
    CHECK(proportion_test(1, 10, 1, 10) == doctest::Approx(1.0));
    CHECK(proportion_test(3, 50, 40, 60) ==
          doctest::Approx(3.041685070057542e-10).epsilon(1e-6));
    CHECK(proportion_test(0, 10, 0, 10) == doctest::Approx(1.0)); // degenerate pooled 0
    CHECK(proportion_test(10, 10, 10, 10) == doctest::Approx(1.0)); // degenerate pooled 1
}

TEST_CASE("proportion test agrees with the margin-formula oracle") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint64_t n1 = 1 + rng() % 200, n2 = 1 + rng() % 200;
        const std::uint64_t x1 = rng() % (n1 + 1), x2 = rng() % (n2 + 1);
        const double expected = prop_oracle(x1, n1, x2, n2);
        const double got = proportion_test(x1, n1, x2, n2);
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("fisher combine matches frozen reference values") {
    CHECK(fisher_combine(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(fisher_combine(0.05, 0.05) ==
          doctest::Approx(0.017478661367769956).epsilon(1e-9));
    CHECK(fisher_combine(1.0, 0.01) == doctest::Approx(0.05605170185988095).epsilon(1e-9));
    CHECK(fisher_combine(0.5, 0.2) == doctest::Approx(0.33025850929940465).epsilon(1e-9));
    CHECK(fisher_combine(1e-8, 0.3) == doctest::Approx(6.187396064483484e-08).epsilon(1e-9));
}

TEST_CASE("fisher combine is symmetric and clamps zero p-values") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(1e-12, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double p1 = u(rng), p2 = u(rng);
        CHECK(fisher_combine(p1, p2) == doctest::Approx(fisher_combine(p2, p1)).epsilon(1e-12));
    }
    CHECK(fisher_combine(0.0, 0.5) > 0.0); // clamped, not an error
    CHECK_THROWS_AS(fisher_combine(1.5, 0.5), AnalysisError);
    CHECK_THROWS_AS(fisher_combine(-0.1, 0.5), AnalysisError);
}

TEST_CASE("chi2_gof worked examples") {
    {
        const GofResult r = chi2_gof(std::vector<double>{10, 10, 10},
                                     std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
        CHECK(r.statistic == doctest::Approx(0.0));
        CHECK(r.p_value == doctest::Approx(1.0));
    }
    {
        const GofResult r = chi2_gof(std::vector<double>{30, 0, 0},
                                     std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
        CHECK(r.statistic == doctest::Approx(60.0).epsilon(1e-12));
        CHECK(r.p_value < 1e-12);
    }
    {
        const GofResult r = chi2_gof(std::vector<double>{16, 8, 6},
                                     std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
        CHECK(r.statistic == doctest::Approx(5.6).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(0.06081006262521797).epsilon(1e-9));
    }
}

TEST_CASE("chi2_gof agrees with a direct recomputation on random tables") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 2 + rng() % 5;
        std::vector<double> obs(m), props(m);
        double total_prop = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            obs[c] = static_cast<double>(rng() % 50);
            props[c] = 0.05 + static_cast<double>(rng() % 100) / 100.0;
            total_prop += props[c];
        }
        double n = 0.0;
        for (double o : obs) n += o;
        if (n < 1.0) continue;
        for (auto& p : props) p /= total_prop;

        double stat = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            const double e = n * props[c];
            stat += (obs[c] - e) * (obs[c] - e) / e;
        }
        const GofResult r = chi2_gof(obs, props);
        CHECK(r.statistic == doctest::Approx(stat).epsilon(1e-10));
        CHECK(r.p_value ==
              doctest::Approx(chi2_tail_oracle(stat, static_cast<int>(m - 1))).epsilon(1e-6));
    }
}

TEST_CASE("chi2_gof rejects zero expectation with nonzero observation") {
    CHECK_THROWS_AS(chi2_gof(std::vector<double>{5, 5}, std::vector<double>{1.0, 0.0}),
                    AnalysisError);
}
