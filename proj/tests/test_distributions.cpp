#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wavefit/distributions.hpp"
#include "wavefit/errors.hpp"
#include "wavefit/rng.hpp"

using namespace wavefit;

namespace {

double log_uniform(Rng& rng, double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform01());
}

// Adaptive Simpson quadrature, independent of the library's numerics.
double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), tol, 40);
}

double bisect_cdf(const DistributionParams& params, double p, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(params, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<DistributionParams> random_params(Family family, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<DistributionParams> out;
    for (int i = 0; i < count; ++i) {
        switch (family) {
            case Family::exp_weibull:
                out.push_back(ExpWeibullParams{log_uniform(rng, 0.3, 3.0),
                                               log_uniform(rng, 0.5, 3.0),
                                               log_uniform(rng, 0.3, 30.0)});
                break;
            case Family::translated_weibull:
                out.push_back(TranslatedWeibullParams{log_uniform(rng, 0.3, 3.0),
                                                      log_uniform(rng, 0.5, 3.0),
                                                      2.0 * rng.uniform01()});
                break;
            case Family::two_param_weibull:
                out.push_back(TwoParamWeibullParams{log_uniform(rng, 0.3, 3.0),
                                                    log_uniform(rng, 0.5, 3.0)});
                break;
            case Family::gen_gamma:
                out.push_back(GenGammaParams{log_uniform(rng, 0.5, 4.0),
                                             log_uniform(rng, 0.3, 5.0),
                                             log_uniform(rng, 0.3, 3.0)});
                break;
            case Family::beta2: {
                const double k = log_uniform(rng, 0.5, 5.0);
                const double q = log_uniform(rng, 0.5, 5.0);  // q = n - k + 1
                out.push_back(Beta2Params{log_uniform(rng, 0.3, 3.0), k, k - 1.0 + q});
                break;
            }
        }
    }
    return out;
}

const Family kAllFamilies[] = {Family::exp_weibull, Family::translated_weibull,
                               Family::two_param_weibull, Family::gen_gamma, Family::beta2};

}  // namespace

TEST_CASE("cdf closed-form examples") {
    CHECK(cdf(ExpWeibullParams{1, 1, 1}, std::log(2.0)) == Catch::Approx(0.5).margin(1e-15));
    CHECK(cdf(ExpWeibullParams{1, 1, 2}, std::log(2.0)) == Catch::Approx(0.25).margin(1e-15));
    CHECK(cdf(TranslatedWeibullParams{1, 2, 0.5}, 0.4) == 0.0);
    CHECK(cdf(ExpWeibullParams{1, 1, 2}, 0.0) == 0.0);
    CHECK(cdf(ExpWeibullParams{1, 1, 2}, -1.0) == 0.0);
}

TEST_CASE("pdf examples") {
    CHECK(pdf(ExpWeibullParams{1, 1, 1}, 0.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(pdf(GenGammaParams{1, 1, 1}, 1.0) ==
          Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
    // density at alpha=k=n=1: B(1,1)=1, f(x) = 1/(1+x)^2, f(1) = 0.25
    CHECK(pdf(Beta2Params{1, 1, 1}, 1.0) == Catch::Approx(0.25).epsilon(1e-12));
    // cross-check the same value against integration of the density near x=1
    const Beta2Params b2{1, 1, 1};
    const double mass = integrate([&](double x) { return pdf(b2, x); }, 0.99, 1.01, 1e-12);
    CHECK(cdf(b2, 1.01) - cdf(b2, 0.99) == Catch::Approx(mass).epsilon(1e-9));
}

TEST_CASE("icdf examples") {
    CHECK(icdf(ExpWeibullParams{1, 1, 1}, 0.5) ==
          Catch::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(icdf(ExpWeibullParams{1, 1, 2}, 0.25) ==
          Catch::Approx(std::log(2.0)).epsilon(1e-12));
    const GenGammaParams gg{1, 1, 1};
    const double oracle = bisect_cdf(gg, 0.9, 0.0, 100.0);
    CHECK(icdf(gg, 0.9) == Catch::Approx(oracle).margin(1e-9));
    CHECK(icdf(gg, 0.9) == Catch::Approx(std::log(10.0)).margin(1e-9));
}

TEST_CASE("icdf domain errors") {
    CHECK_THROWS_AS(icdf(ExpWeibullParams{1, 1, 1}, 0.0), DomainError);
    CHECK_THROWS_AS(icdf(ExpWeibullParams{1, 1, 1}, 1.0), DomainError);
    CHECK_THROWS_AS(icdf(ExpWeibullParams{1, 1, 1}, -0.25), DomainError);
    CHECK_THROWS_AS(icdf(GenGammaParams{1, 1, 1},
                         std::numeric_limits<double>::quiet_NaN()),
                    DomainError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(cdf(ExpWeibullParams{-1, 1, 1}, 0.5), DomainError);
    CHECK_THROWS_AS(cdf(ExpWeibullParams{1, 0, 1}, 0.5), DomainError);
    CHECK_THROWS_AS(cdf(TranslatedWeibullParams{1, 1, -0.1}, 0.5), DomainError);
    CHECK_THROWS_AS(cdf(GenGammaParams{1, -2, 1}, 0.5), DomainError);
    // beta-function arguments must stay positive: n - k + 1 > 0
    CHECK_THROWS_AS(cdf(Beta2Params{1, 3, 1.5}, 0.5), DomainError);
    CHECK_NOTHROW(cdf(Beta2Params{1, 3, 2.5}, 0.5));
    CHECK_THROWS_AS(cdf(ExpWeibullParams{1, 1, 1},
                        std::numeric_limits<double>::quiet_NaN()),
                    DomainError);
}

TEST_CASE("log-likelihood examples") {
    HsSample one;
    one.values = {1.0};
    CHECK(log_likelihood(ExpWeibullParams{1, 1, 1}, one) ==
          Catch::Approx(-1.0).epsilon(1e-12));
    CHECK(log_likelihood(GenGammaParams{1, 1, 1}, one) ==
          Catch::Approx(-1.0).epsilon(1e-12));
    HsSample two;
    two.values = {1.0, 2.0};
    CHECK(log_likelihood(ExpWeibullParams{1, 1, 1}, two) ==
          Catch::Approx(-3.0).epsilon(1e-12));

    HsSample empty;
    CHECK_THROWS_AS(log_likelihood(ExpWeibullParams{1, 1, 1}, empty), EmptyInputError);

    // zero density at a point outside support collapses the whole sum
    HsSample below;
    below.values = {0.4, 1.0};
    CHECK(log_likelihood(TranslatedWeibullParams{1, 2, 0.5}, below) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("sampling determinism and distributional agreement") {
    const ExpWeibullParams ew112{1, 1, 2};
    const auto a = sample(ew112, 5, 42);
    const auto b = sample(ew112, 5, 42);
    REQUIRE(a.values.size() == 5);
    CHECK(a.values == b.values);
    const auto c = sample(ew112, 5, 43);
    CHECK(a.values != c.values);
    CHECK_THROWS_AS(sample(ew112, 0, 42), EmptyInputError);

    // Kolmogorov-Smirnov distance of the empirical CDF
    auto s = sample(ew112, 100000, 20260815);
    std::sort(s.values.begin(), s.values.end());
    double ks = 0;
    const double n = static_cast<double>(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double F = cdf(ew112, s.values[i]);
        ks = std::max(ks, std::abs(F - static_cast<double>(i) / n));
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - F));
    }
    CHECK(ks <= 0.01);

    const auto m = sample(ExpWeibullParams{1, 1, 1}, 1000000, 7);
    double mean = 0;
    for (double v : m.values) mean += v;
    mean /= static_cast<double>(m.values.size());
    CHECK(mean == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("reduction to the 2-parameter Weibull at delta = 1") {
    Rng rng(1001);
    for (int rep = 0; rep < 100; ++rep) {
        const double alpha = log_uniform(rng, 0.2, 5.0);
        const double beta = log_uniform(rng, 0.2, 5.0);
        const ExpWeibullParams ew{alpha, beta, 1.0};
        const TwoParamWeibullParams tw{alpha, beta};
        const double hi = 3.0 * icdf(tw, 0.999);
        for (int j = 0; j <= 50; ++j) {
            const double x = hi * j / 50.0;
            CHECK(std::abs(cdf(ew, x) - cdf(tw, x)) <= 1e-12);
        }
    }
}

TEST_CASE("icdf/cdf roundtrip on a probability grid") {
    for (Family family : kAllFamilies) {
        const bool numeric = family == Family::gen_gamma || family == Family::beta2;
        const double tol = numeric ? 1e-7 : 1e-9;
        for (const auto& params : random_params(family, 10, 55 + static_cast<int>(family))) {
            double worst = 0;
            for (int j = 0; j < 1000; ++j) {
                const double p =
                    1e-6 + (1.0 - 2e-6) * static_cast<double>(j) / 999.0;
                const double x = icdf(params, p);
                worst = std::max(worst, std::abs(cdf(params, x) - p));
            }
            INFO("family " << family_name(family) << " worst " << worst);
            CHECK(worst <= tol);
        }
    }
}

TEST_CASE("pdf integrates to one") {
    // Density kept bounded so plain quadrature converges: shape products >= 1.
    Rng rng(2026);
    for (int rep = 0; rep < 4; ++rep) {
        std::vector<DistributionParams> cases;
        {
            const double beta = log_uniform(rng, 1.0, 3.0);
            cases.push_back(ExpWeibullParams{log_uniform(rng, 0.5, 2.0), beta,
                                             log_uniform(rng, 1.0 / beta, 10.0)});
            cases.push_back(TranslatedWeibullParams{log_uniform(rng, 0.5, 2.0),
                                                    log_uniform(rng, 1.0, 3.0),
                                                    rng.uniform01()});
            cases.push_back(TwoParamWeibullParams{log_uniform(rng, 0.5, 2.0),
                                                  log_uniform(rng, 1.0, 3.0)});
            const double c = log_uniform(rng, 0.7, 3.0);
            cases.push_back(GenGammaParams{c, log_uniform(rng, 1.0 / c, 4.0),
                                           log_uniform(rng, 0.5, 2.0)});
            const double k = log_uniform(rng, 1.0, 4.0);
            cases.push_back(Beta2Params{log_uniform(rng, 0.5, 2.0), k,
                                        k + log_uniform(rng, 0.5, 3.0)});
        }
        for (const auto& params : cases) {
            // integrate segment-wise between quantiles so heavy tails cannot
            // hide the density bump from the quadrature refinement
            std::vector<double> cuts{support_min(params)};
            for (double p : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99,
                             0.9999, 1.0 - 1e-9})
                cuts.push_back(icdf(params, p));
            double mass = 0;
            for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
                mass += integrate([&](double x) { return pdf(params, x); }, cuts[j],
                                  cuts[j + 1], 1e-10);
            INFO("params " << family_name(family_of(params)));
            CHECK(mass == Catch::Approx(1.0).margin(1e-6));
        }
    }
}

TEST_CASE("pdf matches the cdf derivative") {
    for (Family family : kAllFamilies) {
        for (const auto& params : random_params(family, 5, 99 + static_cast<int>(family))) {
            for (double p : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
                const double x = icdf(params, p);
                const double h = 6e-6 * std::max(std::abs(x), 0.1);
                const double d = (cdf(params, x + h) - cdf(params, x - h)) / (2.0 * h);
                const double f = pdf(params, x);
                if (f < 1e-12) continue;  // derivative cancellation dominates
                INFO("family " << family_name(family) << " p " << p);
                CHECK(d == Catch::Approx(f).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("cdf and icdf monotonicity") {
    for (Family family : kAllFamilies) {
        for (const auto& params : random_params(family, 3, 7 + static_cast<int>(family))) {
            const double hi = icdf(params, 0.9999);
            double prev = -1;
            for (int j = 0; j <= 200; ++j) {
                const double x = support_min(params) + (hi - support_min(params)) * j / 200.0;
                const double F = cdf(params, x);
                CHECK(F >= prev);
                prev = F;
            }
            double prev_x = 0;
            for (int j = 1; j <= 200; ++j) {
                const double x = icdf(params, j / 201.0);
                CHECK(x >= prev_x);
                prev_x = x;
            }
        }
    }
}

TEST_CASE("translated Weibull shift property is exact") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const double alpha = log_uniform(rng, 0.3, 3.0);
        const double beta = log_uniform(rng, 0.5, 3.0);
        const double gamma = 2.0 * rng.uniform01();
        const TranslatedWeibullParams tr{alpha, beta, gamma};
        const TwoParamWeibullParams tw{alpha, beta};
        for (int j = 0; j <= 40; ++j) {
            const double x = gamma + j * 0.2;
            CHECK(cdf(tr, x) == cdf(tw, x - gamma));
        }
    }
}

TEST_CASE("very large delta stays finite") {
    // Table-4-scale second shape parameter; naive p^(1/delta) would round to 1.
    const ExpWeibullParams p{0.0373, 0.4743, 46.6078};
    double prev = 0;
    for (double q : {1e-6, 1e-3, 0.1, 0.5, 0.9, 0.999, 1.0 - 1e-6}) {
        const double x = icdf(p, q);
        REQUIRE(std::isfinite(x));
        CHECK(x >= prev);
        prev = x;
        CHECK(std::abs(cdf(p, x) - q) <= 1e-9);
    }
}

TEST_CASE("family metadata round trip") {
    for (Family family : kAllFamilies) {
        CHECK(family_from_name(family_name(family)) == family);
        const auto params = random_params(family, 1, 5)[0];
        const auto names = param_names(family);
        const auto values = param_values(params);
        REQUIRE(names.size() == values.size());
        const auto rebuilt = make_params(family, values);
        CHECK(param_values(rebuilt) == values);
    }
    CHECK_THROWS_AS(family_from_name("lognormal"), ConfigError);
    CHECK_THROWS_AS(make_params(Family::exp_weibull, {1.0, 2.0}), DomainError);
}
