#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "wavefit/bootstrap.hpp"
#include "wavefit/distributions.hpp"
#include "wavefit/errors.hpp"
#include "wavefit/estimation.hpp"
#include "wavefit/rng.hpp"

using namespace wavefit;

namespace {

FitReport report_with(DistributionParams params) {
    FitReport r;
    r.params = params;
    r.method = Method::mle;
    r.objective_value = 0;
    return r;
}

}  // namespace

TEST_CASE("constant estimator has zero standard errors") {
    const auto s = sample(ExpWeibullParams{1, 1, 2}, 100, 1);
    const Estimator constant = [](const HsSample&) {
        return report_with(ExpWeibullParams{1.0, 2.0, 3.0});
    };
    const auto r = bootstrap_se(s, constant, BootstrapConfig{25, 9});
    REQUIRE(r.std_errors.size() == 3);
    CHECK(r.std_errors == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(r.successes == 25);
    CHECK(r.failures == 0);
}

TEST_CASE("identical seeds give identical standard errors") {
    const auto s = sample(ExpWeibullParams{1, 1, 2}, 400, 77);
    const Estimator est = [](const HsSample& x) { return fit_wls(x, WeightScheme{2}); };
    const auto r1 = bootstrap_se(s, est, BootstrapConfig{20, 555});
    const auto r2 = bootstrap_se(s, est, BootstrapConfig{20, 555});
    CHECK(r1.std_errors == r2.std_errors);  // bitwise
    const auto r3 = bootstrap_se(s, est, BootstrapConfig{20, 556});
    CHECK(r1.std_errors != r3.std_errors);
}

TEST_CASE("resamples have n elements all drawn from the original sample") {
    const auto s = sample(ExpWeibullParams{1, 1, 2}, 200, 3);
    const std::set<double> universe(s.values.begin(), s.values.end());
    int calls = 0;
    bool sizes_ok = true, members_ok = true, saw_repeat = false;
    const Estimator recorder = [&](const HsSample& x) {
        ++calls;
        sizes_ok = sizes_ok && x.values.size() == 200;
        std::set<double> distinct;
        for (double v : x.values) {
            members_ok = members_ok && universe.count(v) == 1;
            distinct.insert(v);
        }
        saw_repeat = saw_repeat || distinct.size() < x.values.size();
        return report_with(ExpWeibullParams{1, 1, 1});
    };
    const auto r = bootstrap_se(s, recorder, BootstrapConfig{30, 42});
    CHECK(calls == 30);
    CHECK(sizes_ok);
    CHECK(members_ok);
    CHECK(saw_repeat);  // with replacement: collisions essentially certain
    CHECK(r.successes == 30);
}

TEST_CASE("bootstrap input validation") {
    HsSample empty;
    const Estimator est = [](const HsSample& x) { return fit_wls(x, WeightScheme{2}); };
    CHECK_THROWS_AS(bootstrap_se(empty, est, BootstrapConfig{10, 1}), EmptyInputError);
    const auto s = sample(ExpWeibullParams{1, 1, 2}, 50, 5);
    CHECK_THROWS_AS(bootstrap_se(s, est, BootstrapConfig{1, 1}), DomainError);
    CHECK_THROWS_AS(bootstrap_se(s, est, BootstrapConfig{0, 1}), DomainError);
}

TEST_CASE("an estimator that always fails raises bootstrap-unstable") {
    const auto s = sample(ExpWeibullParams{1, 1, 2}, 50, 5);
    const Estimator broken = [](const HsSample&) -> FitReport {
        throw EstimationError("always fails");
    };
    CHECK_THROWS_AS(bootstrap_se(s, broken, BootstrapConfig{10, 1}), BootstrapUnstableError);
}

TEST_CASE("rare failures are skipped and counted") {
    const auto s = sample(ExpWeibullParams{1, 1, 2}, 50, 8);
    const double tripwire = s.values[10];
    const Estimator flaky = [&](const HsSample& x) -> FitReport {
        if (x.values.front() == tripwire) throw EstimationError("tripwire");
        return report_with(ExpWeibullParams{x.values.front(), 1, 1});
    };
    // deterministic resamples: the failure count is fixed for this seed
    const auto r = bootstrap_se(s, flaky, BootstrapConfig{40, 2024});
    CHECK(r.successes + r.failures == 40);
    CHECK(r.failures <= 4);
    CHECK(r.std_errors.size() == 3);
    for (double se : r.std_errors) CHECK(se >= 0);
}

TEST_CASE("standard errors shrink roughly like one over root n") {
    const Estimator est = [](const HsSample& x) { return fit_wls(x, WeightScheme{2}); };
    double ratio_sum = 0;
    const int seeds = 20;
    for (int k = 0; k < seeds; ++k) {
        const auto small = sample(ExpWeibullParams{1, 1, 2}, 1000, derive_seed(900, k));
        const auto big = sample(ExpWeibullParams{1, 1, 2}, 2000, derive_seed(901, k));
        const auto rs = bootstrap_se(small, est, BootstrapConfig{25, derive_seed(902, k)});
        const auto rb = bootstrap_se(big, est, BootstrapConfig{25, derive_seed(903, k)});
        double r = 0;
        for (std::size_t j = 0; j < 3; ++j) r += rb.std_errors[j] / rs.std_errors[j];
        ratio_sum += r / 3.0;
    }
    const double mean_ratio = ratio_sum / seeds;
    CHECK(mean_ratio >= 0.55);
    CHECK(mean_ratio <= 0.90);
}
