#include "wavefit/bootstrap.hpp"

#include <cmath>
#include <string>

#include "wavefit/errors.hpp"
#include "wavefit/rng.hpp"

namespace wavefit {

BootstrapResult bootstrap_se(const HsSample& sample, const Estimator& estimator,
                             BootstrapConfig config) {
    if (sample.empty()) throw EmptyInputError("bootstrap: empty sample");
    if (config.B < 2) throw DomainError("bootstrap: B must be >= 2");

    const std::size_t n = sample.values.size();
    std::vector<std::vector<double>> draws;  // draws[param][success]
    BootstrapResult result;
    HsSample resample;
    resample.values.resize(n);
    resample.source_label = sample.source_label;
    for (int b = 0; b < config.B; ++b) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(b)));
        for (std::size_t i = 0; i < n; ++i)
            resample.values[i] = sample.values[rng.below(n)];
        try {
            const auto values = param_values(estimator(resample).params);
            if (draws.empty()) draws.resize(values.size());
            if (values.size() != draws.size())
                throw EstimationError("bootstrap: estimator changed parameter count");
            for (std::size_t k = 0; k < values.size(); ++k) draws[k].push_back(values[k]);
            ++result.successes;
        } catch (const Error&) {
            ++result.failures;
        }
    }
    if (10 * result.failures > config.B)
        throw BootstrapUnstableError("bootstrap: " + std::to_string(result.failures) +
                                     " of " + std::to_string(config.B) +
                                     " resample fits failed (more than 10%)");

    result.std_errors.resize(draws.size());
    const double m = static_cast<double>(result.successes);
    for (std::size_t k = 0; k < draws.size(); ++k) {
        double mean = 0;
        for (double v : draws[k]) mean += v;
        mean /= m;
        double ss = 0;
        for (double v : draws[k]) ss += (v - mean) * (v - mean);
        result.std_errors[k] = std::sqrt(ss / (m - 1.0));
    }
    return result;
}

}  // namespace wavefit
