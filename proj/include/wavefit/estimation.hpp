#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavefit/distributions.hpp"
#include "wavefit/sample.hpp"

namespace wavefit {

/// Power-law weight rule w_i = x_i^q / sum_j x_j^q.
struct WeightScheme {
    int q = 2;  // 1, 2, or 3
};

enum class Method { mle, wls };
std::string method_name(Method method);
Method method_from_name(const std::string& name);  // throws ConfigError

/// Linear fit of x* = log10(x) against p* at a fixed delta.
struct LinearizedFit {
    double a;      // intercept, log10(alpha)
    double b;      // slope, 1/beta; must be > 0 for a valid fit
    double delta;  // second shape held fixed during the linearization
    double Q;      // weighted squared error at (a, b, delta)
};

struct FitReport {
    DistributionParams params;
    Method method = Method::mle;
    std::optional<WeightScheme> weight_scheme;      // WLS only
    std::optional<std::vector<double>> std_errors;  // per parameter, via bootstrap
    double objective_value = 0.0;  // attained log-likelihood (MLE) or Q (WLS)
};

/// p_i = (i - 0.5) / n for i = 1..n; strictly increasing, inside (0, 1).
std::vector<double> plotting_positions(std::size_t n);

/// Weights for the values in their given order; sum to 1.
std::vector<double> compute_weights(const std::vector<double>& values, WeightScheme scheme);
std::vector<double> compute_weights(const HsSample& sample, WeightScheme scheme);

/// p*_i = log10[-ln(1 - p_i^(1/delta))]; strictly increasing in p_i.
std::vector<double> linearized_positions(const std::vector<double>& positions, double delta);

/// Closed-form weighted least squares line through (p*_i, x*_i) at fixed delta.
LinearizedFit wls_ab_given_delta(const std::vector<double>& sorted_values,
                                 const std::vector<double>& weights, double delta);
LinearizedFit wls_ab_given_delta(const HsSample& sample,
                                 const std::vector<double>& weights, double delta);

/// Q_delta(delta) = Q at the closed-form (a, b) minimizers for that delta.
double wls_objective(const std::vector<double>& sorted_values,
                     const std::vector<double>& weights, double delta);
double wls_objective(const HsSample& sample, const std::vector<double>& weights,
                     double delta);

/// Full weighted least squares fit of the exponentiated Weibull: delta by
/// golden-section search on log(delta), alpha and beta in closed form.
FitReport fit_wls(const HsSample& sample, WeightScheme scheme = {});

/// Maximum likelihood fit in a transformed unconstrained space.
FitReport fit_mle(Family family, const HsSample& sample);

}  // namespace wavefit
