#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wavefit/sample.hpp"

namespace wavefit {

/// Exponentiated Weibull: F(x) = [1 - exp(-(x/alpha)^beta)]^delta, x >= 0.
/// delta = 1 reduces to the 2-parameter Weibull.
struct ExpWeibullParams {
    double alpha;  // scale, m
    double beta;   // first shape
    double delta;  // second shape
};

/// Translated Weibull: F(x) = 1 - exp(-((x-gamma)/alpha)^beta), x >= gamma.
struct TranslatedWeibullParams {
    double alpha;  // scale, m
    double beta;   // shape
    double gamma;  // location, m
};

struct TwoParamWeibullParams {
    double alpha;  // scale, m
    double beta;   // shape
};

/// Generalized gamma: f(x) = c/Gamma(m) lambda^(cm) x^(cm-1) exp(-(lambda x)^c).
struct GenGammaParams {
    double c;       // shape exponent
    double m;       // shape
    double lambda;  // inverse scale, 1/m
};

/// Beta distribution of the second kind:
/// f(x) = alpha/B(k, n-k+1) (alpha x)^(n-k) / (1 + alpha x)^(n+1).
struct Beta2Params {
    double alpha;  // inverse scale, 1/m
    double k;      // shape
    double n;      // shape, n > k - 1
};

using DistributionParams =
    std::variant<ExpWeibullParams, TranslatedWeibullParams, TwoParamWeibullParams,
                 GenGammaParams, Beta2Params>;

enum class Family { exp_weibull, translated_weibull, two_param_weibull, gen_gamma, beta2 };

Family family_of(const DistributionParams& params);
std::string family_name(Family family);
Family family_from_name(const std::string& name);  // throws ConfigError
std::vector<std::string> param_names(Family family);
std::vector<double> param_values(const DistributionParams& params);
DistributionParams make_params(Family family, const std::vector<double>& values);

/// Lower edge of the support (gamma for the translated Weibull, else 0).
double support_min(const DistributionParams& params);

/// Throws DomainError if any parameter is non-finite or violates its invariants.
void validate(const DistributionParams& params);

/// All evaluators validate the parameters and throw DomainError on bad input.
double cdf(const DistributionParams& params, double x);
double pdf(const DistributionParams& params, double x);
double log_pdf(const DistributionParams& params, double x);  // -inf where density is 0
double icdf(const DistributionParams& params, double p);     // p in (0, 1)

/// Sum of log densities; -inf when any observation has zero density.
double log_likelihood(const DistributionParams& params, const HsSample& sample);

/// n i.i.d. draws by inverse-transform sampling; deterministic per seed.
HsSample sample(const DistributionParams& params, std::size_t n, std::uint64_t seed);

namespace detail {

/// ln(1 - e^z) for z <= 0, stable at both ends.
double log1mexp(double z);

}  // namespace detail

}  // namespace wavefit
