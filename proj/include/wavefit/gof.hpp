#pragma once

#include <vector>

#include "wavefit/distributions.hpp"
#include "wavefit/sample.hpp"

namespace wavefit {

/// Quantile-error metrics and return values for one (sample, model) pair.
/// MAE values are in meters and nonnegative; hs1_norm = hs1_pred / hs1_emp.
struct GofReport {
    double e_overall = 0;   // mean |x_i - icdf(p_i)| over the whole sample
    double e_099 = 0;       // same restricted to p_i > 0.99
    double e_0999 = 0;      // same restricted to p_i > 0.999
    double hs1_pred = 0;    // model 1-year return value (empirical-consistent)
    double hs1_emp = 0;     // empirical 1-year return value
    double hs1_norm = 0;    // hs1_pred / hs1_emp
    double hs50_pred = 0;   // model 50-year return value (exact probability)
};

/// How the return-value probability level is chosen.
enum class ReturnMode {
    exact,                 // p = 1 - 1/(T * 365.25 * 24)
    empirical_consistent,  // smallest plotting position p_i exceeding that p
};

/// Mean absolute error between ordered observations and model quantiles at
/// plotting positions p_i = (i - 0.5)/n. Unsorted input is sorted internally.
double mae_overall(const HsSample& sample, const DistributionParams& params);

/// Tail restriction of the same metric: mean over indices at and above the
/// first plotting position exceeding the threshold.
double mae_tail(const HsSample& sample, const DistributionParams& params, double threshold);

/// T-year return value of the model, assuming hourly sea states. The
/// empirical-consistent mode evaluates the model at the sample's own
/// plotting position and therefore needs the sample.
double return_value(const DistributionParams& params, double return_period_years,
                    ReturnMode mode = ReturnMode::exact, const HsSample* sample = nullptr);

/// Empirical T-year return value: the smallest order statistic whose plotting
/// position exceeds 1 - 1/(T * 365.25 * 24). Requires at least T years of
/// hourly observations (n >= 8766 * T).
double empirical_return_value(const HsSample& sample, double return_period_years);

/// H*_s1 = hs1_pred divided by the sample's empirical 1-year return value.
double normalized_return_value(double hs1_pred, const HsSample& sample);

/// All GofReport fields in one pass over a shared sorted copy.
GofReport evaluate_gof(const HsSample& sample, const DistributionParams& params);

/// Ordered observations paired with model quantiles at the same positions.
struct QQSeries {
    std::vector<double> observed;
    std::vector<double> model;
};
QQSeries qq_series(const HsSample& sample, const DistributionParams& params);

/// Weibull-paper x-axis transform log10(-ln(1 - p)).
double weibull_paper_abscissa(double p);

/// Data points on Weibull probability paper plus a smooth model curve over
/// the same abscissa range (a 2-parameter Weibull plots as a straight line).
struct ProbabilityPaperSeries {
    std::vector<double> abscissa;        // log10(-ln(1 - p_i))
    std::vector<double> ordinate;        // log10 x_i
    std::vector<double> model_abscissa;  // evenly spaced over the data range
    std::vector<double> model_ordinate;  // log10 icdf at those levels
};
ProbabilityPaperSeries probability_paper_series(const HsSample& sample,
                                                const DistributionParams& params);

/// Histogram of the sample tail against the model density: equal-width bins
/// over [first tail order statistic, sample maximum].
struct TailDensitySeries {
    std::vector<double> bin_lo;
    std::vector<double> bin_hi;
    std::vector<double> empirical;  // bin count / (n * width)
    std::vector<double> model;      // pdf at bin midpoint
};
TailDensitySeries tail_density_series(const HsSample& sample, const DistributionParams& params,
                                      double threshold, int bins = 15);

}  // namespace wavefit
