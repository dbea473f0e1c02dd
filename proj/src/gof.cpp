#include "wavefit/gof.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "wavefit/errors.hpp"

namespace wavefit {

namespace {

constexpr double kHoursPerYear = 365.25 * 24.0;  // 8766, exact in binary

std::string num_str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<double> checked_sorted(const HsSample& sample) {
    if (sample.empty()) throw EmptyInputError("gof: empty sample");
    auto xs = sorted_values(sample);
    for (double v : xs)
        if (!(std::isfinite(v) && v > 0))
            throw DomainError("gof: sample values must be finite and > 0");
    return xs;
}

double position(std::size_t i, std::size_t n) {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

// First index whose plotting position exceeds the threshold.
std::size_t tail_start(std::size_t n, double threshold) {
    if (!(threshold > 0 && threshold < 1))
        throw DomainError("gof: tail threshold must lie in (0, 1)");
    for (std::size_t i = 0; i < n; ++i)
        if (position(i, n) > threshold) return i;
    throw InsufficientTailError("gof: no plotting position exceeds threshold " +
                                num_str(threshold));
}

double mae_from(const std::vector<double>& xs, const DistributionParams& params,
                std::size_t start) {
    double sum = 0;
    for (std::size_t i = start; i < xs.size(); ++i)
        sum += std::abs(xs[i] - icdf(params, position(i, xs.size())));
    return sum / static_cast<double>(xs.size() - start);
}

double exact_level(double return_period_years) {
    if (!(std::isfinite(return_period_years) && return_period_years > 0))
        throw DomainError("gof: return period must be positive and finite");
    const double p = 1.0 - 1.0 / (return_period_years * kHoursPerYear);
    if (!(p > 0 && p < 1))
        throw DomainError("gof: return period " + num_str(return_period_years) +
                          " years maps outside (0, 1)");
    return p;
}

// Index of the smallest plotting position exceeding the exact level; the
// count requirement n >= 8766 T makes the search guaranteed to succeed.
std::size_t empirical_level_index(std::size_t n, double return_period_years) {
    const double p = exact_level(return_period_years);
    const double needed = return_period_years * kHoursPerYear;
    if (static_cast<double>(n) < needed)
        throw InsufficientDataError(
            "gof: sample has " + std::to_string(n) + " observations but " +
            num_str(return_period_years) + "-year return values need at least " +
            std::to_string(static_cast<std::size_t>(std::ceil(needed))) + " hourly states");
    std::size_t lo = 0, hi = n;  // first i with position(i) > p
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (position(mid, n) > p)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

}  // namespace

double mae_overall(const HsSample& sample, const DistributionParams& params) {
    return mae_from(checked_sorted(sample), params, 0);
}

double mae_tail(const HsSample& sample, const DistributionParams& params, double threshold) {
    const auto xs = checked_sorted(sample);
    return mae_from(xs, params, tail_start(xs.size(), threshold));
}

double return_value(const DistributionParams& params, double return_period_years,
                    ReturnMode mode, const HsSample* sample) {
    if (mode == ReturnMode::exact)
        return icdf(params, exact_level(return_period_years));
    if (sample == nullptr)
        throw DomainError("gof: empirical-consistent return values need a sample");
    const auto xs = checked_sorted(*sample);
    const std::size_t j = empirical_level_index(xs.size(), return_period_years);
    return icdf(params, position(j, xs.size()));
}

double empirical_return_value(const HsSample& sample, double return_period_years) {
    const auto xs = checked_sorted(sample);
    return xs[empirical_level_index(xs.size(), return_period_years)];
}

double normalized_return_value(double hs1_pred, const HsSample& sample) {
    if (!(std::isfinite(hs1_pred) && hs1_pred >= 0))
        throw DomainError("gof: predicted return value must be finite and nonnegative");
    return hs1_pred / empirical_return_value(sample, 1.0);
}

GofReport evaluate_gof(const HsSample& sample, const DistributionParams& params) {
    const auto xs = checked_sorted(sample);
    const std::size_t n = xs.size();
    GofReport r;
    r.e_overall = mae_from(xs, params, 0);
    r.e_099 = mae_from(xs, params, tail_start(n, 0.99));
    r.e_0999 = mae_from(xs, params, tail_start(n, 0.999));
    const std::size_t j1 = empirical_level_index(n, 1.0);
    r.hs1_pred = icdf(params, position(j1, n));
    r.hs1_emp = xs[j1];
    r.hs1_norm = r.hs1_pred / r.hs1_emp;
    r.hs50_pred = icdf(params, exact_level(50.0));
    return r;
}

QQSeries qq_series(const HsSample& sample, const DistributionParams& params) {
    const auto xs = checked_sorted(sample);
    QQSeries out;
    out.observed = xs;
    out.model.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        out.model.push_back(icdf(params, position(i, xs.size())));
    return out;
}

double weibull_paper_abscissa(double p) {
    if (!(p > 0 && p < 1)) throw DomainError("gof: probability must lie in (0, 1)");
    return std::log10(-std::log1p(-p));
}

ProbabilityPaperSeries probability_paper_series(const HsSample& sample,
                                                const DistributionParams& params) {
    const auto xs = checked_sorted(sample);
    const std::size_t n = xs.size();
    ProbabilityPaperSeries out;
    out.abscissa.reserve(n);
    out.ordinate.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.abscissa.push_back(weibull_paper_abscissa(position(i, n)));
        out.ordinate.push_back(std::log10(xs[i]));
    }
    const double u_lo = out.abscissa.front(), u_hi = out.abscissa.back();
    const int kCurve = 500;
    out.model_abscissa.reserve(kCurve);
    out.model_ordinate.reserve(kCurve);
    for (int k = 0; k < kCurve; ++k) {
        const double u = n == 1 ? u_lo : u_lo + (u_hi - u_lo) * k / (kCurve - 1.0);
        const double p = -std::expm1(-std::pow(10.0, u));  // inverse of the abscissa map
        out.model_abscissa.push_back(u);
        out.model_ordinate.push_back(std::log10(icdf(params, p)));
    }
    return out;
}

TailDensitySeries tail_density_series(const HsSample& sample, const DistributionParams& params,
                                      double threshold, int bins) {
    if (bins < 1) throw DomainError("gof: bin count must be >= 1");
    const auto xs = checked_sorted(sample);
    const std::size_t n = xs.size();
    const std::size_t j = tail_start(n, threshold);
    const double lo = xs[j], hi = xs.back();
    if (!(hi > lo))
        throw DegenerateInputError("gof: tail range is a single point; cannot bin");
    const double width = (hi - lo) / bins;
    TailDensitySeries out;
    out.bin_lo.resize(bins);
    out.bin_hi.resize(bins);
    out.empirical.assign(bins, 0.0);
    out.model.resize(bins);
    for (int k = 0; k < bins; ++k) {
        out.bin_lo[k] = lo + width * k;
        out.bin_hi[k] = k == bins - 1 ? hi : lo + width * (k + 1);
        out.model[k] = pdf(params, 0.5 * (out.bin_lo[k] + out.bin_hi[k]));
    }
    for (std::size_t i = j; i < n; ++i) {
        int k = static_cast<int>((xs[i] - lo) / width);
        k = std::clamp(k, 0, bins - 1);  // maximum lands in the last bin
        out.empirical[k] += 1.0;
    }
    for (int k = 0; k < bins; ++k)
        out.empirical[k] /= static_cast<double>(n) * (out.bin_hi[k] - out.bin_lo[k]);
    return out;
}

}  // namespace wavefit
