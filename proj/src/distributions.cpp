#include "wavefit/distributions.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "wavefit/errors.hpp"
#include "wavefit/rng.hpp"

namespace wavefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

bool pos_finite(double v) { return std::isfinite(v) && v > 0; }

void check_x(double x) {
    if (std::isnan(x)) throw DomainError("x must not be NaN");
}

void check_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
}

// ---- CDF ----

double cdf_ew(const ExpWeibullParams& q, double x) {
    if (!(x > 0)) return 0.0;
    const double t = std::pow(x / q.alpha, q.beta);
    if (t == 0) return 0.0;
    return std::exp(q.delta * detail::log1mexp(-t));
}

double cdf_2p(const TwoParamWeibullParams& q, double x) {
    if (!(x > 0)) return 0.0;
    return -std::expm1(-std::pow(x / q.alpha, q.beta));
}

double cdf_tr(const TranslatedWeibullParams& q, double x) {
    return cdf_2p(TwoParamWeibullParams{q.alpha, q.beta}, x - q.gamma);
}

double cdf_gg(const GenGammaParams& q, double x) {
    if (!(x > 0)) return 0.0;
    return boost::math::gamma_p(q.m, std::pow(q.lambda * x, q.c));
}

double cdf_b2(const Beta2Params& q, double x) {
    if (!(x > 0)) return 0.0;
    const double ax = q.alpha * x;
    const double t = ax / (1.0 + ax);
    return boost::math::ibeta(q.n - q.k + 1.0, q.k, t);
}

// ---- log PDF ----
// Each evaluator assembles ln f from log terms so that large x/alpha (or
// delta far above 1) cannot overflow intermediate powers.

double log_pdf_ew(const ExpWeibullParams& q, double x) {
    if (!(x >= 0)) return -kInf;
    if (x == 0) {
        const double prod = q.beta * q.delta;  // f(0+) finite iff beta*delta == 1
        if (prod > 1) return -kInf;
        if (prod < 1) return kInf;
        return std::log(prod / q.alpha);
    }
    const double lxa = std::log(x / q.alpha);
    const double t = std::exp(q.beta * lxa);
    if (t == kInf) return -kInf;
    // ln(1 - e^-t) ~ ln t when t underflows.
    const double l1m = (t < 1e-300) ? q.beta * lxa : detail::log1mexp(-t);
    const double shape = (q.delta == 1.0) ? 0.0 : (q.delta - 1.0) * l1m;
    return std::log(q.delta * q.beta / q.alpha) + (q.beta - 1.0) * lxa + shape - t;
}

double log_pdf_2p(const TwoParamWeibullParams& q, double x) {
    if (!(x >= 0)) return -kInf;
    if (x == 0) {
        if (q.beta > 1) return -kInf;
        if (q.beta < 1) return kInf;
        return std::log(1.0 / q.alpha);
    }
    const double lxa = std::log(x / q.alpha);
    const double t = std::exp(q.beta * lxa);
    if (t == kInf) return -kInf;
    return std::log(q.beta / q.alpha) + (q.beta - 1.0) * lxa - t;
}

double log_pdf_tr(const TranslatedWeibullParams& q, double x) {
    return log_pdf_2p(TwoParamWeibullParams{q.alpha, q.beta}, x - q.gamma);
}

double log_pdf_gg(const GenGammaParams& q, double x) {
    if (!(x >= 0)) return -kInf;
    const double cm = q.c * q.m;
    if (x == 0) {
        if (cm > 1) return -kInf;
        if (cm < 1) return kInf;
        return std::log(q.c) - std::lgamma(q.m) + std::log(q.lambda);
    }
    const double t = std::exp(q.c * std::log(q.lambda * x));
    return std::log(q.c) - std::lgamma(q.m) + cm * std::log(q.lambda) +
           (cm - 1.0) * std::log(x) - t;
}

double log_pdf_b2(const Beta2Params& q, double x) {
    if (!(x >= 0)) return -kInf;
    const double e0 = q.n - q.k;  // exponent on (alpha x)
    const double lbeta =
        std::lgamma(q.k) + std::lgamma(q.n - q.k + 1.0) - std::lgamma(q.n + 1.0);
    if (x == 0) {
        if (e0 > 0) return -kInf;
        if (e0 < 0) return kInf;
        return std::log(q.alpha) - lbeta;
    }
    return std::log(q.alpha) - lbeta + e0 * std::log(q.alpha * x) -
           (q.n + 1.0) * std::log1p(q.alpha * x);
}

// ---- ICDF ----

double icdf_ew(const ExpWeibullParams& q, double p) {
    // x = alpha * [-ln(1 - p^(1/delta))]^(1/beta); p^(1/delta) as exp(ln p / delta)
    // so that delta values far above 1 stay exact.
    const double z = std::log(p) / q.delta;  // <= 0
    const double inner = (z < -700.0) ? std::exp(z) : -detail::log1mexp(z);
    return q.alpha * std::pow(inner, 1.0 / q.beta);
}

double icdf_2p(const TwoParamWeibullParams& q, double p) {
    return q.alpha * std::pow(-std::log1p(-p), 1.0 / q.beta);
}

double icdf_tr(const TranslatedWeibullParams& q, double p) {
    return q.gamma + icdf_2p(TwoParamWeibullParams{q.alpha, q.beta}, p);
}

// Bracketed bisection-then-Newton inversion on the CDF, absolute tolerance
// 1e-10 in x, polished until the CDF residual itself is negligible.
double invert_cdf(const DistributionParams& params, double p, double hint) {
    double lo = 0.0;
    double hi = std::max(hint, 1e-8);
    for (int i = 0; cdf(params, hi) < p; ++i) {
        if (i > 1100 || !std::isfinite(hi))
            throw EstimationError("icdf: failed to bracket quantile");
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 40 && (hi - lo) > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(params, mid) < p ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 600; ++i) {
        const double f = cdf(params, x) - p;
        if (std::abs(f) <= 1e-12) return x;
        (f < 0 ? lo : hi) = x;
        // relative width: tiny quantiles (steep power-law CDFs near 0) need
        // the bracket to collapse in scale, not just in absolute width
        if ((hi - lo) <= std::numeric_limits<double>::epsilon() * hi) return x;
        const double d = pdf(params, x);
        double xn = (d > 0 && std::isfinite(d)) ? x - f / d : lo;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
    }
    return x;
}

double icdf_gg(const GenGammaParams& q, double p, const DistributionParams& params) {
    const double hint = std::pow(std::max(q.m, 1e-3), 1.0 / q.c) / q.lambda;
    return invert_cdf(params, p, hint);
}

double icdf_b2(const Beta2Params& q, double p, const DistributionParams& params) {
    return invert_cdf(params, p, 1.0 / q.alpha);
}

}  // namespace

namespace detail {

double log1mexp(double z) {
    if (z >= 0.0) return z == 0.0 ? -kInf : std::numeric_limits<double>::quiet_NaN();
    if (z > -0.6931471805599453) return std::log(-std::expm1(z));
    return std::log1p(-std::exp(z));
}

}  // namespace detail

Family family_of(const DistributionParams& params) {
    return std::visit(
        overloaded{[](const ExpWeibullParams&) { return Family::exp_weibull; },
                   [](const TranslatedWeibullParams&) { return Family::translated_weibull; },
                   [](const TwoParamWeibullParams&) { return Family::two_param_weibull; },
                   [](const GenGammaParams&) { return Family::gen_gamma; },
                   [](const Beta2Params&) { return Family::beta2; }},
        params);
}

std::string family_name(Family family) {
    switch (family) {
        case Family::exp_weibull: return "exp-weibull";
        case Family::translated_weibull: return "translated-weibull";
        case Family::two_param_weibull: return "2p-weibull";
        case Family::gen_gamma: return "gen-gamma";
        case Family::beta2: return "beta2";
    }
    throw DomainError("unknown family tag");
}

Family family_from_name(const std::string& name) {
    if (name == "exp-weibull") return Family::exp_weibull;
    if (name == "translated-weibull") return Family::translated_weibull;
    if (name == "2p-weibull") return Family::two_param_weibull;
    if (name == "gen-gamma") return Family::gen_gamma;
    if (name == "beta2") return Family::beta2;
    throw ConfigError("unknown family '" + name +
                      "' (expected exp-weibull, translated-weibull, 2p-weibull, "
                      "gen-gamma or beta2)");
}

std::vector<std::string> param_names(Family family) {
    switch (family) {
        case Family::exp_weibull: return {"alpha", "beta", "delta"};
        case Family::translated_weibull: return {"alpha", "beta", "gamma"};
        case Family::two_param_weibull: return {"alpha", "beta"};
        case Family::gen_gamma: return {"c", "m", "lambda"};
        case Family::beta2: return {"alpha", "k", "n"};
    }
    throw DomainError("unknown family tag");
}

std::vector<double> param_values(const DistributionParams& params) {
    return std::visit(
        overloaded{[](const ExpWeibullParams& q) {
                       return std::vector<double>{q.alpha, q.beta, q.delta};
                   },
                   [](const TranslatedWeibullParams& q) {
                       return std::vector<double>{q.alpha, q.beta, q.gamma};
                   },
                   [](const TwoParamWeibullParams& q) {
                       return std::vector<double>{q.alpha, q.beta};
                   },
                   [](const GenGammaParams& q) {
                       return std::vector<double>{q.c, q.m, q.lambda};
                   },
                   [](const Beta2Params& q) {
                       return std::vector<double>{q.alpha, q.k, q.n};
                   }},
        params);
}

DistributionParams make_params(Family family, const std::vector<double>& v) {
    const std::size_t want = param_names(family).size();
    if (v.size() != want)
        throw DomainError("expected " + std::to_string(want) + " parameters for " +
                          family_name(family) + ", got " + std::to_string(v.size()));
    DistributionParams out;
    switch (family) {
        case Family::exp_weibull: out = ExpWeibullParams{v[0], v[1], v[2]}; break;
        case Family::translated_weibull: out = TranslatedWeibullParams{v[0], v[1], v[2]}; break;
        case Family::two_param_weibull: out = TwoParamWeibullParams{v[0], v[1]}; break;
        case Family::gen_gamma: out = GenGammaParams{v[0], v[1], v[2]}; break;
        case Family::beta2: out = Beta2Params{v[0], v[1], v[2]}; break;
    }
    validate(out);
    return out;
}

double support_min(const DistributionParams& params) {
    if (const auto* q = std::get_if<TranslatedWeibullParams>(&params)) return q->gamma;
    return 0.0;
}

void validate(const DistributionParams& params) {
    std::visit(
        overloaded{
            [](const ExpWeibullParams& q) {
                if (!pos_finite(q.alpha) || !pos_finite(q.beta) || !pos_finite(q.delta))
                    throw DomainError("exp-weibull: alpha, beta, delta must be finite and > 0");
            },
            [](const TranslatedWeibullParams& q) {
                if (!pos_finite(q.alpha) || !pos_finite(q.beta) || !std::isfinite(q.gamma) ||
                    q.gamma < 0)
                    throw DomainError(
                        "translated-weibull: alpha, beta must be > 0 and gamma >= 0");
            },
            [](const TwoParamWeibullParams& q) {
                if (!pos_finite(q.alpha) || !pos_finite(q.beta))
                    throw DomainError("2p-weibull: alpha, beta must be finite and > 0");
            },
            [](const GenGammaParams& q) {
                if (!pos_finite(q.c) || !pos_finite(q.m) || !pos_finite(q.lambda))
                    throw DomainError("gen-gamma: c, m, lambda must be finite and > 0");
            },
            [](const Beta2Params& q) {
                if (!pos_finite(q.alpha) || !pos_finite(q.k) || !std::isfinite(q.n) ||
                    !(q.n - q.k + 1.0 > 0))
                    throw DomainError("beta2: alpha > 0, k > 0 and n > k - 1 required");
            }},
        params);
}

double cdf(const DistributionParams& params, double x) {
    validate(params);
    check_x(x);
    return std::visit(
        overloaded{[x](const ExpWeibullParams& q) { return cdf_ew(q, x); },
                   [x](const TranslatedWeibullParams& q) { return cdf_tr(q, x); },
                   [x](const TwoParamWeibullParams& q) { return cdf_2p(q, x); },
                   [x](const GenGammaParams& q) { return cdf_gg(q, x); },
                   [x](const Beta2Params& q) { return cdf_b2(q, x); }},
        params);
}

double log_pdf(const DistributionParams& params, double x) {
    validate(params);
    check_x(x);
    return std::visit(
        overloaded{[x](const ExpWeibullParams& q) { return log_pdf_ew(q, x); },
                   [x](const TranslatedWeibullParams& q) { return log_pdf_tr(q, x); },
                   [x](const TwoParamWeibullParams& q) { return log_pdf_2p(q, x); },
                   [x](const GenGammaParams& q) { return log_pdf_gg(q, x); },
                   [x](const Beta2Params& q) { return log_pdf_b2(q, x); }},
        params);
}

double pdf(const DistributionParams& params, double x) {
    return std::exp(log_pdf(params, x));
}

double icdf(const DistributionParams& params, double p) {
    validate(params);
    check_p(p);
    return std::visit(
        overloaded{[p](const ExpWeibullParams& q) { return icdf_ew(q, p); },
                   [p](const TranslatedWeibullParams& q) { return icdf_tr(q, p); },
                   [p](const TwoParamWeibullParams& q) { return icdf_2p(q, p); },
                   [p, &params](const GenGammaParams& q) { return icdf_gg(q, p, params); },
                   [p, &params](const Beta2Params& q) { return icdf_b2(q, p, params); }},
        params);
}

double log_likelihood(const DistributionParams& params, const HsSample& s) {
    validate(params);
    if (s.empty()) throw EmptyInputError("log_likelihood: empty sample");
    double acc = 0.0;
    for (double x : s.values) {
        const double lp = log_pdf(params, x);
        if (lp == -kInf) return -kInf;
        acc += lp;
    }
    return acc;
}

HsSample sample(const DistributionParams& params, std::size_t n, std::uint64_t seed) {
    validate(params);
    if (n == 0) throw EmptyInputError("sample: n must be >= 1");
    Rng rng(seed);
    HsSample out;
    out.values.resize(n);
    for (auto& v : out.values) v = icdf(params, rng.uniform01());
    out.source_label = family_name(family_of(params)) + " synthetic";
    return out;
}

}  // namespace wavefit
