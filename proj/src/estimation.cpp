#include "wavefit/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavefit/errors.hpp"

namespace wavefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn10 = std::log(10.0);

// Compensated accumulator: keeps million-term likelihood sums exact enough
// for the 1e-10 objective convergence test.
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

double pstar_one(double lnp, double delta) {
    const double z = lnp / delta;
    // Below e^-37 the inner log is z to within 1e-16 relative; the direct
    // formula would underflow to log(0).
    if (z <= -37.0) return z / kLn10;
    return std::log(-detail::log1mexp(z)) / kLn10;
}

struct LineMoments {
    double xbar = 0, sxx = 0;  // weighted first/second moments of x* = log10 x
};

LineMoments line_moments(const std::vector<double>& lxs, const std::vector<double>& w) {
    LineMoments m;
    for (std::size_t i = 0; i < lxs.size(); ++i) {
        m.xbar += w[i] * lxs[i];
        m.sxx += w[i] * lxs[i] * lxs[i];
    }
    return m;
}

// Closed-form weighted least squares line at fixed delta. Q is computed in a
// residual pass so that a perfect fit yields Q at roundoff scale, not at the
// cancellation scale of the moment identity.
LinearizedFit linfit_core(const std::vector<double>& lxs, const std::vector<double>& w,
                          const std::vector<double>& lnp, double delta,
                          const LineMoments& m, std::vector<double>& ps_scratch) {
    const std::size_t n = lxs.size();
    double pbar = 0, spp = 0, spx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ps = pstar_one(lnp[i], delta);
        ps_scratch[i] = ps;
        pbar += w[i] * ps;
        spp += w[i] * ps * ps;
        spx += w[i] * ps * lxs[i];
    }
    const double den = spp - pbar * pbar;
    if (!(den > 0) || !std::isfinite(den))
        throw DegenerateInputError("wls: all linearized positions equal (need n >= 2)");
    const double b = (spx - m.xbar * pbar) / den;
    const double a = m.xbar - b * pbar;
    double Q = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = lxs[i] - (a + b * ps_scratch[i]);
        Q += w[i] * r * r;
    }
    if (!std::isfinite(Q))
        throw EstimationError("wls: non-finite objective at delta = " + std::to_string(delta));
    return LinearizedFit{a, b, delta, Q};
}

void check_sorted_positive(const std::vector<double>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(std::isfinite(xs[i]) && xs[i] > 0))
            throw DomainError("wls: values must be finite and > 0");
        if (i > 0 && xs[i] < xs[i - 1])
            throw DomainError("wls: values must be sorted ascending");
    }
}

void check_weights(const std::vector<double>& xs, const std::vector<double>& w) {
    if (w.size() != xs.size()) throw DomainError("wls: one weight per observation required");
    double sum = 0;
    for (double wi : w) {
        if (!(wi >= 0)) throw DomainError("wls: weights must be nonnegative");
        sum += wi;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw DomainError("wls: weights must sum to 1");
}

std::vector<double> log10_of(const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::log10(xs[i]);
    return out;
}

std::vector<double> log_positions(std::size_t n) {
    std::vector<double> lnp(n);
    for (std::size_t i = 0; i < n; ++i)
        lnp[i] = std::log((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    return lnp;
}

// ---- Nelder-Mead simplex ----

struct NelderMeadResult {
    std::vector<double> x;
    double f = kInf;
    int evals = 0;
    bool converged = false;
};

template <class F>
NelderMeadResult nelder_mead(const F& fn, const std::vector<double>& x0, double step,
                             int max_evals) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> X(d + 1, x0);
    std::vector<double> fx(d + 1);
    for (std::size_t j = 0; j < d; ++j) X[j + 1][j] += step;
    NelderMeadResult res;
    for (std::size_t v = 0; v <= d; ++v) fx[v] = fn(X[v]);
    res.evals = static_cast<int>(d + 1);

    std::vector<std::size_t> ord(d + 1);
    std::vector<double> centroid(d), xr(d), xe(d), xc(d);
    while (true) {
        for (std::size_t v = 0; v <= d; ++v) ord[v] = v;
        std::sort(ord.begin(), ord.end(),
                  [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t best = ord[0], worst = ord[d], second = ord[d - 1];

        double spread = 0;
        for (std::size_t v = 0; v <= d; ++v)
            for (std::size_t j = 0; j < d; ++j)
                spread = std::max(spread, std::abs(X[v][j] - X[best][j]) /
                                              std::max(1.0, std::abs(X[best][j])));
        if (spread <= 1e-8 && std::abs(fx[worst] - fx[best]) <= 1e-10) {
            res.converged = true;
            break;
        }
        if (res.evals >= max_evals) break;

        for (std::size_t j = 0; j < d; ++j) {
            double s = 0;
            for (std::size_t v = 0; v <= d; ++v)
                if (v != worst) s += X[v][j];
            centroid[j] = s / static_cast<double>(d);
        }
        for (std::size_t j = 0; j < d; ++j) xr[j] = centroid[j] + (centroid[j] - X[worst][j]);
        const double fr = fn(xr);
        ++res.evals;
        if (fr < fx[best]) {
            for (std::size_t j = 0; j < d; ++j)
                xe[j] = centroid[j] + 2.0 * (centroid[j] - X[worst][j]);
            const double fe = fn(xe);
            ++res.evals;
            if (fe < fr) {
                X[worst] = xe;
                fx[worst] = fe;
            } else {
                X[worst] = xr;
                fx[worst] = fr;
            }
            continue;
        }
        if (fr < fx[second]) {
            X[worst] = xr;
            fx[worst] = fr;
            continue;
        }
        const bool outside = fr < fx[worst];
        const double coef = outside ? 0.5 : -0.5;  // inside point is (centroid + worst) / 2
        for (std::size_t j = 0; j < d; ++j)
            xc[j] = centroid[j] + coef * (centroid[j] - X[worst][j]);
        const double fc = fn(xc);
        ++res.evals;
        if ((outside && fc <= fr) || (!outside && fc < fx[worst])) {
            X[worst] = xc;
            fx[worst] = fc;
            continue;
        }
        for (std::size_t v = 0; v <= d; ++v) {  // shrink toward best
            if (v == best) continue;
            for (std::size_t j = 0; j < d; ++j)
                X[v][j] = X[best][j] + 0.5 * (X[v][j] - X[best][j]);
            fx[v] = fn(X[v]);
            ++res.evals;
        }
    }
    std::size_t best = 0;
    for (std::size_t v = 1; v <= d; ++v)
        if (fx[v] < fx[best]) best = v;
    res.x = X[best];
    res.f = fx[best];
    return res;
}

// ---- MLE objectives (mean negative log-likelihood, transformed coords) ----

struct MleData {
    std::vector<double> x;    // sorted ascending
    std::vector<double> lnx;  // parallel logs
    double n = 0;
    double mean_lnx = 0;
    double xmin = 0;
    double mean = 0;
    double sd = 0;
    double median = 0;
};

double guard(double ll) { return std::isfinite(ll) ? -ll : kInf; }

double negll_ew(const MleData& D, const std::vector<double>& th) {
    const double la = th[0], b = std::exp(th[1]), d = std::exp(th[2]);
    if (!std::isfinite(b) || !std::isfinite(d)) return kInf;
    Kahan st, sl;
    for (std::size_t i = 0; i < D.x.size(); ++i) {
        const double u = b * (D.lnx[i] - la);
        const double t = std::exp(u);
        if (t == kInf) return kInf;
        st.add(t);
        sl.add(t < 1e-300 ? u : detail::log1mexp(-t));
    }
    return guard(th[2] + th[1] - la + (b - 1.0) * (D.mean_lnx - la) +
                 (d - 1.0) * (sl.s / D.n) - st.s / D.n);
}

double negll_2p(const MleData& D, const std::vector<double>& th) {
    const double la = th[0], b = std::exp(th[1]);
    if (!std::isfinite(b)) return kInf;
    Kahan st;
    for (std::size_t i = 0; i < D.x.size(); ++i) {
        const double t = std::exp(b * (D.lnx[i] - la));
        if (t == kInf) return kInf;
        st.add(t);
    }
    return guard(th[1] - la + (b - 1.0) * (D.mean_lnx - la) - st.s / D.n);
}

double negll_tr(const MleData& D, const std::vector<double>& th) {
    const double la = th[0], b = std::exp(th[1]);
    const double gamma = D.xmin / (1.0 + std::exp(-th[2]));  // 0 < gamma < xmin
    if (!std::isfinite(b) || !(gamma < D.xmin)) return kInf;
    Kahan st, sly;
    for (std::size_t i = 0; i < D.x.size(); ++i) {
        const double ly = std::log(D.x[i] - gamma);
        const double t = std::exp(b * (ly - la));
        if (t == kInf) return kInf;
        st.add(t);
        sly.add(ly);
    }
    return guard(th[1] - la + (b - 1.0) * (sly.s / D.n - la) - st.s / D.n);
}

double negll_gg(const MleData& D, const std::vector<double>& th) {
    const double c = std::exp(th[0]), m = std::exp(th[1]);
    if (!std::isfinite(c) || !std::isfinite(m)) return kInf;
    Kahan st;
    for (std::size_t i = 0; i < D.x.size(); ++i) {
        const double t = std::exp(c * (th[2] + D.lnx[i]));
        if (t == kInf) return kInf;
        st.add(t);
    }
    return guard(th[0] - std::lgamma(m) + c * m * th[2] + (c * m - 1.0) * D.mean_lnx -
                 st.s / D.n);
}

double negll_b2(const MleData& D, const std::vector<double>& th) {
    // th = (ln alpha, ln k, ln q) with q = n - k + 1 keeping n > k - 1.
    const double A = std::exp(th[0]), K = std::exp(th[1]), Q = std::exp(th[2]);
    if (!std::isfinite(A) || !std::isfinite(K) || !std::isfinite(Q)) return kInf;
    const double Nn = K - 1.0 + Q;
    const double lb = std::lgamma(K) + std::lgamma(Q) - std::lgamma(K + Q);
    Kahan s1p;
    for (std::size_t i = 0; i < D.x.size(); ++i) s1p.add(std::log1p(A * D.x[i]));
    return guard(th[0] - lb + (Nn - K) * (th[0] + D.mean_lnx) - (Nn + 1.0) * (s1p.s / D.n));
}

// Moment-style 2-parameter Weibull initialization: beta from a coefficient-of-
// variation lookup, alpha from the mean.
double weibull_cv(double beta) {
    const double g1 = std::lgamma(1.0 + 1.0 / beta);
    const double g2 = std::lgamma(1.0 + 2.0 / beta);
    return std::sqrt(std::max(std::expm1(g2 - 2.0 * g1), 1e-12));
}

std::pair<double, double> weibull_moment_init(double mean, double sd) {
    static const std::vector<std::pair<double, double>> table = [] {
        std::vector<std::pair<double, double>> t;  // (cv, beta), cv descending in beta
        const int kPts = 241;
        for (int i = 0; i < kPts; ++i) {
            const double lb = std::log(0.15) +
                              (std::log(30.0) - std::log(0.15)) * i / (kPts - 1);
            const double beta = std::exp(lb);
            t.emplace_back(weibull_cv(beta), beta);
        }
        std::sort(t.begin(), t.end());  // ascending cv
        return t;
    }();
    double cv = sd / mean;
    cv = std::clamp(cv, table.front().first, table.back().first);
    auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(cv, 0.0));
    double beta;
    if (it == table.begin()) {
        beta = it->second;
    } else {
        const auto lo = *(it - 1);
        const auto hi = *it;
        const double f = (std::log(cv) - std::log(lo.first)) /
                         (std::log(hi.first) - std::log(lo.first));
        beta = std::exp(std::log(lo.second) + f * (std::log(hi.second) - std::log(lo.second)));
    }
    const double alpha = mean / std::exp(std::lgamma(1.0 + 1.0 / beta));
    return {alpha, beta};
}

DistributionParams theta_to_params(Family family, const MleData& D,
                                   const std::vector<double>& th) {
    switch (family) {
        case Family::exp_weibull:
            return ExpWeibullParams{std::exp(th[0]), std::exp(th[1]), std::exp(th[2])};
        case Family::translated_weibull:
            return TranslatedWeibullParams{std::exp(th[0]), std::exp(th[1]),
                                           D.xmin / (1.0 + std::exp(-th[2]))};
        case Family::two_param_weibull:
            return TwoParamWeibullParams{std::exp(th[0]), std::exp(th[1])};
        case Family::gen_gamma:
            return GenGammaParams{std::exp(th[0]), std::exp(th[1]), std::exp(th[2])};
        case Family::beta2: {
            const double K = std::exp(th[1]);
            return Beta2Params{std::exp(th[0]), K, K - 1.0 + std::exp(th[2])};
        }
    }
    throw DomainError("unknown family tag");
}

std::vector<std::vector<double>> mle_starts(Family family, const MleData& D) {
    const auto [a0, b0] = weibull_moment_init(D.mean, D.sd);
    switch (family) {
        case Family::exp_weibull:
            return {{std::log(a0), std::log(b0), 0.0}};
        case Family::two_param_weibull:
            return {{std::log(a0), std::log(b0)}};
        case Family::translated_weibull: {
            const double g0 = 0.5 * D.xmin;
            const auto [as, bs] = weibull_moment_init(D.mean - g0, D.sd);
            return {{std::log(as), std::log(bs), 0.0}};
        }
        case Family::gen_gamma: {
            const double var = D.sd * D.sd;
            const double mg = D.mean * D.mean / var;  // plain gamma moments
            const double lg = D.mean / var;
            return {{std::log(b0), 0.0, -std::log(a0)},
                    {0.0, std::log(mg), std::log(lg)}};
        }
        case Family::beta2: {
            const double med = D.median;
            return {{std::log(1.0 / med), std::log(2.0), std::log(2.0)},
                    {std::log(2.0 / med), std::log(1.2), std::log(1.2)},
                    {std::log(0.5 / med), std::log(4.0), std::log(4.0)}};
        }
    }
    throw DomainError("unknown family tag");
}

}  // namespace

std::string method_name(Method method) {
    return method == Method::mle ? "mle" : "wls";
}

Method method_from_name(const std::string& name) {
    if (name == "mle") return Method::mle;
    if (name == "wls") return Method::wls;
    throw ConfigError("unknown method '" + name + "' (expected mle or wls)");
}

std::vector<double> plotting_positions(std::size_t n) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return p;
}

std::vector<double> compute_weights(const std::vector<double>& values, WeightScheme scheme) {
    if (values.empty()) throw EmptyInputError("compute_weights: empty sample");
    if (scheme.q < 1 || scheme.q > 3)
        throw DomainError("weight exponent q must be 1, 2, or 3");
    std::vector<double> w(values.size());
    double sum = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = values[i];
        if (!(std::isfinite(x) && x > 0))
            throw DomainError("compute_weights: values must be finite and > 0");
        double p = x;
        for (int k = 1; k < scheme.q; ++k) p *= x;
        w[i] = p;
        sum += p;
    }
    for (auto& wi : w) wi /= sum;
    return w;
}

std::vector<double> compute_weights(const HsSample& sample, WeightScheme scheme) {
    return compute_weights(sample.values, scheme);
}

std::vector<double> linearized_positions(const std::vector<double>& positions, double delta) {
    if (!(std::isfinite(delta) && delta > 0)) throw DomainError("delta must be > 0");
    std::vector<double> out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!(positions[i] > 0 && positions[i] < 1))
            throw DomainError("plotting positions must lie in (0, 1)");
        out[i] = pstar_one(std::log(positions[i]), delta);
    }
    return out;
}

LinearizedFit wls_ab_given_delta(const std::vector<double>& sorted_values,
                                 const std::vector<double>& weights, double delta) {
    if (sorted_values.empty()) throw EmptyInputError("wls: empty sample");
    if (!(std::isfinite(delta) && delta > 0)) throw DomainError("delta must be > 0");
    check_sorted_positive(sorted_values);
    check_weights(sorted_values, weights);
    if (sorted_values.size() < 2)
        throw DegenerateInputError("wls: all linearized positions equal (need n >= 2)");
    const auto lxs = log10_of(sorted_values);
    const auto lnp = log_positions(sorted_values.size());
    const auto m = line_moments(lxs, weights);
    std::vector<double> scratch(lxs.size());
    return linfit_core(lxs, weights, lnp, delta, m, scratch);
}

LinearizedFit wls_ab_given_delta(const HsSample& sample, const std::vector<double>& weights,
                                 double delta) {
    return wls_ab_given_delta(sample.values, weights, delta);
}

double wls_objective(const std::vector<double>& sorted_values,
                     const std::vector<double>& weights, double delta) {
    return wls_ab_given_delta(sorted_values, weights, delta).Q;
}

double wls_objective(const HsSample& sample, const std::vector<double>& weights,
                     double delta) {
    return wls_ab_given_delta(sample.values, weights, delta).Q;
}

FitReport fit_wls(const HsSample& sample, WeightScheme scheme) {
    if (sample.empty()) throw EmptyInputError("fit_wls: empty sample");
    const std::vector<double> xs = sorted_values(sample);
    const std::vector<double> w = compute_weights(xs, scheme);
    if (xs.size() < 2) throw DegenerateInputError("fit_wls: need at least 2 observations");
    const auto lxs = log10_of(xs);
    const auto lnp = log_positions(xs.size());
    const auto m = line_moments(lxs, w);
    std::vector<double> scratch(xs.size());
    const auto Q_of = [&](double logd) {
        return linfit_core(lxs, w, lnp, std::exp(logd), m, scratch).Q;
    };

    // Coarse scan localizes the minimum, golden-section refines the bracket
    // to 1e-6 in log(delta), one parabolic step polishes inside the bracket.
    const double Llo = std::log(0.01), Lhi = std::log(200.0);
    const int kScan = 64;
    int best = 0;
    double bestQ = kInf;
    for (int k = 0; k < kScan; ++k) {
        const double L = Llo + (Lhi - Llo) * k / (kScan - 1);
        const double Q = Q_of(L);
        if (Q < bestQ) {
            bestQ = Q;
            best = k;
        }
    }
    double a = Llo + (Lhi - Llo) * std::max(best - 1, 0) / (kScan - 1);
    double b = Llo + (Lhi - Llo) * std::min(best + 1, kScan - 1) / (kScan - 1);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = Q_of(c), fd = Q_of(d);
    while (b - a > 1e-6) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = Q_of(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = Q_of(d);
        }
    }
    // Parabola through the last interior evaluations (equally spaced).
    const double e = 0.5 * (c + d);
    const double fe = Q_of(e);
    double Lhat = e;
    const double curv = fc - 2.0 * fe + fd;
    if (curv > 0) {
        const double h = e - c;
        Lhat = std::clamp(e - 0.5 * h * (fd - fc) / curv, a, b);
    }
    const LinearizedFit fit = linfit_core(lxs, w, lnp, std::exp(Lhat), m, scratch);
    if (!(fit.b > 0))
        throw EstimationError("fit_wls: nonpositive slope at optimum (delta = " +
                              std::to_string(fit.delta) + ", b = " + std::to_string(fit.b) +
                              ")");
    const DistributionParams params =
        ExpWeibullParams{std::pow(10.0, fit.a), 1.0 / fit.b, fit.delta};
    validate(params);
    FitReport report;
    report.params = params;
    report.method = Method::wls;
    report.weight_scheme = scheme;
    report.objective_value = fit.Q;
    return report;
}

FitReport fit_mle(Family family, const HsSample& s) {
    if (s.empty()) throw EmptyInputError("fit_mle: empty sample");
    MleData D;
    D.x = sorted_values(s);  // canonical order: permutation-invariant arithmetic
    D.n = static_cast<double>(D.x.size());
    D.lnx.resize(D.x.size());
    Kahan slnx, sx;
    for (std::size_t i = 0; i < D.x.size(); ++i) {
        const double v = D.x[i];
        if (!(std::isfinite(v) && v > 0))
            throw DomainError("fit_mle: sample values must be finite and > 0");
        D.lnx[i] = std::log(v);
        slnx.add(D.lnx[i]);
        sx.add(v);
    }
    D.mean_lnx = slnx.s / D.n;
    D.mean = sx.s / D.n;
    D.xmin = D.x.front();
    D.median = D.x[D.x.size() / 2];
    Kahan sv;
    for (double v : D.x) sv.add((v - D.mean) * (v - D.mean));
    D.sd = std::sqrt(sv.s / std::max(D.n - 1.0, 1.0));

    const auto obj = [&](const std::vector<double>& th) {
        switch (family) {
            case Family::exp_weibull: return negll_ew(D, th);
            case Family::translated_weibull: return negll_tr(D, th);
            case Family::two_param_weibull: return negll_2p(D, th);
            case Family::gen_gamma: return negll_gg(D, th);
            case Family::beta2: return negll_b2(D, th);
        }
        return kInf;
    };

    std::vector<double> x0;
    double f0 = kInf;
    for (const auto& cand : mle_starts(family, D)) {
        const double f = obj(cand);
        if (f < f0) {
            f0 = f;
            x0 = cand;
        }
    }
    if (x0.empty() || !std::isfinite(f0))
        throw EstimationError("fit_mle(" + family_name(family) +
                              "): no usable starting point");

    // One full simplex run plus fresh-simplex restarts from the incumbent;
    // restarts stop early once they no longer move the optimum.
    const double steps[3] = {0.25, 0.05, 0.01};
    std::vector<double> xb = x0;
    double fb = f0;
    NelderMeadResult last;
    for (int r = 0; r < 3; ++r) {
        last = nelder_mead(obj, xb, steps[r], 10000);
        double move = 0;
        for (std::size_t j = 0; j < xb.size(); ++j)
            move = std::max(move, std::abs(last.x[j] - xb[j]));
        const double gain = fb - last.f;
        if (last.f < fb) {
            fb = last.f;
            xb = last.x;
        }
        if (r > 0 && gain < 1e-12 && move < 1e-10) break;
    }
    if (!last.converged)
        throw EstimationError("fit_mle(" + family_name(family) +
                              "): simplex did not converge within 10000 evaluations "
                              "(best objective " +
                              std::to_string(fb) + ")");

    const DistributionParams params = theta_to_params(family, D, xb);
    validate(params);
    FitReport report;
    report.params = params;
    report.method = Method::mle;
    report.objective_value = -fb * D.n;
    return report;
}

}  // namespace wavefit
