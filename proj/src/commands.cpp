#include "wavefit/commands.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <set>

#include "wavefit/bootstrap.hpp"
#include "wavefit/errors.hpp"
#include "wavefit/gof.hpp"
#include "wavefit/ingest.hpp"
#include "wavefit/rng.hpp"

namespace wavefit {
namespace {

namespace fs = std::filesystem;

struct NamedDataset {
    std::string name;
    HsSample fit;
    HsSample retained;
};

void report_parse_notes(const std::string& name, const PreparedDataset& prepared) {
    for (const auto& d : prepared.parse.diagnostics)
        std::cerr << "note: " << name << ": " << d << "\n";
    std::cerr << "note: dataset " << name << ": " << prepared.parse.rows_read
              << " rows read, " << prepared.parse.rows_skipped << " skipped, "
              << prepared.parse.missing << " missing";
    if (prepared.hourly.combined || prepared.hourly.dropped)
        std::cerr << "; hourly: " << prepared.hourly.combined << " combined, "
                  << prepared.hourly.dropped << " dropped";
    std::cerr << "\n";
}

std::vector<NamedDataset> resolve_datasets(const RunConfig& config) {
    std::vector<DatasetSpec> specs;
    if (!config.dataset_spec_path.empty()) {
        specs = load_dataset_specs(config.dataset_spec_path);
        if (!config.datasets.empty()) {
            std::set<std::string> known;
            for (const auto& s : specs) known.insert(s.name);
            for (const auto& want : config.datasets)
                if (!known.count(want))
                    throw ConfigError("unknown dataset '" + want + "' in " +
                                      config.dataset_spec_path);
            std::erase_if(specs, [&](const DatasetSpec& s) {
                return std::find(config.datasets.begin(), config.datasets.end(),
                                 s.name) == config.datasets.end();
            });
        }
    } else if (!config.datasets.empty()) {
        throw ConfigError("--dataset requires --dataset-spec");
    }
    for (const auto& file : config.input_files) {
        DatasetSpec spec;
        spec.name = fs::path(file).stem().string();
        spec.kind = "canonical-csv";
        spec.files = {file};
        specs.push_back(std::move(spec));
    }
    if (specs.empty())
        throw ConfigError("no datasets: provide --dataset-spec or --input");
    std::set<std::string> seen;
    for (const auto& s : specs)
        if (!seen.insert(s.name).second)
            throw ConfigError("duplicate dataset name '" + s.name + "'");

    std::vector<NamedDataset> out;
    out.reserve(specs.size());
    for (const auto& spec : specs) {
        PreparedDataset prepared = prepare_dataset(spec);
        report_parse_notes(spec.name, prepared);
        out.push_back({spec.name, std::move(prepared.fit), std::move(prepared.retained)});
    }
    return out;
}

struct FitJob {
    std::size_t dataset = 0;
    Family family = Family::exp_weibull;
    Method method = Method::mle;
};

// WLS linearization only exists for the exponentiated Weibull; other
// (family, wls) combinations are skipped with a note rather than failing.
std::vector<FitJob> enumerate_jobs(const RunConfig& config, std::size_t n_datasets) {
    if (config.families.empty() || config.methods.empty())
        throw ConfigError("need at least one family and one method");
    std::vector<FitJob> jobs;
    for (std::size_t d = 0; d < n_datasets; ++d) {
        for (Family family : config.families) {
            for (Method method : config.methods) {
                if (method == Method::wls && family != Family::exp_weibull) {
                    if (d == 0)
                        std::cerr << "note: skipping wls for " << family_name(family)
                                  << " (weighted least squares fits exp-weibull only)\n";
                    continue;
                }
                jobs.push_back({d, family, method});
            }
        }
    }
    if (jobs.empty()) throw ConfigError("no runnable (family, method) jobs");
    return jobs;
}

FitReport run_fit(const FitJob& job, const HsSample& sample, const RunConfig& config) {
    if (job.method == Method::wls)
        return fit_wls(sample, WeightScheme{config.weight_exponent});
    return fit_mle(job.family, sample);
}

std::string output_path(const RunConfig& config, const std::string& base) {
    return (fs::path(config.out_dir) /
            (base + "." + format_extension(config.format)))
        .string();
}

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' &&
            c != '.')
            c = '_';
    return out;
}

Cell num_or_null(const std::optional<double>& v) {
    if (v) return Cell{*v};
    return Cell{};
}

std::pair<Family, DistributionParams> checked_inline_params(const RunConfig& config) {
    const auto& [family, values] = *config.inline_params;
    try {
        DistributionParams params = make_params(family, values);
        validate(params);
        return {family, params};
    } catch (const DomainError& e) {
        throw ConfigError(std::string("--params: ") + e.what());
    }
}

struct EvalScope {
    const NamedDataset* dataset;
    const char* scope;  // "fit" | "retained"
    const HsSample* sample;
};

std::vector<EvalScope> eval_scopes(const std::vector<NamedDataset>& datasets) {
    std::vector<EvalScope> scopes;
    for (const auto& ds : datasets) {
        scopes.push_back({&ds, "fit", &ds.fit});
        if (!ds.retained.values.empty())
            scopes.push_back({&ds, "retained", &ds.retained});
    }
    return scopes;
}

void append_gof_cells(std::vector<Cell>& row, const GofReport& gof) {
    row.emplace_back(gof.e_overall);
    row.emplace_back(gof.e_099);
    row.emplace_back(gof.e_0999);
    row.emplace_back(gof.hs1_pred);
    row.emplace_back(gof.hs1_emp);
    row.emplace_back(gof.hs1_norm);
    row.emplace_back(gof.hs50_pred);
}

std::vector<Cell> blank_cells(std::size_t n) { return std::vector<Cell>(n); }

}  // namespace

int cmd_fit(const RunConfig& config) {
    const std::vector<NamedDataset> datasets = resolve_datasets(config);
    const std::vector<FitJob> jobs = enumerate_jobs(config, datasets.size());

    Table table;
    table.columns = {"dataset", "n",      "family",  "method",  "weight_exponent",
                     "param1",  "value1", "se1",     "param2",  "value2",
                     "se2",     "param3", "value3",  "se3",     "objective",
                     "status",  "error"};
    bool all_ok = true;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const FitJob& job = jobs[j];
        const NamedDataset& ds = datasets[job.dataset];
        std::vector<Cell> row;
        row.emplace_back(ds.name);
        row.emplace_back(static_cast<std::int64_t>(ds.fit.values.size()));
        row.emplace_back(family_name(job.family));
        row.emplace_back(method_name(job.method));
        if (job.method == Method::wls)
            row.emplace_back(static_cast<std::int64_t>(config.weight_exponent));
        else
            row.emplace_back();

        const std::vector<std::string> names = param_names(job.family);
        std::string error;
        std::optional<FitReport> fit;
        std::optional<BootstrapResult> boot;
        try {
            fit = run_fit(job, ds.fit, config);
            if (config.bootstrap_B > 0) {
                const Estimator estimator = [&](const HsSample& resample) {
                    return run_fit(job, resample, config);
                };
                boot = bootstrap_se(ds.fit, estimator,
                                    BootstrapConfig{config.bootstrap_B,
                                                    derive_seed(config.seed, j)});
            }
        } catch (const Error& e) {
            error = e.what();
        }

        for (std::size_t p = 0; p < 3; ++p) {
            if (p < names.size() && fit) {
                row.emplace_back(names[p]);
                row.emplace_back(param_values(fit->params)[p]);
                if (boot)
                    row.emplace_back(boot->std_errors[p]);
                else
                    row.emplace_back();
            } else {
                row.emplace_back();
                row.emplace_back();
                row.emplace_back();
            }
        }
        if (fit)
            row.emplace_back(fit->objective_value);
        else
            row.emplace_back();
        row.emplace_back(std::string(error.empty() ? "ok" : "error"));
        if (error.empty())
            row.emplace_back();
        else
            row.emplace_back(error);
        table.rows.push_back(std::move(row));
        if (!error.empty()) {
            std::cerr << "error: fit " << ds.name << " " << family_name(job.family)
                      << " " << method_name(job.method) << ": " << error << "\n";
            all_ok = false;
        }
    }
    write_table(output_path(config, "fits"), table, config.format,
                config.timestamp_header);
    return all_ok ? 0 : 1;
}

int cmd_eval(const RunConfig& config) {
    const std::vector<NamedDataset> datasets = resolve_datasets(config);
    const std::vector<EvalScope> scopes = eval_scopes(datasets);

    Table table;
    table.columns = {"dataset",  "scope",   "n",        "family",   "method",
                     "e_overall", "e_099",  "e_0999",   "hs1_pred", "hs1_emp",
                     "hs1_norm", "hs50_pred", "status", "error"};

    struct EvalJob {
        Family family;
        std::string method_label;
        std::optional<DistributionParams> given;
        std::optional<Method> method;
    };
    std::vector<EvalJob> jobs;
    if (config.inline_params) {
        const auto [family, params] = checked_inline_params(config);
        jobs.push_back({family, "given", params, std::nullopt});
    } else {
        // Reuse fit-job enumeration for the (family, method) grid.
        for (const FitJob& j : enumerate_jobs(config, 1))
            jobs.push_back({j.family, method_name(j.method), std::nullopt, j.method});
    }

    bool all_ok = true;
    for (const EvalScope& scope : scopes) {
        for (const EvalJob& job : jobs) {
            std::vector<Cell> row;
            row.emplace_back(scope.dataset->name);
            row.emplace_back(std::string(scope.scope));
            row.emplace_back(static_cast<std::int64_t>(scope.sample->values.size()));
            row.emplace_back(family_name(job.family));
            row.emplace_back(job.method_label);
            std::string error;
            try {
                DistributionParams params =
                    job.given ? *job.given
                              : run_fit(FitJob{0, job.family, *job.method},
                                        *scope.sample, config)
                                    .params;
                append_gof_cells(row, evaluate_gof(*scope.sample, params));
            } catch (const Error& e) {
                error = e.what();
                for (Cell& c : blank_cells(7)) row.push_back(std::move(c));
            }
            row.emplace_back(std::string(error.empty() ? "ok" : "error"));
            if (error.empty())
                row.emplace_back();
            else
                row.emplace_back(error);
            table.rows.push_back(std::move(row));
            if (!error.empty()) {
                std::cerr << "error: eval " << scope.dataset->name << " ("
                          << scope.scope << ") " << family_name(job.family) << " "
                          << job.method_label << ": " << error << "\n";
                all_ok = false;
            }
        }
    }
    write_table(output_path(config, "gof"), table, config.format,
                config.timestamp_header);
    return all_ok ? 0 : 1;
}

int cmd_plotdata(const RunConfig& config) {
    const std::vector<NamedDataset> datasets = resolve_datasets(config);

    struct PlotJob {
        const NamedDataset* dataset;
        Family family;
        std::string method_label;
        std::optional<DistributionParams> given;
        std::optional<Method> method;
    };
    std::vector<PlotJob> jobs;
    if (config.inline_params) {
        const auto [family, params] = checked_inline_params(config);
        for (const auto& ds : datasets)
            jobs.push_back({&ds, family, "given", params, std::nullopt});
    } else {
        for (const FitJob& j : enumerate_jobs(config, datasets.size()))
            jobs.push_back({&datasets[j.dataset], j.family, method_name(j.method),
                            std::nullopt, j.method});
    }

    bool all_ok = true;
    for (const PlotJob& job : jobs) {
        const std::string tag = sanitize(job.dataset->name) + "_" +
                                family_name(job.family) + "_" + job.method_label;
        try {
            const DistributionParams params =
                job.given ? *job.given
                          : run_fit(FitJob{0, job.family, *job.method},
                                    job.dataset->fit, config)
                                .params;

            const QQSeries qq = qq_series(job.dataset->fit, params);
            Table qq_table;
            qq_table.columns = {"observed", "model"};
            for (std::size_t i = 0; i < qq.observed.size(); ++i)
                qq_table.rows.push_back({Cell{qq.observed[i]}, Cell{qq.model[i]}});
            write_table(output_path(config, "qq_" + tag), qq_table, config.format,
                        config.timestamp_header);

            const ProbabilityPaperSeries pp =
                probability_paper_series(job.dataset->fit, params);
            Table pp_table;
            pp_table.columns = {"kind", "abscissa", "ordinate"};
            for (std::size_t i = 0; i < pp.abscissa.size(); ++i)
                pp_table.rows.push_back({Cell{std::string("empirical")},
                                         Cell{pp.abscissa[i]}, Cell{pp.ordinate[i]}});
            for (std::size_t i = 0; i < pp.model_abscissa.size(); ++i)
                pp_table.rows.push_back({Cell{std::string("model")},
                                         Cell{pp.model_abscissa[i]},
                                         Cell{pp.model_ordinate[i]}});
            write_table(output_path(config, "pp_" + tag), pp_table, config.format,
                        config.timestamp_header);

            const TailDensitySeries td = tail_density_series(
                job.dataset->fit, params, config.tail_threshold, config.bins);
            Table td_table;
            td_table.columns = {"bin_lo", "bin_hi", "empirical", "model"};
            for (std::size_t i = 0; i < td.bin_lo.size(); ++i)
                td_table.rows.push_back({Cell{td.bin_lo[i]}, Cell{td.bin_hi[i]},
                                         Cell{td.empirical[i]}, Cell{td.model[i]}});
            write_table(output_path(config, "taildens_" + tag), td_table,
                        config.format, config.timestamp_header);
        } catch (const Error& e) {
            std::cerr << "error: plotdata " << tag << ": " << e.what() << "\n";
            all_ok = false;
        }
    }
    return all_ok ? 0 : 1;
}

int cmd_simulate_recovery(const SimulateConfig& config) {
    if (!(std::isfinite(config.alpha) && config.alpha > 0) ||
        !(std::isfinite(config.beta) && config.beta > 0) ||
        !(std::isfinite(config.delta) && config.delta > 0))
        throw ConfigError("simulate-recovery: alpha, beta, delta must be positive");
    if (config.n < 100) throw ConfigError("simulate-recovery: n must be >= 100");
    if (config.repeats < 2) throw ConfigError("simulate-recovery: repeats must be >= 2");

    const ExpWeibullParams truth{config.alpha, config.beta, config.delta};

    Table raw;
    raw.columns = {"repeat", "alpha_hat", "beta_hat", "delta_hat", "status", "error"};
    std::vector<std::array<double, 3>> estimates;
    bool all_ok = true;
    for (int r = 0; r < config.repeats; ++r) {
        HsSample s = sample(DistributionParams{truth}, config.n,
                            derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        std::vector<Cell> row;
        row.emplace_back(static_cast<std::int64_t>(r));
        try {
            const FitReport fit =
                config.method == Method::wls
                    ? fit_wls(s, WeightScheme{config.weight_exponent})
                    : fit_mle(Family::exp_weibull, s);
            const std::vector<double> v = param_values(fit.params);
            estimates.push_back({v[0], v[1], v[2]});
            row.emplace_back(v[0]);
            row.emplace_back(v[1]);
            row.emplace_back(v[2]);
            row.emplace_back(std::string("ok"));
            row.emplace_back();
        } catch (const Error& e) {
            row.emplace_back();
            row.emplace_back();
            row.emplace_back();
            row.emplace_back(std::string("error"));
            row.emplace_back(std::string(e.what()));
            std::cerr << "error: simulate-recovery repeat " << r << ": " << e.what()
                      << "\n";
            all_ok = false;
        }
        raw.rows.push_back(std::move(row));
    }
    const std::string ext = format_extension(config.format);
    write_table((fs::path(config.out_dir) / ("recovery_raw." + ext)).string(), raw,
                config.format, config.timestamp_header);

    Table summary;
    summary.columns = {"param", "mean", "sd", "median", "q25", "q75"};
    const char* names[3] = {"alpha", "beta", "delta"};
    for (std::size_t p = 0; p < 3; ++p) {
        std::vector<double> xs;
        xs.reserve(estimates.size());
        for (const auto& e : estimates) xs.push_back(e[p]);
        if (xs.empty()) continue;
        std::sort(xs.begin(), xs.end());
        const double mean =
            std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        std::optional<double> sd;
        if (xs.size() >= 2) {
            double ss = 0;
            for (double x : xs) ss += (x - mean) * (x - mean);
            sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        }
        const auto quantile = [&](double q) {
            const double h = q * static_cast<double>(xs.size() - 1);
            const std::size_t lo = static_cast<std::size_t>(h);
            if (lo + 1 >= xs.size()) return xs.back();
            return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
        };
        summary.rows.push_back({Cell{std::string(names[p])}, Cell{mean},
                                num_or_null(sd), Cell{quantile(0.5)},
                                Cell{quantile(0.25)}, Cell{quantile(0.75)}});
    }
    write_table((fs::path(config.out_dir) / ("recovery_summary." + ext)).string(),
                summary, config.format, config.timestamp_header);
    return all_ok ? 0 : 1;
}

}  // namespace wavefit
