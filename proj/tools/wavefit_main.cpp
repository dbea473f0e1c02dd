#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavefit/commands.hpp"
#include "wavefit/errors.hpp"

namespace {

// User-input problems (bad flags, bad files, empty data) exit 2; runtime
// failures such as non-convergence exit 1.
int exit_code_for(const wavefit::Error& e) {
    if (dynamic_cast<const wavefit::ConfigError*>(&e) ||
        dynamic_cast<const wavefit::FileFormatError*>(&e) ||
        dynamic_cast<const wavefit::EmptyInputError*>(&e))
        return 2;
    return 1;
}

struct RunFlags {
    std::string dataset_spec;
    std::vector<std::string> datasets;
    std::vector<std::string> inputs;
    std::vector<std::string> families{"exp-weibull"};
    std::vector<std::string> methods{"wls"};
    int weight_exponent = 2;
    int bootstrap_B = 0;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string format = "csv";
    double tail_threshold = 0.99;
    int bins = 15;
    bool no_timestamp = false;
    std::string params;  // "<family>:<v1,v2[,v3]>"
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_fit_flags,
                   bool with_plot_flags) {
    cmd->add_option("--dataset-spec", f.dataset_spec,
                    "Dataset spec file (INI-style sections)");
    cmd->add_option("--dataset", f.datasets,
                    "Restrict to these dataset names from the spec file");
    cmd->add_option("--input", f.inputs,
                    "Canonical CSV input file (dataset named by file stem)");
    cmd->add_option("--family", f.families,
                    "Distribution family: exp-weibull, translated-weibull, "
                    "2p-weibull, gen-gamma, beta2")
        ->capture_default_str();
    cmd->add_option("--method", f.methods, "Estimation method: mle or wls")
        ->capture_default_str();
    cmd->add_option("--weight-exponent", f.weight_exponent,
                    "WLS weight exponent q")
        ->check(CLI::IsMember({1, 2, 3}))
        ->capture_default_str();
    if (with_fit_flags) {
        cmd->add_option("--bootstrap", f.bootstrap_B,
                        "Bootstrap resamples for standard errors (0 = off)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--seed", f.seed, "Master RNG seed")->capture_default_str();
    }
    cmd->add_option("--out", f.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->capture_default_str();
    if (with_plot_flags) {
        cmd->add_option("--tail-threshold", f.tail_threshold,
                        "Tail probability threshold for density bins")
            ->capture_default_str();
        cmd->add_option("--bins", f.bins, "Tail density bin count")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }
    cmd->add_flag("--no-timestamp-header", f.no_timestamp,
                  "Omit the generation-time header line");
    if (!with_fit_flags)
        cmd->add_option("--params", f.params,
                        "Evaluate fixed parameters instead of fitting, e.g. "
                        "exp-weibull:0.98,1.01,2.18");
}

wavefit::RunConfig to_config(const RunFlags& f) {
    wavefit::RunConfig config;
    config.dataset_spec_path = f.dataset_spec;
    config.datasets = f.datasets;
    config.input_files = f.inputs;
    for (const auto& name : f.families)
        config.families.push_back(wavefit::family_from_name(name));
    for (const auto& name : f.methods)
        config.methods.push_back(wavefit::method_from_name(name));
    config.weight_exponent = f.weight_exponent;
    config.bootstrap_B = f.bootstrap_B;
    config.seed = f.seed;
    config.out_dir = f.out_dir;
    config.format = wavefit::format_from_name(f.format);
    config.tail_threshold = f.tail_threshold;
    config.bins = f.bins;
    config.timestamp_header = !f.no_timestamp;
    if (!f.params.empty()) {
        const auto colon = f.params.find(':');
        if (colon == std::string::npos)
            throw wavefit::ConfigError(
                "--params: expected <family>:<v1,v2[,v3]>, got '" + f.params + "'");
        const wavefit::Family family =
            wavefit::family_from_name(f.params.substr(0, colon));
        std::vector<double> values;
        std::string rest = f.params.substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const std::size_t comma = rest.find(',', pos);
            const std::string tok =
                rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                            : comma - pos);
            try {
                std::size_t used = 0;
                values.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw wavefit::ConfigError("--params: bad number '" + tok + "'");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        config.inline_params = {family, values};
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Long-term significant wave height distribution fitting "
        "(exponentiated Weibull and reference families)"};
    app.require_subcommand(1);

    RunFlags fit_flags, eval_flags, plot_flags;
    CLI::App* fit = app.add_subcommand(
        "fit", "Fit distribution families to wave height datasets");
    add_run_flags(fit, fit_flags, /*with_fit_flags=*/true, /*with_plot_flags=*/false);
    CLI::App* eval = app.add_subcommand(
        "eval", "Fit and evaluate quantile-error metrics and return values");
    add_run_flags(eval, eval_flags, false, false);
    CLI::App* plot = app.add_subcommand(
        "plotdata", "Emit QQ, probability-paper, and tail-density series");
    add_run_flags(plot, plot_flags, false, true);

    wavefit::SimulateConfig sim;
    std::string sim_method = "wls";
    std::string sim_format = "csv";
    bool sim_no_timestamp = false;
    CLI::App* simulate = app.add_subcommand(
        "simulate-recovery",
        "Draw repeated samples from a known exponentiated Weibull and refit");
    simulate->add_option("--alpha", sim.alpha, "True scale")->capture_default_str();
    simulate->add_option("--beta", sim.beta, "True first shape")->capture_default_str();
    simulate->add_option("--delta", sim.delta, "True second shape")
        ->capture_default_str();
    simulate->add_option("--n", sim.n, "Sample size per repeat")
        ->capture_default_str();
    simulate->add_option("--repeats", sim.repeats, "Number of repeats")
        ->capture_default_str();
    simulate->add_option("--method", sim_method, "Estimation method: mle or wls")
        ->capture_default_str();
    simulate->add_option("--weight-exponent", sim.weight_exponent,
                         "WLS weight exponent q")
        ->check(CLI::IsMember({1, 2, 3}))
        ->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Master RNG seed")
        ->capture_default_str();
    simulate->add_option("--out", sim.out_dir, "Output directory")
        ->capture_default_str();
    simulate->add_option("--format", sim_format, "Output format")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->capture_default_str();
    simulate->add_flag("--no-timestamp-header", sim_no_timestamp,
                       "Omit the generation-time header line");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return wavefit::cmd_fit(to_config(fit_flags));
        if (eval->parsed()) return wavefit::cmd_eval(to_config(eval_flags));
        if (plot->parsed()) return wavefit::cmd_plotdata(to_config(plot_flags));
        sim.method = wavefit::method_from_name(sim_method);
        sim.format = wavefit::format_from_name(sim_format);
        sim.timestamp_header = !sim_no_timestamp;
        return wavefit::cmd_simulate_recovery(sim);
    } catch (const wavefit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
