#include "condense/config.hpp"
#include "condense/errors.hpp"
#include "condense/experiment.hpp"
#include "condense/presets.hpp"
#include "condense/verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using namespace condense;

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kDiverged = 3 };

struct Args {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    std::size_t replicates = 1;
    std::string params;
    std::string method;
    std::vector<std::string> suites;
    bool corrupt_gradient = false;
};

void add_common(CLI::App* cmd, Args& a, bool analysis) {
    auto* cfg = cmd->add_option("--config", a.config, "experiment config file");
    auto* pre = cmd->add_option("--preset", a.preset, "built-in preset name (fig2a ... fig6d)");
    cfg->excludes(pre);
    cmd->add_option("--out", a.out, "output directory (default: the config's out_dir)");
    cmd->add_option("--seed", a.seed, "override the experiment seed");
    cmd->add_option("--replicates", a.replicates, "number of consecutive seeds")->check(CLI::PositiveNumber);
    if (analysis) {
        cmd->add_option("--params", a.params, "params CSV (default: <out>/params_analysis.csv)");
    } else {
        cmd->add_option("--jobs", a.jobs, "replicates trained concurrently")->check(CLI::PositiveNumber);
    }
}

ExperimentConfig resolve_config(const Args& a) {
    if (!a.preset.empty()) {
        const auto text = preset_text(a.preset);
        if (!text) {
            std::string names;
            for (const auto& n : preset_names()) names += " " + n;
            throw ConfigError("unknown preset '" + a.preset + "'; available:" + names);
        }
        return parse_config(*text, "configs");
    }
    if (a.config.empty()) throw ConfigError("one of --config or --preset is required");
    return load_config(a.config);
}

CommandOptions command_options(const Args& a) {
    CommandOptions o;
    o.out_dir = a.out;
    o.seed = a.seed;
    o.jobs = a.jobs;
    o.replicates = a.replicates;
    o.params = a.params;
    if (!a.method.empty()) {
        static const std::map<std::string, PredictMethod> methods = {
            {"case1", PredictMethod::case1}, {"case2", PredictMethod::case2}, {"sweep", PredictMethod::sweep}};
        const auto it = methods.find(a.method);
        if (it == methods.end()) throw ConfigError("--method must be case1, case2 or sweep");
        o.method = it->second;
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Condensation experiments for small-initialization networks"};
    app.require_subcommand(1);
    Args a;

    auto* train = app.add_subcommand("train", "train every replicate and write parameter snapshots");
    auto* analyze = app.add_subcommand("analyze", "similarity matrices and orientation counts");
    auto* field = app.add_subcommand("field", "direction field on a 2-d weight grid");
    auto* predict = app.add_subcommand("predict", "predicted condensation lines and alignment");
    auto* verify = app.add_subcommand("verify", "run the acceptance suites");
    add_common(train, a, false);
    add_common(analyze, a, true);
    add_common(field, a, true);
    add_common(predict, a, true);
    predict->add_option("--method", a.method, "case1, case2 or sweep (default: analysis.method)");
    verify->add_option("--suite", a.suites, "run only the named suites");
    verify->add_flag("--corrupt-gradient", a.corrupt_gradient,
                     "test hook: perturb the closed-form gradient");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (verify->parsed()) {
            VerifyOptions vo;
            vo.suites = a.suites;
            vo.corrupt_gradient = a.corrupt_gradient;
            const VerifyReport report = run_verify(vo);
            std::cout << report.summary();
            return report.passed() ? kOk : kVerifyFailed;
        }
        const ExperimentConfig config = resolve_config(a);
        const CommandOptions options = command_options(a);
        if (train->parsed()) cmd_train(config, options, std::cout);
        if (analyze->parsed()) cmd_analyze(config, options, std::cout);
        if (field->parsed()) cmd_field(config, options, std::cout);
        if (predict->parsed()) cmd_predict(config, options, std::cout);
        return kOk;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDiverged;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
}
