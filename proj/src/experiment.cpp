#include "condense/experiment.hpp"

#include "condense/data_io.hpp"
#include "condense/errors.hpp"
#include "condense/serialize.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

namespace condense {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::uint64_t base_seed(const ExperimentConfig& config, const CommandOptions& options) {
    return options.seed.value_or(config.seed);
}

std::vector<std::uint64_t> replicate_seeds(const ExperimentConfig& config, const CommandOptions& options) {
    if (options.replicates < 1) throw ConfigError("--replicates must be at least 1");
    std::vector<std::uint64_t> seeds;
    for (std::size_t r = 0; r < options.replicates; ++r) seeds.push_back(base_seed(config, options) + r);
    return seeds;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ConfigError("cannot create output directory '" + dir.string() + "'");
    }
}

ExperimentConfig with_seed(ExperimentConfig config, std::uint64_t seed) {
    config.seed = seed;
    return config;
}

// Data, topology and analysis parameters of one replicate.
struct Loaded {
    ExperimentConfig config;
    fs::path dir;
    Batch batch;
    NetworkConfig net;
    NetworkParams params;
};

Loaded load_replicate(const ExperimentConfig& config, const CommandOptions& options, std::uint64_t seed) {
    Loaded l;
    l.config = with_seed(config, seed);
    l.dir = replicate_dir(config, options, seed);
    l.batch = load_data(l.config);
    l.net = network_config(l.config, l.batch);
    const fs::path params_path = options.params.empty() ? l.dir / "params_analysis.csv" : options.params;
    if (!fs::exists(params_path)) {
        throw ConfigError("params file '" + params_path.string() + "' not found; run train first");
    }
    l.params = read_params_csv(params_path, l.net);
    ensure_dir(l.dir);
    return l;
}

void check_layer(const NetworkConfig& net, std::size_t layer) {
    if (layer < 1 || layer > net.depth()) {
        throw ConfigError("layer " + std::to_string(layer) + " does not exist; the network has " +
                          std::to_string(net.depth()) + " hidden layers");
    }
}

TrainSummary train_one(const ExperimentConfig& config, const CommandOptions& options, std::uint64_t seed) {
    const ExperimentConfig cfg = with_seed(config, seed);
    const fs::path dir = replicate_dir(config, options, seed);
    const Batch batch = load_data(cfg);
    const NetworkConfig net = network_config(cfg, batch);
    const NetworkParams init = init_params(net, split_seed(seed).init, cfg.network.init_std);
    ensure_dir(dir);
    write_dataset_csv(batch, dir / "dataset.csv");
    write_params_csv(init, dir / "params_init.csv");

    const TrainResult result = train(net, init, batch, cfg.optimizer, cfg.run);
    const TrainLog& log = result.log;
    const std::size_t analysis = analysis_epoch(log);
    const NetworkParams* analysis_params = &result.params;
    for (const auto& s : log.snapshots) {
        write_params_csv(s.params, dir / ("params_epoch_" + std::to_string(s.epoch) + ".csv"));
        if (s.epoch == analysis) analysis_params = &s.params;
    }
    write_params_csv(result.params, dir / "params_final.csv");
    write_text_file(dir / "params_final.json", params_json(result.params));
    write_params_csv(*analysis_params, dir / "params_analysis.csv");
    write_train_log_csv(log, dir / "train_log.csv");
    write_train_log_json(log, dir / "train_log.json");

    TrainSummary s;
    s.seed = seed;
    s.dir = dir;
    s.epochs_run = log.epochs_run();
    s.initial_loss = log.loss_history.front();
    s.final_loss = log.loss_history.back();
    s.initial_stage_end = log.initial_stage_end;
    s.stop_reason = log.stop_reason;
    s.analysis_epoch = analysis;
    return s;
}

}  // namespace

fs::path replicate_dir(const ExperimentConfig& config, const CommandOptions& options, std::uint64_t seed) {
    const fs::path base = options.out_dir.empty() ? config.out_dir : options.out_dir;
    if (options.replicates <= 1) return base;
    return base / ("seed_" + std::to_string(seed));
}

double median(std::vector<double> values) {
    if (values.empty()) throw PreconditionError("median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<TrainSummary> cmd_train(const ExperimentConfig& config, const CommandOptions& options,
                                    std::ostream& out) {
    const std::vector<std::uint64_t> seeds = replicate_seeds(config, options);
    std::vector<TrainSummary> summaries(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());

    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                summaries[i] = train_one(config, options, seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    for (const auto& s : summaries) {
        out << config.name << " seed " << s.seed << ": " << s.epochs_run << " epochs, loss "
            << short_number(s.initial_loss) << " -> " << short_number(s.final_loss) << " (ratio "
            << short_number(s.final_loss / s.initial_loss) << "), initial stage ";
        if (s.initial_stage_end) {
            out << "ended at epoch " << *s.initial_stage_end;
        } else {
            out << "not left";
        }
        out << ", analysis epoch " << s.analysis_epoch << ", artifacts in " << s.dir.string() << "\n";
    }
    return summaries;
}

std::vector<SimilarityReport> cmd_analyze(const ExperimentConfig& config,
                                          const CommandOptions& options, std::ostream& out) {
    std::vector<SimilarityReport> reports;
    for (std::uint64_t seed : replicate_seeds(config, options)) {
        const Loaded l = load_replicate(config, options, seed);
        for (std::size_t layer : config.analysis.layers) {
            check_layer(l.net, layer);
            SimilarityReport r = condensation_report(l.params, layer, config.analysis.min_norm,
                                                     config.analysis.cos_threshold);
            const std::string k = std::to_string(layer);
            write_similarity_csv(r, l.dir / ("similarity_layer" + k + ".csv"));
            write_report_json(r, l.dir / ("report_layer" + k + ".json"));
            out << config.name << " seed " << seed << " layer " << layer << ": kept "
                << r.kept_indices.size() << ", discarded " << r.discarded_count << ", lines "
                << r.n_lines << ", directions " << r.n_directions << "\n";
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

std::vector<FieldResult> cmd_field(const ExperimentConfig& config, const CommandOptions& options,
                                   std::ostream& out) {
    std::vector<FieldResult> results;
    for (std::uint64_t seed : replicate_seeds(config, options)) {
        const Loaded l = load_replicate(config, options, seed);
        const std::size_t layer = config.field.layer;
        check_layer(l.net, layer);
        const ResidualSet res = residuals(l.net, l.params, l.batch, layer);
        if (res.layer_inputs.cols() != 2) {
            throw UnsupportedError("layer " + std::to_string(layer) + " has a " +
                                   std::to_string(res.layer_inputs.cols()) +
                                   "-d augmented input; the field needs 2-d");
        }
        const ActivationSpec& act = l.net.activations[layer - 1];
        FieldResult fr;
        fr.seed = seed;
        fr.grid = field_grid(res, act, config.field.lo, config.field.hi, config.field.resolution);
        fr.sweep = angular_sweep(res, act, config.analysis.sweep_angles, config.analysis.sweep_radius);

        const std::string k = std::to_string(layer);
        write_field_csv(fr.grid, l.dir / ("field_layer" + k + ".csv"));
        ordered_json j;
        j["layer"] = layer;
        j["activation"] = act.name();
        j["lo"] = fr.grid.lo;
        j["hi"] = fr.grid.hi;
        j["resolution"] = fr.grid.resolution;
        ordered_json origin = nullptr;
        for (std::size_t i = 0; i < fr.grid.points.size(); ++i) {
            if (fr.grid.points[i].origin) origin = i;
        }
        j["origin_index"] = origin;
        j["degenerate"] = fr.sweep.degenerate;
        j["sweep"] = ordered_json::parse(prediction_json(fr.sweep));
        write_text_file(l.dir / ("field_layer" + k + ".json"), j.dump(2) + "\n");

        out << config.name << " seed " << seed << " layer " << layer << ": field "
            << fr.grid.resolution << "x" << fr.grid.resolution << " on [" << short_number(fr.grid.lo)
            << ", " << short_number(fr.grid.hi) << "]^2, ";
        if (fr.sweep.degenerate) {
            out << "degenerate (zero residuals)\n";
        } else {
            out << fr.sweep.n_lines() << " stable lines\n";
        }
        results.push_back(std::move(fr));
    }
    return results;
}

std::vector<PredictResult> cmd_predict(const ExperimentConfig& config,
                                       const CommandOptions& options, std::ostream& out) {
    const PredictMethod method = options.method.value_or(config.analysis.method);
    std::vector<PredictResult> results;
    for (std::uint64_t seed : replicate_seeds(config, options)) {
        const Loaded l = load_replicate(config, options, seed);
        for (std::size_t layer : config.analysis.layers) {
            check_layer(l.net, layer);
            const ActivationSpec& act = l.net.activations[layer - 1];
            const ResidualSet res = residuals(l.net, l.params, l.batch, layer);
            PredictResult pr;
            pr.seed = seed;
            pr.layer = layer;
            switch (method) {
                case PredictMethod::case1:
                    if (act.declared_multiplicity() != 1) {
                        throw PreconditionError("case1 needs a multiplicity-one activation; layer " +
                                                std::to_string(layer) + " uses " + act.name());
                    }
                    pr.prediction = predict_case1(res);
                    break;
                case PredictMethod::case2:
                    if (!act.declared_multiplicity()) {
                        throw PreconditionError("case2 needs an activation with a multiplicity; layer " +
                                                std::to_string(layer) + " uses " + act.name());
                    }
                    if (res.layer_inputs.cols() != 2) {
                        throw PreconditionError("case2 needs a 2-d augmented input at layer " +
                                                std::to_string(layer));
                    }
                    pr.prediction = predict_case2(res, act.multiplicity());
                    break;
                case PredictMethod::sweep:
                    if (res.layer_inputs.cols() != 2) {
                        throw PreconditionError("sweep needs a 2-d augmented input at layer " +
                                                std::to_string(layer));
                    }
                    pr.prediction = angular_sweep(res, act, config.analysis.sweep_angles,
                                                  config.analysis.sweep_radius);
                    break;
            }

            const std::vector<Eigen::VectorXd> weights = layer_weights(l.params, layer);
            std::vector<Eigen::VectorXd> kept;
            for (std::size_t j = 0; j < weights.size(); ++j) {
                const double norm = weights[j].norm();
                if (norm > 0.0 && norm >= config.analysis.min_norm) {
                    pr.neurons.push_back(j);
                    kept.push_back(weights[j]);
                }
            }
            pr.alignment = alignment(kept, pr.prediction);
            pr.median_alignment = pr.alignment.empty() ? 0.0 : median(pr.alignment);

            const std::string k = std::to_string(layer);
            std::string table = "neuron,norm,max_abs_D\n";
            for (std::size_t i = 0; i < pr.neurons.size(); ++i) {
                table += std::to_string(pr.neurons[i]) + ',' + format_double(kept[i].norm()) + ',' +
                         format_double(pr.alignment[i]) + '\n';
            }
            write_text_file(l.dir / ("alignment_layer" + k + ".csv"), table);

            ordered_json j = ordered_json::parse(prediction_json(pr.prediction));
            j["layer"] = layer;
            ordered_json stats;
            stats["neurons"] = pr.neurons.size();
            if (pr.alignment.empty()) {
                stats["median"] = nullptr;
                stats["min"] = nullptr;
            } else {
                stats["median"] = pr.median_alignment;
                stats["min"] = *std::min_element(pr.alignment.begin(), pr.alignment.end());
            }
            j["alignment"] = stats;
            write_text_file(l.dir / ("prediction_layer" + k + ".json"), j.dump(2) + "\n");

            out << config.name << " seed " << seed << " layer " << layer << ": " << to_string(method)
                << " predicts " << pr.prediction.n_lines() << " line(s), median alignment "
                << short_number(pr.median_alignment) << " over " << pr.neurons.size() << " neurons\n";
            results.push_back(std::move(pr));
        }
    }
    return results;
}

}  // namespace condense
