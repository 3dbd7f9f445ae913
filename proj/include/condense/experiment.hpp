#pragma once

#include "condense/condensation.hpp"
#include "condense/config.hpp"
#include "condense/theory.hpp"
#include "condense/training.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

namespace condense {

struct CommandOptions {
    std::filesystem::path out_dir;         // empty: use the config's out_dir
    std::optional<std::uint64_t> seed;     // overrides experiment.seed
    std::size_t replicates = 1;            // seeds seed, seed+1, ...
    std::size_t jobs = 1;                  // replicates trained concurrently
    std::filesystem::path params;          // empty: <out>/params_analysis.csv
    std::optional<PredictMethod> method;   // overrides analysis.method
};

/// Output directory of one replicate: the base directory for a single run,
/// <base>/seed_<s> when several replicates are requested.
std::filesystem::path replicate_dir(const ExperimentConfig& config, const CommandOptions& options,
                                    std::uint64_t seed);

struct TrainSummary {
    std::uint64_t seed = 0;
    std::filesystem::path dir;
    std::size_t epochs_run = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::optional<std::size_t> initial_stage_end;
    StopReason stop_reason = StopReason::max_epochs;
    std::size_t analysis_epoch = 0;
};

/// Trains every replicate and writes dataset.csv, params_init.csv,
/// params_final.csv and .json, params_epoch_<e>.csv per snapshot, params_analysis.csv,
/// train_log.csv and train_log.json into its directory. Prints one line per
/// replicate. Rethrows the first DivergenceError.
std::vector<TrainSummary> cmd_train(const ExperimentConfig& config, const CommandOptions& options,
                                    std::ostream& out);

/// Analysis commands run once per replicate directory and read
/// params_analysis.csv there unless `options.params` names a file. The
/// dataset is regenerated from the replicate seed.

/// similarity_layer<k>.csv and report_layer<k>.json for each analysis layer.
std::vector<SimilarityReport> cmd_analyze(const ExperimentConfig& config,
                                          const CommandOptions& options, std::ostream& out);

struct FieldResult {
    std::uint64_t seed = 0;
    FieldGrid grid;
    DirectionPrediction sweep;
};

/// field_layer<k>.csv plus field_layer<k>.json with the grid metadata and the
/// stable lines found by an angular sweep. Zero residuals give a degenerate
/// sweep and an all-zero grid.
std::vector<FieldResult> cmd_field(const ExperimentConfig& config, const CommandOptions& options,
                                   std::ostream& out);

struct PredictResult {
    std::uint64_t seed = 0;
    std::size_t layer = 1;
    DirectionPrediction prediction;
    std::vector<std::size_t> neurons;
    std::vector<double> alignment;  // per neuron in `neurons`
    double median_alignment = 0.0;
};

/// prediction_layer<k>.json and alignment_layer<k>.csv for each analysis layer.
/// case1 needs a multiplicity-one activation; case2 and sweep need a 2-d
/// augmented layer input.
std::vector<PredictResult> cmd_predict(const ExperimentConfig& config,
                                       const CommandOptions& options, std::ostream& out);

/// Median of a non-empty sample (mean of the two middle values for even sizes).
double median(std::vector<double> values);

}  // namespace condense
