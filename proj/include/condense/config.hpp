#pragma once

#include "condense/activations.hpp"
#include "condense/condensation.hpp"
#include "condense/data_io.hpp"
#include "condense/network.hpp"
#include "condense/training.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace condense {

enum class DataSource { synthetic, mnist, csv };

struct DataSection {
    DataSource source = DataSource::synthetic;
    SyntheticSpec synthetic;  // seed is filled from the experiment seed
    std::filesystem::path images;
    std::filesystem::path labels;
    std::filesystem::path csv;
};

struct NetworkSection {
    std::vector<std::size_t> hidden{50};
    std::vector<ActivationSpec> activations{ActivationSpec::tanh()};
    bool residual = false;
    double alpha = 1.0;
    double init_std = 0.005;
};

enum class PredictMethod { case1, case2, sweep };

struct AnalysisSection {
    std::vector<std::size_t> layers{1};
    double min_norm = 0.0;
    double cos_threshold = kDefaultCosThreshold;
    PredictMethod method = PredictMethod::case1;
    std::size_t sweep_angles = 3600;
    double sweep_radius = 1e-4;
};

struct FieldSection {
    std::size_t layer = 1;
    double lo = -1.0;
    double hi = 1.0;
    std::size_t resolution = 21;
};

/// A parsed experiment file. See README.md for the grammar and every key.
struct ExperimentConfig {
    std::string name = "experiment";
    std::string figure;
    std::string caption;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "out";
    DataSection data;
    NetworkSection network;
    OptimizerSpec optimizer;
    StopRule run;
    AnalysisSection analysis;
    FieldSection field;
};

/// Parses the sectioned key = value format. Relative data paths are resolved
/// against `base_dir`. Unknown sections or keys, duplicates and malformed
/// values raise ConfigError naming the line.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Independent data and initialization seeds derived from one experiment seed.
struct SeedStreams {
    std::uint64_t data = 0;
    std::uint64_t init = 0;
};
SeedStreams split_seed(std::uint64_t seed) noexcept;

/// Generates or reads the dataset named by the data section.
Batch load_data(const ExperimentConfig& config);

/// Network topology for the configured sections and a loaded batch.
NetworkConfig network_config(const ExperimentConfig& config, const Batch& batch);

std::string to_string(PredictMethod method);

}  // namespace condense
