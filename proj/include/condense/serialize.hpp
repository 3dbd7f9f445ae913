#pragma once

#include "condense/condensation.hpp"
#include "condense/network.hpp"
#include "condense/theory.hpp"
#include "condense/training.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace condense {

/// Parameter CSV: one line per matrix row, hidden layers first.
///
///   W<l>,<row>,<c_0>,...,<c_m>   row of W^[l], bias last (l is 1-based)
///   a,<row>,<c_0>,...,<c_m>      row of the output block, bias last
std::string params_to_csv(const NetworkParams& params);
void write_params_csv(const NetworkParams& params, const std::filesystem::path& path);

/// {"layers": [W1 rows, ...], "output": a rows}; same values as the CSV.
std::string params_json(const NetworkParams& params);
/// Parses a parameter CSV and checks it against `config`; shape problems
/// raise ConfigError, malformed text raises ParseError.
NetworkParams read_params_csv(const std::filesystem::path& path, const NetworkConfig& config);

/// epoch,loss with one line per entry of loss_history.
void write_train_log_csv(const TrainLog& log, const std::filesystem::path& path);
void write_train_log_json(const TrainLog& log, const std::filesystem::path& path);

/// Similarity matrix with a header row of kept neuron indices.
void write_similarity_csv(const SimilarityReport& report, const std::filesystem::path& path);
std::string report_json(const SimilarityReport& report);
void write_report_json(const SimilarityReport& report, const std::filesystem::path& path);

/// w,b,dw,db for every lattice point, w outer.
void write_field_csv(const FieldGrid& grid, const std::filesystem::path& path);

std::string prediction_json(const DirectionPrediction& prediction);
void write_prediction_json(const DirectionPrediction& prediction, const std::filesystem::path& path);

}  // namespace condense
