#pragma once

#include "condense/network.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>

namespace condense {

enum class TargetKind { sine_sum, custom_1d };

/// How 1-d inputs are placed on the domain.
enum class Sampling { grid, random };

struct SyntheticSpec {
    std::size_t dim = 1;
    std::size_t n = 1;
    double amplitude = 1.0;
    double frequency = 1.0;
    double phase = 1.0;
    double lo = -1.0;
    double hi = 1.0;
    std::uint64_t seed = 0;
    TargetKind target_kind = TargetKind::sine_sum;
    Sampling sampling = Sampling::grid;  // custom_1d only

    void validate() const;
};

/// Inputs i.i.d. uniform on [lo, hi)^dim; y_i = sum_k A sin(nu x_ik + phase).
Batch sample_sine_sum(const SyntheticSpec& spec);

/// sin(3x) + sin(6x) / 2.
double custom_1d_target(double x);

/// n points of custom_1d_target on [lo, hi]. The grid includes both endpoints.
Batch sample_custom_1d(std::size_t n, double lo, double hi, std::uint64_t seed,
                       Sampling sampling = Sampling::grid);

/// Dispatches on spec.target_kind.
Batch generate(const SyntheticSpec& spec);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::uint64_t bits) noexcept;

/// MNIST-style IDX pair: images (magic 0x00000803, n x rows x cols bytes)
/// and labels (magic 0x00000801, n bytes). Pixels are scaled to [0, 1] and
/// labels one-hot encoded over 10 classes. Throws ParseError with the byte
/// offset on bad magic, truncation, label > 9 or a count mismatch.
Batch load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Shortest-safe decimal form: 17 significant digits, '.' separator,
/// trailing zeros dropped ("1", "0", "0.10000000000000001").
std::string format_double(double v);

/// Whole-file helpers; failures raise IoError naming the path.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Row-major CSV without header.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Header x0..x{d-1},y0..y{k-1}, then one row per sample.
void write_dataset_csv(const Batch& batch, const std::filesystem::path& path);
/// Reads a dataset written by write_dataset_csv; the header decides the split.
Batch read_dataset_csv(const std::filesystem::path& path);

}  // namespace condense
