#pragma once

#include "condense/network.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace condense {

inline constexpr double kDefaultCosThreshold = 0.95;

/// A partition of 0..n-1; clusters are ordered by their smallest member and
/// members are sorted ascending.
using Partition = std::vector<std::vector<std::size_t>>;

/// M_ij = (w_i / |w_i|) . (w_j / |w_j|). Throws PreconditionError naming the
/// first zero-norm vector.
Eigen::MatrixXd similarity_matrix(const std::vector<Eigen::VectorXd>& weights);

struct NormFilter {
    std::vector<std::size_t> kept;
    std::size_t discarded = 0;
};

/// Keeps the indices with |w| >= min_norm, in order.
NormFilter norm_filter(const std::vector<Eigen::VectorXd>& weights, double min_norm);

/// Groups rows of a similarity matrix by union-find over thresholded cosines.
///
/// Line mode (sign_sensitive = false) joins i and j when |M_ij| >= threshold.
/// Direction mode splits each line cluster in two by the sign parity of the
/// spanning-forest path: i and j share a direction iff they share a line and
/// the product of sign(M) along the edges joining them is +1. Edges are
/// visited in (i, j) lexicographic order, so the result is deterministic.
Partition cluster_orientations(const Eigen::MatrixXd& matrix, double cos_threshold,
                               bool sign_sensitive);

struct SimilarityReport {
    std::size_t layer_index = 0;
    std::vector<std::size_t> kept_indices;
    std::size_t discarded_count = 0;
    Eigen::MatrixXd matrix;
    Partition clusters_directions;  // entries are neuron indices
    Partition clusters_lines;
    std::size_t n_directions = 0;
    std::size_t n_lines = 0;
    double cos_threshold = kDefaultCosThreshold;
};

/// norm_filter -> similarity_matrix -> both clusterings for hidden layer k.
/// If every neuron is filtered out the report is empty with zero counts.
SimilarityReport condensation_report(const NetworkParams& params, std::size_t layer,
                                     double min_norm, double cos_threshold);

/// Same pipeline on an explicit set of weight vectors.
SimilarityReport condensation_report(const std::vector<Eigen::VectorXd>& weights,
                                     std::size_t layer, double min_norm, double cos_threshold);

}  // namespace condense
