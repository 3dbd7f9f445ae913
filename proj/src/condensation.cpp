#include "condense/condensation.hpp"

#include "condense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace condense {

namespace {

// Union-find that also tracks the sign parity of each node relative to its root.
class SignedUnionFind {
public:
    explicit SignedUnionFind(std::size_t n) : parent_(n), parity_(n, 0), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t i) {
        if (parent_[i] == i) return i;
        const std::size_t root = find(parent_[i]);
        parity_[i] ^= parity_[parent_[i]];
        parent_[i] = root;
        return root;
    }

    /// parity of i relative to its root; valid after find(i).
    int parity(std::size_t i) {
        find(i);
        return parity_[i];
    }

    /// Joins i and j; `opposite` states that they point in opposite directions.
    /// A join inside an existing set is ignored (first path wins).
    void unite(std::size_t i, std::size_t j, bool opposite) {
        const std::size_t ri = find(i);
        const std::size_t rj = find(j);
        if (ri == rj) return;
        const int rel = parity_[i] ^ parity_[j] ^ (opposite ? 1 : 0);
        if (rank_[ri] < rank_[rj]) {
            parent_[ri] = rj;
            parity_[ri] = rel;
        } else {
            parent_[rj] = ri;
            parity_[rj] = rel;
            if (rank_[ri] == rank_[rj]) ++rank_[ri];
        }
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> parity_;
    std::vector<std::size_t> rank_;
};

Partition group(std::size_t n, auto&& key_of) {
    std::map<std::pair<std::size_t, int>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[key_of(i)].push_back(i);
    Partition out;
    out.reserve(groups.size());
    for (auto& [key, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

Partition relabel(const Partition& p, const std::vector<std::size_t>& labels) {
    Partition out;
    out.reserve(p.size());
    for (const auto& cluster : p) {
        std::vector<std::size_t> mapped;
        mapped.reserve(cluster.size());
        for (std::size_t i : cluster) mapped.push_back(labels[i]);
        out.push_back(std::move(mapped));
    }
    return out;
}

}  // namespace

Eigen::MatrixXd similarity_matrix(const std::vector<Eigen::VectorXd>& weights) {
    const auto n = static_cast<Eigen::Index>(weights.size());
    if (n == 0) return Eigen::MatrixXd(0, 0);
    const auto dim = weights.front().size();
    Eigen::MatrixXd units(dim, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& w = weights[static_cast<std::size_t>(i)];
        if (w.size() != dim) throw PreconditionError("weight vectors differ in length");
        const double norm = w.norm();
        if (!(norm > 0.0)) {
            throw PreconditionError("weight vector " + std::to_string(i) +
                                    " has zero norm; filter it first");
        }
        units.col(i) = w / norm;
    }
    Eigen::MatrixXd m = units.transpose() * units;
    // Exact symmetry and unit diagonal regardless of rounding in the product.
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) m(j, i) = m(i, j);
    }
    return m;
}

NormFilter norm_filter(const std::vector<Eigen::VectorXd>& weights, double min_norm) {
    if (!(min_norm >= 0.0)) throw PreconditionError("min_norm must be non-negative");
    NormFilter out;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].norm() >= min_norm) {
            out.kept.push_back(i);
        } else {
            ++out.discarded;
        }
    }
    return out;
}

Partition cluster_orientations(const Eigen::MatrixXd& matrix, double cos_threshold,
                               bool sign_sensitive) {
    if (!(cos_threshold > 0.0 && cos_threshold < 1.0)) {
        throw PreconditionError("cos_threshold must lie in (0, 1)");
    }
    if (matrix.rows() != matrix.cols()) throw PreconditionError("similarity matrix must be square");
    const auto n = static_cast<std::size_t>(matrix.rows());
    SignedUnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (std::abs(c) >= cos_threshold) uf.unite(i, j, c < 0.0);
        }
    }
    return group(n, [&](std::size_t i) {
        const std::size_t root = uf.find(i);
        return std::pair<std::size_t, int>{root, sign_sensitive ? uf.parity(i) : 0};
    });
}

SimilarityReport condensation_report(const std::vector<Eigen::VectorXd>& weights,
                                     std::size_t layer, double min_norm, double cos_threshold) {
    SimilarityReport r;
    r.layer_index = layer;
    r.cos_threshold = cos_threshold;
    // min_norm = 0 keeps zero vectors too, which have no direction.
    NormFilter filter = norm_filter(weights, min_norm);
    std::vector<Eigen::VectorXd> kept;
    for (std::size_t i : filter.kept) {
        if (weights[i].norm() > 0.0) {
            r.kept_indices.push_back(i);
            kept.push_back(weights[i]);
        } else {
            ++filter.discarded;
        }
    }
    r.discarded_count = filter.discarded;
    if (!(cos_threshold > 0.0 && cos_threshold < 1.0)) {
        throw PreconditionError("cos_threshold must lie in (0, 1)");
    }
    if (kept.empty()) {
        r.matrix = Eigen::MatrixXd(0, 0);
        return r;
    }
    r.matrix = similarity_matrix(kept);
    r.clusters_directions = relabel(cluster_orientations(r.matrix, cos_threshold, true),
                                    r.kept_indices);
    r.clusters_lines = relabel(cluster_orientations(r.matrix, cos_threshold, false),
                               r.kept_indices);
    r.n_directions = r.clusters_directions.size();
    r.n_lines = r.clusters_lines.size();
    return r;
}

SimilarityReport condensation_report(const NetworkParams& params, std::size_t layer,
                                     double min_norm, double cos_threshold) {
    return condensation_report(layer_weights(params, layer), layer, min_norm, cos_threshold);
}

}  // namespace condense
