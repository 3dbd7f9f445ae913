#include "condense/serialize.hpp"

#include "condense/data_io.hpp"
#include "condense/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <map>

namespace condense {

namespace {

using nlohmann::ordered_json;

void append_row(std::string& out, const std::string& label, Eigen::Index row,
                const Eigen::MatrixXd& m) {
    out += label;
    out += ',';
    out += std::to_string(row);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        out += ',';
        out += format_double(m(row, c));
    }
    out += '\n';
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json vector_json(const Eigen::VectorXd& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

ordered_json partition_json(const Partition& p) {
    ordered_json arr = ordered_json::array();
    for (const auto& cluster : p) arr.push_back(cluster);
    return arr;
}

}  // namespace

std::string params_to_csv(const NetworkParams& params) {
    std::string out;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const std::string label = "W" + std::to_string(l + 1);
        for (Eigen::Index r = 0; r < params.layers[l].rows(); ++r) {
            append_row(out, label, r, params.layers[l]);
        }
    }
    for (Eigen::Index r = 0; r < params.output.rows(); ++r) append_row(out, "a", r, params.output);
    return out;
}

void write_params_csv(const NetworkParams& params, const std::filesystem::path& path) {
    write_text_file(path, params_to_csv(params));
}

std::string params_json(const NetworkParams& params) {
    auto rows = [](const Eigen::MatrixXd& m) {
        ordered_json out = ordered_json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
        return out;
    };
    ordered_json j;
    j["layers"] = ordered_json::array();
    for (const auto& w : params.layers) j["layers"].push_back(rows(w));
    j["output"] = rows(params.output);
    return dump(j);
}

NetworkParams read_params_csv(const std::filesystem::path& path, const NetworkConfig& config) {
    config.validate();
    NetworkParams params = zero_params(config);
    const std::string text = read_text_file(path);
    std::map<std::pair<std::string, long>, bool> seen;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::size_t offset = pos;
        pos = eol + 1;
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        auto fail = [&](const std::string& why) {
            return ParseError(offset, "'" + path.string() + "': " + why + " at byte " +
                                          std::to_string(offset));
        };
        if (fields.size() < 3) throw fail("too few fields");

        const std::string label(fields[0]);
        Eigen::MatrixXd* block = nullptr;
        if (label == "a") {
            block = &params.output;
        } else if (label.size() > 1 && label[0] == 'W') {
            std::size_t layer = 0;
            const auto [p, ec] = std::from_chars(label.data() + 1, label.data() + label.size(), layer);
            if (ec != std::errc() || p != label.data() + label.size()) throw fail("bad block label");
            if (layer < 1 || layer > params.layers.size()) {
                throw ConfigError("'" + path.string() + "': layer " + label +
                                  " does not exist in the configured network");
            }
            block = &params.layers[layer - 1];
        } else {
            throw fail("unknown block label '" + label + "'");
        }

        long row = -1;
        const auto [rp, rec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), row);
        if (rec != std::errc() || rp != fields[1].data() + fields[1].size()) throw fail("bad row index");
        if (row < 0 || row >= block->rows()) {
            throw ConfigError("'" + path.string() + "': row " + std::to_string(row) + " of " + label +
                              " is outside the configured shape");
        }
        if (static_cast<Eigen::Index>(fields.size() - 2) != block->cols()) {
            throw ConfigError("'" + path.string() + "': " + label + " row " + std::to_string(row) +
                              " has " + std::to_string(fields.size() - 2) + " entries, expected " +
                              std::to_string(block->cols()));
        }
        if (seen[{label, row}]) throw fail("duplicate row " + label + "," + std::to_string(row));
        seen[{label, row}] = true;
        for (std::size_t c = 2; c < fields.size(); ++c) {
            double v = 0.0;
            const auto [vp, vec] = std::from_chars(fields[c].data(), fields[c].data() + fields[c].size(), v);
            if (vec != std::errc() || vp != fields[c].data() + fields[c].size()) {
                throw fail("cannot parse number '" + std::string(fields[c]) + "'");
            }
            (*block)(row, static_cast<Eigen::Index>(c - 2)) = v;
        }
    }
    std::size_t expected = params.output.rows();
    for (const auto& w : params.layers) expected += static_cast<std::size_t>(w.rows());
    if (seen.size() != expected) {
        throw ConfigError("'" + path.string() + "' holds " + std::to_string(seen.size()) +
                          " parameter rows, the configured network has " + std::to_string(expected));
    }
    return params;
}

void write_train_log_csv(const TrainLog& log, const std::filesystem::path& path) {
    std::string out = "epoch,loss\n";
    for (std::size_t e = 0; e < log.loss_history.size(); ++e) {
        out += std::to_string(e);
        out += ',';
        out += format_double(log.loss_history[e]);
        out += '\n';
    }
    write_text_file(path, out);
}

void write_train_log_json(const TrainLog& log, const std::filesystem::path& path) {
    ordered_json j;
    j["epochs_run"] = log.epochs_run();
    j["stop_reason"] = to_string(log.stop_reason);
    j["analysis_epoch"] = analysis_epoch(log);
    j["initial_stage_end"] =
        log.initial_stage_end ? ordered_json(*log.initial_stage_end) : ordered_json(nullptr);
    j["initial_loss"] = log.loss_history.empty() ? ordered_json(nullptr) : ordered_json(log.loss_history.front());
    j["final_loss"] = log.loss_history.empty() ? ordered_json(nullptr) : ordered_json(log.loss_history.back());
    ordered_json snaps = ordered_json::array();
    for (const auto& s : log.snapshots) snaps.push_back(s.epoch);
    j["snapshot_epochs"] = snaps;
    write_text_file(path, dump(j));
}

void write_similarity_csv(const SimilarityReport& report, const std::filesystem::path& path) {
    std::string out;
    for (std::size_t i = 0; i < report.kept_indices.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(report.kept_indices[i]);
    }
    out += '\n';
    for (Eigen::Index r = 0; r < report.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < report.matrix.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_double(report.matrix(r, c));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

std::string report_json(const SimilarityReport& report) {
    ordered_json j;
    j["layer"] = report.layer_index;
    j["kept"] = report.kept_indices;
    j["discarded"] = report.discarded_count;
    j["n_directions"] = report.n_directions;
    j["n_lines"] = report.n_lines;
    j["threshold"] = report.cos_threshold;
    j["clusters_directions"] = partition_json(report.clusters_directions);
    j["clusters_lines"] = partition_json(report.clusters_lines);
    return dump(j);
}

void write_report_json(const SimilarityReport& report, const std::filesystem::path& path) {
    write_text_file(path, report_json(report));
}

void write_field_csv(const FieldGrid& grid, const std::filesystem::path& path) {
    std::string out = "w,b,dw,db\n";
    for (const auto& p : grid.points) {
        out += format_double(p.w) + ',' + format_double(p.b) + ',' + format_double(p.dw) + ',' +
               format_double(p.db) + '\n';
    }
    write_text_file(path, out);
}

std::string prediction_json(const DirectionPrediction& prediction) {
    ordered_json j;
    j["method"] = to_string(prediction.method);
    j["p"] = prediction.p_used ? ordered_json(*prediction.p_used) : ordered_json(nullptr);
    j["degenerate"] = prediction.degenerate;
    ordered_json dirs = ordered_json::array();
    for (const auto& u : prediction.unit_directions) {
        ordered_json d;
        d["angle_radians"] =
            u.size() == 2 ? ordered_json(line_angle(Eigen::Vector2d(u[0], u[1]))) : ordered_json(nullptr);
        d["vector"] = vector_json(u);
        dirs.push_back(d);
    }
    j["directions"] = dirs;
    if (prediction.method == PredictionMethod::angular_sweep) {
        ordered_json orient = ordered_json::array();
        for (const auto& o : prediction.orientations) {
            ordered_json d;
            d["angle_radians"] = o.angle;
            d["attracting_sign"] = o.attracting_sign;
            orient.push_back(d);
        }
        j["orientations"] = orient;
    }
    return dump(j);
}

void write_prediction_json(const DirectionPrediction& prediction, const std::filesystem::path& path) {
    write_text_file(path, prediction_json(prediction));
}

}  // namespace condense
