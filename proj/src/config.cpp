#include "condense/config.hpp"

#include "condense/errors.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <set>

namespace condense {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_real(std::string_view v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw ConfigError("'" + std::string(v) + "' is not a number");
    }
    return out;
}

std::uint64_t parse_uint(std::string_view v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw ConfigError("'" + std::string(v) + "' is not a non-negative integer");
    }
    return out;
}

std::size_t parse_size(std::string_view v) { return static_cast<std::size_t>(parse_uint(v)); }

bool parse_bool(std::string_view v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("'" + std::string(v) + "' is not a boolean");
}

std::vector<std::size_t> parse_sizes(std::string_view v) {
    std::vector<std::size_t> out;
    if (trim(v).empty()) return out;
    for (auto item : split_list(v)) out.push_back(parse_size(item));
    return out;
}

template <typename Enum>
Enum parse_choice(std::string_view v, std::initializer_list<std::pair<std::string_view, Enum>> choices) {
    std::string allowed;
    for (const auto& [name, value] : choices) {
        if (v == name) return value;
        allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    }
    throw ConfigError("'" + std::string(v) + "' is not one of " + allowed);
}

using Handler = std::function<void(std::string_view)>;
using SectionTable = std::map<std::string, Handler, std::less<>>;

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view v) {
    std::filesystem::path p{std::string(v)};
    if (p.is_relative() && !base.empty()) p = base / p;
    return p;
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    ExperimentConfig c;

    std::map<std::string, SectionTable, std::less<>> tables;
    tables["experiment"] = {
        {"name", [&](auto v) { c.name = std::string(v); }},
        {"figure", [&](auto v) { c.figure = std::string(v); }},
        {"caption", [&](auto v) { c.caption = std::string(v); }},
        {"seed", [&](auto v) { c.seed = parse_uint(v); }},
        {"out_dir", [&](auto v) { c.out_dir = std::string(v); }},
    };
    auto& syn = c.data.synthetic;
    tables["data"] = {
        {"source", [&](auto v) {
             c.data.source = parse_choice<DataSource>(
                 v, {{"synthetic", DataSource::synthetic}, {"mnist", DataSource::mnist}, {"csv", DataSource::csv}});
         }},
        {"target", [&](auto v) {
             syn.target_kind = parse_choice<TargetKind>(
                 v, {{"sine_sum", TargetKind::sine_sum}, {"custom_1d", TargetKind::custom_1d}});
         }},
        {"dim", [&](auto v) { syn.dim = parse_size(v); }},
        {"n", [&](auto v) { syn.n = parse_size(v); }},
        {"amplitude", [&](auto v) { syn.amplitude = parse_real(v); }},
        {"frequency", [&](auto v) { syn.frequency = parse_real(v); }},
        {"phase", [&](auto v) { syn.phase = parse_real(v); }},
        {"lo", [&](auto v) { syn.lo = parse_real(v); }},
        {"hi", [&](auto v) { syn.hi = parse_real(v); }},
        {"sampling", [&](auto v) {
             syn.sampling = parse_choice<Sampling>(v, {{"grid", Sampling::grid}, {"random", Sampling::random}});
         }},
        {"images", [&](auto v) { c.data.images = resolve(base_dir, v); }},
        {"labels", [&](auto v) { c.data.labels = resolve(base_dir, v); }},
        {"csv", [&](auto v) { c.data.csv = resolve(base_dir, v); }},
    };
    tables["network"] = {
        {"hidden", [&](auto v) { c.network.hidden = parse_sizes(v); }},
        {"activations", [&](auto v) {
             c.network.activations.clear();
             for (auto name : split_list(v)) c.network.activations.push_back(ActivationSpec::parse(name));
         }},
        {"residual", [&](auto v) { c.network.residual = parse_bool(v); }},
        {"alpha", [&](auto v) { c.network.alpha = parse_real(v); }},
        {"init_std", [&](auto v) { c.network.init_std = parse_real(v); }},
    };
    tables["optimizer"] = {
        {"kind", [&](auto v) {
             c.optimizer.kind = parse_choice<OptimizerKind>(v, {{"gd", OptimizerKind::gd}, {"adam", OptimizerKind::adam}});
         }},
        {"lr", [&](auto v) { c.optimizer.lr = parse_real(v); }},
        {"beta1", [&](auto v) { c.optimizer.adam_beta1 = parse_real(v); }},
        {"beta2", [&](auto v) { c.optimizer.adam_beta2 = parse_real(v); }},
        {"eps", [&](auto v) { c.optimizer.adam_eps = parse_real(v); }},
    };
    tables["run"] = {
        {"max_epochs", [&](auto v) { c.run.max_epochs = parse_size(v); }},
        {"initial_stage", [&](auto v) { c.run.initial_stage = parse_bool(v); }},
        {"snapshot_epochs", [&](auto v) { c.run.snapshot_epochs = parse_sizes(v); }},
    };
    tables["analysis"] = {
        {"layers", [&](auto v) { c.analysis.layers = parse_sizes(v); }},
        {"min_norm", [&](auto v) { c.analysis.min_norm = parse_real(v); }},
        {"cos_threshold", [&](auto v) { c.analysis.cos_threshold = parse_real(v); }},
        {"method", [&](auto v) {
             c.analysis.method = parse_choice<PredictMethod>(
                 v, {{"case1", PredictMethod::case1}, {"case2", PredictMethod::case2}, {"sweep", PredictMethod::sweep}});
         }},
        {"sweep_angles", [&](auto v) { c.analysis.sweep_angles = parse_size(v); }},
        {"sweep_radius", [&](auto v) { c.analysis.sweep_radius = parse_real(v); }},
    };
    tables["field"] = {
        {"layer", [&](auto v) { c.field.layer = parse_size(v); }},
        {"lo", [&](auto v) { c.field.lo = parse_real(v); }},
        {"hi", [&](auto v) { c.field.hi = parse_real(v); }},
        {"resolution", [&](auto v) { c.field.resolution = parse_size(v); }},
    };

    std::string section;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        auto where = [&] { return "line " + std::to_string(line_no) + ": "; };

        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!tables.count(section)) throw ConfigError(where() + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where() + "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(where() + "key '" + key + "' outside any section");
        auto& table = tables[section];
        auto it = table.find(key);
        if (it == table.end()) {
            throw ConfigError(where() + "unknown key '" + key + "' in [" + section + "]");
        }
        if (!seen.insert(section + "." + key).second) {
            throw ConfigError(where() + "duplicate key '" + key + "' in [" + section + "]");
        }
        try {
            it->second(value);
        } catch (const ConfigError& e) {
            throw ConfigError(where() + section + "." + key + ": " + e.what());
        }
    }

    // A single activation name applies to every hidden layer.
    if (c.network.activations.size() == 1 && c.network.hidden.size() > 1) {
        c.network.activations.assign(c.network.hidden.size(), c.network.activations.front());
    }

    if (c.network.hidden.empty()) throw ConfigError("network.hidden must list at least one width");
    if (c.network.activations.size() != c.network.hidden.size()) {
        throw ConfigError("network.activations must name one activation or one per hidden layer");
    }
    if (!(c.network.init_std >= 0.0)) throw ConfigError("network.init_std must be non-negative");
    c.optimizer.validate();
    if (c.run.max_epochs < 1) throw ConfigError("run.max_epochs must be at least 1");
    if (!(c.analysis.cos_threshold > 0.0 && c.analysis.cos_threshold < 1.0)) {
        throw ConfigError("analysis.cos_threshold must lie in (0, 1)");
    }
    if (!(c.analysis.min_norm >= 0.0)) throw ConfigError("analysis.min_norm must be non-negative");
    for (std::size_t l : c.analysis.layers) {
        if (l < 1 || l > c.network.hidden.size()) {
            throw ConfigError("analysis.layers: layer " + std::to_string(l) + " does not exist");
        }
    }
    if (c.field.layer < 1 || c.field.layer > c.network.hidden.size()) {
        throw ConfigError("field.layer: layer " + std::to_string(c.field.layer) + " does not exist");
    }
    if (c.field.resolution < 2) throw ConfigError("field.resolution must be at least 2");
    if (!(c.field.lo < c.field.hi)) throw ConfigError("field range needs lo < hi");
    if (c.analysis.sweep_angles < 360) throw ConfigError("analysis.sweep_angles must be at least 360");
    if (!(c.analysis.sweep_radius > 0.0)) throw ConfigError("analysis.sweep_radius must be positive");
    switch (c.data.source) {
        case DataSource::synthetic:
            c.data.synthetic.validate();
            break;
        case DataSource::mnist:
            if (c.data.images.empty() || c.data.labels.empty()) {
                throw ConfigError("mnist data needs data.images and data.labels");
            }
            break;
        case DataSource::csv:
            if (c.data.csv.empty()) throw ConfigError("csv data needs data.csv");
            break;
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    try {
        return parse_config(text, path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

SeedStreams split_seed(std::uint64_t seed) noexcept {
    std::uint64_t state = seed;
    SeedStreams s;
    s.data = splitmix64(state);
    s.init = splitmix64(state);
    return s;
}

Batch load_data(const ExperimentConfig& config) {
    switch (config.data.source) {
        case DataSource::synthetic: {
            SyntheticSpec spec = config.data.synthetic;
            spec.seed = split_seed(config.seed).data;
            return generate(spec);
        }
        case DataSource::mnist:
            for (const auto& p : {config.data.images, config.data.labels}) {
                if (!std::filesystem::exists(p)) throw ConfigError("data file '" + p.string() + "' not found");
            }
            return load_mnist_idx(config.data.images, config.data.labels);
        case DataSource::csv:
            if (!std::filesystem::exists(config.data.csv)) {
                throw ConfigError("data file '" + config.data.csv.string() + "' not found");
            }
            return read_dataset_csv(config.data.csv);
    }
    throw ConfigError("unknown data source");
}

NetworkConfig network_config(const ExperimentConfig& config, const Batch& batch) {
    NetworkConfig net;
    net.input_dim = static_cast<std::size_t>(batch.inputs.cols());
    net.output_dim = static_cast<std::size_t>(batch.targets.cols());
    net.hidden_widths = config.network.hidden;
    net.activations = config.network.activations;
    net.residual = config.network.residual;
    net.alpha = config.network.alpha;
    net.validate();
    return net;
}

std::string to_string(PredictMethod method) {
    switch (method) {
        case PredictMethod::case1:
            return "case1";
        case PredictMethod::case2:
            return "case2";
        case PredictMethod::sweep:
            return "sweep";
    }
    return "unknown";
}

}  // namespace condense
