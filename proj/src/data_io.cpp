#include "condense/data_io.hpp"

#include "condense/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <vector>

namespace condense {

namespace {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
    if (offset + 4 > bytes.size()) {
        throw ParseError(bytes.size(), "'" + path.string() + "' is truncated at byte " +
                                           std::to_string(bytes.size()) + " (header)");
    }
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string hex32(std::uint32_t v) {
    char buf[16];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, 16);
    return "0x" + std::string(8 - static_cast<std::size_t>(end - buf), '0') + std::string(buf, end);
}

void check_magic(const std::vector<unsigned char>& bytes, std::uint32_t expected,
                 const std::filesystem::path& path) {
    const std::uint32_t magic = read_be32(bytes, 0, path);
    if (magic != expected) {
        throw ParseError(0, "'" + path.string() + "': bad magic " + hex32(magic) + " at offset 0, expected " +
                                hex32(expected));
    }
}

// Splits CSV text into rows of fields; tracks the byte offset of each row.
struct CsvRow {
    std::size_t offset = 0;
    std::vector<std::string_view> fields;
};

std::vector<CsvRow> split_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) {
            CsvRow row;
            row.offset = pos;
            std::size_t start = 0;
            while (true) {
                const std::size_t comma = line.find(',', start);
                row.fields.push_back(line.substr(start, comma - start));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
            rows.push_back(std::move(row));
        }
        pos = eol + 1;
    }
    return rows;
}

double parse_field(std::string_view field, std::size_t offset, const std::filesystem::path& path) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(offset, "'" + path.string() + "': cannot parse number '" +
                                     std::string(field) + "' at byte " + std::to_string(offset));
    }
    return v;
}

Eigen::MatrixXd parse_matrix(const std::vector<CsvRow>& rows, std::size_t first_row,
                             const std::filesystem::path& path) {
    if (rows.size() <= first_row) return Eigen::MatrixXd(0, 0);
    const std::size_t cols = rows[first_row].fields.size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size() - first_row),
                      static_cast<Eigen::Index>(cols));
    for (std::size_t r = first_row; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        if (row.fields.size() != cols) {
            throw ParseError(row.offset, "'" + path.string() + "': row at byte " +
                                             std::to_string(row.offset) + " has " +
                                             std::to_string(row.fields.size()) + " fields, expected " +
                                             std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r - first_row), static_cast<Eigen::Index>(c)) =
                parse_field(row.fields[c], row.offset, path);
        }
    }
    return m;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (n < 1) throw ConfigError("synthetic data needs n >= 1");
    if (dim < 1) throw ConfigError("synthetic data needs dim >= 1");
    if (!(lo < hi)) throw ConfigError("synthetic domain needs lo < hi");
    if (!std::isfinite(amplitude) || !std::isfinite(frequency) || !std::isfinite(phase)) {
        throw ConfigError("synthetic target parameters must be finite");
    }
    if (target_kind == TargetKind::custom_1d && dim != 1) {
        throw ConfigError("custom_1d target is one-dimensional");
    }
}

double uniform01(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

Batch sample_sine_sum(const SyntheticSpec& spec) {
    spec.validate();
    if (spec.target_kind != TargetKind::sine_sum) {
        throw PreconditionError("sample_sine_sum needs target_kind = sine_sum");
    }
    std::mt19937_64 rng(spec.seed);
    const auto n = static_cast<Eigen::Index>(spec.n);
    const auto d = static_cast<Eigen::Index>(spec.dim);
    Batch b;
    b.inputs.resize(n, d);
    b.targets.resize(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        double y = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) {
            const double x = spec.lo + (spec.hi - spec.lo) * uniform01(rng());
            b.inputs(i, k) = x;
            y += spec.amplitude * std::sin(spec.frequency * x + spec.phase);
        }
        b.targets(i, 0) = y;
    }
    return b;
}

double custom_1d_target(double x) { return std::sin(3.0 * x) + std::sin(6.0 * x) / 2.0; }

Batch sample_custom_1d(std::size_t n, double lo, double hi, std::uint64_t seed, Sampling sampling) {
    if (n < 1) throw ConfigError("synthetic data needs n >= 1");
    if (!(lo < hi)) throw ConfigError("synthetic domain needs lo < hi");
    Batch b;
    b.inputs.resize(static_cast<Eigen::Index>(n), 1);
    b.targets.resize(static_cast<Eigen::Index>(n), 1);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        double x;
        if (sampling == Sampling::random) {
            x = lo + (hi - lo) * uniform01(rng());
        } else if (n == 1) {
            x = lo;
        } else if (i + 1 == n) {
            x = hi;
        } else {
            x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
        b.inputs(static_cast<Eigen::Index>(i), 0) = x;
        b.targets(static_cast<Eigen::Index>(i), 0) = custom_1d_target(x);
    }
    return b;
}

Batch generate(const SyntheticSpec& spec) {
    spec.validate();
    switch (spec.target_kind) {
        case TargetKind::sine_sum:
            return sample_sine_sum(spec);
        case TargetKind::custom_1d:
            return sample_custom_1d(spec.n, spec.lo, spec.hi, spec.seed, spec.sampling);
    }
    throw ConfigError("unknown target kind");
}

Batch load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
    const std::vector<unsigned char> img = read_bytes(images);
    const std::vector<unsigned char> lab = read_bytes(labels);
    check_magic(img, kIdxImagesMagic, images);
    check_magic(lab, kIdxLabelsMagic, labels);

    const std::uint32_t n_img = read_be32(img, 4, images);
    const std::uint32_t rows = read_be32(img, 8, images);
    const std::uint32_t cols = read_be32(img, 12, images);
    const std::uint32_t n_lab = read_be32(lab, 4, labels);
    if (n_img != n_lab) {
        throw ParseError(4, "'" + labels.string() + "': label count " + std::to_string(n_lab) +
                                " at offset 4 does not match image count " + std::to_string(n_img));
    }
    const std::size_t pixels = std::size_t{rows} * cols;
    const std::size_t img_end = 16 + std::size_t{n_img} * pixels;
    if (img.size() < img_end) {
        throw ParseError(img.size(), "'" + images.string() + "' is truncated at byte " +
                                         std::to_string(img.size()) + ", expected " +
                                         std::to_string(img_end));
    }
    if (lab.size() < 8 + std::size_t{n_lab}) {
        throw ParseError(lab.size(), "'" + labels.string() + "' is truncated at byte " +
                                         std::to_string(lab.size()) + ", expected " +
                                         std::to_string(8 + std::size_t{n_lab}));
    }

    Batch b;
    b.inputs.resize(n_img, static_cast<Eigen::Index>(pixels));
    b.targets = Eigen::MatrixXd::Zero(n_img, 10);
    for (std::size_t i = 0; i < n_img; ++i) {
        for (std::size_t p = 0; p < pixels; ++p) {
            b.inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) =
                static_cast<double>(img[16 + i * pixels + p]) / 255.0;
        }
        const unsigned label = lab[8 + i];
        if (label > 9) {
            throw ParseError(8 + i, "'" + labels.string() + "': label " + std::to_string(label) +
                                        " at offset " + std::to_string(8 + i) + " is not a digit");
        }
        b.targets(static_cast<Eigen::Index>(i), label) = 1.0;
    }
    return b;
}

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) throw DomainError("cannot format number");
    return std::string(buf, end);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    return parse_matrix(split_csv(text), 0, path);
}

void write_dataset_csv(const Batch& batch, const std::filesystem::path& path) {
    if (batch.inputs.rows() != batch.targets.rows()) {
        throw ConfigError("dataset inputs and targets differ in length");
    }
    std::string out;
    for (Eigen::Index k = 0; k < batch.inputs.cols(); ++k) {
        out += (k > 0 ? ",x" : "x") + std::to_string(k);
    }
    for (Eigen::Index k = 0; k < batch.targets.cols(); ++k) out += ",y" + std::to_string(k);
    out += '\n';
    for (Eigen::Index i = 0; i < batch.inputs.rows(); ++i) {
        for (Eigen::Index k = 0; k < batch.inputs.cols(); ++k) {
            if (k > 0) out += ',';
            out += format_double(batch.inputs(i, k));
        }
        for (Eigen::Index k = 0; k < batch.targets.cols(); ++k) {
            out += ',';
            out += format_double(batch.targets(i, k));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

Batch read_dataset_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const std::vector<CsvRow> rows = split_csv(text);
    if (rows.empty()) throw ParseError(0, "'" + path.string() + "' has no header row");
    std::size_t nx = 0;
    std::size_t ny = 0;
    for (std::string_view f : rows[0].fields) {
        if (!f.empty() && f[0] == 'x' && ny == 0) {
            ++nx;
        } else if (!f.empty() && f[0] == 'y') {
            ++ny;
        } else {
            throw ParseError(0, "'" + path.string() + "': header must be x columns then y columns");
        }
    }
    if (nx == 0 || ny == 0) {
        throw ParseError(0, "'" + path.string() + "': header needs at least one x and one y column");
    }
    const Eigen::MatrixXd m = parse_matrix(rows, 1, path);
    if (m.rows() == 0) throw ParseError(text.size(), "'" + path.string() + "' has no data rows");
    if (m.cols() != static_cast<Eigen::Index>(nx + ny)) {
        throw ParseError(rows[1].offset, "'" + path.string() + "': data rows do not match the header");
    }
    Batch b;
    b.inputs = m.leftCols(static_cast<Eigen::Index>(nx));
    b.targets = m.rightCols(static_cast<Eigen::Index>(ny));
    return b;
}

}  // namespace condense
