#include "condense/data_io.hpp"
#include "condense/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace condense;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "condense_data_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void be32(std::vector<unsigned char>& v, std::uint32_t x) {
    for (int s = 24; s >= 0; s -= 8) v.push_back(static_cast<unsigned char>((x >> s) & 0xff));
}

std::vector<unsigned char> idx_images(std::uint32_t n, std::uint32_t rows, std::uint32_t cols,
                                      const std::vector<unsigned char>& pixels) {
    std::vector<unsigned char> v;
    be32(v, 0x803);
    be32(v, n);
    be32(v, rows);
    be32(v, cols);
    v.insert(v.end(), pixels.begin(), pixels.end());
    return v;
}

std::vector<unsigned char> idx_labels(std::uint32_t n, const std::vector<unsigned char>& labels,
                                      std::uint32_t magic = 0x801) {
    std::vector<unsigned char> v;
    be32(v, magic);
    be32(v, n);
    v.insert(v.end(), labels.begin(), labels.end());
    return v;
}

SyntheticSpec fig2_spec(std::uint64_t seed) {
    SyntheticSpec s;
    s.dim = 5;
    s.n = 80;
    s.amplitude = 3.5;
    s.frequency = 5;
    s.phase = 1;
    s.lo = -4;
    s.hi = 2;
    s.seed = seed;
    return s;
}

}  // namespace

TEST(DataIo, SineSumTargetsAndDomain) {
    const SyntheticSpec s = fig2_spec(3);
    const Batch b = sample_sine_sum(s);
    ASSERT_EQ(b.inputs.rows(), 80);
    ASSERT_EQ(b.inputs.cols(), 5);
    EXPECT_LE(b.targets.cwiseAbs().maxCoeff(), 17.5);
    EXPECT_GE(b.inputs.minCoeff(), -4.0);
    EXPECT_LT(b.inputs.maxCoeff(), 2.0);
    for (Eigen::Index i = 0; i < 80; ++i) {
        double y = 0.0;
        for (Eigen::Index k = 0; k < 5; ++k) y += 3.5 * std::sin(5.0 * b.inputs(i, k) + 1.0);
        EXPECT_NEAR(b.targets(i, 0), y, 1e-12);
    }
}

TEST(DataIo, LowFrequencyVariant) {
    SyntheticSpec s = fig2_spec(4);
    s.frequency = 2;
    const Batch b = sample_sine_sum(s);
    double y = 0.0;
    for (Eigen::Index k = 0; k < 5; ++k) y += 3.5 * std::sin(2.0 * b.inputs(0, k) + 1.0);
    EXPECT_NEAR(b.targets(0, 0), y, 1e-12);
}

TEST(DataIo, ZeroAmplitudeGivesZeroTargets) {
    SyntheticSpec s = fig2_spec(5);
    s.amplitude = 0.0;
    EXPECT_EQ(sample_sine_sum(s).targets.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DataIo, SameSpecSameBatch) {
    const Batch a = generate(fig2_spec(6));
    const Batch b = generate(fig2_spec(6));
    const Batch c = generate(fig2_spec(7));
    EXPECT_EQ(a.inputs, b.inputs);
    EXPECT_EQ(a.targets, b.targets);
    EXPECT_NE(a.inputs, c.inputs);
}

TEST(DataIo, Uniform01Range) {
    EXPECT_EQ(uniform01(0), 0.0);
    EXPECT_LT(uniform01(~std::uint64_t{0}), 1.0);
    EXPECT_EQ(uniform01(std::uint64_t{1} << 63), 0.5);
}

TEST(DataIo, Custom1dTarget) {
    EXPECT_EQ(custom_1d_target(0.0), 0.0);
    EXPECT_NEAR(custom_1d_target(std::numbers::pi / 6), 1.0, 1e-15);
}

TEST(DataIo, Custom1dGridEndpoints) {
    const Batch b = sample_custom_1d(40, -1.0, 1.5, 0);
    ASSERT_EQ(b.inputs.rows(), 40);
    EXPECT_EQ(b.inputs(0, 0), -1.0);
    EXPECT_EQ(b.inputs(39, 0), 1.5);
    EXPECT_NEAR(b.inputs(1, 0) - b.inputs(0, 0), 2.5 / 39, 1e-15);
    for (Eigen::Index i = 0; i < 40; ++i) EXPECT_EQ(b.targets(i, 0), custom_1d_target(b.inputs(i, 0)));
}

TEST(DataIo, Custom1dRandomSampling) {
    const Batch a = sample_custom_1d(40, -1.0, 1.5, 9, Sampling::random);
    const Batch b = sample_custom_1d(40, -1.0, 1.5, 9, Sampling::random);
    EXPECT_EQ(a.inputs, b.inputs);
    EXPECT_GE(a.inputs.minCoeff(), -1.0);
    EXPECT_LT(a.inputs.maxCoeff(), 1.5);
    EXPECT_NE(a.inputs(1, 0) - a.inputs(0, 0), a.inputs(2, 0) - a.inputs(1, 0));
}

TEST(DataIo, SpecValidation) {
    SyntheticSpec s;
    s.n = 0;
    EXPECT_THROW(s.validate(), ConfigError);
    s.n = 3;
    s.lo = 1.0;
    s.hi = 1.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s.hi = 2.0;
    s.target_kind = TargetKind::custom_1d;
    s.dim = 2;
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(DataIo, MnistFixtureRoundTrip) {
    const std::vector<unsigned char> pixels = {0, 255, 128, 1, 2, 3, 10, 20, 30, 40, 50, 60};
    write_bytes(scratch("img.idx"), idx_images(2, 2, 3, pixels));
    write_bytes(scratch("lab.idx"), idx_labels(2, {7, 0}));
    const Batch b = load_mnist_idx(scratch("img.idx"), scratch("lab.idx"));
    ASSERT_EQ(b.inputs.rows(), 2);
    ASSERT_EQ(b.inputs.cols(), 6);
    ASSERT_EQ(b.targets.cols(), 10);
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index k = 0; k < 6; ++k) {
            EXPECT_EQ(b.inputs(i, k), pixels[static_cast<std::size_t>(i * 6 + k)] / 255.0);
        }
    }
    EXPECT_EQ(b.targets.row(0).sum(), 1.0);
    EXPECT_EQ(b.targets(0, 7), 1.0);
    EXPECT_EQ(b.targets(1, 0), 1.0);
}

TEST(DataIo, MnistErrorsCarryOffsets) {
    write_bytes(scratch("img2.idx"), idx_images(2, 1, 2, {1, 2, 3, 4}));
    write_bytes(scratch("badmagic.idx"), idx_labels(2, {1, 2}, 0x803));
    try {
        load_mnist_idx(scratch("img2.idx"), scratch("badmagic.idx"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 0u);
        EXPECT_NE(std::string(e.what()).find("offset 0"), std::string::npos);
    }

    write_bytes(scratch("short.idx"), idx_labels(3, {1, 2, 3}));
    try {
        load_mnist_idx(scratch("img2.idx"), scratch("short.idx"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 4u);
    }

    write_bytes(scratch("trunc.idx"), idx_images(2, 1, 2, {1, 2, 3}));
    write_bytes(scratch("lab2.idx"), idx_labels(2, {1, 2}));
    try {
        load_mnist_idx(scratch("trunc.idx"), scratch("lab2.idx"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 19u);
    }

    write_bytes(scratch("label11.idx"), idx_labels(2, {1, 11}));
    try {
        load_mnist_idx(scratch("img2.idx"), scratch("label11.idx"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 9u);
    }
    EXPECT_THROW(load_mnist_idx(scratch("missing.idx"), scratch("lab2.idx")), IoError);
}

TEST(DataIo, MnistTrainingSetShape) {
    const fs::path dir = fs::path(CONDENSE_SOURCE_DIR) / "data";
    const fs::path images = dir / "train-images-idx3-ubyte";
    const fs::path labels = dir / "train-labels-idx1-ubyte";
    if (!fs::exists(images) || !fs::exists(labels)) GTEST_SKIP() << "MNIST files not present in data/";
    const Batch b = load_mnist_idx(images, labels);
    EXPECT_EQ(b.inputs.rows(), 60000);
    EXPECT_EQ(b.inputs.cols(), 784);
}

TEST(DataIo, FormatDouble) {
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(0.0), "0");
    EXPECT_EQ(format_double(-2.5), "-2.5");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(DataIo, MatrixCsvIdentity) {
    write_matrix_csv(Eigen::Matrix2d::Identity(), scratch("eye.csv"));
    EXPECT_EQ(read_text_file(scratch("eye.csv")), "1,0\n0,1\n");
}

TEST(DataIo, MatrixCsvRoundTrip) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(7, 4) * 1e3;
    m(0, 0) = 1e-300;
    m(1, 1) = -std::numbers::pi;
    write_matrix_csv(m, scratch("m.csv"));
    const Eigen::MatrixXd r = read_matrix_csv(scratch("m.csv"));
    ASSERT_EQ(r.rows(), 7);
    ASSERT_EQ(r.cols(), 4);
    EXPECT_LE((r - m).cwiseAbs().maxCoeff(), 1e-15 * m.cwiseAbs().maxCoeff());
    EXPECT_EQ(r, m);
}

TEST(DataIo, MatrixCsvParseErrorOffset) {
    write_text_file(scratch("bad.csv"), "1,2\n3,x\n");
    try {
        read_matrix_csv(scratch("bad.csv"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 4u);
    }
    write_text_file(scratch("ragged.csv"), "1,2\n3\n");
    EXPECT_THROW(read_matrix_csv(scratch("ragged.csv")), ParseError);
}

TEST(DataIo, DatasetCsvRoundTrip) {
    const Batch b = generate(fig2_spec(8));
    write_dataset_csv(b, scratch("data.csv"));
    const std::string text = read_text_file(scratch("data.csv"));
    EXPECT_EQ(text.substr(0, text.find('\n')), "x0,x1,x2,x3,x4,y0");
    const Batch r = read_dataset_csv(scratch("data.csv"));
    EXPECT_EQ(r.inputs, b.inputs);
    EXPECT_EQ(r.targets, b.targets);
}

TEST(DataIo, IoErrorsNameThePath) {
    const fs::path bad = scratch("no_such_dir") / "x" / "file.csv";
    try {
        write_text_file(bad, "x");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
    }
    EXPECT_THROW(read_text_file(bad), IoError);
}
