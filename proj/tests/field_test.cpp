#include "fieldrecon/field.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

using namespace fieldrecon;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST(GaussianField, ZeroAmplitude) {
    const ScalarField f = gaussian_field(5, 4, {0.5, 0.5}, {0.2, 0.2}, 0.0);
    EXPECT_EQ(f.values.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(f.rows(), 4);
    EXPECT_EQ(f.cols(), 5);
}

TEST(GaussianField, ReferenceCornerValue) {
    // 10x10 cell-centered unit square: corner cells sit 0.45 from the center
    const ScalarField f = gaussian_field(10, 10, {0.5, 0.5}, {0.2, 0.2}, 1.0);
    const double corner = std::exp(-(0.45 * 0.45 + 0.45 * 0.45) / (2 * 0.04));
    EXPECT_NEAR(f.values(0, 0), corner, 1e-15);
    EXPECT_NEAR(f.values(9, 9), corner, 1e-15);
    EXPECT_NEAR(corner, std::exp(-5.0625), 1e-15);
}

TEST(GaussianField, CenteredFieldIsSymmetric) {
    const ScalarField f = gaussian_field(8, 6, {0.5, 0.5}, {0.3, 0.15}, 2.0);
    for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j) {
            EXPECT_NEAR(f.values(i, j), f.values(f.rows() - 1 - i, j), 1e-14);
            EXPECT_NEAR(f.values(i, j), f.values(i, f.cols() - 1 - j), 1e-14);
        }
}

TEST(GaussianField, PeakAndMonotoneDecayAlongRays) {
    const ScalarField f = gaussian_field(9, 9, {0.5, 0.5}, {0.2, 0.25}, 1.0);
    int pi = 0, pj = 0;
    f.values.maxCoeff(&pi, &pj);
    EXPECT_EQ(pi, 4);
    EXPECT_EQ(pj, 4);
    for (int j = pj; j + 1 < f.cols(); ++j) EXPECT_GT(f.values(pi, j), f.values(pi, j + 1));
    for (int j = pj; j > 0; --j) EXPECT_GT(f.values(pi, j), f.values(pi, j - 1));
    for (int i = pi; i + 1 < f.rows(); ++i) EXPECT_GT(f.values(i, pj), f.values(i + 1, pj));
    for (int i = pi; i > 0; --i) EXPECT_GT(f.values(i, pj), f.values(i - 1, pj));
}

TEST(FieldCsv, DirectParse) {
    const std::string path = temp_path("fieldrecon_field_a.csv");
    write_file(path, "0,1\n2,3\n");
    const LoadedField loaded = load_gridded_csv(path);
    EXPECT_EQ(loaded.filled_cells, 0);
    Eigen::MatrixXd expected(2, 2);
    expected << 0, 1, 2, 3;
    EXPECT_TRUE(loaded.field.values.isApprox(expected));
    EXPECT_DOUBLE_EQ(loaded.field.x_max, 1.0);  // default unit extent
    std::remove(path.c_str());
}

TEST(FieldCsv, MissingCellFilledFromNearestNeighbor) {
    const std::string path = temp_path("fieldrecon_field_b.csv");
    write_file(path, "0,1\n2,\n");
    const LoadedField loaded = load_gridded_csv(path);
    EXPECT_EQ(loaded.filled_cells, 1);
    // ties at index distance 1 resolve to the first valid cell in scan order
    EXPECT_DOUBLE_EQ(loaded.field.values(1, 1), 1.0);
    std::remove(path.c_str());

    write_file(path, "0,nan,6\n2,3,7\n");
    EXPECT_DOUBLE_EQ(load_gridded_csv(path).field.values(0, 1), 0.0);
    std::remove(path.c_str());
}

TEST(FieldCsv, Errors) {
    const std::string path = temp_path("fieldrecon_field_c.csv");
    write_file(path, "0,1\n2\n");
    try {
        load_gridded_csv(path);
        FAIL() << "expected data_error";
    } catch (const data_error& e) {
        EXPECT_NE(std::string(e.what()).find("ragged"), std::string::npos);
    }
    write_file(path, "nan,nan\nnan,nan\n");
    EXPECT_THROW(load_gridded_csv(path), data_error);
    write_file(path, "0,oops\n1,2\n");
    EXPECT_THROW(load_gridded_csv(path), data_error);
    std::remove(path.c_str());
}

TEST(FieldCsv, RoundTripFullPrecision) {
    ScalarField f = synthetic_field(7, 5);
    f.units = "psu";
    f.x_min = -3.5;
    f.x_max = 12.25;
    const std::string path = temp_path("fieldrecon_field_d.csv");
    save_field_csv(f, path);
    const LoadedField back = load_gridded_csv(path);
    EXPECT_EQ(back.filled_cells, 0);
    EXPECT_EQ((back.field.values - f.values).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(back.field.units, "psu");
    EXPECT_EQ(back.field.x_min, f.x_min);
    EXPECT_EQ(back.field.x_max, f.x_max);
    std::remove(path.c_str());
}

TEST(FieldToState, GridRowMajor) {
    ScalarField f;
    f.values.resize(2, 2);
    f.values << 0, 1, 2, 3;
    const StateVector x = field_to_state(f, Graph::grid(2, 2));
    Eigen::Vector4d expected(0, 1, 2, 3);
    EXPECT_TRUE(x.isApprox(expected));
}

TEST(FieldToState, ChainSerpentine) {
    ScalarField f;
    f.values.resize(2, 2);
    f.values << 0, 1, 2, 3;
    const StateVector x = field_to_state(f, Graph::chain(4));
    Eigen::Vector4d expected(0, 1, 3, 2);  // second row traversed right-to-left
    EXPECT_TRUE(x.isApprox(expected));
}

TEST(FieldToState, ConstantField) {
    ScalarField f;
    f.values = Eigen::MatrixXd::Constant(3, 4, 6.5);
    EXPECT_TRUE(field_to_state(f, Graph::grid(4, 3)).isApproxToConstant(6.5));
    EXPECT_TRUE(field_to_state(f, Graph::chain(12)).isApproxToConstant(6.5));
}

TEST(FieldToState, ShapeValidation) {
    ScalarField f;
    f.values = Eigen::MatrixXd::Zero(3, 4);
    EXPECT_THROW(field_to_state(f, Graph::grid(3, 4)), config_error);  // transposed dims
    EXPECT_THROW(field_to_state(f, Graph::chain(11)), config_error);
    EXPECT_THROW(field_to_state(f, Graph::custom(12, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5},
                                                      {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 10},
                                                      {10, 11}, {0, 11}})),
                 config_error);
}

TEST(FieldToState, RoundTripsWithStateToField) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    ScalarField f;
    f.values.resize(3, 4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) f.values(i, j) = u(rng);
    for (const Graph& g : {Graph::grid(4, 3), Graph::chain(12)}) {
        const StateVector x = field_to_state(f, g);
        const ScalarField back = state_to_field(x, g, f);
        EXPECT_EQ((back.values - f.values).cwiseAbs().maxCoeff(), 0.0)
            << topology_name(g.topology());
    }
}

TEST(FieldToState, SerpentineKeepsNeighborsAdjacent) {
    const int cols = 5, rows = 4;
    const Graph g = Graph::chain(cols * rows);
    // identify each chain node's grid cell via a coordinate-coded field
    ScalarField f;
    f.values.resize(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) f.values(i, j) = i * 100 + j;
    const StateVector x = field_to_state(f, g);
    for (int v = 0; v + 1 < g.num_nodes(); ++v) {
        const int ri = static_cast<int>(x(v)) / 100, ci = static_cast<int>(x(v)) % 100;
        const int rj = static_cast<int>(x(v + 1)) / 100, cj = static_cast<int>(x(v + 1)) % 100;
        EXPECT_EQ(std::max(std::abs(ri - rj), std::abs(ci - cj)), 1)
            << "chain nodes " << v << "," << v + 1;
    }
}

TEST(ErrorMap, ExactEstimate) {
    const Graph g = Graph::grid(3, 3);
    const ScalarField f = gaussian_field(3, 3, {0.5, 0.5}, {0.3, 0.3}, 1.0);
    const ErrorMap map = error_map(f, field_to_state(f, g), g);
    EXPECT_EQ(map.values.values.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(map.l2_relative, 0.0);
    EXPECT_EQ(map.max_abs, 0.0);
}

TEST(ErrorMap, UniformOffset) {
    const Graph g = Graph::grid(3, 3);
    const ScalarField f = gaussian_field(3, 3, {0.5, 0.5}, {0.3, 0.3}, 1.0);
    const double eps = 0.125;
    const StateVector est = field_to_state(f, g).array() + eps;
    const ErrorMap map = error_map(f, est, g);
    EXPECT_NEAR(map.max_abs, eps, 1e-15);
    EXPECT_TRUE(map.values.values.isApproxToConstant(eps, 1e-12));
    EXPECT_NEAR(map.l2_relative, eps * 3.0 / field_to_state(f, g).norm(), 1e-12);
}

TEST(SyntheticField, IsFiniteAndNonTrivial) {
    const ScalarField f = synthetic_field(10, 10);
    EXPECT_TRUE(f.values.allFinite());
    EXPECT_GT(f.values.maxCoeff() - f.values.minCoeff(), 0.5);
}
