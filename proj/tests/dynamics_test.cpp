#include "fieldrecon/dynamics.hpp"

#include <cstdio>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

using namespace fieldrecon;

namespace {

StateVector random_state(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    StateVector x(n);
    for (int i = 0; i < n; ++i) x(i) = u(rng);
    return x;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST(OutputMatrix, SelectorShapes) {
    const NetworkSystem full(Graph::chain(3).laplacian(), {0, 1, 2});
    EXPECT_TRUE(full.output_matrix().isIdentity());

    const NetworkSystem prefix2 = NetworkSystem::prefix(Graph::chain(4), 2);
    Eigen::MatrixXd expected(2, 4);
    expected << 1, 0, 0, 0, 0, 1, 0, 0;
    EXPECT_TRUE(prefix2.output_matrix().isApprox(expected));

    const NetworkSystem last(Graph::chain(3).laplacian(), {2});
    Eigen::MatrixXd row(1, 3);
    row << 0, 0, 1;
    EXPECT_TRUE(last.output_matrix().isApprox(row));
}

TEST(NetworkSystemCtor, Validation) {
    const Eigen::MatrixXd l = Graph::chain(3).laplacian();
    EXPECT_THROW(NetworkSystem(l, {}), config_error);
    EXPECT_THROW(NetworkSystem(l, {3}), config_error);
    EXPECT_THROW(NetworkSystem(l, {0, 0}), config_error);
    EXPECT_THROW(NetworkSystem(Eigen::MatrixXd::Identity(3, 3), {0}), config_error);
    EXPECT_THROW(NetworkSystem::prefix(Graph::chain(3), 4), config_error);
    EXPECT_THROW(NetworkSystem::prefix(Graph::chain(3), 0), config_error);
}

TEST(Propagate, TwoNodeClosedForm) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(2), 2);
    StateVector x0(2);
    x0 << 1, 0;
    for (double t : {0.0, 0.1, 0.7, 3.0}) {
        const StateVector x = sys.propagate(x0, t);
        EXPECT_NEAR(x(0), 0.5 + 0.5 * std::exp(-2 * t), 1e-14);
        EXPECT_NEAR(x(1), 0.5 - 0.5 * std::exp(-2 * t), 1e-14);
    }
}

TEST(Propagate, ConstantStateIsFixedPoint) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::grid(3, 3), 9);
    const StateVector ones = StateVector::Constant(9, 2.5);
    for (double t : {0.0, 1.0, 10.0})
        EXPECT_TRUE(sys.propagate(ones, t).isApprox(ones, 1e-13));
}

TEST(Propagate, RejectsBadInputs) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(2), 1);
    EXPECT_THROW(sys.propagate(StateVector::Zero(2), -0.5), config_error);
    EXPECT_THROW(sys.propagate(StateVector::Zero(3), 1.0), config_error);
}

TEST(Propagate, ConservationAndSemigroup) {
    std::mt19937_64 rng(7);
    const NetworkSystem sys = NetworkSystem::prefix(Graph::grid(4, 3), 12);
    std::uniform_real_distribution<double> ut(0.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector x0 = random_state(12, rng);
        const double s = ut(rng), t = ut(rng);
        const StateVector xs = sys.propagate(x0, s);
        EXPECT_NEAR(xs.mean(), x0.mean(), 1e-10 * std::max(1.0, std::abs(x0.mean())));
        const StateVector direct = sys.propagate(x0, s + t);
        const StateVector chained = sys.propagate(xs, t);
        EXPECT_LT((direct - chained).norm(), 1e-9 * std::max(1.0, direct.norm()));
    }
}

TEST(Propagate, DeviationDecaysMonotonically) {
    std::mt19937_64 rng(11);
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(6), 6);
    const StateVector x0 = random_state(6, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 0; t <= 5.0; t += 0.25) {
        const StateVector x = sys.propagate(x0, t);
        const double dev = (x.array() - x.mean()).matrix().norm();
        EXPECT_LE(dev, prev + 1e-12);
        prev = dev;
    }
}

TEST(Simulate, SampleGridConvention) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::grid(10, 10), 30);
    const Trajectory tr = sys.simulate(StateVector::Ones(100), 50.0, 10.0);
    EXPECT_EQ(tr.sample_count(), 501);
    EXPECT_EQ(tr.output_count(), 30);
    EXPECT_DOUBLE_EQ(tr.times(0), 0.0);
    EXPECT_DOUBLE_EQ(tr.times(500), 50.0);
    EXPECT_NEAR(tr.sample_period(), 0.1, 1e-15);
    EXPECT_TRUE(tr.samples.isApproxToConstant(1.0, 1e-12));
}

TEST(Simulate, MatchesPropagateAtInstants) {
    std::mt19937_64 rng(3);
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(5), 5);
    const StateVector x0 = random_state(5, rng);
    const Trajectory tr = sys.simulate(x0, 2.0, 4.0);
    for (int i = 0; i < tr.sample_count(); ++i) {
        const StateVector x = sys.propagate(x0, tr.times(i));
        EXPECT_TRUE(tr.samples.row(i).transpose().isApprox(x, 1e-13));
    }
}

TEST(Simulate, SingleOutputClosedForm) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(2), 1);
    StateVector x0(2);
    x0 << 1, 0;
    const Trajectory tr = sys.simulate(x0, 1.0, 10.0);
    for (int i = 0; i < tr.sample_count(); ++i)
        EXPECT_NEAR(tr.samples(i, 0), 0.5 + 0.5 * std::exp(-2 * tr.times(i)), 1e-14);
}

TEST(Simulate, RejectsBadParameters) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(2), 1);
    EXPECT_THROW(sys.simulate(StateVector::Zero(2), 0.0, 10.0), config_error);
    EXPECT_THROW(sys.simulate(StateVector::Zero(2), 1.0, -1.0), config_error);
}

TEST(SimulateNoisy, DeterministicGivenSeed) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::grid(2, 2), 4);
    const StateVector x0 = StateVector::Zero(4);
    const Trajectory a = sys.simulate_noisy(x0, 5.0, 0.01, 42);
    const Trajectory b = sys.simulate_noisy(x0, 5.0, 0.01, 42);
    EXPECT_EQ((a.samples - b.samples).cwiseAbs().maxCoeff(), 0.0);
    const Trajectory c = sys.simulate_noisy(x0, 5.0, 0.01, 43);
    EXPECT_GT((a.samples - c.samples).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SimulateNoisy, ZeroNoiseMatchesPropagate) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(2), 2);
    StateVector x0(2);
    x0 << 1, 0;
    const Trajectory tr = sys.simulate_noisy(x0, 1.0, 1e-4, 0, /*noise_scale=*/0.0);
    const StateVector exact = sys.propagate(x0, 1.0);
    EXPECT_LT((tr.samples.row(tr.sample_count() - 1).transpose() - exact).norm(), 1e-3);
}

TEST(SimulateNoisy, StabilityGuard) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(2), 2);
    // lambda_max = 2, so steps at or beyond 1.0 are rejected
    EXPECT_THROW(sys.simulate_noisy(StateVector::Zero(2), 10.0, 1.01, 0), numeric_error);
    EXPECT_NO_THROW(sys.simulate_noisy(StateVector::Zero(2), 10.0, 0.5, 0));
}

TEST(TrajectoryCsv, RoundTripFullPrecision) {
    const NetworkSystem sys = NetworkSystem::prefix(Graph::chain(3), 2);
    std::mt19937_64 rng(5);
    const Trajectory tr = sys.simulate(random_state(3, rng), 1.0, 7.0);
    const std::string path = temp_path("fieldrecon_traj_test.csv");
    tr.save_csv(path);
    const Trajectory back = Trajectory::load_csv(path);
    EXPECT_EQ(back.sample_count(), tr.sample_count());
    EXPECT_EQ(back.output_count(), tr.output_count());
    EXPECT_EQ((back.times - tr.times).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((back.samples - tr.samples).cwiseAbs().maxCoeff(), 0.0);
    std::remove(path.c_str());
}

TEST(TrajectoryCsv, ParseErrorsNameTheLine) {
    const std::string path = temp_path("fieldrecon_traj_bad.csv");
    {
        std::ofstream out(path);
        out << "t,y1\n0,1\n0.1,oops\n";
    }
    try {
        Trajectory::load_csv(path);
        FAIL() << "expected data_error";
    } catch (const data_error& e) {
        EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
    }
    {
        std::ofstream out(path);
        out << "t,y1\n0,1\n0.1\n";
    }
    EXPECT_THROW(Trajectory::load_csv(path), data_error);
    {
        std::ofstream out(path);
        out << "x,y1\n0,1\n";
    }
    EXPECT_THROW(Trajectory::load_csv(path), data_error);
    std::remove(path.c_str());
}
