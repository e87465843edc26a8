#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fieldrecon/detail/io.hpp"
#include "fieldrecon/errors.hpp"
#include "fieldrecon/graph.hpp"

namespace fieldrecon {

using StateVector = Eigen::VectorXd;

/// Time-stamped output samples from the accessible nodes.
struct Trajectory {
    Eigen::VectorXd times;    // strictly increasing, times(0) = 0
    Eigen::MatrixXd samples;  // one row per instant, one column per output

    int sample_count() const { return static_cast<int>(times.size()); }
    int output_count() const { return static_cast<int>(samples.cols()); }
    double duration() const { return times(times.size() - 1); }

    /// Uniform sample period; throws if the grid is not uniform.
    double sample_period() const {
        if (sample_count() < 2) throw data_error("trajectory: need at least 2 samples");
        const double dt = times(1) - times(0);
        for (int i = 1; i + 1 < sample_count(); ++i)
            if (std::abs(times(i + 1) - times(i) - dt) > 1e-9 * std::max(1.0, dt))
                throw data_error("trajectory: sample times are not uniform");
        return dt;
    }

    /// CSV with header `t,y1,...,yk`, full decimal precision.
    void save_csv(const std::string& path) const {
        auto out = detail::open_for_write(path);
        out << "t";
        for (int j = 0; j < output_count(); ++j) out << ",y" << (j + 1);
        out << "\n";
        for (int i = 0; i < sample_count(); ++i) {
            out << detail::format_full(times(i));
            for (int j = 0; j < output_count(); ++j)
                out << "," << detail::format_full(samples(i, j));
            out << "\n";
        }
    }

    static Trajectory load_csv(const std::string& path) {
        auto in = detail::open_for_read(path);
        std::string line;
        if (!std::getline(in, line)) throw data_error(path + ": empty trajectory file");
        const auto header = detail::split_csv_line(line);
        if (header.empty() || detail::trim(header[0]) != "t")
            throw data_error(path + ":1: expected header starting with 't'");
        const int k = static_cast<int>(header.size()) - 1;
        if (k < 1) throw data_error(path + ":1: no output columns in header");
        std::vector<double> ts;
        std::vector<double> vals;
        int line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (detail::trim(line).empty()) continue;
            const auto cells = detail::split_csv_line(line);
            const std::string where = path + ":" + std::to_string(line_no);
            if (static_cast<int>(cells.size()) != k + 1)
                throw data_error(where + ": expected " + std::to_string(k + 1) +
                                 " columns, found " + std::to_string(cells.size()));
            ts.push_back(detail::parse_double(cells[0], where));
            for (int j = 1; j <= k; ++j)
                vals.push_back(detail::parse_double(cells[static_cast<std::size_t>(j)], where));
        }
        if (ts.empty()) throw data_error(path + ": trajectory has no samples");
        if (std::abs(ts.front()) > 1e-12)
            throw data_error(path + ": trajectory must start at t=0");
        Trajectory tr;
        tr.times = Eigen::Map<Eigen::VectorXd>(ts.data(), static_cast<Eigen::Index>(ts.size()));
        tr.samples = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>>(
            vals.data(), static_cast<Eigen::Index>(ts.size()), k);
        for (int i = 0; i + 1 < tr.sample_count(); ++i)
            if (tr.times(i + 1) <= tr.times(i))
                throw data_error(path + ": sample times must be strictly increasing");
        return tr;
    }
};

/// The observed linear system: consensus dynamics xdot = -L x with outputs
/// read from a fixed subset of nodes.
///
/// The symmetric eigendecomposition L = V diag(eigs) V^T is computed once at
/// construction and shared by every simulation and estimation on the system;
/// instances are immutable and safe to share across threads.
class NetworkSystem {
public:
    NetworkSystem(Eigen::MatrixXd laplacian, std::vector<int> accessible)
        : laplacian_(std::move(laplacian)), accessible_(std::move(accessible)) {
        n_ = static_cast<int>(laplacian_.rows());
        if (laplacian_.cols() != n_) throw config_error("system: Laplacian must be square");
        const double scale = std::max(1.0, laplacian_.cwiseAbs().maxCoeff());
        if ((laplacian_ - laplacian_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw config_error("system: Laplacian must be symmetric");
        if ((laplacian_.rowwise().sum()).cwiseAbs().maxCoeff() > 1e-9 * scale * n_)
            throw config_error("system: Laplacian rows must sum to zero");
        if (accessible_.empty()) throw config_error("system: need at least one accessible node");
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        for (int idx : accessible_) {
            if (idx < 0 || idx >= n_)
                throw config_error("system: accessible index " + std::to_string(idx) +
                                   " out of range for n=" + std::to_string(n_));
            if (seen[static_cast<std::size_t>(idx)])
                throw config_error("system: duplicate accessible index " + std::to_string(idx));
            seen[static_cast<std::size_t>(idx)] = 1;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_);
        if (solver.info() != Eigen::Success)
            throw numeric_error("system: Laplacian eigendecomposition failed");
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors();
    }

    /// System observing the numbering prefix 0..k-1, the labeling convention
    /// where accessible robots carry the first labels and C = [I 0].
    static NetworkSystem prefix(const Graph& g, int k) {
        if (k < 1 || k > g.num_nodes())
            throw config_error("system: accessible count k=" + std::to_string(k) +
                               " out of range for n=" + std::to_string(g.num_nodes()));
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        return NetworkSystem(g.laplacian(), std::move(idx));
    }

    int n() const { return n_; }
    int k() const { return static_cast<int>(accessible_.size()); }
    const Eigen::MatrixXd& laplacian() const { return laplacian_; }
    const std::vector<int>& accessible() const { return accessible_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    double lambda_max() const { return eigenvalues_(n_ - 1); }

    /// k x n selector matrix C; row i picks the i-th accessible node.
    Eigen::MatrixXd output_matrix() const {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k(), n_);
        for (int i = 0; i < k(); ++i) c(i, accessible_[static_cast<std::size_t>(i)]) = 1.0;
        return c;
    }

    /// Rows of the eigenvector matrix at the accessible nodes (C * V).
    Eigen::MatrixXd output_modes() const {
        Eigen::MatrixXd cv(k(), n_);
        for (int i = 0; i < k(); ++i)
            cv.row(i) = eigenvectors_.row(accessible_[static_cast<std::size_t>(i)]);
        return cv;
    }

    /// exp(-L t) x0 via the cached eigendecomposition. Preserves the mean.
    StateVector propagate(const StateVector& x0, double t) const {
        check_state(x0);
        if (t < 0) throw config_error("propagate: time must be nonnegative");
        const Eigen::VectorXd modal =
            (-t * eigenvalues_.array()).exp() * (eigenvectors_.transpose() * x0).array();
        return eigenvectors_ * modal;
    }

    /// Noiseless sampled outputs y_i = C exp(-L t_i) x0 at t_i = i / rate.
    Trajectory simulate(const StateVector& x0, double horizon, double rate) const {
        check_state(x0);
        if (horizon <= 0) throw config_error("simulate: horizon must be positive");
        if (rate <= 0) throw config_error("simulate: sample rate must be positive");
        const int m = static_cast<int>(std::floor(horizon * rate + 1e-9)) + 1;
        const Eigen::VectorXd modal0 = eigenvectors_.transpose() * x0;
        const Eigen::MatrixXd cv = output_modes();
        Trajectory tr;
        tr.times.resize(m);
        tr.samples.resize(m, k());
        for (int i = 0; i < m; ++i) {
            const double t = i / rate;
            tr.times(i) = t;
            const Eigen::VectorXd modal = (-t * eigenvalues_.array()).exp() * modal0.array();
            tr.samples.row(i) = (cv * modal).transpose();
        }
        return tr;
    }

    /// Euler-Maruyama path of xdot = -L x + noise_scale * W, full state
    /// recorded at every step. Deterministic for a fixed seed.
    Trajectory simulate_noisy(const StateVector& x0, double horizon, double step,
                              std::uint64_t seed, double noise_scale = 1.0) const {
        check_state(x0);
        if (step <= 0) throw config_error("simulate_noisy: step must be positive");
        if (horizon < step) throw config_error("simulate_noisy: horizon shorter than one step");
        if (step >= 2.0 / lambda_max())
            throw numeric_error("simulate_noisy: step " + std::to_string(step) +
                                " violates explicit-scheme stability (need < " +
                                std::to_string(2.0 / lambda_max()) + ")");
        const int steps = static_cast<int>(std::floor(horizon / step + 1e-9));
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double noise_amp = noise_scale * std::sqrt(step);
        Trajectory tr;
        tr.times.resize(steps + 1);
        tr.samples.resize(steps + 1, n_);
        StateVector x = x0;
        tr.times(0) = 0.0;
        tr.samples.row(0) = x.transpose();
        for (int i = 1; i <= steps; ++i) {
            x -= step * (laplacian_ * x);
            if (noise_scale != 0.0)
                for (int c = 0; c < n_; ++c) x(c) += noise_amp * gauss(rng);
            tr.times(i) = i * step;
            tr.samples.row(i) = x.transpose();
        }
        return tr;
    }

private:
    void check_state(const StateVector& x0) const {
        if (x0.size() != n_)
            throw config_error("state vector has size " + std::to_string(x0.size()) +
                               ", system has n=" + std::to_string(n_));
        if (!x0.allFinite()) throw config_error("state vector has non-finite entries");
    }

    Eigen::MatrixXd laplacian_;
    std::vector<int> accessible_;
    int n_;
    Eigen::VectorXd eigenvalues_;   // ascending
    Eigen::MatrixXd eigenvectors_;  // columns match eigenvalues_
};

/// Adds i.i.d. Gaussian measurement noise to every sample. Off by default in
/// all experiment recipes; provided for studying the regularizer under noise.
inline void add_measurement_noise(Trajectory& tr, double noise_sd, std::uint64_t seed) {
    if (noise_sd < 0) throw config_error("measurement noise sd must be nonnegative");
    if (noise_sd == 0) return;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise_sd);
    for (int i = 0; i < tr.sample_count(); ++i)
        for (int j = 0; j < tr.output_count(); ++j) tr.samples(i, j) += gauss(rng);
}

}  // namespace fieldrecon
