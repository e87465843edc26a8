#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fieldrecon/detail/io.hpp"
#include "fieldrecon/dynamics.hpp"
#include "fieldrecon/errors.hpp"
#include "fieldrecon/graph.hpp"

namespace fieldrecon {

/// Per-mode contribution to the Gramian trace: c = integral over [0,T] of
/// exp(-2 lambda t), i.e. (1 - exp(-2 lambda T)) / (2 lambda), and T at the
/// zero mode. Returned ascending (largest eigenvalue first), so the k
/// smallest/largest partial sums give the trace bounds directly.
inline Eigen::VectorXd mode_weights(const SpectralData& spectrum, double horizon) {
    if (horizon <= 0) throw config_error("mode_weights: horizon must be positive");
    const int n = spectrum.n();
    const double zero_tol = 1e-12 * n;
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) {
        const double lambda = spectrum.eigenvalues(i);
        if (lambda < -zero_tol)
            throw config_error("mode_weights: negative eigenvalue " + std::to_string(lambda));
        // reversed index: eigenvalues ascending -> weights ascending
        c(n - 1 - i) = lambda <= zero_tol
                           ? horizon
                           : -std::expm1(-2.0 * lambda * horizon) / (2.0 * lambda);
    }
    return c;
}

/// Spectral sandwich for the observability-Gramian trace with k observed
/// nodes: sum of the k smallest mode weights <= trace <= sum of the k largest.
struct TraceBounds {
    double lower = 0;
    double upper = 0;
    std::optional<double> trace_numeric;  // filled by callers that also have eigenvectors
    int n = 0;
    int k = 0;
    double horizon = 0;
};

inline TraceBounds trace_bounds(const SpectralData& spectrum, int k, double horizon) {
    const int n = spectrum.n();
    if (k < 1 || k > n)
        throw config_error("trace_bounds: k=" + std::to_string(k) +
                           " out of range for n=" + std::to_string(n));
    const Eigen::VectorXd c = mode_weights(spectrum, horizon);
    TraceBounds b;
    b.n = n;
    b.k = k;
    b.horizon = horizon;
    b.lower = c.head(k).sum();
    b.upper = c.tail(k).sum();
    return b;
}

namespace detail {

/// Diagonal of M = V diag(c) V^T, the Gramian-trace kernel from the spectral
/// reduction trace(W) = sum of M_ii over accessible nodes.
inline Eigen::VectorXd trace_kernel_diagonal(const Eigen::VectorXd& eigenvalues,
                                             const Eigen::MatrixXd& eigenvectors,
                                             double horizon) {
    SpectralData sd{eigenvalues, SpectralData::Provenance::numeric};
    const Eigen::VectorXd c_desc = mode_weights(sd, horizon).reverse();  // back in eig order
    return (eigenvectors.array().square().matrix() * c_desc);
}

}  // namespace detail

/// Exact Gramian trace via the eigendecomposition of L: trace(W_O(0,T)) =
/// sum over accessible nodes i of sum_j c_j V_ij^2. No time stepping.
inline double gramian_trace_numeric(const NetworkSystem& sys, double horizon) {
    if (horizon <= 0) throw config_error("gramian_trace_numeric: horizon must be positive");
    const Eigen::VectorXd m_diag =
        detail::trace_kernel_diagonal(sys.eigenvalues(), sys.eigenvectors(), horizon);
    double trace = 0;
    for (int idx : sys.accessible()) trace += m_diag(idx);
    return trace;
}

struct TopologyComparisonRow {
    std::string topology;
    int n = 0;
    int k = 0;
    double ratio = 0;
    double horizon = 0;
    double lower = 0;
    double upper = 0;
    std::optional<double> trace_numeric;
};

/// Chain-vs-grid trace bounds over a sweep of sensor-to-node ratios, with the
/// exact trace included while the dense eigendecomposition stays cheap
/// (n <= numeric_limit). Accessible nodes are always the numbering prefix.
inline std::vector<TopologyComparisonRow> compare_topologies(int n,
                                                             const std::vector<double>& ratios,
                                                             double horizon,
                                                             int numeric_limit = 400) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n || side < 2)
        throw config_error("compare_topologies: n=" + std::to_string(n) +
                           " must be a perfect square >= 4");
    if (ratios.empty()) throw config_error("compare_topologies: empty ratio list");
    for (double r : ratios)
        if (!(r > 0.0) || r > 1.0)
            throw config_error("compare_topologies: ratios must lie in (0, 1]");

    struct TopoData {
        std::string name;
        SpectralData spectrum;
        std::optional<Eigen::VectorXd> kernel_prefix_sums;
    };
    std::vector<TopoData> topos;
    topos.push_back({"chain", chain_spectrum(n), std::nullopt});
    topos.push_back({"grid", grid_spectrum(side, side), std::nullopt});
    if (n <= numeric_limit) {
        for (auto& t : topos) {
            const Graph g = t.name == "chain" ? Graph::chain(n) : Graph::grid(side, side);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian());
            if (solver.info() != Eigen::Success)
                throw numeric_error("compare_topologies: eigensolver failed");
            const Eigen::VectorXd diag = detail::trace_kernel_diagonal(
                solver.eigenvalues(), solver.eigenvectors(), horizon);
            Eigen::VectorXd prefix(n);
            double acc = 0;
            for (int i = 0; i < n; ++i) prefix(i) = (acc += diag(i));
            t.kernel_prefix_sums = prefix;
        }
    }

    std::vector<TopologyComparisonRow> rows;
    for (double r : ratios) {
        const int k = static_cast<int>(std::lround(r * n));
        if (k < 1 || k > n)
            throw config_error("compare_topologies: ratio " + std::to_string(r) +
                               " yields k out of range");
        for (const auto& t : topos) {
            const TraceBounds b = trace_bounds(t.spectrum, k, horizon);
            TopologyComparisonRow row;
            row.topology = t.name;
            row.n = n;
            row.k = k;
            row.ratio = r;
            row.horizon = horizon;
            row.lower = b.lower;
            row.upper = b.upper;
            if (t.kernel_prefix_sums) row.trace_numeric = (*t.kernel_prefix_sums)(k - 1);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline void write_comparison_csv(const std::vector<TopologyComparisonRow>& rows,
                                 const std::string& path) {
    auto out = detail::open_for_write(path);
    out << "topology,n,k,ratio,horizon,lower,upper,trace_numeric\n";
    for (const auto& row : rows) {
        out << row.topology << "," << row.n << "," << row.k << ","
            << detail::format_full(row.ratio) << "," << detail::format_full(row.horizon) << ","
            << detail::format_full(row.lower) << "," << detail::format_full(row.upper) << ",";
        if (row.trace_numeric) out << detail::format_full(*row.trace_numeric);
        out << "\n";
    }
}

}  // namespace fieldrecon
