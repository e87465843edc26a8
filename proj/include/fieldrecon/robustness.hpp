#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fieldrecon/detail/io.hpp"
#include "fieldrecon/dynamics.hpp"
#include "fieldrecon/errors.hpp"
#include "fieldrecon/graph.hpp"

namespace fieldrecon {

/// First-order Laplacian energy sum 1/(2 lambda) over the nonzero spectrum:
/// the steady-state variance of the consensus deviation under unit white
/// noise at every node. Requires a connected graph (single zero eigenvalue).
inline double laplacian_energy(const SpectralData& spectrum) {
    constexpr double zero_tol = 1e-9;
    int zero_count = 0;
    double energy = 0;
    for (int i = 0; i < spectrum.n(); ++i) {
        const double lambda = spectrum.eigenvalues(i);
        if (lambda < -zero_tol)
            throw config_error("laplacian_energy: negative eigenvalue " + std::to_string(lambda));
        if (lambda <= zero_tol)
            ++zero_count;
        else
            energy += 0.5 / lambda;
    }
    if (zero_count != 1)
        throw config_error("laplacian_energy: spectrum has " + std::to_string(zero_count) +
                           " (near-)zero eigenvalues; graph must be connected");
    return energy;
}

struct EnergyReport {
    std::string topology;
    int n = 0;
    double energy = 0;
    Eigen::VectorXd eigenvalues_used;  // the n-1 nonzero eigenvalues
};

inline EnergyReport energy_report(const std::string& topology, const SpectralData& spectrum) {
    EnergyReport r;
    r.topology = topology;
    r.n = spectrum.n();
    r.energy = laplacian_energy(spectrum);
    r.eigenvalues_used = spectrum.eigenvalues.tail(spectrum.n() - 1);
    return r;
}

/// Closed-form chain vs grid energies for each perfect-square size.
inline std::vector<std::pair<EnergyReport, EnergyReport>> energy_sweep(
    const std::vector<int>& sizes) {
    std::vector<std::pair<EnergyReport, EnergyReport>> out;
    for (int n : sizes) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (side * side != n || n < 4)
            throw config_error("energy_sweep: size " + std::to_string(n) +
                               " must be a perfect square >= 4");
        out.emplace_back(energy_report("chain", chain_spectrum(n)),
                         energy_report("grid", grid_spectrum(side, side)));
    }
    return out;
}

inline void write_energy_csv(const std::vector<std::pair<EnergyReport, EnergyReport>>& rows,
                             const std::string& path) {
    auto out = detail::open_for_write(path);
    out << "n,chain_energy,grid_energy\n";
    for (const auto& [chain, grid] : rows)
        out << chain.n << "," << detail::format_full(chain.energy) << ","
            << detail::format_full(grid.energy) << "\n";
}

struct VarianceEstimate {
    double value = 0;
    double std_error = 0;
    int replicates = 0;
};

/// Monte-Carlo steady-state variance of the consensus deviation
/// E||(I - J/N) X||^2 under white-noise-driven dynamics, time-averaged over
/// the second half of each path and batched across replicates. Cross-checks
/// laplacian_energy() without ever materializing an output matrix.
inline VarianceEstimate empirical_output_variance(const Graph& g, double horizon, double step,
                                                  int replicates, std::uint64_t seed,
                                                  double noise_scale = 1.0) {
    if (replicates < 2) throw config_error("empirical_output_variance: need >= 2 replicates");
    const SpectralData sd = spectrum(g);
    const double burn_in = 0.5 * horizon;
    if (std::exp(-2.0 * sd.lambda2() * burn_in) >= 0.01)
        throw config_error("empirical_output_variance: horizon too short for burn-in (need "
                           "exp(-2 lambda2 horizon/2) < 0.01)");

    std::vector<int> all_nodes(static_cast<std::size_t>(g.num_nodes()));
    for (int i = 0; i < g.num_nodes(); ++i) all_nodes[static_cast<std::size_t>(i)] = i;
    const NetworkSystem sys(g.laplacian(), std::move(all_nodes));
    const StateVector x0 = StateVector::Zero(g.num_nodes());

    Eigen::VectorXd replicate_means(replicates);
    for (int r = 0; r < replicates; ++r) {
        const Trajectory path = sys.simulate_noisy(x0, horizon, step, seed + r, noise_scale);
        double acc = 0;
        int count = 0;
        for (int i = 0; i < path.sample_count(); ++i) {
            if (path.times(i) < burn_in) continue;
            const Eigen::VectorXd x = path.samples.row(i).transpose();
            acc += (x.array() - x.mean()).matrix().squaredNorm();
            ++count;
        }
        replicate_means(r) = acc / count;
    }
    VarianceEstimate est;
    est.replicates = replicates;
    est.value = replicate_means.mean();
    est.std_error = std::sqrt((replicate_means.array() - est.value).square().sum() /
                              (replicates - 1) / replicates);
    return est;
}

}  // namespace fieldrecon
