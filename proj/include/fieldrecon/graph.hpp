#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fieldrecon/errors.hpp"

namespace fieldrecon {

enum class Topology { chain, grid, custom };

/// Grid dimensions: l1 nodes per lattice row (x direction), l2 rows (y direction).
struct GridDims {
    int l1 = 0;
    int l2 = 0;
};

/// Undirected simple connected communication graph with a fixed node numbering.
///
/// Chains are numbered 0..n-1 along the path. Grids are numbered row by row:
/// node(r, c) = r * l1 + c for lattice row r in [0, l2) and column c in [0, l1).
/// With that numbering the accessible prefix 0..k-1 makes the output matrix
/// [I 0], and the grid Laplacian is block tridiagonal with l2 diagonal blocks
/// of size l1 x l1.
class Graph {
public:
    using Edge = std::pair<int, int>;  // normalized: first < second, 0-based

    static Graph chain(int n) {
        if (n < 2) throw config_error("chain: need at least 2 nodes, got " + std::to_string(n));
        std::vector<Edge> edges;
        edges.reserve(static_cast<std::size_t>(n) - 1);
        for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
        return Graph(n, std::move(edges), Topology::chain, std::nullopt);
    }

    static Graph grid(int l1, int l2) {
        if (l1 < 2 || l2 < 2)
            throw config_error("grid: both dimensions must be >= 2, got " + std::to_string(l1) +
                               "x" + std::to_string(l2));
        std::vector<Edge> edges;
        edges.reserve(static_cast<std::size_t>(2 * l1 * l2 - l1 - l2));
        for (int r = 0; r < l2; ++r) {
            for (int c = 0; c < l1; ++c) {
                const int v = r * l1 + c;
                if (c + 1 < l1) edges.emplace_back(v, v + 1);
                if (r + 1 < l2) edges.emplace_back(v, v + l1);
            }
        }
        return Graph(l1 * l2, std::move(edges), Topology::grid, GridDims{l1, l2});
    }

    static Graph custom(int n, std::vector<Edge> edges) {
        if (n < 1) throw config_error("custom graph: need at least 1 node");
        for (auto& [i, j] : edges) {
            if (i == j) throw config_error("custom graph: self-loop at node " + std::to_string(i));
            if (i < 0 || j < 0 || i >= n || j >= n)
                throw config_error("custom graph: edge endpoint out of range");
            if (i > j) std::swap(i, j);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw config_error("custom graph: duplicate edge");
        Graph g(n, std::move(edges), Topology::custom, std::nullopt);
        if (!g.is_connected()) throw config_error("custom graph: not connected");
        return g;
    }

    int num_nodes() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    Topology topology() const { return topology_; }
    const std::optional<GridDims>& grid_dims() const { return dims_; }
    const std::vector<Edge>& edges() const { return edges_; }

    int degree(int v) const {
        int d = 0;
        for (const auto& [i, j] : edges_) d += (i == v) + (j == v);
        return d;
    }

    bool is_connected() const {
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
        for (const auto& [i, j] : edges_) {
            adj[static_cast<std::size_t>(i)].push_back(j);
            adj[static_cast<std::size_t>(j)].push_back(i);
        }
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        std::queue<int> frontier;
        frontier.push(0);
        seen[0] = 1;
        int count = 1;
        while (!frontier.empty()) {
            const int v = frontier.front();
            frontier.pop();
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++count;
                    frontier.push(w);
                }
            }
        }
        return count == n_;
    }

    Eigen::MatrixXd adjacency() const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
        for (const auto& [i, j] : edges_) a(i, j) = a(j, i) = 1.0;
        return a;
    }

    Eigen::MatrixXd degree_matrix() const {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
        for (const auto& [i, j] : edges_) {
            d(i, i) += 1.0;
            d(j, j) += 1.0;
        }
        return d;
    }

    /// L = degree_matrix - adjacency. Symmetric PSD with zero row sums.
    Eigen::MatrixXd laplacian() const {
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
        for (const auto& [i, j] : edges_) {
            l(i, i) += 1.0;
            l(j, j) += 1.0;
            l(i, j) -= 1.0;
            l(j, i) -= 1.0;
        }
        return l;
    }

    /// N x M incidence matrix, one column per edge in sorted edge order.
    /// The lower-numbered endpoint gets +1, so B * B^T = laplacian() exactly.
    Eigen::MatrixXd incidence() const {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_, num_edges());
        for (int e = 0; e < num_edges(); ++e) {
            b(edges_[static_cast<std::size_t>(e)].first, e) = 1.0;
            b(edges_[static_cast<std::size_t>(e)].second, e) = -1.0;
        }
        return b;
    }

    /// JSON document with 1-based node indices (the file convention).
    nlohmann::json to_json() const {
        nlohmann::json j;
        j["n"] = n_;
        nlohmann::json edge_list = nlohmann::json::array();
        for (const auto& [a, b] : edges_) edge_list.push_back({a + 1, b + 1});
        j["edges"] = std::move(edge_list);
        switch (topology_) {
            case Topology::chain: j["topology"] = "chain"; break;
            case Topology::grid:
                j["topology"] = "grid";
                j["dims"] = {dims_->l1, dims_->l2};
                break;
            case Topology::custom: j["topology"] = "custom"; break;
        }
        return j;
    }

    static Graph from_json(const nlohmann::json& j) {
        if (!j.contains("n") || !j.contains("topology"))
            throw data_error("graph json: missing required field 'n' or 'topology'");
        const int n = j.at("n").get<int>();
        const std::string topo = j.at("topology").get<std::string>();
        Graph expected = [&]() {
            if (topo == "chain") return chain(n);
            if (topo == "grid") {
                if (!j.contains("dims")) throw data_error("graph json: grid requires 'dims'");
                const auto dims = j.at("dims");
                Graph g = grid(dims.at(0).get<int>(), dims.at(1).get<int>());
                if (g.num_nodes() != n) throw data_error("graph json: dims inconsistent with n");
                return g;
            }
            if (topo == "custom") {
                std::vector<Edge> edges;
                for (const auto& e : j.at("edges"))
                    edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
                return custom(n, std::move(edges));
            }
            throw data_error("graph json: unknown topology '" + topo + "'");
        }();
        if (j.contains("edges") && topo != "custom") {
            // Verify the stored edge list matches the canonical construction.
            std::vector<Edge> file_edges;
            for (const auto& e : j.at("edges"))
                file_edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
            for (auto& [a, b] : file_edges)
                if (a > b) std::swap(a, b);
            std::sort(file_edges.begin(), file_edges.end());
            if (file_edges != expected.edges())
                throw data_error("graph json: edge list does not match " + topo + " numbering");
        }
        return expected;
    }

private:
    Graph(int n, std::vector<Edge> edges, Topology topo, std::optional<GridDims> dims)
        : n_(n), edges_(std::move(edges)), topology_(topo), dims_(dims) {
        std::sort(edges_.begin(), edges_.end());
    }

    int n_;
    std::vector<Edge> edges_;
    Topology topology_;
    std::optional<GridDims> dims_;
};

/// Laplacian eigenvalues sorted ascending, tagged with how they were obtained.
struct SpectralData {
    enum class Provenance { closed_form, numeric };

    Eigen::VectorXd eigenvalues;  // ascending, all >= 0, smallest ~ 0
    Provenance provenance = Provenance::numeric;

    int n() const { return static_cast<int>(eigenvalues.size()); }
    double lambda2() const { return eigenvalues(1); }
    double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

/// Path-graph Laplacian spectrum: 4 sin^2(k pi / 2n), k = 0..n-1.
inline SpectralData chain_spectrum(int n) {
    if (n < 2) throw config_error("chain_spectrum: need n >= 2");
    Eigen::VectorXd eigs(n);
    for (int k = 0; k < n; ++k) {
        const double s = std::sin(0.5 * M_PI * k / n);
        eigs(k) = 4.0 * s * s;  // equals 2 - 2 cos(k pi / n), ascending in k
    }
    return {eigs, SpectralData::Provenance::closed_form};
}

/// Grid spectrum as the Cartesian-product multiset of two path spectra.
inline SpectralData grid_spectrum(int l1, int l2) {
    if (l1 < 2 || l2 < 2) throw config_error("grid_spectrum: need l1, l2 >= 2");
    const SpectralData a = chain_spectrum(l1);
    const SpectralData b = chain_spectrum(l2);
    Eigen::VectorXd eigs(l1 * l2);
    int idx = 0;
    for (int i = 0; i < l1; ++i)
        for (int j = 0; j < l2; ++j) eigs(idx++) = a.eigenvalues(i) + b.eigenvalues(j);
    std::sort(eigs.data(), eigs.data() + eigs.size());
    return {eigs, SpectralData::Provenance::closed_form};
}

/// Symmetric eigensolve, used as the oracle for the closed forms above and
/// for custom topologies.
inline SpectralData numeric_spectrum(const Eigen::MatrixXd& laplacian) {
    if (laplacian.rows() != laplacian.cols())
        throw config_error("numeric_spectrum: matrix must be square");
    const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
    if ((laplacian - laplacian.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw config_error("numeric_spectrum: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numeric_error("numeric_spectrum: eigensolver failed to converge");
    return {solver.eigenvalues(), SpectralData::Provenance::numeric};
}

/// Closed-form spectrum for chain/grid graphs, numeric fallback for custom.
inline SpectralData spectrum(const Graph& g) {
    switch (g.topology()) {
        case Topology::chain: return chain_spectrum(g.num_nodes());
        case Topology::grid: return grid_spectrum(g.grid_dims()->l1, g.grid_dims()->l2);
        case Topology::custom: return numeric_spectrum(g.laplacian());
    }
    throw config_error("spectrum: unknown topology");
}

inline std::string topology_name(Topology t) {
    switch (t) {
        case Topology::chain: return "chain";
        case Topology::grid: return "grid";
        case Topology::custom: return "custom";
    }
    return "unknown";
}

}  // namespace fieldrecon
