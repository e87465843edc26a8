#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fieldrecon/detail/io.hpp"
#include "fieldrecon/dynamics.hpp"
#include "fieldrecon/errors.hpp"
#include "fieldrecon/graph.hpp"

namespace fieldrecon {

/// 2-D gridded scalar values over a rectangular extent. Cells are uniform
/// and values sit at cell centers; row 0 is the top of the domain (largest y),
/// matching the CSV layout. A field with l1 columns and l2 rows pairs with
/// Graph::grid(l1, l2): lattice node (r, c) reads values(r, c).
struct ScalarField {
    Eigen::MatrixXd values;  // rows = l2 (y), cols = l1 (x)
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    std::string units;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }

    double x_coord(int j) const { return x_min + (j + 0.5) * (x_max - x_min) / cols(); }
    double y_coord(int i) const { return y_max - (i + 0.5) * (y_max - y_min) / rows(); }

    void validate() const {
        if (rows() < 2 || cols() < 2) throw config_error("field: need at least a 2x2 grid");
        if (!(x_max > x_min) || !(y_max > y_min))
            throw config_error("field: degenerate extent");
        if (!values.allFinite()) throw config_error("field: non-finite values");
    }
};

/// Axis-aligned Gaussian bump sampled at the cell centers.
inline ScalarField gaussian_field(int l1, int l2, std::pair<double, double> center,
                                  std::pair<double, double> sigma, double amplitude,
                                  double x_min = 0, double x_max = 1, double y_min = 0,
                                  double y_max = 1) {
    if (sigma.first <= 0 || sigma.second <= 0)
        throw config_error("gaussian_field: sigma must be positive");
    ScalarField f;
    f.values.resize(l2, l1);
    f.x_min = x_min;
    f.x_max = x_max;
    f.y_min = y_min;
    f.y_max = y_max;
    f.validate();
    for (int i = 0; i < l2; ++i) {
        for (int j = 0; j < l1; ++j) {
            const double dx = f.x_coord(j) - center.first;
            const double dy = f.y_coord(i) - center.second;
            f.values(i, j) = amplitude * std::exp(-(dx * dx / (2 * sigma.first * sigma.first) +
                                                    dy * dy / (2 * sigma.second * sigma.second)));
        }
    }
    return f;
}

/// Synthetic stand-in for real oceanographic grids: two Gaussian bumps on a
/// linear ramp. Deterministic; used by pipeline tests when no data file is at
/// hand.
inline ScalarField synthetic_field(int l1, int l2, double x_min = 0, double x_max = 1,
                                   double y_min = 0, double y_max = 1) {
    ScalarField a = gaussian_field(l1, l2, {0.3, 0.7}, {0.15, 0.2}, 1.0,
                                   x_min, x_max, y_min, y_max);
    const ScalarField b = gaussian_field(l1, l2, {0.75, 0.3}, {0.2, 0.12}, 0.6,
                                         x_min, x_max, y_min, y_max);
    a.values += b.values;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            a.values(i, j) += 0.001 * a.x_coord(j) + 0.002 * a.y_coord(i) + 0.3;
    return a;
}

/// Field CSV: `# extent: x_min,x_max,y_min,y_max units: <label>` then one row
/// of comma-separated values per grid row, top row first.
inline void save_field_csv(const ScalarField& field, const std::string& path) {
    auto out = detail::open_for_write(path);
    out << "# extent: " << detail::format_full(field.x_min) << ","
        << detail::format_full(field.x_max) << "," << detail::format_full(field.y_min) << ","
        << detail::format_full(field.y_max) << " units: " << field.units << "\n";
    for (int i = 0; i < field.rows(); ++i) {
        for (int j = 0; j < field.cols(); ++j) {
            if (j) out << ",";
            out << detail::format_full(field.values(i, j));
        }
        out << "\n";
    }
}

struct LoadedField {
    ScalarField field;
    int filled_cells = 0;  // missing entries replaced by their nearest neighbor
};

/// Parses a rectangular numeric grid; empty cells and "NaN" count as missing
/// and are filled from the nearest valid cell (ties: row-major scan order).
inline LoadedField load_gridded_csv(const std::string& path) {
    auto in = detail::open_for_read(path);
    ScalarField field;
    std::vector<std::vector<double>> grid;
    std::vector<std::pair<int, int>> missing;
    std::string line;
    int line_no = 0;
    bool extent_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        if (trimmed.front() == '#') {
            const auto epos = trimmed.find("extent:");
            if (epos != std::string::npos) {
                std::string rest = trimmed.substr(epos + 7);
                const auto upos = rest.find("units:");
                if (upos != std::string::npos) {
                    field.units = detail::trim(rest.substr(upos + 6));
                    rest = rest.substr(0, upos);
                }
                const auto parts = detail::split_csv_line(detail::trim(rest));
                if (parts.size() != 4)
                    throw data_error(path + ":" + std::to_string(line_no) +
                                     ": extent needs 4 comma-separated values");
                const std::string where = path + ":" + std::to_string(line_no);
                field.x_min = detail::parse_double(parts[0], where);
                field.x_max = detail::parse_double(parts[1], where);
                field.y_min = detail::parse_double(parts[2], where);
                field.y_max = detail::parse_double(parts[3], where);
                extent_seen = true;
            }
            continue;
        }
        const auto cells = detail::split_csv_line(line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            std::string t = detail::trim(cell);
            std::transform(t.begin(), t.end(), t.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (t.empty() || t == "nan") {
                missing.emplace_back(static_cast<int>(grid.size()),
                                     static_cast<int>(row.size()));
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                row.push_back(detail::parse_double(cell, path + ":" + std::to_string(line_no)));
            }
        }
        if (!grid.empty() && row.size() != grid.front().size())
            throw data_error(path + ":" + std::to_string(line_no) + ": ragged row (expected " +
                             std::to_string(grid.front().size()) + " cells, found " +
                             std::to_string(row.size()) + ")");
        grid.push_back(std::move(row));
    }
    if (grid.empty()) throw data_error(path + ": no data rows");
    const int rows = static_cast<int>(grid.size());
    const int cols = static_cast<int>(grid.front().size());
    if (missing.size() == static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw data_error(path + ": every cell is missing");
    field.values.resize(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            field.values(i, j) = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (const auto& [mi, mj] : missing) {
        long best = std::numeric_limits<long>::max();
        double fill = 0;
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                if (std::isnan(field.values(i, j))) continue;
                const long d2 = static_cast<long>(i - mi) * (i - mi) +
                                static_cast<long>(j - mj) * (j - mj);
                if (d2 < best) {
                    best = d2;
                    fill = field.values(i, j);
                }
            }
        }
        field.values(mi, mj) = fill;
    }
    if (!extent_seen) {
        field.x_min = 0;
        field.x_max = 1;
        field.y_min = 0;
        field.y_max = 1;
    }
    field.validate();
    return {std::move(field), static_cast<int>(missing.size())};
}

/// Maps the gridded field onto the robots' initial states. Grid graphs read
/// row-major; chains traverse the rows boustrophedon (serpentine), so chain
/// neighbors stay spatially adjacent.
inline StateVector field_to_state(const ScalarField& field, const Graph& g) {
    field.validate();
    const int rows = field.rows();
    const int cols = field.cols();
    if (g.topology() == Topology::grid) {
        const GridDims dims = *g.grid_dims();
        if (dims.l1 != cols || dims.l2 != rows)
            throw config_error("field_to_state: field is " + std::to_string(cols) + "x" +
                               std::to_string(rows) + " (cols x rows), grid is " +
                               std::to_string(dims.l1) + "x" + std::to_string(dims.l2));
        StateVector x(g.num_nodes());
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) x(r * cols + c) = field.values(r, c);
        return x;
    }
    if (g.topology() == Topology::chain) {
        if (g.num_nodes() != rows * cols)
            throw config_error("field_to_state: chain has " + std::to_string(g.num_nodes()) +
                               " nodes, field has " + std::to_string(rows * cols) + " cells");
        StateVector x(g.num_nodes());
        int node = 0;
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const int col = (r % 2 == 0) ? c : cols - 1 - c;
                x(node++) = field.values(r, col);
            }
        }
        return x;
    }
    throw config_error("field_to_state: field mapping is defined for chain and grid graphs");
}

/// Inverse of field_to_state; `like` supplies the grid shape, extent and units.
inline ScalarField state_to_field(const StateVector& x, const Graph& g,
                                  const ScalarField& like) {
    like.validate();
    const int rows = like.rows();
    const int cols = like.cols();
    if (x.size() != rows * cols)
        throw config_error("state_to_field: state size does not match field shape");
    ScalarField out = like;
    if (g.topology() == Topology::grid) {
        const GridDims dims = *g.grid_dims();
        if (dims.l1 != cols || dims.l2 != rows)
            throw config_error("state_to_field: field shape does not match grid dims");
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) out.values(r, c) = x(r * cols + c);
        return out;
    }
    if (g.topology() == Topology::chain) {
        if (g.num_nodes() != rows * cols)
            throw config_error("state_to_field: chain size does not match field shape");
        int node = 0;
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const int col = (r % 2 == 0) ? c : cols - 1 - c;
                out.values(r, col) = x(node++);
            }
        }
        return out;
    }
    throw config_error("state_to_field: field mapping is defined for chain and grid graphs");
}

/// Pointwise |estimate - actual| with summary statistics. l2_relative falls
/// back to the absolute error norm when the actual field is identically zero.
struct ErrorMap {
    ScalarField values;
    double l2_relative = 0;
    double max_abs = 0;
};

inline ErrorMap error_map(const ScalarField& actual, const StateVector& estimated,
                          const Graph& g) {
    const StateVector truth = field_to_state(actual, g);
    if (estimated.size() != truth.size())
        throw config_error("error_map: estimate size does not match field");
    const StateVector err = (estimated - truth).cwiseAbs();
    ErrorMap map;
    map.values = state_to_field(err, g, actual);
    map.max_abs = err.maxCoeff();
    const double denom = truth.norm();
    map.l2_relative = denom > 0 ? (estimated - truth).norm() / denom : (estimated - truth).norm();
    return map;
}

}  // namespace fieldrecon
