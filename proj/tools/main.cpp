// Command-line front end: wires graph construction, simulation, estimation,
// and the topology metrics into reproducible experiments that emit plot-ready
// CSV files plus a resolved-config provenance record per run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fieldrecon/dynamics.hpp"
#include "fieldrecon/errors.hpp"
#include "fieldrecon/estimator.hpp"
#include "fieldrecon/field.hpp"
#include "fieldrecon/graph.hpp"
#include "fieldrecon/observability.hpp"
#include "fieldrecon/robustness.hpp"
#include "fieldrecon/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reference Gaussian bump for the 1m x 1m benchmark scene.
constexpr double kGaussCenterX = 0.5;
constexpr double kGaussCenterY = 0.5;
constexpr double kGaussSigma = 0.2;
constexpr double kGaussAmplitude = 1.0;

std::string scalar_text(const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

/// Applies a JSON config document (keys = long option names without dashes)
/// by appending the corresponding flags to the argument list. Flags given
/// explicitly on the command line win.
std::vector<std::string> inject_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    auto in = fieldrecon::detail::open_for_read(config_path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw fieldrecon::config_error(config_path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw fieldrecon::config_error(config_path + ": config must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string flag = "--" + it.key();
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (given) continue;
        args.push_back(flag);
        if (it->is_array())
            for (const auto& e : *it) args.push_back(scalar_text(e));
        else
            args.push_back(scalar_text(*it));
    }
    return args;
}

struct SystemSpec {
    std::string topology;
    int n = 0;       // chain size
    int l = 0;       // square grid side
    int l1 = 0;      // grid width (nodes per lattice row)
    int l2 = 0;      // grid height (lattice rows)
    int k = 0;

    void add_flags(CLI::App* cmd, bool k_required = true) {
        cmd->add_option("--topology", topology, "Network topology: chain or grid")
            ->required()
            ->check(CLI::IsMember({"chain", "grid"}));
        cmd->add_option("--n", n, "Number of nodes (chain)");
        cmd->add_option("--l", l, "Square grid side; implies n = l*l");
        cmd->add_option("--l1", l1, "Grid width (nodes per lattice row)");
        cmd->add_option("--l2", l2, "Grid height (number of lattice rows)");
        auto* kopt = cmd->add_option("--k", k, "Number of accessible nodes (numbering prefix)");
        if (k_required) kopt->required();
    }

    /// Grid dims for laying out fields; optional for chains.
    std::optional<fieldrecon::GridDims> dims() const {
        if (l1 > 0 && l2 > 0) return fieldrecon::GridDims{l1, l2};
        if (l > 0) return fieldrecon::GridDims{l, l};
        if (topology == "chain" && n > 0) {
            const int side = static_cast<int>(std::lround(std::sqrt(double(n))));
            if (side * side == n) return fieldrecon::GridDims{side, side};
        }
        return std::nullopt;
    }

    fieldrecon::Graph build() const {
        if (topology == "chain") {
            int size = n;
            if (size == 0 && dims()) size = dims()->l1 * dims()->l2;
            if (size == 0)
                throw fieldrecon::config_error("chain topology needs --n (or --l/--l1/--l2)");
            return fieldrecon::Graph::chain(size);
        }
        const auto d = dims();
        if (!d) throw fieldrecon::config_error("grid topology needs --l or --l1/--l2");
        return fieldrecon::Graph::grid(d->l1, d->l2);
    }

    json to_json() const {
        json j;
        j["topology"] = topology;
        if (n) j["n"] = n;
        if (l) j["l"] = l;
        if (l1) j["l1"] = l1;
        if (l2) j["l2"] = l2;
        j["k"] = k;
        j["accessible"] = "prefix";
        return j;
    }
};

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw fieldrecon::data_error("cannot create output directory '" + out + "'");
    return dir;
}

void write_provenance(const fs::path& dir, const std::string& command, json resolved) {
    resolved["tool"] = "fieldrecon";
    resolved["version"] = fieldrecon::version;
    resolved["command"] = command;
    auto out = fieldrecon::detail::open_for_write((dir / "config.json").string());
    out << resolved.dump(2) << "\n";
}

void save_state_csv(const Eigen::VectorXd& x, const fs::path& path) {
    auto out = fieldrecon::detail::open_for_write(path.string());
    out << "x0\n";
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out << fieldrecon::detail::format_full(x(i)) << "\n";
}

struct FieldSpec {
    std::string spec = "gaussian";   // gaussian | synthetic | constant:V | csv:PATH
    std::string field_config;       // JSON overriding the Gaussian parameters

    /// Materializes the field (needs grid dims except for csv sources).
    fieldrecon::ScalarField build(const std::optional<fieldrecon::GridDims>& dims) const {
        if (spec.rfind("csv:", 0) == 0) {
            auto loaded = fieldrecon::load_gridded_csv(spec.substr(4));
            if (loaded.filled_cells > 0)
                std::cerr << "note: filled " << loaded.filled_cells
                          << " missing cells by nearest neighbor\n";
            return std::move(loaded.field);
        }
        if (!dims)
            throw fieldrecon::config_error(
                "field '" + spec + "' needs grid dimensions (--l or --l1/--l2, or a square --n)");
        if (spec == "gaussian") {
            double cx = kGaussCenterX, cy = kGaussCenterY;
            double sx = kGaussSigma, sy = kGaussSigma, amp = kGaussAmplitude;
            if (!field_config.empty()) {
                auto in = fieldrecon::detail::open_for_read(field_config);
                json doc;
                try {
                    in >> doc;
                } catch (const json::exception& e) {
                    throw fieldrecon::data_error(field_config + ": invalid JSON: " + e.what());
                }
                if (doc.contains("center")) {
                    cx = doc["center"].at(0).get<double>();
                    cy = doc["center"].at(1).get<double>();
                }
                if (doc.contains("sigma")) {
                    sx = doc["sigma"].at(0).get<double>();
                    sy = doc["sigma"].at(1).get<double>();
                }
                if (doc.contains("amplitude")) amp = doc["amplitude"].get<double>();
            }
            return fieldrecon::gaussian_field(dims->l1, dims->l2, {cx, cy}, {sx, sy}, amp);
        }
        if (spec == "synthetic") return fieldrecon::synthetic_field(dims->l1, dims->l2);
        if (spec.rfind("constant:", 0) == 0) {
            const double v = fieldrecon::detail::parse_double(spec.substr(9), "--field constant");
            fieldrecon::ScalarField f;
            f.values = Eigen::MatrixXd::Constant(dims->l2, dims->l1, v);
            return f;
        }
        throw fieldrecon::config_error("unknown field spec '" + spec +
                                       "' (expected gaussian, synthetic, constant:V, csv:PATH)");
    }
};

struct SimulateOutputs {
    fieldrecon::Graph graph;
    fieldrecon::NetworkSystem system;
    Eigen::VectorXd x0;
    std::optional<fieldrecon::ScalarField> field;
    fieldrecon::Trajectory trajectory;
};

SimulateOutputs run_simulation(const SystemSpec& sys_spec, const FieldSpec& field_spec,
                               double horizon, double rate, double noise_sd,
                               std::uint64_t seed) {
    fieldrecon::Graph graph = sys_spec.build();
    std::optional<fieldrecon::ScalarField> field;
    Eigen::VectorXd x0;
    if (field_spec.spec.rfind("constant:", 0) == 0 && !sys_spec.dims()) {
        const double v =
            fieldrecon::detail::parse_double(field_spec.spec.substr(9), "--field constant");
        x0 = Eigen::VectorXd::Constant(graph.num_nodes(), v);
    } else {
        field = field_spec.build(sys_spec.dims());
        x0 = fieldrecon::field_to_state(*field, graph);
    }
    fieldrecon::NetworkSystem system = fieldrecon::NetworkSystem::prefix(graph, sys_spec.k);
    fieldrecon::Trajectory trajectory = system.simulate(x0, horizon, rate);
    if (noise_sd > 0) fieldrecon::add_measurement_noise(trajectory, noise_sd, seed);
    return {std::move(graph), std::move(system), std::move(x0), std::move(field),
            std::move(trajectory)};
}

int cmd_simulate(const SystemSpec& sys_spec, const FieldSpec& field_spec, double horizon,
                 double rate, double noise_sd, std::uint64_t seed, const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    auto sim = run_simulation(sys_spec, field_spec, horizon, rate, noise_sd, seed);

    sim.trajectory.save_csv((dir / "trajectory.csv").string());
    save_state_csv(sim.x0, dir / "x0.csv");
    if (sim.field) fieldrecon::save_field_csv(*sim.field, (dir / "field_actual.csv").string());
    {
        auto out_graph = fieldrecon::detail::open_for_write((dir / "graph.json").string());
        out_graph << sim.graph.to_json().dump(2) << "\n";
    }

    json cfg = sys_spec.to_json();
    cfg["field"] = field_spec.spec;
    cfg["T"] = horizon;
    cfg["rate"] = rate;
    cfg["noise_sd"] = noise_sd;
    cfg["seed"] = seed;
    cfg["out"] = out;
    write_provenance(dir, "simulate", cfg);
    std::cout << cfg.dump(2) << "\n";
    return 0;
}

struct EstimateOptions {
    std::string trajectory_path;
    std::string truth_field_path;
    double lambda = -1;  // < 0: size-scaled default
    int max_iters = 5000;
    double grad_tol = 0;
    std::string step_rule = "backtracking";
    double alpha = 1e-2;

    fieldrecon::EstimationConfig resolve(const fieldrecon::NetworkSystem& sys,
                                         const fieldrecon::Trajectory& observed) const {
        fieldrecon::EstimationConfig cfg =
            fieldrecon::EstimationConfig::defaults_for(sys, observed);
        if (lambda >= 0) cfg.lambda = lambda;
        cfg.max_iters = max_iters;
        cfg.grad_tol = grad_tol;
        if (step_rule == "backtracking")
            cfg.step_rule = fieldrecon::BacktrackingStep{};
        else if (step_rule == "bb")
            cfg.step_rule = fieldrecon::BarzilaiBorweinStep{};
        else if (step_rule == "fixed")
            cfg.step_rule = fieldrecon::FixedStep{alpha};
        else
            throw fieldrecon::config_error("unknown step rule '" + step_rule + "'");
        return cfg;
    }

    void add_flags(CLI::App* cmd, bool trajectory_required) {
        if (trajectory_required)
            cmd->add_option("--trajectory", trajectory_path, "Observed trajectory CSV")
                ->required();
        cmd->add_option("--truth-field", truth_field_path,
                        "Ground-truth field CSV for error reporting");
        cmd->add_option("--lambda", lambda, "Tikhonov weight (default: 1e-6 * k * T)");
        cmd->add_option("--max-iters", max_iters, "Iteration budget")->check(CLI::PositiveNumber);
        cmd->add_option("--grad-tol", grad_tol,
                        "Gradient-norm stopping threshold (default: 1e-8 * ||Y||)");
        cmd->add_option("--step-rule", step_rule, "Step rule: backtracking, bb, or fixed")
            ->check(CLI::IsMember({"backtracking", "bb", "fixed"}));
        cmd->add_option("--alpha", alpha, "Step size for the fixed rule");
    }

    json to_json(const fieldrecon::EstimationConfig& resolved) const {
        json j;
        j["lambda"] = resolved.lambda;
        j["max_iters"] = resolved.max_iters;
        j["grad_tol"] = resolved.grad_tol;
        j["step_rule"] = step_rule;
        if (step_rule == "fixed") j["alpha"] = alpha;
        return j;
    }
};

/// Shared by `estimate` and the tail of `pipeline`.
int finish_estimate(const fieldrecon::Graph& graph, const fieldrecon::NetworkSystem& system,
                    const fieldrecon::Trajectory& observed, const EstimateOptions& opts,
                    const std::optional<fieldrecon::ScalarField>& truth, const fs::path& dir,
                    json cfg) {
    const fieldrecon::EstimationConfig est_cfg = opts.resolve(system, observed);
    const fieldrecon::EstimationResult result = fieldrecon::estimate(system, observed, est_cfg);
    result.save_json((dir / "result.json").string());

    json summary;
    summary["iterations"] = result.iterations;
    summary["converged"] = result.converged;
    summary["final_objective"] = result.objective_history.back();
    if (truth) {
        const fieldrecon::ErrorMap map = fieldrecon::error_map(*truth, result.x0_hat, graph);
        fieldrecon::save_field_csv(map.values, (dir / "error_map.csv").string());
        fieldrecon::save_field_csv(fieldrecon::state_to_field(result.x0_hat, graph, *truth),
                                   (dir / "field_estimated.csv").string());
        summary["relative_l2_error"] = map.l2_relative;
        summary["max_abs_error"] = map.max_abs;
    }
    {
        auto out = fieldrecon::detail::open_for_write((dir / "summary.json").string());
        out << summary.dump(2) << "\n";
    }
    cfg["estimator"] = opts.to_json(est_cfg);
    write_provenance(dir, cfg.value("command", "estimate"), cfg);

    std::cout << "iterations: " << result.iterations
              << (result.converged ? " (converged)" : " (budget reached)") << "\n";
    std::cout << "final objective: "
              << fieldrecon::detail::format_full(result.objective_history.back()) << "\n";
    if (truth)
        std::cout << "relative L2 error: "
                  << fieldrecon::detail::format_full(summary["relative_l2_error"].get<double>())
                  << "\n";
    return 0;
}

int cmd_estimate(const SystemSpec& sys_spec, const EstimateOptions& opts,
                 const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    const fieldrecon::Graph graph = sys_spec.build();
    const fieldrecon::Trajectory observed =
        fieldrecon::Trajectory::load_csv(opts.trajectory_path);
    if (observed.output_count() != sys_spec.k)
        throw fieldrecon::data_error("trajectory has " +
                                     std::to_string(observed.output_count()) +
                                     " output columns but --k is " + std::to_string(sys_spec.k));
    const fieldrecon::NetworkSystem system = fieldrecon::NetworkSystem::prefix(graph, sys_spec.k);
    std::optional<fieldrecon::ScalarField> truth;
    if (!opts.truth_field_path.empty())
        truth = fieldrecon::load_gridded_csv(opts.truth_field_path).field;

    json cfg = sys_spec.to_json();
    cfg["command"] = "estimate";
    cfg["trajectory"] = opts.trajectory_path;
    if (truth) cfg["truth_field"] = opts.truth_field_path;
    cfg["out"] = out;
    return finish_estimate(graph, system, observed, opts, truth, dir, std::move(cfg));
}

int cmd_pipeline(const SystemSpec& sys_spec, const FieldSpec& field_spec, double horizon,
                 double rate, double noise_sd, std::uint64_t seed, const EstimateOptions& opts,
                 const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    auto sim = run_simulation(sys_spec, field_spec, horizon, rate, noise_sd, seed);
    sim.trajectory.save_csv((dir / "trajectory.csv").string());
    save_state_csv(sim.x0, dir / "x0.csv");
    if (sim.field) fieldrecon::save_field_csv(*sim.field, (dir / "field_actual.csv").string());
    {
        auto out_graph = fieldrecon::detail::open_for_write((dir / "graph.json").string());
        out_graph << sim.graph.to_json().dump(2) << "\n";
    }

    json cfg = sys_spec.to_json();
    cfg["command"] = "pipeline";
    cfg["field"] = field_spec.spec;
    cfg["T"] = horizon;
    cfg["rate"] = rate;
    cfg["noise_sd"] = noise_sd;
    cfg["seed"] = seed;
    cfg["out"] = out;
    return finish_estimate(sim.graph, sim.system, sim.trajectory, opts, sim.field, dir,
                           std::move(cfg));
}

int cmd_gramian(std::vector<int> sizes, double horizon, int num_ratios,
                std::vector<double> ratios, int numeric_limit, const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    if (ratios.empty()) {
        for (int i = 1; i <= num_ratios; ++i)
            ratios.push_back(static_cast<double>(i) / num_ratios);
    }
    std::vector<fieldrecon::TopologyComparisonRow> rows;
    for (int n : sizes) {
        auto part = fieldrecon::compare_topologies(n, ratios, horizon, numeric_limit);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    fieldrecon::write_comparison_csv(rows, (dir / "gramian_bounds.csv").string());

    json cfg;
    cfg["n"] = sizes;
    cfg["T"] = horizon;
    cfg["ratios"] = ratios;
    cfg["numeric_limit"] = numeric_limit;
    cfg["accessible"] = "prefix";
    cfg["out"] = out;
    write_provenance(dir, "gramian", cfg);
    std::cout << "wrote " << rows.size() << " rows to "
              << (dir / "gramian_bounds.csv").string() << "\n";
    return 0;
}

int cmd_energy(const std::vector<int>& sizes, const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    const auto rows = fieldrecon::energy_sweep(sizes);
    fieldrecon::write_energy_csv(rows, (dir / "energy.csv").string());

    json cfg;
    cfg["sizes"] = sizes;
    cfg["out"] = out;
    write_provenance(dir, "energy", cfg);
    std::cout << "wrote " << rows.size() << " rows to " << (dir / "energy.csv").string() << "\n";
    return 0;
}

void attach_json_config(CLI::App* cmd) {
    // consumed by inject_config_args before parsing; declared here so the
    // flag is documented and accepted
    static std::string sink;
    cmd->add_option("--config", sink, "JSON file with option values (flags override)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scalar-field reconstruction over chain/grid consensus networks"};
    app.require_subcommand(1);

    // simulate
    SystemSpec sim_sys;
    FieldSpec sim_field;
    double sim_T = 50.0, sim_rate = 10.0, sim_noise_sd = 0.0;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate",
                                   "Generate ground truth and an observed trajectory");
    sim_sys.add_flags(sim);
    sim->add_option("--field", sim_field.spec,
                    "Initial field: gaussian, synthetic, constant:V, csv:PATH");
    sim->add_option("--field-config", sim_field.field_config,
                    "JSON with Gaussian center/sigma/amplitude");
    sim->add_option("--T", sim_T, "Observation horizon in seconds")->check(CLI::PositiveNumber);
    sim->add_option("--rate", sim_rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
    sim->add_option("--noise-sd", sim_noise_sd, "Measurement noise standard deviation");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "Output directory")->required();
    attach_json_config(sim);

    // estimate
    SystemSpec est_sys;
    EstimateOptions est_opts;
    std::string est_out;
    auto* est = app.add_subcommand("estimate",
                                   "Recover the initial field from a trajectory CSV");
    est_sys.add_flags(est);
    est_opts.add_flags(est, /*trajectory_required=*/true);
    est->add_option("--out", est_out, "Output directory")->required();
    attach_json_config(est);

    // pipeline
    SystemSpec pipe_sys;
    FieldSpec pipe_field;
    EstimateOptions pipe_opts;
    double pipe_T = 50.0, pipe_rate = 10.0, pipe_noise_sd = 0.0;
    std::uint64_t pipe_seed = 0;
    std::string pipe_out;
    auto* pipe = app.add_subcommand("pipeline", "simulate + estimate in one run");
    pipe_sys.add_flags(pipe);
    pipe->add_option("--field", pipe_field.spec,
                     "Initial field: gaussian, synthetic, constant:V, csv:PATH");
    pipe->add_option("--field-config", pipe_field.field_config,
                     "JSON with Gaussian center/sigma/amplitude");
    pipe->add_option("--T", pipe_T, "Observation horizon in seconds")->check(CLI::PositiveNumber);
    pipe->add_option("--rate", pipe_rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
    pipe->add_option("--noise-sd", pipe_noise_sd, "Measurement noise standard deviation");
    pipe->add_option("--seed", pipe_seed, "RNG seed");
    pipe_opts.add_flags(pipe, /*trajectory_required=*/false);
    pipe->add_option("--out", pipe_out, "Output directory")->required();
    attach_json_config(pipe);

    // gramian
    std::vector<int> gram_sizes{100, 10000};
    std::vector<double> gram_ratios;
    double gram_T = 50.0;
    int gram_num_ratios = 10, gram_numeric_limit = 400;
    std::string gram_out;
    auto* gram = app.add_subcommand("gramian",
                                    "Observability-Gramian trace bounds, chain vs grid");
    gram->add_option("--n", gram_sizes, "Node counts (perfect squares)");
    gram->add_option("--T", gram_T, "Horizon in seconds")->check(CLI::PositiveNumber);
    gram->add_option("--num-ratios", gram_num_ratios, "Evenly spaced sensor ratios")
        ->check(CLI::PositiveNumber);
    gram->add_option("--ratios", gram_ratios, "Explicit sensor-to-node ratios in (0,1]");
    gram->add_option("--numeric-limit", gram_numeric_limit,
                     "Largest n for which the exact trace is also computed");
    gram->add_option("--out", gram_out, "Output directory")->required();
    attach_json_config(gram);

    // energy
    std::vector<int> energy_sizes{4, 16, 36, 64, 100, 400, 2500, 10000};
    std::string energy_out;
    auto* energy = app.add_subcommand("energy",
                                      "First-order Laplacian energy, chain vs grid");
    energy->add_option("--sizes", energy_sizes, "Node counts (perfect squares)");
    energy->add_option("--out", energy_out, "Output directory")->required();
    attach_json_config(energy);

    try {
        std::vector<std::string> args = inject_config_args(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11's vector parse expects reversed args
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const fieldrecon::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fieldrecon::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;  // a bad --config file is a configuration problem
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_sys, sim_field, sim_T, sim_rate, sim_noise_sd, sim_seed,
                                sim_out);
        if (est->parsed()) return cmd_estimate(est_sys, est_opts, est_out);
        if (pipe->parsed())
            return cmd_pipeline(pipe_sys, pipe_field, pipe_T, pipe_rate, pipe_noise_sd,
                                pipe_seed, pipe_opts, pipe_out);
        if (gram->parsed())
            return cmd_gramian(gram_sizes, gram_T, gram_num_ratios, gram_ratios,
                               gram_numeric_limit, gram_out);
        if (energy->parsed()) return cmd_energy(energy_sizes, energy_out);
    } catch (const fieldrecon::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fieldrecon::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const fieldrecon::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
