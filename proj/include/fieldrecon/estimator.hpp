#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fieldrecon/detail/io.hpp"
#include "fieldrecon/dynamics.hpp"
#include "fieldrecon/errors.hpp"

namespace fieldrecon {

/// Step-size rules for the descent iteration x <- x - alpha * grad.
struct FixedStep {
    double alpha = 1e-2;
};
struct BacktrackingStep {
    double c = 1e-4;   // Armijo sufficient-decrease constant
    double rho = 0.5;  // shrink factor
};
/// Barzilai-Borwein spectral step alpha_k = (s^T s)/(s^T y). Non-monotone but
/// far faster than a fixed step on badly conditioned instances; keeps the
/// plain gradient-iteration form.
struct BarzilaiBorweinStep {};

using StepRule = std::variant<FixedStep, BacktrackingStep, BarzilaiBorweinStep>;

struct EstimationConfig {
    double lambda = 0.0;    // Tikhonov weight, >= 0
    int max_iters = 5000;
    double grad_tol = 0.0;  // <= 0 resolves to 1e-8 * ||observed samples||_F
    StepRule step_rule = BacktrackingStep{};
    std::optional<StateVector> init;  // empty = zeros

    /// Defaults with the size-scaled regularizer lambda = 1e-6 * k * T.
    static EstimationConfig defaults_for(const NetworkSystem& sys, const Trajectory& observed) {
        EstimationConfig cfg;
        cfg.lambda = 1e-6 * sys.k() * observed.duration();
        return cfg;
    }
};

struct EstimationResult {
    StateVector x0_hat;
    std::vector<double> objective_history;  // J at the initial point, then per step
    std::vector<double> grad_norm_history;
    int iterations = 0;
    bool converged = false;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["x0_hat"] = std::vector<double>(x0_hat.data(), x0_hat.data() + x0_hat.size());
        j["objective_history"] = objective_history;
        j["grad_norm_history"] = grad_norm_history;
        j["iterations"] = iterations;
        j["converged"] = converged;
        return j;
    }

    void save_json(const std::string& path) const {
        auto out = detail::open_for_write(path);
        out << to_json().dump(2) << "\n";
    }
};

namespace detail {

/// Sampled-data view of the inverse problem on one system/trajectory pair.
///
/// The mismatch integral is discretized by the trapezoid rule on the sample
/// grid; the gradient marches the adjoint state forward in reversed time with
/// exact exp(-L dt) steps and the same trapezoid weights on the forcing, so it
/// is the exact gradient of the discretized objective (finite differences of
/// objective() close to roundoff).
class SampledInverseProblem {
public:
    SampledInverseProblem(const NetworkSystem& sys, const Trajectory& observed, double lambda)
        : sys_(sys), observed_(observed.samples), lambda_(lambda) {
        if (lambda < 0) throw config_error("estimator: lambda must be nonnegative");
        if (observed.output_count() != sys.k())
            throw data_error("estimator: trajectory has " +
                             std::to_string(observed.output_count()) + " outputs, system has k=" +
                             std::to_string(sys.k()));
        if (std::abs(observed.times(0)) > 1e-12)
            throw data_error("estimator: trajectory must start at t=0");
        dt_ = observed.sample_period();  // also validates uniformity
        m_ = observed.sample_count();
        weights_ = Eigen::VectorXd::Constant(m_, dt_);
        weights_(0) *= 0.5;
        weights_(m_ - 1) *= 0.5;
        cv_ = sys.output_modes();
        decay_.resize(m_, sys.n());
        for (int i = 0; i < m_; ++i)
            decay_.row(i) = (-observed.times(i) * sys.eigenvalues().array()).exp();
        step_decay_ = (-dt_ * sys.eigenvalues().array()).exp();
    }

    /// m x k predicted outputs for initial state x0.
    Eigen::MatrixXd outputs(const StateVector& x0) const {
        const Eigen::VectorXd modal0 = sys_.eigenvectors().transpose() * x0;
        return (decay_.array().rowwise() * modal0.transpose().array()).matrix() *
               cv_.transpose();
    }

    double objective(const StateVector& x0) const {
        const Eigen::MatrixXd residual = outputs(x0) - observed_;
        const double mismatch = (residual.rowwise().squaredNorm().array() *
                                 weights_.array()).sum();
        return 0.5 * mismatch + 0.5 * lambda_ * x0.squaredNorm();
    }

    /// Adjoint gradient: P(T) + lambda x0, with dP/dtau = -L P + C^T u(tau)
    /// marched forward in tau over the reversed residuals.
    StateVector gradient(const StateVector& x0) const {
        return adjoint_terminal(outputs(x0) - observed_) + lambda_ * x0;
    }

    /// Gauss-Newton (Hessian) action: same pipeline with zero data.
    StateVector hessian_vec(const StateVector& v) const {
        return adjoint_terminal(outputs(v)) + lambda_ * v;
    }

    /// Largest Hessian eigenvalue estimate by power iteration (Lipschitz
    /// bound for the gradient); 10 iterations from a deterministic start.
    double lipschitz_estimate() const {
        StateVector v = StateVector::Ones(sys_.n());
        for (int i = 0; i < sys_.n(); ++i) v(i) += 0.01 * (i + 1) / sys_.n();
        v /= v.norm();
        double mu = 1.0;
        for (int it = 0; it < 10; ++it) {
            StateVector hv = hessian_vec(v);
            mu = hv.norm();
            if (mu <= 0 || !std::isfinite(mu)) return std::max(lambda_, 1.0);
            v = hv / mu;
        }
        return mu;
    }

    double lambda() const { return lambda_; }
    int sample_count() const { return m_; }
    double observed_norm() const { return observed_.norm(); }

private:
    StateVector adjoint_terminal(const Eigen::MatrixXd& residual) const {
        // Modal adjoint state; an impulse of weight w_i at tau = T - t_i
        // reproduces the trapezoid-weighted convolution exactly, which keeps
        // this the gradient of objective() to roundoff.
        const Eigen::MatrixXd forcing = residual * cv_;  // row i = (C^T r_i) in modal coords
        Eigen::VectorXd p = Eigen::VectorXd::Zero(sys_.n());
        for (int j = 0; j < m_; ++j) {
            const int i = m_ - 1 - j;  // forcing index in forward time
            p += weights_(i) * forcing.row(i).transpose();
            if (j + 1 < m_) p = step_decay_.cwiseProduct(p);
        }
        return sys_.eigenvectors() * p;
    }

    const NetworkSystem& sys_;
    Eigen::MatrixXd observed_;
    double lambda_;
    double dt_ = 0;
    int m_ = 0;
    Eigen::VectorXd weights_;     // trapezoid weights, physical time units
    Eigen::MatrixXd cv_;          // C * V
    Eigen::MatrixXd decay_;       // exp(-eig_j * t_i)
    Eigen::VectorXd step_decay_;  // exp(-eig_j * dt)
};

}  // namespace detail

/// Tikhonov-regularized output-mismatch functional
///   J(x0) = 1/2 integral of ||y(t) - yhat(t)||^2 + lambda/2 ||x0||^2,
/// discretized by the trapezoid rule on the trajectory's sample grid.
inline double objective(const NetworkSystem& sys, const StateVector& x0,
                        const Trajectory& observed, double lambda) {
    if (x0.size() != sys.n()) throw config_error("objective: state size mismatch");
    return detail::SampledInverseProblem(sys, observed, lambda).objective(x0);
}

/// Gradient of objective() computed by the forward adjoint march; exact for
/// the discretized functional up to roundoff.
inline StateVector gradient(const NetworkSystem& sys, const StateVector& x0,
                            const Trajectory& observed, double lambda) {
    if (x0.size() != sys.n()) throw config_error("gradient: state size mismatch");
    return detail::SampledInverseProblem(sys, observed, lambda).gradient(x0);
}

/// Gradient descent on the convex functional. Returns the best iterate seen.
inline EstimationResult estimate(const NetworkSystem& sys, const Trajectory& observed,
                                 const EstimationConfig& cfg) {
    if (cfg.max_iters < 1) throw config_error("estimate: max_iters must be positive");
    const detail::SampledInverseProblem problem(sys, observed, cfg.lambda);
    const double grad_tol =
        cfg.grad_tol > 0 ? cfg.grad_tol : 1e-8 * problem.observed_norm();

    StateVector x = cfg.init ? *cfg.init : StateVector::Zero(sys.n());
    if (x.size() != sys.n()) throw config_error("estimate: init state size mismatch");

    const double alpha0 = 1.0 / problem.lipschitz_estimate();

    EstimationResult result;
    double fx = problem.objective(x);
    StateVector g = problem.gradient(x);
    result.objective_history.push_back(fx);
    result.grad_norm_history.push_back(g.norm());

    StateVector best_x = x;
    double best_f = fx;
    StateVector prev_x, prev_g;
    double bb_alpha = alpha0;
    int ascent_run = 0;

    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        if (g.norm() <= grad_tol) {
            result.converged = true;
            break;
        }

        double alpha = alpha0;
        if (std::holds_alternative<FixedStep>(cfg.step_rule)) {
            alpha = std::get<FixedStep>(cfg.step_rule).alpha;
        } else if (const auto* bt = std::get_if<BacktrackingStep>(&cfg.step_rule)) {
            const double gg = g.squaredNorm();
            alpha = alpha0;
            int shrinks = 0;
            while (problem.objective(x - alpha * g) > fx - bt->c * alpha * gg) {
                alpha *= bt->rho;
                if (++shrinks > 80)
                    throw numeric_error("estimate: line search failed to find a descent step");
            }
        } else {
            alpha = (it == 0) ? alpha0 : bb_alpha;
        }

        const StateVector x_new = x - alpha * g;
        const double f_new = problem.objective(x_new);
        if (!std::isfinite(f_new))
            throw numeric_error("estimate: objective became non-finite (step too large?)");

        if (std::holds_alternative<FixedStep>(cfg.step_rule)) {
            ascent_run = (f_new > fx) ? ascent_run + 1 : 0;
            if (ascent_run >= 10)
                throw numeric_error(
                    "estimate: objective increased for 10 consecutive iterations under the "
                    "fixed step rule; use a smaller alpha or the backtracking rule");
        }

        prev_x = x;
        prev_g = g;
        x = x_new;
        fx = f_new;
        g = problem.gradient(x);

        if (std::holds_alternative<BarzilaiBorweinStep>(cfg.step_rule)) {
            const StateVector s = x - prev_x;
            const StateVector y = g - prev_g;
            const double sy = s.dot(y);
            bb_alpha = (sy > 0 && std::isfinite(sy)) ? s.squaredNorm() / sy : alpha0;
        }

        result.objective_history.push_back(fx);
        result.grad_norm_history.push_back(g.norm());
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    if (it == cfg.max_iters && g.norm() <= grad_tol) result.converged = true;

    result.x0_hat = best_x;
    result.iterations = it;
    return result;
}

}  // namespace fieldrecon
