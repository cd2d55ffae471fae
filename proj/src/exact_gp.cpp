#include "osgpcp/exact_gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "osgpcp/errors.hpp"

namespace osgpcp {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-6;

// Cholesky of K + sn2 I + jitter I. Jitter starts at 1e-10 * sigma_theta2 and
// grows x10 per failed attempt up to 1e-6 * sigma_theta2.
Eigen::LLT<Eigen::MatrixXd> factor_noisy_gram(const TrainingBuffer& buffer,
                                              const KernelHyperparams& params) {
    const Eigen::MatrixXd gram = gram_matrix(buffer, params);
    const auto n = gram.rows();
    for (double jitter = kJitterStart; jitter <= kJitterMax * (1.0 + 1e-9); jitter *= 10.0) {
        Eigen::MatrixXd a = gram;
        a.diagonal().array() += params.sigma_n2 + jitter * params.sigma_theta2;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() == Eigen::Success) {
            return llt;
        }
    }
    throw NumericalError("Gram matrix of " + std::to_string(n) +
                         " points is not positive definite even with jitter");
}

double variance_of(const Eigen::VectorXd& v) {
    if (v.size() < 2) return 0.0;
    return (v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1);
}

}  // namespace

void TrainingBuffer::add(const Eigen::VectorXd& x, double y) {
    if (x.size() == 0) {
        throw InputError("TrainingBuffer: input must have dimension >= 1");
    }
    if (!inputs_.empty() && x.size() != inputs_.front().size()) {
        throw InputError("TrainingBuffer: input dimension " + std::to_string(x.size()) +
                         " differs from buffer dimension " + std::to_string(inputs_.front().size()));
    }
    if (!std::isfinite(y) || !x.allFinite()) {
        throw InputError("TrainingBuffer: non-finite sample");
    }
    inputs_.push_back(x);
    targets_.conservativeResize(targets_.size() + 1);
    targets_(targets_.size() - 1) = y;
}

Eigen::MatrixXd gram_matrix(const TrainingBuffer& buffer, const KernelHyperparams& params) {
    const auto n = static_cast<Eigen::Index>(buffer.size());
    Eigen::MatrixXd k(n, n);
    const auto& xs = buffer.inputs();
    for (Eigen::Index j = 0; j < n; ++j) {
        k(j, j) = params.sigma_theta2;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double v = rbf_eval(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)], params);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

PredictiveGaussian gp_predict(const TrainingBuffer& buffer, const KernelHyperparams& params,
                              const Eigen::VectorXd& x) {
    params.validate();
    const double prior = rbf_eval(x, x, params);
    if (buffer.empty()) {
        return {0.0, prior + params.sigma_n2};
    }
    if (static_cast<std::size_t>(x.size()) != buffer.input_dim()) {
        throw InputError("gp_predict: query dimension does not match the training inputs");
    }
    const auto llt = factor_noisy_gram(buffer, params);
    Eigen::VectorXd k(static_cast<Eigen::Index>(buffer.size()));
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        k(static_cast<Eigen::Index>(i)) = rbf_eval(buffer.inputs()[i], x, params);
    }
    const Eigen::VectorXd weights = llt.solve(buffer.targets());
    const Eigen::VectorXd v = llt.matrixL().solve(k);
    const double latent = std::clamp(prior - v.squaredNorm(), 0.0, prior);
    return {k.dot(weights), latent + params.sigma_n2};
}

double log_marginal_likelihood(const TrainingBuffer& buffer, const KernelHyperparams& params) {
    params.validate();
    if (buffer.empty()) {
        return 0.0;
    }
    const auto llt = factor_noisy_gram(buffer, params);
    const Eigen::VectorXd alpha = llt.matrixL().solve(buffer.targets());
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const double t = static_cast<double>(buffer.size());
    return -0.5 * alpha.squaredNorm() - 0.5 * log_det - 0.5 * t * std::log(2.0 * std::numbers::pi);
}

FitResult fit_hyperparams(const TrainingBuffer& buffer, const SearchConfig& search) {
    if (buffer.empty()) {
        throw InputError("fit_hyperparams: training buffer is empty");
    }
    if (search.grid_points < 2 || !(search.decades > 0.0) || search.refine_iterations < 0) {
        throw InputError("fit_hyperparams: invalid search configuration");
    }

    // Data-scale centres for each axis (log10 space).
    const double y_var = variance_of(buffer.targets());
    const double y_scale = y_var > 1e-12 ? y_var : std::max(buffer.targets().squaredNorm() / static_cast<double>(buffer.size()), 1.0);
    double x_scale = 0.0;
    for (std::size_t d = 0; d < buffer.input_dim(); ++d) {
        Eigen::VectorXd col(static_cast<Eigen::Index>(buffer.size()));
        for (std::size_t i = 0; i < buffer.size(); ++i) {
            col(static_cast<Eigen::Index>(i)) = buffer.inputs()[i](static_cast<Eigen::Index>(d));
        }
        x_scale += variance_of(col);
    }
    if (!(x_scale > 1e-12)) x_scale = 1.0;
    const std::array<double, 3> centre{std::log10(y_scale), std::log10(x_scale), std::log10(y_scale)};

    FitResult result;
    result.log_evidence = -std::numeric_limits<double>::infinity();
    std::array<double, 3> best_point{};

    auto evaluate = [&](const std::array<double, 3>& point) {
        const KernelHyperparams p{std::pow(10.0, point[0]), std::pow(10.0, point[1]),
                                  std::pow(10.0, point[2])};
        double ev = -std::numeric_limits<double>::infinity();
        if (p.valid()) {
            try {
                ev = log_marginal_likelihood(buffer, p);
            } catch (const NumericalError&) {
            }
        }
        if (!std::isfinite(ev)) ev = -std::numeric_limits<double>::infinity();
        result.evaluated.push_back({p, ev});
        if (ev > result.log_evidence) {
            result.log_evidence = ev;
            result.params = p;
            best_point = point;
        }
        return ev;
    };

    const double spacing = 2.0 * search.decades / static_cast<double>(search.grid_points - 1);
    for (int a = 0; a < search.grid_points; ++a) {
        for (int b = 0; b < search.grid_points; ++b) {
            for (int c = 0; c < search.grid_points; ++c) {
                evaluate({centre[0] - search.decades + a * spacing,
                          centre[1] - search.decades + b * spacing,
                          centre[2] - search.decades + c * spacing});
            }
        }
    }
    if (!std::isfinite(result.log_evidence)) {
        throw NumericalError("fit_hyperparams: no grid candidate produced a finite evidence");
    }

    // Coordinate refinement: sweep the axes at a fixed step until no move
    // improves the evidence, then halve the step.
    double step = spacing / 2.0;
    for (int iter = 0; iter < search.refine_iterations; ++iter, step /= 2.0) {
        for (int sweep = 0; sweep < 50; ++sweep) {
            bool moved = false;
            for (int axis = 0; axis < 3; ++axis) {
                for (double dir : {-1.0, 1.0}) {
                    auto trial = best_point;
                    trial[static_cast<std::size_t>(axis)] += dir * step;
                    const double before = result.log_evidence;
                    if (evaluate(trial) > before) moved = true;
                }
            }
            if (!moved) break;
        }
    }
    return result;
}

}  // namespace osgpcp
