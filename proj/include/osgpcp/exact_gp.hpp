#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "osgpcp/kernel.hpp"
#include "osgpcp/predictive.hpp"

namespace osgpcp {

/// Labelled data D_t = {X_t, y_t} for the exact (cubic-cost) GP.
class TrainingBuffer {
public:
    TrainingBuffer() = default;

    void add(const Eigen::VectorXd& x, double y);

    std::size_t size() const noexcept { return inputs_.size(); }
    bool empty() const noexcept { return inputs_.empty(); }
    /// 0 while empty.
    std::size_t input_dim() const noexcept { return inputs_.empty() ? 0 : static_cast<std::size_t>(inputs_.front().size()); }
    const std::vector<Eigen::VectorXd>& inputs() const noexcept { return inputs_; }
    const Eigen::VectorXd& targets() const noexcept { return targets_; }

private:
    std::vector<Eigen::VectorXd> inputs_;
    Eigen::VectorXd targets_;
};

/// Noise-free Gram matrix K_t.
Eigen::MatrixXd gram_matrix(const TrainingBuffer& buffer, const KernelHyperparams& params);

/// Exact GP predictive for a noisy target at x:
///   mean = k^T (K + sn2 I)^{-1} y,  variance = k(x,x) - k^T (K + sn2 I)^{-1} k + sn2.
/// The returned variance is clamped into [sn2, k(x,x) + sn2].
PredictiveGaussian gp_predict(const TrainingBuffer& buffer, const KernelHyperparams& params,
                              const Eigen::VectorXd& x);

/// Gaussian evidence log p(y | X) = -1/2 y^T A^{-1} y - 1/2 log|A| - t/2 log(2 pi),
/// with A = K + sn2 I. Returns 0 for an empty buffer.
double log_marginal_likelihood(const TrainingBuffer& buffer, const KernelHyperparams& params);

/// Derivative-free evidence maximization over a log-space grid.
struct SearchConfig {
    /// Grid points per axis.
    int grid_points = 7;
    /// Each axis spans scale * 10^[-decades, +decades].
    double decades = 3.0;
    /// Number of step halvings in the coordinate refinement.
    int refine_iterations = 10;
};

struct EvaluatedCandidate {
    KernelHyperparams params;
    double log_evidence;
};

struct FitResult {
    KernelHyperparams params;
    double log_evidence = 0.0;
    std::vector<EvaluatedCandidate> evaluated;
};

/// Throws InputError on an empty buffer.
FitResult fit_hyperparams(const TrainingBuffer& buffer, const SearchConfig& search = {});

}  // namespace osgpcp
