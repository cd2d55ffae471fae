#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include <Eigen/Dense>

#include "osgpcp/kernel.hpp"
#include "osgpcp/predictive.hpp"

namespace osgpcp {

/// Gaussian posterior N(theta_hat, sigma) over the 2D random-feature weights.
/// Its size depends on D only; past data are never stored.
struct PosteriorState {
    Eigen::VectorXd theta_hat;
    Eigen::MatrixXd sigma;
    std::uint64_t t = 0;

    std::size_t feature_dim() const noexcept { return static_cast<std::size_t>(theta_hat.size()); }
};

/// Prior theta ~ N(0, sigma_theta2 I_{2D}).
PosteriorState init_state(const KernelHyperparams& params, std::size_t num_features);

/// mean = phi^T theta_hat, variance = phi^T Sigma phi + sigma_n2.
PredictiveGaussian predict(const PosteriorState& state, const Eigen::VectorXd& phi, double sigma_n2);

/// Rank-one Bayes update after observing y at features phi. O((2D)^2).
void update_in_place(PosteriorState& state, const Eigen::VectorXd& phi, double y, double sigma_n2);

/// Value-semantics form of update_in_place.
PosteriorState update(PosteriorState state, const Eigen::VectorXd& phi, double y, double sigma_n2);

/// Binary checkpoint. Layout (host byte order, written on little-endian
/// targets): 8-byte magic "OSGPST01", u64 D, u64 t, u64 rf_seed,
/// 2D doubles theta_hat, (2D)^2 doubles sigma in column-major order.
void save_state(const PosteriorState& state, std::uint64_t rf_seed, const std::filesystem::path& path);

struct StateSnapshot {
    PosteriorState state;
    std::uint64_t rf_seed = 0;
};

StateSnapshot load_state(const std::filesystem::path& path);

}  // namespace osgpcp
