#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include <Eigen/Dense>

namespace osgpcp {

/// RBF kernel hyperparameters: k(x, x') = sigma_theta2 * exp(-|x - x'|^2 / sigma_l2),
/// observed with additive Gaussian noise of variance sigma_n2.
///
/// Note the exponent has no factor 1/2; lengthscales from libraries that use
/// exp(-r^2 / (2 l^2)) correspond to sigma_l2 = 2 l^2 here.
struct KernelHyperparams {
    double sigma_theta2 = 1.0;
    double sigma_l2 = 1.0;
    double sigma_n2 = 0.01;

    bool valid() const noexcept;
    /// Throws InputError unless all three fields are finite and strictly positive.
    void validate() const;
};

double rbf_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                const KernelHyperparams& params);

/// D spectral frequencies of the normalized RBF kernel, one per row.
class RFMap {
public:
    RFMap(Eigen::MatrixXd frequencies, std::uint64_t seed);

    const Eigen::MatrixXd& frequencies() const noexcept { return frequencies_; }
    std::size_t num_features() const noexcept { return static_cast<std::size_t>(frequencies_.rows()); }
    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(frequencies_.cols()); }
    /// Length of the feature vector, 2D.
    std::size_t feature_dim() const noexcept { return 2 * num_features(); }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Plain-text sidecar: first line "D,d,seed", then D rows of d comma-separated
    /// frequencies (row-major), printed with 17 significant digits.
    void save(const std::filesystem::path& path) const;
    static RFMap load(const std::filesystem::path& path);

private:
    Eigen::MatrixXd frequencies_;
    std::uint64_t seed_;
};

/// Draws D frequencies i.i.d. from N(0, (2 / sigma_l2) I_d), the spectral
/// density of exp(-|r|^2 / sigma_l2). Uses the StreamId::Frequencies stream.
RFMap sample_frequencies(const KernelHyperparams& params, std::size_t num_features,
                         std::size_t input_dim, std::uint64_t seed);

/// phi(x) = D^{-1/2} [sin(v_1.x), cos(v_1.x), ..., sin(v_D.x), cos(v_D.x)].
Eigen::VectorXd feature_map(const Eigen::VectorXd& x, const RFMap& map);

}  // namespace osgpcp
