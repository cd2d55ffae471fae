#include "osgpcp/osgp.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "osgpcp/errors.hpp"

namespace osgpcp {

namespace {

constexpr std::array<char, 8> kSnapshotMagic{'O', 'S', 'G', 'P', 'S', 'T', '0', '1'};

void check_length(const PosteriorState& state, const Eigen::VectorXd& phi, const char* where) {
    if (phi.size() != state.theta_hat.size()) {
        throw InputError(std::string(where) + ": feature vector has length " + std::to_string(phi.size()) +
                         ", posterior expects " + std::to_string(state.theta_hat.size()));
    }
}

double predictive_variance(const Eigen::VectorXd& sigma_phi, const Eigen::VectorXd& phi, double sigma_n2) {
    const double v = phi.dot(sigma_phi) + sigma_n2;
    // Round-off can push phi^T Sigma phi to (or below) zero; keep the variance strictly above sn2.
    return v > sigma_n2 ? v : sigma_n2 * (1.0 + 1e-12);
}

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
void read_raw(std::ifstream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof value);
}

}  // namespace

PosteriorState init_state(const KernelHyperparams& params, std::size_t num_features) {
    params.validate();
    if (num_features == 0) {
        throw InputError("init_state: number of features must be at least 1");
    }
    const auto n = static_cast<Eigen::Index>(2 * num_features);
    PosteriorState s;
    s.theta_hat = Eigen::VectorXd::Zero(n);
    s.sigma = params.sigma_theta2 * Eigen::MatrixXd::Identity(n, n);
    s.t = 0;
    return s;
}

PredictiveGaussian predict(const PosteriorState& state, const Eigen::VectorXd& phi, double sigma_n2) {
    check_length(state, phi, "predict");
    const Eigen::VectorXd sigma_phi = state.sigma.selfadjointView<Eigen::Lower>() * phi;
    return {phi.dot(state.theta_hat), predictive_variance(sigma_phi, phi, sigma_n2)};
}

void update_in_place(PosteriorState& state, const Eigen::VectorXd& phi, double y, double sigma_n2) {
    check_length(state, phi, "update");
    if (!std::isfinite(y)) {
        throw InputError("update: target must be finite");
    }
    const Eigen::VectorXd gain = state.sigma.selfadjointView<Eigen::Lower>() * phi;
    const double variance = predictive_variance(gain, phi, sigma_n2);
    const double residual = y - phi.dot(state.theta_hat);

    state.theta_hat.noalias() += (residual / variance) * gain;
    state.sigma.noalias() -= (gain / variance) * gain.transpose();

    // (Sigma + Sigma^T) / 2
    const Eigen::Index n = state.sigma.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double avg = 0.5 * (state.sigma(i, j) + state.sigma(j, i));
            state.sigma(i, j) = avg;
            state.sigma(j, i) = avg;
        }
    }
    ++state.t;
}

PosteriorState update(PosteriorState state, const Eigen::VectorXd& phi, double y, double sigma_n2) {
    update_in_place(state, phi, y, sigma_n2);
    return state;
}

void save_state(const PosteriorState& state, std::uint64_t rf_seed, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open state snapshot for writing: " + path.string());
    }
    out.write(kSnapshotMagic.data(), kSnapshotMagic.size());
    const std::uint64_t d = state.feature_dim() / 2;
    write_raw(out, d);
    write_raw(out, state.t);
    write_raw(out, rf_seed);
    out.write(reinterpret_cast<const char*>(state.theta_hat.data()),
              static_cast<std::streamsize>(state.theta_hat.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(state.sigma.data()),
              static_cast<std::streamsize>(state.sigma.size() * sizeof(double)));
    if (!out) {
        throw IoError("failed writing state snapshot: " + path.string());
    }
}

StateSnapshot load_state(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open state snapshot: " + path.string());
    }
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kSnapshotMagic) {
        throw InputError("not a posterior state snapshot: " + path.string());
    }
    std::uint64_t d = 0;
    StateSnapshot snap;
    read_raw(in, d);
    read_raw(in, snap.state.t);
    read_raw(in, snap.rf_seed);
    if (!in || d == 0 || d > (1u << 20)) {
        throw InputError("corrupt state snapshot header: " + path.string());
    }
    const auto n = static_cast<Eigen::Index>(2 * d);
    snap.state.theta_hat.resize(n);
    snap.state.sigma.resize(n, n);
    in.read(reinterpret_cast<char*>(snap.state.theta_hat.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    in.read(reinterpret_cast<char*>(snap.state.sigma.data()),
            static_cast<std::streamsize>(n * n * sizeof(double)));
    if (!in) {
        throw InputError("truncated state snapshot: " + path.string());
    }
    return snap;
}

}  // namespace osgpcp
