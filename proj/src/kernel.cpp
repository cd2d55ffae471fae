#include "osgpcp/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "osgpcp/errors.hpp"
#include "osgpcp/random.hpp"

namespace osgpcp {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

bool KernelHyperparams::valid() const noexcept {
    return positive_finite(sigma_theta2) && positive_finite(sigma_l2) && positive_finite(sigma_n2);
}

void KernelHyperparams::validate() const {
    if (!valid()) {
        throw InputError("kernel hyperparameters must be finite and strictly positive (sigma_theta2=" +
                         format_double(sigma_theta2) + ", sigma_l2=" + format_double(sigma_l2) +
                         ", sigma_n2=" + format_double(sigma_n2) + ")");
    }
}

double rbf_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                const KernelHyperparams& params) {
    if (x.size() != x_prime.size() || x.size() == 0) {
        throw InputError("rbf_eval: input dimensions differ or are zero");
    }
    return params.sigma_theta2 * std::exp(-(x - x_prime).squaredNorm() / params.sigma_l2);
}

RFMap::RFMap(Eigen::MatrixXd frequencies, std::uint64_t seed)
    : frequencies_(std::move(frequencies)), seed_(seed) {
    if (frequencies_.rows() == 0 || frequencies_.cols() == 0) {
        throw InputError("RFMap: frequency matrix must be non-empty");
    }
}

void RFMap::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open RF map file for writing: " + path.string());
    }
    out << num_features() << ',' << input_dim() << ',' << seed_ << '\n';
    for (Eigen::Index i = 0; i < frequencies_.rows(); ++i) {
        for (Eigen::Index j = 0; j < frequencies_.cols(); ++j) {
            if (j) out << ',';
            out << format_double(frequencies_(i, j));
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("failed writing RF map file: " + path.string());
    }
}

RFMap RFMap::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open RF map file: " + path.string());
    }
    std::string line;
    std::size_t rows = 0, cols = 0;
    std::uint64_t seed = 0;
    char c1 = 0, c2 = 0;
    if (!std::getline(in, line)) {
        throw InputError("RF map file is empty: " + path.string());
    }
    std::istringstream header(line);
    if (!(header >> rows >> c1 >> cols >> c2 >> seed) || c1 != ',' || c2 != ',' || rows == 0 ||
        cols == 0) {
        throw InputError("RF map file has a malformed header: " + path.string());
    }
    Eigen::MatrixXd freq(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) {
            throw InputError("RF map file truncated at row " + std::to_string(i + 1));
        }
        std::istringstream row(line);
        std::string cell;
        for (std::size_t j = 0; j < cols; ++j) {
            if (!std::getline(row, cell, ',')) {
                throw InputError("RF map file row " + std::to_string(i + 1) + " has too few columns");
            }
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) {
                throw InputError("RF map file row " + std::to_string(i + 1) + " is not numeric");
            }
            freq(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return RFMap(std::move(freq), seed);
}

RFMap sample_frequencies(const KernelHyperparams& params, std::size_t num_features,
                         std::size_t input_dim, std::uint64_t seed) {
    params.validate();
    if (num_features == 0) {
        throw InputError("sample_frequencies: number of features must be at least 1");
    }
    if (input_dim == 0) {
        throw InputError("sample_frequencies: input dimension must be at least 1");
    }
    RandomStream rng(seed, StreamId::Frequencies);
    const double stddev = std::sqrt(2.0 / params.sigma_l2);
    Eigen::MatrixXd freq(static_cast<Eigen::Index>(num_features), static_cast<Eigen::Index>(input_dim));
    // Row-major draw order so that the first rows do not depend on D.
    for (Eigen::Index i = 0; i < freq.rows(); ++i) {
        for (Eigen::Index j = 0; j < freq.cols(); ++j) {
            freq(i, j) = stddev * rng.normal();
        }
    }
    return RFMap(std::move(freq), seed);
}

Eigen::VectorXd feature_map(const Eigen::VectorXd& x, const RFMap& map) {
    if (static_cast<std::size_t>(x.size()) != map.input_dim()) {
        throw InputError("feature_map: input has dimension " + std::to_string(x.size()) +
                         ", RF map expects " + std::to_string(map.input_dim()));
    }
    const Eigen::VectorXd proj = map.frequencies() * x;
    const double scale = 1.0 / std::sqrt(static_cast<double>(map.num_features()));
    Eigen::VectorXd phi(2 * proj.size());
    for (Eigen::Index i = 0; i < proj.size(); ++i) {
        phi(2 * i) = scale * std::sin(proj(i));
        phi(2 * i + 1) = scale * std::cos(proj(i));
    }
    return phi;
}

}  // namespace osgpcp
