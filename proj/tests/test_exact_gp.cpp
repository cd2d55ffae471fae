#include <doctest.h>

#include <cmath>
#include <numbers>

#include "osgpcp/errors.hpp"
#include "osgpcp/exact_gp.hpp"
#include "osgpcp/random.hpp"
#include "osgpcp/stream.hpp"

using namespace osgpcp;

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

TrainingBuffer random_buffer(int t, int dim, std::uint64_t seed) {
    RandomStream rng(seed, StreamId::Test);
    TrainingBuffer buf;
    for (int i = 0; i < t; ++i) {
        Eigen::VectorXd x(dim);
        for (int j = 0; j < dim; ++j) x(j) = rng.uniform(-2.0, 2.0);
        buf.add(x, std::sin(x.sum()) + 0.1 * rng.normal());
    }
    return buf;
}

// Independent dense route: explicit inverse of K + sn2 I.
PredictiveGaussian dense_predict(const TrainingBuffer& buf, const KernelHyperparams& p, const Eigen::VectorXd& x) {
    const auto n = static_cast<Eigen::Index>(buf.size());
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& xi = buf.inputs()[static_cast<std::size_t>(i)];
        k(i) = p.sigma_theta2 * std::exp(-(xi - x).squaredNorm() / p.sigma_l2);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& xj = buf.inputs()[static_cast<std::size_t>(j)];
            a(i, j) = p.sigma_theta2 * std::exp(-(xi - xj).squaredNorm() / p.sigma_l2);
        }
        a(i, i) += p.sigma_n2;
    }
    const Eigen::MatrixXd inv = a.inverse();
    return {k.dot(inv * buf.targets()), p.sigma_theta2 - k.dot(inv * k) + p.sigma_n2};
}

}  // namespace

TEST_CASE("gp_predict on an empty buffer is the prior predictive") {
    const KernelHyperparams p{1.7, 0.3, 0.2};
    const auto pred = gp_predict(TrainingBuffer{}, p, scalar(4.0));
    CHECK(pred.mean == 0.0);
    CHECK(pred.variance == doctest::Approx(1.9));
}

TEST_CASE("gp_predict scalar Gram example") {
    TrainingBuffer buf;
    buf.add(scalar(0.5), 2.0);
    const auto pred = gp_predict(buf, KernelHyperparams{1.0, 1.0, 1.0}, scalar(0.5));
    // mean = 1 * (1 + 1)^-1 * 2, variance = 1 - 1/2 + 1.
    CHECK(pred.mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pred.variance == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("gp_predict far from the data reverts to the prior") {
    const TrainingBuffer buf = random_buffer(10, 1, 4);
    const KernelHyperparams p{2.0, 0.5, 0.05};
    const auto pred = gp_predict(buf, p, scalar(100.0));
    CHECK(std::abs(pred.mean) < 1e-12);
    CHECK(pred.variance == doctest::Approx(2.05));
}

TEST_CASE("gp_predict agrees with an explicit-inverse dense solve") {
    const KernelHyperparams p{1.3, 0.8, 0.1};
    for (int t : {1, 2, 5, 12, 20}) {
        const TrainingBuffer buf = random_buffer(t, 2, static_cast<std::uint64_t>(t));
        RandomStream rng(100 + t, StreamId::Test);
        for (int q = 0; q < 5; ++q) {
            const Eigen::VectorXd x = Eigen::Vector2d(rng.uniform(-3, 3), rng.uniform(-3, 3));
            const auto fast = gp_predict(buf, p, x);
            const auto dense = dense_predict(buf, p, x);
            CHECK(std::abs(fast.mean - dense.mean) <= 1e-8);
            CHECK(std::abs(fast.variance - dense.variance) <= 1e-8);
        }
    }
}

TEST_CASE("predictive variance bounds and conditioning on the mean") {
    const KernelHyperparams p{0.9, 0.4, 0.03};
    RandomStream rng(8, StreamId::Test);
    TrainingBuffer buf = random_buffer(15, 1, 8);
    for (int i = 0; i < 50; ++i) {
        const Eigen::VectorXd x = scalar(rng.uniform(-3, 3));
        const auto pred = gp_predict(buf, p, x);
        CHECK(pred.variance >= p.sigma_n2);
        CHECK(pred.variance <= p.sigma_theta2 + p.sigma_n2);

        TrainingBuffer more = buf;
        more.add(x, pred.mean);
        CHECK(gp_predict(more, p, x).variance <= pred.variance + 1e-12);
    }
}

TEST_CASE("log_marginal_likelihood scalar cases") {
    const KernelHyperparams p{1.0, 1.0, 1.0};
    CHECK(log_marginal_likelihood(TrainingBuffer{}, p) == 0.0);

    const double log2pi = std::log(2.0 * std::numbers::pi);
    TrainingBuffer zero;
    zero.add(scalar(0.0), 0.0);
    CHECK(log_marginal_likelihood(zero, p) == doctest::Approx(-0.5 * std::log(2.0) - 0.5 * log2pi).epsilon(1e-9));
    CHECK(log_marginal_likelihood(zero, p) == doctest::Approx(-1.26552).epsilon(1e-5));

    TrainingBuffer one;
    one.add(scalar(0.0), 1.0);
    CHECK(log_marginal_likelihood(one, p) == doctest::Approx(-1.51552).epsilon(1e-5));
}

TEST_CASE("log_marginal_likelihood matches the dense Gaussian density") {
    const KernelHyperparams p{1.1, 0.6, 0.2};
    const TrainingBuffer buf = random_buffer(8, 2, 21);
    Eigen::MatrixXd a = gram_matrix(buf, p);
    a.diagonal().array() += p.sigma_n2;
    const double expected = -0.5 * buf.targets().dot(a.inverse() * buf.targets()) - 0.5 * std::log(a.determinant()) -
                            4.0 * std::log(2.0 * std::numbers::pi);
    CHECK(log_marginal_likelihood(buf, p) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("fit_hyperparams") {
    CHECK_THROWS_AS(fit_hyperparams(TrainingBuffer{}), InputError);

    const Stream data = gen_iid(100, 1);
    TrainingBuffer buf;
    for (const auto& r : data) buf.add(r.x, r.y);
    const FitResult fit = fit_hyperparams(buf);

    CHECK(fit.params.valid());
    CHECK(fit.evaluated.size() >= 343);
    for (const auto& c : fit.evaluated) {
        CHECK(fit.log_evidence >= c.log_evidence);
    }
    CHECK(fit.log_evidence == doctest::Approx(log_marginal_likelihood(buf, fit.params)));
    const double sigma_n = std::sqrt(fit.params.sigma_n2);
    CHECK(sigma_n >= 0.033);
    CHECK(sigma_n <= 0.3);
}

TEST_CASE("TrainingBuffer rejects inconsistent samples") {
    TrainingBuffer buf;
    buf.add(Eigen::Vector2d(0, 1), 1.0);
    CHECK(buf.input_dim() == 2);
    CHECK_THROWS_AS(buf.add(scalar(1.0), 1.0), InputError);
    CHECK_THROWS_AS(buf.add(Eigen::Vector2d(0, 1), NAN), InputError);
    CHECK(buf.size() == 1);
}
