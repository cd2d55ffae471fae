#pragma once

namespace osgpcp {

/// Gaussian predictive distribution N(mean, variance) for one target.
struct PredictiveGaussian {
    double mean = 0.0;
    double variance = 1.0;
};

}  // namespace osgpcp
