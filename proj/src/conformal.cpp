#include "osgpcp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "osgpcp/errors.hpp"

namespace osgpcp {

namespace {

void check_variance(const PredictiveGaussian& pred) {
    if (!(pred.variance > 0.0) || !std::isfinite(pred.variance)) {
        throw InputError("predictive variance must be finite and positive");
    }
}

double log_two_pi_var(const PredictiveGaussian& pred) {
    return std::log(2.0 * std::numbers::pi * pred.variance);
}

}  // namespace

bool IntervalSet::contains(double y) const noexcept {
    if (empty) return false;
    if (std::isinf(radius)) return true;
    return std::abs(y - center) <= radius;
}

double IntervalSet::lower() const noexcept {
    return empty ? std::numeric_limits<double>::infinity() : center - radius;
}

double IntervalSet::upper() const noexcept {
    return empty ? -std::numeric_limits<double>::infinity() : center + radius;
}

double IntervalSet::size() const noexcept { return empty ? 0.0 : 2.0 * radius; }

double nll_score_raw(const PredictiveGaussian& pred, double y) {
    check_variance(pred);
    if (!std::isfinite(y)) {
        throw InputError("nll_score: target must be finite");
    }
    const double r = y - pred.mean;
    return 0.5 * log_two_pi_var(pred) + r * r / (2.0 * pred.variance);
}

double nll_score(const PredictiveGaussian& pred, double y, double bound) {
    if (!(bound > 0.0)) {
        throw InputError("nll_score: clip bound must be positive");
    }
    return std::clamp(nll_score_raw(pred, y), 0.0, bound);
}

IntervalSet invert_score(const PredictiveGaussian& pred, double q) {
    check_variance(pred);
    if (std::isinf(q) && q > 0) {
        return IntervalSet::full(pred.mean);
    }
    const double radicand = 2.0 * q - log_two_pi_var(pred);
    if (!(radicand >= 0.0)) {
        return IntervalSet::make_empty(pred.mean);
    }
    return {pred.mean, std::sqrt(pred.variance) * std::sqrt(radicand), false};
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("normal_quantile: probability must lie in (0, 1)");
    }
    if (p == 0.5) return 0.0;
    // Start from the logistic-style tail approximation, then Newton on
    // Phi(x) = erfc(-x / sqrt 2) / 2.
    const double tail = std::min(p, 1.0 - p);
    const double s = std::sqrt(-2.0 * std::log(tail));
    double x = s - (2.515517 + 0.802853 * s + 0.010328 * s * s) /
                       (1.0 + 1.432788 * s + 0.189269 * s * s + 0.001308 * s * s * s);
    if (p < 0.5) x = -x;
    for (int i = 0; i < 50; ++i) {
        const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        const double dx = (cdf - p) / pdf;
        x -= dx;
        if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

IntervalSet bayes_credible_set(const PredictiveGaussian& pred, double beta) {
    check_variance(pred);
    if (!(beta > 0.0 && beta < 1.0)) {
        throw InputError("bayes_credible_set: coverage level must lie in (0, 1)");
    }
    const double c = normal_quantile(0.5 * (1.0 + beta));
    return {pred.mean, c * std::sqrt(pred.variance), false};
}

void ScoreHistory::add(double score) {
    if (std::isnan(score)) {
        throw InputError("ScoreHistory: score is NaN");
    }
    scores_.push_back(score);
    sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), score), score);
}

std::size_t conformal_rank(std::size_t t, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("miscoverage alpha must lie in (0, 1)");
    }
    const double target = (1.0 - alpha) * static_cast<double>(t + 1);
    return static_cast<std::size_t>(std::ceil(target - 1e-9));
}

double standard_cp_quantile(const ScoreHistory& history, double alpha) {
    const std::size_t k = conformal_rank(history.size(), alpha);
    if (k > history.size()) {
        return std::numeric_limits<double>::infinity();
    }
    if (k == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    return history.sorted()[k - 1];
}

ChangePointDetector::ChangePointDetector(std::size_t window, std::size_t required)
    : window_(window), required_(required), ring_(window, 0.0) {
    if (window == 0 || required == 0) {
        throw InputError("ChangePointDetector: window and required count must be positive");
    }
}

bool ChangePointDetector::step(double set_size) {
    if (std::isnan(set_size) || set_size < 0.0) {
        throw InputError("ChangePointDetector: set size must be non-negative");
    }
    ring_[head_] = set_size;
    head_ = (head_ + 1) % window_;
    ++observed_;
    if (observed_ < window_) {
        return false;
    }
    // Summed afresh each slot so that equal windows compare exactly equal.
    double sum = 0.0;
    for (double v : ring_) sum += v;
    const double avg = sum / static_cast<double>(window_);
    const bool comparable = observed_ > window_;
    const bool increased = comparable && avg > prev_avg_;
    prev_avg_ = avg;
    increase_count_ = increased ? increase_count_ + 1 : 0;
    if (increase_count_ >= required_) {
        increase_count_ = 0;
        return true;
    }
    return false;
}

ChangePointStep changepoint_step(ChangePointDetector detector, double set_size) {
    const bool fired = detector.step(set_size);
    return {std::move(detector), fired};
}

void AdaptiveState::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("adaptive conformal: alpha must lie in (0, 1)");
    }
    if (!(bound > 0.0)) {
        throw InputError("adaptive conformal: clip bound must be positive");
    }
    if (!(eta_const > 0.0)) {
        throw InputError("adaptive conformal: constant learning rate must be positive");
    }
}

AdaptiveState adaptive_update(AdaptiveState state, bool covered, double eta) {
    if (!(eta > 0.0)) {
        throw InputError("adaptive_update: learning rate must be positive");
    }
    const double miss = covered ? 0.0 : 1.0;
    state.q += eta * (miss - state.alpha);
    return state;
}

double lr_schedule(const AdaptiveState& state) {
    switch (state.eta_mode) {
        case EtaMode::Constant:
            return state.eta_const;
        case EtaMode::DecayingWithReset:
            if (state.local_t == 0) {
                throw InputError("lr_schedule: local_t must be >= 1 in decaying mode");
            }
            return std::pow(static_cast<double>(state.local_t), -0.6);
    }
    return state.eta_const;
}

AdaptiveStepReport adaptive_step(AdaptiveState& state, bool covered, double set_size) {
    AdaptiveStepReport report;
    report.eta = lr_schedule(state);
    state = adaptive_update(std::move(state), covered, report.eta);
    if (state.eta_mode == EtaMode::DecayingWithReset) {
        report.reset_fired = state.detector.step(set_size);
    }
    state.local_t = report.reset_fired ? 1 : state.local_t + 1;
    return report;
}

}  // namespace osgpcp
