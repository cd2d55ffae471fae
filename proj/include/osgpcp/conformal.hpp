#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "osgpcp/predictive.hpp"

namespace osgpcp {

/// Symmetric interval [center - radius, center + radius], possibly empty.
/// An infinite radius is the full real line.
struct IntervalSet {
    double center = 0.0;
    double radius = 0.0;
    bool empty = false;

    static IntervalSet make_empty(double center) { return {center, 0.0, true}; }
    static IntervalSet full(double center) { return {center, std::numeric_limits<double>::infinity(), false}; }

    bool contains(double y) const noexcept;
    /// +inf for an empty set so that lower() > upper().
    double lower() const noexcept;
    /// -inf for an empty set.
    double upper() const noexcept;
    /// Lebesgue measure; 0 when empty, +inf for the full line.
    double size() const noexcept;
};

/// Unclipped negative predictive log-likelihood
///   s = 1/2 log(2 pi var) + (y - mean)^2 / (2 var).
double nll_score_raw(const PredictiveGaussian& pred, double y);

/// nll_score_raw clipped into [0, bound].
double nll_score(const PredictiveGaussian& pred, double y, double bound);

/// {y : nll_score_raw(y) <= q}. Empty when 2q < log(2 pi var); the full line for q = +inf.
IntervalSet invert_score(const PredictiveGaussian& pred, double q);

/// Inverse standard-normal CDF (Newton-refined on std::erfc).
double normal_quantile(double p);

/// Bayes credible interval holding mass beta: mean +/- z_{(1+beta)/2} sigma.
IntervalSet bayes_credible_set(const PredictiveGaussian& pred, double beta);

/// Past online conformity scores, kept in arrival order and sorted order.
class ScoreHistory {
public:
    void add(double score);

    std::size_t size() const noexcept { return scores_.size(); }
    bool empty() const noexcept { return scores_.empty(); }
    const std::vector<double>& scores() const noexcept { return scores_; }
    const std::vector<double>& sorted() const noexcept { return sorted_; }

private:
    std::vector<double> scores_;
    std::vector<double> sorted_;
};

/// Rank k = ceil((1 - alpha)(t + 1)) used by split/online conformal.
/// A 1e-9 slack absorbs round-off in the product, e.g. (1 - 0.1) * 10.
std::size_t conformal_rank(std::size_t t, double alpha);

/// k-th smallest past score with k = conformal_rank(t, alpha); +inf when k > t.
double standard_cp_quantile(const ScoreHistory& history, double alpha);

/// Detects a sustained rise in the windowed average prediction-set size:
/// fires once the W-slot average has strictly increased over r consecutive slots.
class ChangePointDetector {
public:
    ChangePointDetector(std::size_t window = 15, std::size_t required = 100);

    /// Push one set size; returns true when the detector fires. Firing clears the
    /// increase counter but keeps the window contents.
    bool step(double set_size);

    std::size_t window() const noexcept { return window_; }
    std::size_t required() const noexcept { return required_; }
    std::size_t increase_count() const noexcept { return increase_count_; }
    std::size_t observed() const noexcept { return observed_; }
    /// Average of the last W sizes; NaN before W sizes are seen.
    double current_average() const noexcept { return prev_avg_; }

private:
    std::size_t window_;
    std::size_t required_;
    std::vector<double> ring_;
    std::size_t head_ = 0;
    std::size_t observed_ = 0;
    double prev_avg_ = std::numeric_limits<double>::quiet_NaN();
    std::size_t increase_count_ = 0;
};

struct ChangePointStep {
    ChangePointDetector detector;
    bool reset_fired;
};

ChangePointStep changepoint_step(ChangePointDetector detector, double set_size);

enum class EtaMode { Constant, DecayingWithReset };

/// Threshold state of the adaptive conformal predictor.
struct AdaptiveState {
    double q = 0.0;
    /// Slots since the last learning-rate reset, starting at 1.
    std::size_t local_t = 1;
    EtaMode eta_mode = EtaMode::Constant;
    double eta_const = 0.05;
    ChangePointDetector detector{};
    double alpha = 0.1;
    double bound = 20.0;

    /// Throws InputError on alpha outside (0,1), non-positive bound or eta.
    void validate() const;
};

/// q <- q + eta (1{miss} - alpha).
AdaptiveState adaptive_update(AdaptiveState state, bool covered, double eta);

/// Constant mode: eta_const. Decaying mode: local_t^(-3/5).
double lr_schedule(const AdaptiveState& state);

struct AdaptiveStepReport {
    double eta = 0.0;
    bool reset_fired = false;
};

/// One post-label transition: pick eta from the schedule, update q, and in
/// decaying mode feed the detector and restart local_t at 1 when it fires.
AdaptiveStepReport adaptive_step(AdaptiveState& state, bool covered, double set_size);

}  // namespace osgpcp
